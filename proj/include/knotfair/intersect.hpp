#ifndef KNOTFAIR_INTERSECT_HPP
#define KNOTFAIR_INTERSECT_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "knotfair/base.hpp"
#include "knotfair/bezier.hpp"

namespace knotfair {

// A transversal self-intersection of the knot path. Segment indices are
// 1-based path labels with seg_a < seg_b; for a bare two-segment query they
// are 1 and 2.
struct Crossing {
    int seg_a = 1, seg_b = 2;
    double t_a = 0.0, t_b = 0.0;
    Point2 point;
    double angle = 0.0;      // acute angle between tangents, (0, pi/2]
    bool tangential = false; // tangents parallel within angular tolerance
};

struct IntersectOptions {
    double param_tol = 1e-10;         // subdivision stops below this interval width
    double endpoint_exclusion = 1e-6; // t-radius around shared nodes of adjacent segments
    double angular_tol = 1e-4;        // radians; below this a contact is flagged tangential
    double dedup_param = 1e-6;        // candidates closer than this in (t_a,t_b) are one crossing
};

namespace detail {

struct ClipPiece {
    CubicSegment seg;
    double t0, t1;
};

// Recursive box-subdivision on both curves; emits candidate parameter pairs.
inline void clip_recurse(const ClipPiece& a, const ClipPiece& b, double tol,
                         std::vector<std::pair<double, double>>& out, int depth) {
    if (!bounds(a.seg).overlaps(bounds(b.seg))) return;
    const double wa = a.t1 - a.t0;
    const double wb = b.t1 - b.t0;
    if ((wa <= tol && wb <= tol) || depth <= 0) {
        out.emplace_back(0.5 * (a.t0 + a.t1), 0.5 * (b.t0 + b.t1));
        return;
    }
    if (wa >= wb) {
        const auto [l, r] = split(a.seg, 0.5);
        const double tm = 0.5 * (a.t0 + a.t1);
        clip_recurse({l, a.t0, tm}, b, tol, out, depth - 1);
        clip_recurse({r, tm, a.t1}, b, tol, out, depth - 1);
    } else {
        const auto [l, r] = split(b.seg, 0.5);
        const double tm = 0.5 * (b.t0 + b.t1);
        clip_recurse(a, {l, b.t0, tm}, tol, out, depth - 1);
        clip_recurse(a, {r, tm, b.t1}, tol, out, depth - 1);
    }
}

// Newton iteration on A(ta) - B(tb) = 0.
inline bool newton_polish(const CubicSegment& a, const CubicSegment& b, double& ta, double& tb,
                          double scale) {
    for (int it = 0; it < 25; ++it) {
        const Point2 pa = eval(a, ta);
        const Point2 pb = eval(b, tb);
        const Vec2 f = pa - pb;
        if (norm(f) <= 1e-14 * scale) return true;
        const Vec2 da = derivatives(a, ta).d1;
        const Vec2 db = derivatives(b, tb).d1;
        const double det = cross(da, -db);
        if (std::abs(det) < 1e-30) return norm(f) <= 1e-9 * scale;
        // Solve [da | -db] * (dta, dtb)^T = -f.
        const double dta = (-f.x * -db.y - -db.x * -f.y) / det;
        const double dtb = (da.x * -f.y - -f.x * da.y) / det;
        ta = std::clamp(ta + dta, 0.0, 1.0);
        tb = std::clamp(tb + dtb, 0.0, 1.0);
    }
    return dist(eval(a, ta), eval(b, tb)) <= 1e-9 * scale;
}

}  // namespace detail

// All transversal intersections between two cubic segments.
inline std::vector<Crossing> intersect(const CubicSegment& a, const CubicSegment& b,
                                       const IntersectOptions& opts = {}) {
    std::vector<Crossing> result;
    if (!a.finite_points() || !b.finite_points()) return result;
    if (!bounds(a).overlaps(bounds(b))) return result;

    const double scale = std::max(bounds(a).diagonal(), bounds(b).diagonal());
    std::vector<std::pair<double, double>> candidates;
    detail::clip_recurse({a, 0.0, 1.0}, {b, 0.0, 1.0}, opts.param_tol, candidates, 72);
    if (candidates.empty()) return result;
    std::sort(candidates.begin(), candidates.end());

    std::vector<std::pair<double, double>> polished;
    for (auto [ta, tb] : candidates) {
        // Subdivision emits a cluster of leaf boxes around each true root;
        // collapse candidates adjacent in parameter space before polishing.
        bool near_raw = false;
        for (auto& p : polished)
            if (std::abs(p.first - ta) < 64 * opts.param_tol &&
                std::abs(p.second - tb) < 64 * opts.param_tol) {
                near_raw = true;
                break;
            }
        if (near_raw) continue;
        if (!detail::newton_polish(a, b, ta, tb, scale)) continue;
        bool dup = false;
        for (auto& p : polished)
            if (std::abs(p.first - ta) < opts.dedup_param && std::abs(p.second - tb) < opts.dedup_param) {
                dup = true;
                break;
            }
        if (!dup) polished.emplace_back(ta, tb);
    }

    for (auto [ta, tb] : polished) {
        Crossing c;
        c.seg_a = 1;
        c.seg_b = 2;
        c.t_a = ta;
        c.t_b = tb;
        c.point = eval(a, ta);
        const Vec2 u = derivatives(a, ta).d1;
        const Vec2 v = derivatives(b, tb).d1;
        c.angle = std::atan2(std::abs(cross(u, v)), std::abs(dot(u, v)));
        c.tangential = c.angle < opts.angular_tol;
        result.push_back(c);
    }
    std::sort(result.begin(), result.end(),
              [](const Crossing& l, const Crossing& r) { return l.t_a < r.t_a; });
    return result;
}

// Self-intersections of a closed chain of segments. Hits that are just the
// shared node of adjacent segments are excluded; genuine interior crossings
// of adjacent segments are kept.
inline std::vector<Crossing> find_crossings(std::span<const CubicSegment> loop,
                                            const IntersectOptions& opts = {}) {
    const std::size_t n = loop.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    std::vector<std::vector<Crossing>> found(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        auto hits = intersect(loop[i], loop[j], opts);
        if (hits.empty()) return;
        const bool succ = (j == i + 1);
        const bool wrap = (i == 0 && j == n - 1);
        std::vector<Crossing> kept;
        for (Crossing& c : hits) {
            if (succ && c.t_a > 1.0 - opts.endpoint_exclusion && c.t_b < opts.endpoint_exclusion)
                continue;  // shared node between i and i+1
            if (wrap && c.t_a < opts.endpoint_exclusion && c.t_b > 1.0 - opts.endpoint_exclusion)
                continue;  // shared node between last and first
            c.seg_a = static_cast<int>(i) + 1;
            c.seg_b = static_cast<int>(j) + 1;
            kept.push_back(c);
        }
        found[k] = std::move(kept);
    });

    std::vector<Crossing> all;
    for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end(), [](const Crossing& l, const Crossing& r) {
        if (l.seg_a != r.seg_a) return l.seg_a < r.seg_a;
        if (l.seg_b != r.seg_b) return l.seg_b < r.seg_b;
        return l.t_a < r.t_a;
    });
    return all;
}

// Minimum distance between two segments, branch-and-bound on control boxes.
// Resolves to within tol; with cutoff > 0 the search prunes subtrees that
// provably stay above cutoff, so the result is exact only below cutoff.
inline double min_distance(const CubicSegment& a, const CubicSegment& b, double tol,
                           double cutoff = 0.0) {
    struct Node {
        CubicSegment sa, sb;
        double lower;
    };
    double best = dist(a.p0, b.p0);
    best = std::min(best, dist(eval(a, 0.5), eval(b, 0.5)));
    best = std::min(best, dist(a.p3, b.p3));

    std::vector<Node> stack{{a, b, bounds(a).distance(bounds(b))}};
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        if (nd.lower >= best - tol) continue;
        if (cutoff > 0.0 && nd.lower > cutoff) continue;
        const auto [a0, a1] = split(nd.sa, 0.5);
        const auto [b0, b1] = split(nd.sb, 0.5);
        const CubicSegment* as[2] = {&a0, &a1};
        const CubicSegment* bs[2] = {&b0, &b1};
        for (const CubicSegment* pa : as)
            for (const CubicSegment* pb : bs) {
                best = std::min(best, dist(eval(*pa, 0.5), eval(*pb, 0.5)));
                const double lb = bounds(*pa).distance(bounds(*pb));
                if (lb < best - tol) stack.push_back({*pa, *pb, lb});
            }
    }
    return best;
}

}  // namespace knotfair

#endif  // KNOTFAIR_INTERSECT_HPP
