// Shared helpers for the test suites: reference fixtures built in code and
// independent oracles the implementation is checked against.
#ifndef KNOTFAIR_TESTS_UTIL_HPP
#define KNOTFAIR_TESTS_UTIL_HPP

#include <random>
#include <string>
#include <vector>

#include "knotfair/bezier.hpp"
#include "knotfair/knot.hpp"

namespace testutil {

using namespace knotfair;

inline std::string fixture(const std::string& name) {
    return std::string(KNOTFAIR_FIXTURE_DIR) + "/" + name;
}

// Handle length of the standard 4-arc cubic approximation of a unit quarter
// circle.
inline constexpr double kCircleHandle = 0.5519150244935105707435627;

// Closed 4-segment Bezier approximation of a circle.
inline ControlPoints circle_knot(double radius = 1.0, Point2 center = {0, 0}) {
    const double k = kCircleHandle * radius;
    const double r = radius;
    const Point2 e{center.x + r, center.y};
    const Point2 n{center.x, center.y + r};
    const Point2 w{center.x - r, center.y};
    const Point2 s{center.x, center.y - r};
    ControlPoints c;
    c.segments = {
        {e, {e.x, e.y + k}, {n.x + k, n.y}, n},
        {n, {n.x - k, n.y}, {w.x, w.y + k}, w},
        {w, {w.x, w.y - k}, {s.x - k, s.y}, s},
        {s, {s.x + k, s.y}, {e.x, e.y - k}, e},
    };
    return c;
}

// Straight segment with evenly spaced interior controls (uniform speed).
inline CubicSegment line_segment(Point2 a, Point2 b) {
    return {a, a + (b - a) / 3.0, a + (b - a) * (2.0 / 3.0), b};
}

// Independent point-evaluation oracle: repeated-lerp de Casteljau, no
// Bernstein expansion shared with the implementation.
inline Point2 decasteljau_point(const CubicSegment& s, double t) {
    Point2 a = s.p0 + (s.p1 - s.p0) * t;
    Point2 b = s.p1 + (s.p2 - s.p1) * t;
    Point2 c = s.p2 + (s.p3 - s.p2) * t;
    Point2 ab = a + (b - a) * t;
    Point2 bc = b + (c - b) * t;
    return ab + (bc - ab) * t;
}

inline CubicSegment random_segment(std::mt19937& rng, double span = 10.0) {
    std::uniform_real_distribution<double> u(-span, span);
    return {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
}

// Brute-force intersection oracle: dense polyline sampling plus exact
// segment-segment tests, pruned by chunk boxes so the suite stays fast.
struct PolyHit {
    double t_a, t_b;
    Point2 point;
};

inline std::vector<PolyHit> polyline_intersections(const CubicSegment& a, const CubicSegment& b,
                                                   int samples = 10000) {
    std::vector<Point2> pa(samples + 1), pb(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        pa[i] = eval(a, t);
        pb[i] = eval(b, t);
    }
    const int chunk = 100;
    auto chunk_box = [&](const std::vector<Point2>& pts, int from, int to) {
        Box box{pts[from], pts[from]};
        for (int i = from; i <= to; ++i) {
            box.lo.x = std::min(box.lo.x, pts[i].x);
            box.lo.y = std::min(box.lo.y, pts[i].y);
            box.hi.x = std::max(box.hi.x, pts[i].x);
            box.hi.y = std::max(box.hi.y, pts[i].y);
        }
        return box;
    };
    std::vector<PolyHit> hits;
    for (int ca = 0; ca < samples; ca += chunk) {
        const int ea = std::min(ca + chunk, samples);
        const Box ba = chunk_box(pa, ca, ea);
        for (int cb = 0; cb < samples; cb += chunk) {
            const int eb = std::min(cb + chunk, samples);
            if (!ba.overlaps(chunk_box(pb, cb, eb))) continue;
            for (int i = ca; i < ea; ++i)
                for (int j = cb; j < eb; ++j) {
                    const Vec2 r = pa[i + 1] - pa[i];
                    const Vec2 s = pb[j + 1] - pb[j];
                    const double denom = cross(r, s);
                    if (denom == 0.0) continue;
                    const Vec2 qp = pb[j] - pa[i];
                    const double t = cross(qp, s) / denom;
                    const double u = cross(qp, r) / denom;
                    if (t < 0.0 || t >= 1.0 || u < 0.0 || u >= 1.0) continue;
                    PolyHit h;
                    h.t_a = (i + t) / samples;
                    h.t_b = (j + u) / samples;
                    h.point = pa[i] + r * t;
                    hits.push_back(h);
                }
        }
    }
    return hits;
}

}  // namespace testutil

#endif
