#ifndef KNOTFAIR_BADNESS_HPP
#define KNOTFAIR_BADNESS_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "knotfair/base.hpp"
#include "knotfair/bezier.hpp"
#include "knotfair/intersect.hpp"
#include "knotfair/knot.hpp"

namespace knotfair {

struct BadnessWeights {
    double w_angle = 5.0;
    double w_bend = 1.0;
    double w_cross_sep = 2.0;
    double w_repel = 2.0;
    double w_topology = 1.0;
    // Radii are fractions of the normalized knot (total arc length 1).
    double repel_radius = 0.03;
    double cross_sep_radius = 0.05;
    double b_topo = 100.0;

    bool valid() const {
        for (double w : {w_angle, w_bend, w_cross_sep, w_repel, w_topology})
            if (w < 0.0 || !std::isfinite(w)) return false;
        return w_angle + w_bend + w_cross_sep + w_repel + w_topology > 0.0;
    }
};

// Which segment pairs cross, and how often. Two knots with equal fingerprints
// are treated as topologically identical for optimization purposes.
struct TopologyFingerprint {
    int crossing_count = 0;
    std::vector<std::pair<int, int>> crossing_pairs;  // sorted, seg_a < seg_b, repeats allowed

    bool operator==(const TopologyFingerprint&) const = default;
};

// Finite stand-in for "infinitely bad": keeps the objective total on
// degenerate geometry so derivative-free optimizers can proceed.
inline constexpr double kBadnessSentinel = 1e12;

inline double total_arc_length(const ControlPoints& c) {
    double sum = 0.0;
    for (const CubicSegment& s : c.segments) sum += arc_length(s);
    return sum;
}

// Uniform scale + translation: total arc length 1, node centroid at origin.
// Returns the scale factor applied to coordinates.
inline std::pair<ControlPoints, double> normalize(const ControlPoints& c) {
    const double len = total_arc_length(c);
    if (!(len > 1e-300) || !std::isfinite(len))
        throw Error(Errc::DegenerateKnot, "knot has ~zero arc length");
    Vec2 centroid{0, 0};
    for (const CubicSegment& s : c.segments) centroid += s.p0;
    centroid = centroid / static_cast<double>(c.size());
    const double scale = 1.0 / len;
    ControlPoints out = c;
    for (CubicSegment& s : out.segments) {
        s.p0 = (s.p0 - centroid) * scale;
        s.p1 = (s.p1 - centroid) * scale;
        s.p2 = (s.p2 - centroid) * scale;
        s.p3 = (s.p3 - centroid) * scale;
    }
    return {out, scale};
}

inline TopologyFingerprint fingerprint(const std::vector<Crossing>& crossings) {
    TopologyFingerprint fp;
    fp.crossing_count = static_cast<int>(crossings.size());
    fp.crossing_pairs.reserve(crossings.size());
    for (const Crossing& c : crossings) fp.crossing_pairs.emplace_back(c.seg_a, c.seg_b);
    std::sort(fp.crossing_pairs.begin(), fp.crossing_pairs.end());
    return fp;
}

inline TopologyFingerprint fingerprint(const ControlPoints& c) {
    return fingerprint(find_crossings(c.segments));
}

namespace detail {

// Components assume a normalized knot and precomputed crossings; the public
// wrappers below normalize first.

inline double crossing_angles_term(const std::vector<Crossing>& crossings) {
    double sum = 0.0;
    for (const Crossing& c : crossings) {
        if (c.tangential)
            throw Error(Errc::TangentialContact,
                        "tangential contact between segments " + std::to_string(c.seg_a) +
                            " and " + std::to_string(c.seg_b));
        const double cs = std::cos(c.angle);
        sum += cs * cs;
    }
    return sum;
}

inline double bending_term(const ControlPoints& c) {
    double sum = 0.0;
    for (const CubicSegment& s : c.segments) sum += bending_energy(s);
    return sum;
}

inline double crossing_separation_term(const std::vector<Crossing>& crossings, double radius) {
    double sum = 0.0;
    for (std::size_t i = 0; i < crossings.size(); ++i)
        for (std::size_t j = i + 1; j < crossings.size(); ++j) {
            const double d = dist(crossings[i].point, crossings[j].point);
            const double h = std::max(0.0, 1.0 - d / radius);
            sum += h * h;
        }
    return sum;
}

// Hinge penalty on the clearance of non-adjacent segment pairs that do not
// cross; crossing pairs are exempt (they are meant to touch).
inline double repel_term(const ControlPoints& c, const std::vector<Crossing>& crossings,
                         double radius) {
    const int n = c.size();
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 3) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the loop closure
            pairs.emplace_back(i, j);
        }
    std::vector<bool> crossing_pair(pairs.size(), false);
    for (const Crossing& cr : crossings)
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (pairs[k].first == cr.seg_a - 1 && pairs[k].second == cr.seg_b - 1)
                crossing_pair[k] = true;

    std::vector<double> vals(pairs.size(), 0.0);
    parallel_for(pairs.size(), [&](std::size_t k) {
        if (crossing_pair[k]) return;
        const auto [i, j] = pairs[k];
        const double d = min_distance(c.segments[i], c.segments[j], 1e-4, radius);
        const double h = std::max(0.0, 1.0 - d / radius);
        vals[k] = h * h;
    });
    double sum = 0.0;
    for (double v : vals) sum += v;  // fixed order, bit-reproducible
    return sum;
}

inline int fingerprint_discrepancies(const TopologyFingerprint& a, const TopologyFingerprint& b) {
    // symmetric difference of the sorted pair multisets
    std::vector<std::pair<int, int>> diff;
    std::set_symmetric_difference(a.crossing_pairs.begin(), a.crossing_pairs.end(),
                                  b.crossing_pairs.begin(), b.crossing_pairs.end(),
                                  std::back_inserter(diff));
    return static_cast<int>(diff.size());
}

}  // namespace detail

// Sum of cos^2 of the acute crossing angles; zero iff all crossings are
// perpendicular.
inline double total_crossing_angles(const ControlPoints& c) {
    const auto [norm_c, scale] = normalize(c);
    return detail::crossing_angles_term(find_crossings(norm_c.segments));
}

// Integral of curvature^2 over the arc-length-normalized knot.
inline double total_bending_energy(const ControlPoints& c) {
    const auto [norm_c, scale] = normalize(c);
    return detail::bending_term(norm_c);
}

inline double crossing_separation_badness(const ControlPoints& c, const BadnessWeights& w = {}) {
    const auto [norm_c, scale] = normalize(c);
    return detail::crossing_separation_term(find_crossings(norm_c.segments), w.cross_sep_radius);
}

inline double repel_badness(const ControlPoints& c, const BadnessWeights& w = {}) {
    const auto [norm_c, scale] = normalize(c);
    return detail::repel_term(norm_c, find_crossings(norm_c.segments), w.repel_radius);
}

inline double topology_badness(const ControlPoints& c, const TopologyFingerprint& ref,
                               const BadnessWeights& w = {}) {
    return w.b_topo * detail::fingerprint_discrepancies(fingerprint(c), ref);
}

struct BadnessBreakdown {
    double angle = 0.0;
    double bend = 0.0;
    double cross_sep = 0.0;
    double repel = 0.0;
    double topology = 0.0;
    bool topology_intact = true;
    bool degenerate = false;

    double weighted_total(const BadnessWeights& w) const {
        if (degenerate) return kBadnessSentinel;
        return w.w_angle * angle + w.w_bend * bend + w.w_cross_sep * cross_sep +
               w.w_repel * repel + w.w_topology * topology;
    }
};

// Full objective evaluation. Degenerate geometry yields the sentinel value
// rather than an exception so the optimizer sees a total function.
inline BadnessBreakdown badness_breakdown(const ControlPoints& c, const BadnessWeights& w,
                                          const TopologyFingerprint& ref) {
    BadnessBreakdown b;
    try {
        for (const CubicSegment& s : c.segments)
            if (!s.finite_points()) throw Error(Errc::DegenerateKnot, "non-finite control point");
        const auto [norm_c, scale] = normalize(c);
        const auto crossings = find_crossings(norm_c.segments);
        const TopologyFingerprint fp = fingerprint(crossings);
        b.angle = detail::crossing_angles_term(crossings);
        b.bend = detail::bending_term(norm_c);
        b.cross_sep = detail::crossing_separation_term(crossings, w.cross_sep_radius);
        b.repel = detail::repel_term(norm_c, crossings, w.repel_radius);
        const int disc = detail::fingerprint_discrepancies(fp, ref);
        b.topology = w.b_topo * disc;
        b.topology_intact = disc == 0 && fp.crossing_count == ref.crossing_count;
    } catch (const Error&) {
        b.degenerate = true;
        b.topology_intact = false;
    }
    return b;
}

inline double badness(const ControlPoints& c, const BadnessWeights& w,
                      const TopologyFingerprint& ref) {
    return badness_breakdown(c, w, ref).weighted_total(w);
}

inline double badness(const KnotVec& v, const BadnessWeights& w, const TopologyFingerprint& ref) {
    return badness(to_controlpoints(from_knotvec(v)), w, ref);
}

}  // namespace knotfair

#endif  // KNOTFAIR_BADNESS_HPP
