#include <gtest/gtest.h>

#include <random>

#include "knotfair/badness.hpp"
#include "util.hpp"

using namespace knotfair;
using testutil::circle_knot;
using testutil::line_segment;

constexpr double kTwoPi = 6.28318530717958648;

// Closed 4-node loop: one straight horizontal chord through the origin and
// one straight chord at the given slope angle, connected by arcs that
// provably stay clear (their control polygons pin them to one side of each
// chord). Exactly one crossing, at the origin, with a known exact angle.
static MinObj chord_cross_knot(bool perpendicular) {
    MinObj m;
    if (perpendicular) {
        m.nodes = {{-10, 0}, {10, 0}, {0, 8}, {0, -8}};
        m.handles = {{-10.0 / 3.0, 0}, {12, 0}, {0, 8.0 / 3.0}, {0, -32.0 / 3.0}};
    } else {  // 45 degrees
        m.nodes = {{-10, 0}, {10, 0}, {8, 8}, {-8, -8}};
        m.handles = {{-10.0 / 3.0, 0}, {12, 0}, {8.0 / 3.0, 8.0 / 3.0}, {-32.0 / 3.0, -32.0 / 3.0}};
    }
    return m;
}

TEST(Normalize, CircleBecomesUnitLength) {
    const ControlPoints circle = circle_knot(40.0, {300, 200});
    const auto [unit, scale] = normalize(circle);
    EXPECT_NEAR(total_arc_length(unit), 1.0, 1e-9);
    Vec2 centroid{0, 0};
    for (const CubicSegment& s : unit.segments) centroid += s.p0;
    EXPECT_NEAR(norm(centroid), 0.0, 1e-12);
    EXPECT_NEAR(scale, 1.0 / total_arc_length(circle), 1e-12);
}

TEST(Normalize, Idempotent) {
    const ControlPoints circle = circle_knot(40.0, {300, 200});
    const auto [unit, scale1] = normalize(circle);
    const auto [unit2, scale2] = normalize(unit);
    EXPECT_NEAR(scale2, 1.0, 1e-12);
    for (int i = 0; i < unit.size(); ++i)
        EXPECT_NEAR(dist(unit2.segments[i].p0, unit.segments[i].p0), 0.0, 1e-12);
}

TEST(Normalize, DegenerateKnotRejected) {
    ControlPoints c;
    const Point2 p{3, 4};
    c.segments = {{p, p, p, p}, {p, p, p, p}, {p, p, p, p}};
    try {
        normalize(c);
        FAIL() << "expected DegenerateKnot";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateKnot);
    }
}

TEST(Normalize, CircleBendingEnergyIsTwoPiSquared) {
    EXPECT_NEAR(total_bending_energy(circle_knot(73.0, {5, -9})), kTwoPi * kTwoPi,
                0.01 * kTwoPi * kTwoPi);
}

TEST(CrossingAngles, PerpendicularIsZero) {
    const ControlPoints c = to_controlpoints(chord_cross_knot(true));
    ASSERT_EQ(fingerprint(c).crossing_count, 1);
    EXPECT_NEAR(total_crossing_angles(c), 0.0, 1e-12);
}

TEST(CrossingAngles, FortyFiveDegreesIsHalf) {
    const ControlPoints c = to_controlpoints(chord_cross_knot(false));
    ASSERT_EQ(fingerprint(c).crossing_count, 1);
    EXPECT_NEAR(total_crossing_angles(c), 0.5, 1e-9);
}

TEST(BendingEnergyKnot, CircleIsTheMinimum) {
    const double circle_energy = total_bending_energy(circle_knot());
    // smoothly perturbed circles strictly exceed the round one (perturbing
    // through MinObj keeps the chain C1; corners would cheat the integral)
    std::mt19937 rng(83);
    std::uniform_real_distribution<double> wob(-0.15, 0.15);
    for (int trial = 0; trial < 10; ++trial) {
        MinObj m = to_minobj(circle_knot());
        for (int i = 0; i < m.size(); ++i) {
            m.nodes[i] += Vec2{wob(rng), wob(rng)};
            m.handles[i] += Vec2{wob(rng), wob(rng)};
        }
        EXPECT_GT(total_bending_energy(to_controlpoints(m)), circle_energy);
    }
    // the chord-cross loops are decidedly non-circular
    EXPECT_GT(total_bending_energy(to_controlpoints(chord_cross_knot(true))), circle_energy);
}

TEST(CrossingSeparation, SingleCrossingHasNoPairs) {
    EXPECT_NEAR(crossing_separation_badness(to_controlpoints(chord_cross_knot(true))), 0.0, 1e-15);
}

TEST(CrossingSeparation, HingeFormula) {
    // white-box check of the pair penalty: coincident -> 1, at radius -> 0
    std::vector<Crossing> two(2);
    two[0].point = {0.25, 0.25};
    two[1].point = {0.25, 0.25};
    EXPECT_NEAR(detail::crossing_separation_term(two, 0.05), 1.0, 1e-15);
    two[1].point = {0.30, 0.25};  // distance exactly the radius
    EXPECT_NEAR(detail::crossing_separation_term(two, 0.05), 0.0, 1e-15);
    two[1].point = {0.275, 0.25};  // half the radius
    EXPECT_NEAR(detail::crossing_separation_term(two, 0.05), 0.25, 1e-12);
}

TEST(Repel, WellSeparatedStrandsZero) {
    EXPECT_NEAR(repel_badness(circle_knot()), 0.0, 1e-15);
}

TEST(Repel, ParallelStrandsHinge) {
    // 20 x 1 rectangle: the only close non-adjacent pair is top/bottom at
    // distance 1; radius 2 puts them at half the radius
    ControlPoints rect;
    rect.segments = {line_segment({0, 0}, {20, 0}), line_segment({20, 0}, {20, 1}),
                     line_segment({20, 1}, {0, 1}), line_segment({0, 1}, {0, 0})};
    const double term = detail::repel_term(rect, {}, 2.0);
    EXPECT_NEAR(term, 0.25, 1e-6);
}

TEST(Repel, ContinuousAcrossRadius) {
    // sweep the gap through the radius; the penalty must not jump
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        const double gap = 0.5 + 3.0 * i / 40.0;
        ControlPoints rect;
        rect.segments = {line_segment({0, 0}, {20, 0}), line_segment({20, 0}, {20, gap}),
                         line_segment({20, gap}, {0, gap}), line_segment({0, gap}, {0, 0})};
        const double term = detail::repel_term(rect, {}, 2.0);
        if (prev >= 0.0) EXPECT_LT(std::abs(term - prev), 0.06);  // smooth in the sweep
        prev = term;
    }
}

TEST(Topology, UnchangedKnotZero) {
    const ControlPoints c = to_controlpoints(chord_cross_knot(false));
    const TopologyFingerprint ref = fingerprint(c);
    EXPECT_EQ(ref.crossing_count, 1);
    EXPECT_NEAR(topology_badness(c, ref), 0.0, 1e-15);
}

TEST(Topology, LostCrossingCostsBTopo) {
    const ControlPoints crossed = to_controlpoints(chord_cross_knot(false));
    const TopologyFingerprint ref = fingerprint(crossed);
    const ControlPoints round = circle_knot();  // zero crossings
    BadnessWeights w;
    EXPECT_NEAR(topology_badness(round, ref, w), w.b_topo, 1e-15);
}

TEST(Badness, AngleOnlyPerpendicularIsZero) {
    BadnessWeights w;
    w.w_bend = w.w_cross_sep = w.w_repel = w.w_topology = 0.0;
    const ControlPoints c = to_controlpoints(chord_cross_knot(true));
    EXPECT_NEAR(badness(c, w, fingerprint(c)), 0.0, 1e-12);
}

TEST(Badness, NonnegativeAndFinite) {
    BadnessWeights w;
    for (const MinObj& m : {chord_cross_knot(true), chord_cross_knot(false)}) {
        const ControlPoints c = to_controlpoints(m);
        const double b = badness(c, w, fingerprint(c));
        EXPECT_GE(b, 0.0);
        EXPECT_TRUE(std::isfinite(b));
    }
}

TEST(Badness, InvariantUnderRigidMotionAndScale) {
    BadnessWeights w;
    const ControlPoints c = to_controlpoints(chord_cross_knot(false));
    const TopologyFingerprint ref = fingerprint(c);
    const double base = badness(c, w, ref);
    std::mt19937 rng(89);
    std::uniform_real_distribution<double> ang(0.0, 6.28);
    std::uniform_real_distribution<double> off(-200.0, 200.0);
    std::uniform_real_distribution<double> sc(0.2, 5.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double s = sc(rng);
        const Affine t = Affine::translate(off(rng), off(rng))
                             .compose(Affine::rotate(ang(rng)))
                             .compose(Affine::scale(s, s));
        ControlPoints moved = c;
        for (CubicSegment& seg : moved.segments) {
            seg.p0 = t.apply(seg.p0);
            seg.p1 = t.apply(seg.p1);
            seg.p2 = t.apply(seg.p2);
            seg.p3 = t.apply(seg.p3);
        }
        EXPECT_NEAR(badness(moved, w, ref), base, 1e-9 * (base + 1.0));
    }
}

TEST(Badness, ComponentAdditivity) {
    BadnessWeights w;
    const ControlPoints c = to_controlpoints(chord_cross_knot(false));
    const TopologyFingerprint ref = fingerprint(c);
    const BadnessBreakdown full = badness_breakdown(c, w, ref);
    const double total = full.weighted_total(w);
    for (int which = 0; which < 5; ++which) {
        BadnessWeights zeroed = w;
        double removed = 0.0;
        switch (which) {
            case 0: removed = w.w_angle * full.angle; zeroed.w_angle = 0; break;
            case 1: removed = w.w_bend * full.bend; zeroed.w_bend = 0; break;
            case 2: removed = w.w_cross_sep * full.cross_sep; zeroed.w_cross_sep = 0; break;
            case 3: removed = w.w_repel * full.repel; zeroed.w_repel = 0; break;
            case 4: removed = w.w_topology * full.topology; zeroed.w_topology = 0; break;
        }
        EXPECT_NEAR(badness(c, zeroed, ref), total - removed, 1e-9 * (total + 1.0));
    }
}

TEST(Badness, SentinelOnDegenerateGeometry) {
    BadnessWeights w;
    ControlPoints c;
    const Point2 p{1, 2};
    c.segments = {{p, p, p, p}, {p, p, p, p}, {p, p, p, p}};
    EXPECT_EQ(badness(c, w, TopologyFingerprint{}), kBadnessSentinel);
    ControlPoints nan_knot = to_controlpoints(chord_cross_knot(true));
    nan_knot.segments[0].p1.x = std::numeric_limits<double>::quiet_NaN();
    EXPECT_EQ(badness(nan_knot, w, TopologyFingerprint{}), kBadnessSentinel);
}

TEST(Badness, FiniteDifferencesAlongProbeAreTame) {
    // away from topology boundaries the objective is continuous: small steps
    // give small changes
    BadnessWeights w;
    const MinObj m = chord_cross_knot(false);
    const KnotVec v = to_knotvec(m);
    const TopologyFingerprint ref = fingerprint(to_controlpoints(m));
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> dir(v.values.size());
    for (double& d : dir) d = u(rng);
    const double f0 = badness(v, w, ref);
    double prev = f0;
    for (int i = 1; i <= 10; ++i) {
        KnotVec probe = v;
        for (std::size_t k = 0; k < probe.values.size(); ++k)
            probe.values[k] += 1e-4 * i * dir[k];
        ASSERT_TRUE(fingerprint(to_controlpoints(from_knotvec(probe))) == ref);
        const double f = badness(probe, w, ref);
        EXPECT_TRUE(std::isfinite(f));
        EXPECT_LT(std::abs(f - prev), 0.05 * (std::abs(prev) + 1.0));
        prev = f;
    }
}
