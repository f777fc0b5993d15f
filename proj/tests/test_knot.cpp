#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "knotfair/intersect.hpp"
#include "knotfair/knot.hpp"
#include "util.hpp"

using namespace knotfair;

// Random smooth closed loop: nodes on a wobbled circle, handles tangent.
static MinObj random_loop(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> wob(0.8, 1.2);
    MinObj m;
    for (int i = 0; i < n; ++i) {
        const double ang = 2.0 * 3.14159265358979323846 * i / n;
        const double r = 10.0 * wob(rng);
        const Point2 node{r * std::cos(ang), r * std::sin(ang)};
        const Vec2 tang{-std::sin(ang), std::cos(ang)};
        m.nodes.push_back(node);
        m.handles.push_back(node + tang * (10.0 * 2.0 * 3.14159265358979323846 / (3 * n)));
    }
    return m;
}

TEST(InkscapePathType, RoundTripThroughMinObj) {
    std::mt19937 rng(51);
    const MinObj m = random_loop(rng, 7);
    const InkscapePath p = to_inkscape(m);
    ASSERT_EQ(p.points.size(), 22u);
    EXPECT_EQ(p.points.front(), p.points.back());
    const MinObj back = to_minobj(p);
    ASSERT_EQ(back.size(), 7);
    for (int i = 0; i < 7; ++i) {
        EXPECT_NEAR(dist(back.nodes[i], m.nodes[i]), 0.0, 1e-12);
        EXPECT_NEAR(dist(back.handles[i], m.handles[i]), 0.0, 1e-12);
    }
}

TEST(InkscapePathType, RejectsBadLength) {
    InkscapePath p;
    p.points.assign(12, Point2{0, 0});  // 12 % 3 == 0, not 1
    EXPECT_THROW(to_minobj(p), Error);
}

TEST(InkscapePathType, RejectsAsymmetricHandles) {
    std::mt19937 rng(53);
    InkscapePath p = to_inkscape(random_loop(rng, 5));
    p.points[2] = p.points[2] + Vec2{8.0, 0.0};  // wreck a backward handle
    try {
        to_minobj(p);
        FAIL() << "expected MalformedPath";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MalformedPath);
    }
}

TEST(InkscapePathType, SmallAsymmetryAveraged) {
    std::mt19937 rng(59);
    const MinObj m = random_loop(rng, 5);
    InkscapePath p = to_inkscape(m);
    p.points[1] = p.points[1] + Vec2{0.01, -0.01};  // within 0.5% of bbox diag
    const MinObj back = to_minobj(p);
    EXPECT_NEAR(dist(back.handles[0], m.handles[0] + Vec2{0.005, -0.005}), 0.0, 1e-12);
}

TEST(ControlPointsType, TriangleMinimum) {
    MinObj m;
    m.nodes = {{0, 0}, {4, 0}, {2, 3}};
    m.handles = {{1, -1}, {5, 1}, {1, 3}};
    const ControlPoints c = to_controlpoints(m);
    ASSERT_EQ(c.size(), 3);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(c.segments[i].p3, c.segments[(i + 1) % 3].p0);  // bit-exact chain
        EXPECT_EQ(c.segments[i].p0, m.nodes[i]);
        EXPECT_EQ(c.segments[i].p1, m.handles[i]);
    }
    // segment construction: (n_i, h_i, 2n_{i+1}-h_{i+1}, n_{i+1})
    EXPECT_EQ(c.segments[0].p2, (Point2{2 * 4.0 - 5.0, 2 * 0.0 - 1.0}));
}

TEST(ControlPointsType, SampledCurveMatchesDirectInterpolation) {
    std::mt19937 rng(61);
    const MinObj m = random_loop(rng, 9);
    const InkscapePath p = to_inkscape(m);
    const ControlPoints c = to_controlpoints(to_minobj(p));
    ASSERT_EQ(c.size(), 9);
    for (int i = 0; i < 9; ++i) {
        const CubicSegment direct{p.points[3 * i], p.points[3 * i + 1], p.points[3 * i + 2],
                                  p.points[3 * i + 3]};
        for (int k = 0; k <= 200; ++k) {
            const double t = k / 200.0;
            EXPECT_NEAR(dist(eval(c.segments[i], t), eval(direct, t)), 0.0, 1e-9);
        }
    }
}

TEST(KnotVecType, RoundTripIsIdentity) {
    std::mt19937 rng(67);
    const MinObj m = random_loop(rng, 16);
    const KnotVec v = to_knotvec(m);
    EXPECT_EQ(v.n, 16);
    EXPECT_EQ(v.values.size(), 64u);
    const MinObj back = from_knotvec(v);
    for (int i = 0; i < 16; ++i) {
        EXPECT_EQ(back.nodes[i], m.nodes[i]);      // bit-exact
        EXPECT_EQ(back.handles[i], m.handles[i]);
    }
}

TEST(KnotVecType, BadLengthRejected) {
    KnotVec v;
    v.n = 4;
    v.values.assign(15, 0.0);
    EXPECT_THROW(from_knotvec(v), Error);
}

TEST(KnotVecType, ZeroVectorPassesThrough) {
    KnotVec v;
    v.n = 3;
    v.values.assign(12, 0.0);
    const MinObj m = from_knotvec(v);  // degenerate but representable
    EXPECT_EQ(m.size(), 3);
    EXPECT_EQ(m.nodes[2], (Point2{0, 0}));
}

TEST(KnotVecType, TextSerializationRoundTripsBits) {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    KnotVec v;
    v.n = 5;
    for (int i = 0; i < 20; ++i) v.values.push_back(u(rng) * 1e-7);
    const std::string text = to_text(v);
    EXPECT_EQ(text.rfind("knotvec n=5\n", 0), 0u);
    std::istringstream in(text);
    const KnotVec back = knotvec_from_text(in);
    EXPECT_EQ(back.n, v.n);
    EXPECT_EQ(back.values, v.values);  // bit-exact through %.17g
}

TEST(SegmentNumbering, BijectionAndBounds) {
    std::mt19937 rng(73);
    const ControlPoints c = to_controlpoints(random_loop(rng, 16));
    EXPECT_EQ(segment_number(c, 12), 12);
    EXPECT_EQ(segment_number(c, 1), 1);
    std::vector<bool> seen(17, false);
    for (int i = 1; i <= 16; ++i) {
        const int label = segment_number(c, i);
        EXPECT_GE(label, 1);
        EXPECT_LE(label, 16);
        EXPECT_FALSE(seen[label]);
        seen[label] = true;
    }
    EXPECT_THROW(segment_number(c, 0), Error);
    EXPECT_THROW(segment_number(c, 17), Error);
}

TEST(Conversions, CrossingCountPreserved) {
    // conversions may not change the curve, hence not its crossings
    MinObj m;
    const double a = 0.70710678118654752;
    m.nodes = {{1, a}, {-1, a}, {1, -a}, {-1, -a}};
    m.handles = {{1, a + 0.8}, {-1, a - 0.8}, {1, -a - 0.8}, {-1, -a + 0.8}};
    const auto direct = find_crossings(to_controlpoints(m).segments);
    const MinObj routed = to_minobj(to_inkscape(m));
    const auto via_inkscape = find_crossings(to_controlpoints(routed).segments);
    ASSERT_EQ(direct.size(), via_inkscape.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        EXPECT_EQ(direct[i].seg_a, via_inkscape[i].seg_a);
        EXPECT_EQ(direct[i].seg_b, via_inkscape[i].seg_b);
    }
}
