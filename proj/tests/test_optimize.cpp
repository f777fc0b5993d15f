#include <gtest/gtest.h>

#include <random>

#include "knotfair/optimize.hpp"
#include "util.hpp"

using namespace knotfair;

TEST(FiniteDiffGradient, SumOfSquares) {
    auto f = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    const std::vector<double> x{1.0, 2.0};
    const auto g = finite_diff_gradient(f, x, 1e-6);
    EXPECT_NEAR(g[0], 2.0, 1e-6);
    EXPECT_NEAR(g[1], 4.0, 1e-6);
}

TEST(FiniteDiffGradient, MatchesFourthOrderOracle) {
    auto f = [](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += std::sin(x[i]) * (i + 1) + 0.3 * x[i] * x[(i + 1) % x.size()];
        return s;
    };
    std::mt19937 rng(139);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<double> x(6);
    for (int trial = 0; trial < 5; ++trial) {
        for (double& v : x) v = u(rng);
        const double h = 1e-5;
        const auto g2 = finite_diff_gradient(f, x, h);
        for (std::size_t i = 0; i < x.size(); ++i) {
            // 4th-order central stencil as the independent reference
            std::vector<double> p = x;
            auto at = [&](double d) {
                p[i] = x[i] + d;
                const double v = f(std::span<const double>(p));
                p[i] = x[i];
                return v;
            };
            const double g4 = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
            EXPECT_NEAR(g2[i], g4, 1e-5 * (std::abs(g4) + 1.0));
        }
    }
}

TEST(FiniteDiffGradient, NonFiniteProbeThrows) {
    auto f = [](std::span<const double> x) {
        return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x[0];
    };
    const std::vector<double> x{0.4999999};
    EXPECT_THROW(finite_diff_gradient(f, x, 1e-6), Error);
}

// quadratic bowl through the raw driver (the substitutable test hook)
TEST(NelderMead, QuadraticBowlConverges) {
    const std::vector<double> target{1.5, -2.0, 0.5, 3.0};
    auto f = [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - target[i]) * (x[i] - target[i]);
        return s;
    };
    OptimizeOptions o;
    o.ftol = 1e-14;
    o.xtol = 1e-12;
    std::vector<double> x0{0, 0, 0, 0};
    long budget = 20000;
    const auto res = optdetail::nelder_mead(f, x0, 0.5, o, budget);
    EXPECT_TRUE(res.converged);
    for (std::size_t i = 0; i < target.size(); ++i) EXPECT_NEAR(res.x[i], target[i], 1e-5);
}

TEST(BfgsFd, QuadraticBowlConverges) {
    const std::vector<double> target{1.5, -2.0, 0.5, 3.0};
    auto f = [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - target[i]) * (x[i] - target[i]);
        return s;
    };
    OptimizeOptions o;
    std::vector<double> x0{0, 0, 0, 0};
    long budget = 20000;
    const auto res = optdetail::bfgs_fd(f, x0, 0.5, o, budget);
    for (std::size_t i = 0; i < target.size(); ++i) EXPECT_NEAR(res.x[i], target[i], 1e-5);
}

// a 4-node knot with one crossing, drawn lopsided so there is room to improve
static KnotVec lopsided_lemniscate() {
    const double a = 0.70710678118654752;
    MinObj m;
    m.nodes = {{1.3, a * 1.4}, {-1, a}, {1, -a}, {-1.2, -a * 0.8}};
    m.handles = {{1.45, a + 0.9}, {-1.2, a - 0.75}, {1.2, -a - 0.9}, {-1.3, -a + 0.7}};
    return to_knotvec(m);
}

TEST(Minimize, MonotoneAndTopologyPreserving) {
    const KnotVec start = lopsided_lemniscate();
    BadnessWeights w;
    OptimizeOptions o;
    o.max_evals = 4000;
    o.checkpoint_every = 500;
    const auto [knot, report] = minimize(start, w, std::nullopt, o);
    EXPECT_LE(report.final_badness, report.initial_badness);
    EXPECT_LT(report.final_badness, report.initial_badness * 0.9);  // real progress
    EXPECT_FALSE(report.topology_changed);
    const auto fp = fingerprint(to_controlpoints(from_knotvec(knot)));
    EXPECT_EQ(fp.crossing_count, 1);
    // running best in the trajectory is non-increasing
    for (std::size_t i = 1; i < report.trajectory.size(); ++i)
        EXPECT_LE(report.trajectory[i].second, report.trajectory[i - 1].second);
    // breakdown sums to the weighted total
    const double sum = w.w_angle * report.after.angle + w.w_bend * report.after.bend +
                       w.w_cross_sep * report.after.cross_sep + w.w_repel * report.after.repel +
                       w.w_topology * report.after.topology;
    EXPECT_NEAR(sum, report.final_badness, 1e-9 * (sum + 1.0));
}

TEST(Minimize, SingleEvalReturnsStart) {
    const KnotVec start = lopsided_lemniscate();
    BadnessWeights w;
    OptimizeOptions o;
    o.max_evals = 1;
    const auto [knot, report] = minimize(start, w, std::nullopt, o);
    EXPECT_EQ(report.final_badness, report.initial_badness);
    EXPECT_EQ(knot.values, start.values);  // bit-exact
}

TEST(Minimize, DeterministicForFixedSeed) {
    const KnotVec start = lopsided_lemniscate();
    BadnessWeights w;
    OptimizeOptions o;
    o.max_evals = 1500;
    o.seed = 7;
    const auto a = minimize(start, w, std::nullopt, o);
    const auto b = minimize(start, w, std::nullopt, o);
    EXPECT_EQ(a.knot.values, b.knot.values);  // identical bits
    EXPECT_EQ(a.report.final_badness, b.report.final_badness);
    EXPECT_EQ(a.report.evals, b.report.evals);
    OptimizeOptions o2 = o;
    o2.seed = 8;  // a different simplex jitter explores differently
    const auto c = minimize(start, w, std::nullopt, o2);
    EXPECT_NE(a.knot.values, c.knot.values);
}

TEST(Minimize, NonFiniteStartRejected) {
    KnotVec start = lopsided_lemniscate();
    start.values[3] = std::numeric_limits<double>::infinity();
    BadnessWeights w;
    OptimizeOptions o;
    EXPECT_THROW(minimize(start, w, std::nullopt, o), Error);
}

TEST(Minimize, ReducedSpaceKeepsSymmetryExactly) {
    // mirror-symmetric two-crossing-ish loop: 6 nodes, pairs (2,6),(3,5),
    // axis nodes 1 and 4
    MinObj m;
    m.nodes = {{0, 110}, {95, 45}, {60, -85}, {0, -30}, {-60, -85}, {-95, 45}};
    m.handles = {{40, 110}, {90, -15}, {5, -95}, {-40, -30}, {-55, -35}, {-45, 80}};
    SymmetrySpec spec;
    spec.mver = {{2, 6}, {3, 5}};
    spec.xver = {1, 4};
    BadnessWeights w;
    OptimizeOptions o;
    o.max_evals = 1200;
    long checked = 0;
    o.on_eval = [&](std::span<const double> x, double) {
        ReducedVec r;
        r.spec = spec;
        r.n = 6;
        r.values.assign(x.begin(), x.end());
        ASSERT_EQ(symmetry_error(expand(r), spec), 0.0);
        ++checked;
    };
    const auto [knot, report] = minimize(to_knotvec(m), w, spec, o);
    EXPECT_GT(checked, 500);
    EXPECT_EQ(symmetry_error(from_knotvec(knot), spec), 0.0);
    EXPECT_LE(report.final_badness, report.initial_badness);
}

TEST(Minimize, ProgressLinesAndCheckpointFiles) {
    const KnotVec start = lopsided_lemniscate();
    BadnessWeights w;
    OptimizeOptions o;
    o.max_evals = 600;
    o.checkpoint_every = 200;
    o.checkpoint_path = "ckpt_test.kv";  // ctest working directory
    const auto res = minimize(start, w, std::nullopt, o);
    const KnotVec ck = read_knotvec(o.checkpoint_path);
    EXPECT_EQ(ck.n, start.n);
    std::ifstream side(o.checkpoint_path + ".json");
    ASSERT_TRUE(side.good());
    std::string text((std::istreambuf_iterator<char>(side)), std::istreambuf_iterator<char>());
    EXPECT_NE(text.find("\"badness\""), std::string::npos);
}
