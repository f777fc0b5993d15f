#ifndef KNOTFAIR_OPTIMIZE_HPP
#define KNOTFAIR_OPTIMIZE_HPP

#include <algorithm>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "knotfair/badness.hpp"
#include "knotfair/base.hpp"
#include "knotfair/knot.hpp"
#include "knotfair/symmetry.hpp"

namespace knotfair {

enum class Algorithm { NelderMead, BfgsFd };

struct OptimizeOptions {
    Algorithm algorithm = Algorithm::NelderMead;
    long max_evals = 200000;
    double ftol = 1e-9;
    double xtol = 1e-10;
    long checkpoint_every = 1000;
    unsigned seed = 0;        // jitters the initial simplex
    int restart_count = 2;    // simplex re-inits after convergence
    std::string checkpoint_path;  // empty: no checkpoint files
    bool progress = false;        // stderr "eval=<n> badness=<v>" lines
    // Test/diagnostic hook, called for every objective evaluation.
    std::function<void(std::span<const double>, double)> on_eval;
};

struct OptimizeReport {
    double initial_badness = 0.0;
    double final_badness = 0.0;
    long evals = 0;
    bool converged = false;
    bool topology_changed = false;
    BadnessBreakdown before, after;
    std::vector<std::pair<long, double>> trajectory;  // (eval index, best so far)
};

// Central finite differences, one probe pair per coordinate.
template <class F>
std::vector<double> finite_diff_gradient(F&& f, std::span<const double> x, double h) {
    std::vector<double> grad(x.size());
    std::vector<double> probe(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = probe[i];
        probe[i] = xi + h;
        const double fp = f(std::span<const double>(probe));
        probe[i] = xi - h;
        const double fm = f(std::span<const double>(probe));
        probe[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw Error(Errc::NonFiniteProbe,
                        "objective not finite at finite-difference probe " + std::to_string(i));
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

namespace optdetail {

struct DriverResult {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
};

// Downhill simplex with the usual adaptive coefficients for high dimension.
template <class F>
DriverResult nelder_mead(F& f, std::vector<double> x0, double step, const OptimizeOptions& o,
                         long& evals_left) {
    const std::size_t d = x0.size();
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / static_cast<double>(d);
    const double gamma = 0.75 - 0.5 / static_cast<double>(d);
    const double delta = 1.0 - 1.0 / static_cast<double>(d);

    std::mt19937 rng(o.seed);
    std::uniform_real_distribution<double> jitter(0.75, 1.25);

    DriverResult best;
    best.x = x0;
    best.f = f(std::span<const double>(x0));
    --evals_left;

    double cur_step = step;
    for (int round = 0; round <= o.restart_count && evals_left > 0; ++round) {
        std::vector<std::vector<double>> xs(d + 1, best.x);
        std::vector<double> fs(d + 1);
        fs[0] = best.f;
        for (std::size_t i = 1; i <= d && evals_left > 0; ++i) {
            xs[i][i - 1] += cur_step * jitter(rng);
            fs[i] = f(std::span<const double>(xs[i]));
            --evals_left;
        }

        std::vector<std::size_t> order(d + 1);
        bool converged = false;
        while (evals_left > 0) {
            for (std::size_t i = 0; i <= d; ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
            const std::size_t lo = order[0], hi = order[d], second_hi = order[d - 1];

            const double fspread = fs[hi] - fs[lo];
            if (fspread <= o.ftol * (std::abs(fs[lo]) + std::abs(fs[hi]) + 1e-300)) {
                converged = true;
                break;
            }
            double diam = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                diam = std::max(diam, std::abs(xs[hi][i] - xs[lo][i]));
            if (diam <= o.xtol) {
                converged = true;
                break;
            }

            std::vector<double> centroid(d, 0.0);
            for (std::size_t i = 0; i <= d; ++i) {
                if (i == hi) continue;
                for (std::size_t k = 0; k < d; ++k) centroid[k] += xs[i][k];
            }
            for (double& c : centroid) c /= static_cast<double>(d);

            auto point_at = [&](double coef) {
                std::vector<double> p(d);
                for (std::size_t k = 0; k < d; ++k)
                    p[k] = centroid[k] + coef * (xs[hi][k] - centroid[k]);
                return p;
            };

            std::vector<double> xr = point_at(-alpha);
            const double fr = f(std::span<const double>(xr));
            --evals_left;
            if (fr < fs[lo] && evals_left > 0) {
                std::vector<double> xe = point_at(-alpha * beta);
                const double fe = f(std::span<const double>(xe));
                --evals_left;
                if (fe < fr) { xs[hi] = std::move(xe); fs[hi] = fe; }
                else { xs[hi] = std::move(xr); fs[hi] = fr; }
            } else if (fr < fs[second_hi]) {
                xs[hi] = std::move(xr);
                fs[hi] = fr;
            } else if (evals_left > 0) {
                const bool outside = fr < fs[hi];
                std::vector<double> xc = point_at(outside ? -alpha * gamma : gamma);
                const double fc = f(std::span<const double>(xc));
                --evals_left;
                if (fc < std::min(fr, fs[hi])) {
                    xs[hi] = std::move(xc);
                    fs[hi] = fc;
                } else {
                    for (std::size_t i = 0; i <= d && evals_left > 0; ++i) {  // shrink
                        if (i == lo) continue;
                        for (std::size_t k = 0; k < d; ++k)
                            xs[i][k] = xs[lo][k] + delta * (xs[i][k] - xs[lo][k]);
                        fs[i] = f(std::span<const double>(xs[i]));
                        --evals_left;
                    }
                }
            }
        }

        std::size_t lo = 0;
        for (std::size_t i = 1; i <= d; ++i)
            if (fs[i] < fs[lo]) lo = i;
        const double improvement = best.f - fs[lo];
        if (fs[lo] < best.f) {
            best.x = xs[lo];
            best.f = fs[lo];
        }
        best.converged = converged;
        if (converged && improvement <= o.ftol * (std::abs(best.f) + 1e-300) && round > 0) break;
        cur_step *= 0.25;  // polish restarts probe a finer neighborhood
    }
    return best;
}

inline double dot_self(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// BFGS with finite-difference gradients and Armijo backtracking. Intended for
// weight settings that keep the objective smooth.
template <class F>
DriverResult bfgs_fd(F& f, std::vector<double> x0, double step, const OptimizeOptions& o,
                     long& evals_left) {
    const std::size_t d = x0.size();
    DriverResult best;
    best.x = x0;
    best.f = f(std::span<const double>(x0));
    --evals_left;

    const double fd_h = std::max(1e-9, 1e-7 * step);
    std::vector<double> hess(d * d, 0.0);  // inverse Hessian approximation
    for (std::size_t i = 0; i < d; ++i) hess[i * d + i] = 1.0;

    std::vector<double> x = x0;
    double fx = best.f;
    std::vector<double> g;
    auto grad = [&](const std::vector<double>& at) {
        evals_left -= 2 * static_cast<long>(d);
        return finite_diff_gradient(f, std::span<const double>(at), fd_h);
    };
    g = grad(x);

    for (int iter = 0; iter < 10000 && evals_left > 0; ++iter) {
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax <= o.ftol * (std::abs(fx) + 1.0) / std::max(step, 1e-12)) {
            best.converged = true;
            break;
        }
        std::vector<double> dir(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) dir[i] -= hess[i * d + j] * g[j];
        double slope = 0.0;
        for (std::size_t i = 0; i < d; ++i) slope += dir[i] * g[i];
        if (slope >= 0.0) {  // reset to steepest descent
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) hess[i * d + j] = i == j ? 1.0 : 0.0;
                dir[i] = -g[i];
            }
            slope = -dot_self(g);
        }

        double t = 1.0;
        std::vector<double> xn(d);
        double fn = fx;
        bool accepted = false;
        for (int ls = 0; ls < 40 && evals_left > 0; ++ls) {
            for (std::size_t i = 0; i < d; ++i) xn[i] = x[i] + t * dir[i];
            fn = f(std::span<const double>(xn));
            --evals_left;
            if (fn <= fx + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            best.converged = true;  // no descent representable at this scale
            break;
        }
        std::vector<double> gn = grad(xn);
        // BFGS inverse update
        std::vector<double> s(d), y(d);
        double sy = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
            sy += s[i] * y[i];
        }
        if (sy > 1e-12) {
            std::vector<double> hy(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) hy[i] += hess[i * d + j] * y[j];
            double yhy = 0.0;
            for (std::size_t i = 0; i < d; ++i) yhy += y[i] * hy[i];
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    hess[i * d + j] += ((sy + yhy) * s[i] * s[j]) / (sy * sy) -
                                       (hy[i] * s[j] + s[i] * hy[j]) / sy;
        }
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
        if (fx < best.f) {
            best.x = x;
            best.f = fx;
        }
    }
    return best;
}

}  // namespace optdetail

struct MinimizeResult {
    KnotVec knot;
    OptimizeReport report;
};

// Minimizes badness over the knot's free coordinates, in reduced space when a
// symmetry spec is given. The returned knot never scores worse than the
// start, and its crossing fingerprint is checked hard against the start's.
inline MinimizeResult minimize(const KnotVec& start, const BadnessWeights& w,
                               const std::optional<SymmetrySpec>& spec, const OptimizeOptions& o) {
    if (!w.valid()) throw Error(Errc::InconsistentSpec, "badness weights must be >= 0, one > 0");
    for (double v : start.values)
        if (!std::isfinite(v)) throw Error(Errc::NonFiniteStart, "start knot has non-finite values");

    MinObj m0 = from_knotvec(start);
    const bool reduced = spec && !spec->trivial();
    if (reduced) m0 = symmetrize(m0, *spec);

    auto decode = [&, n = start.n](std::span<const double> x) {
        if (reduced) {
            ReducedVec r;
            r.spec = *spec;
            r.n = n;
            r.values.assign(x.begin(), x.end());
            return to_controlpoints(expand(r));
        }
        KnotVec v;
        v.n = n;
        v.values.assign(x.begin(), x.end());
        return to_controlpoints(from_knotvec(v));
    };

    std::vector<double> x0 = reduced ? reduce(m0, *spec).values : to_knotvec(m0).values;
    const TopologyFingerprint ref = fingerprint(to_controlpoints(m0));

    OptimizeReport report;
    report.before = badness_breakdown(to_controlpoints(m0), w, ref);
    report.initial_badness = report.before.weighted_total(w);
    if (!std::isfinite(report.initial_badness) || report.initial_badness >= kBadnessSentinel)
        throw Error(Errc::NonFiniteStart, "badness of the start knot is not finite");

    // characteristic coordinate scale for simplex steps
    Box bb{m0.nodes[0], m0.nodes[0]};
    for (const Point2& p : m0.nodes) {
        bb.lo.x = std::min(bb.lo.x, p.x);
        bb.lo.y = std::min(bb.lo.y, p.y);
        bb.hi.x = std::max(bb.hi.x, p.x);
        bb.hi.y = std::max(bb.hi.y, p.y);
    }
    const double step = 0.02 * bb.diagonal();

    struct Feasible {
        std::vector<double> x;
        double f;
        BadnessBreakdown breakdown;
    };
    Feasible best_feasible{x0, report.initial_badness, report.before};
    long evals = 0;

    auto objective = [&](std::span<const double> x) {
        const ControlPoints c = decode(x);
        const BadnessBreakdown b = badness_breakdown(c, w, ref);
        const double val = b.weighted_total(w);
        ++evals;
        if (b.topology_intact && val < best_feasible.f) {
            best_feasible.x.assign(x.begin(), x.end());
            best_feasible.f = val;
            best_feasible.breakdown = b;
        }
        if (o.checkpoint_every > 0 && evals % o.checkpoint_every == 0) {
            report.trajectory.emplace_back(evals, best_feasible.f);
            if (o.progress) std::fprintf(stderr, "eval=%ld badness=%.7g\n", evals, best_feasible.f);
            if (!o.checkpoint_path.empty()) {
                KnotVec ck;
                ck.n = start.n;
                if (reduced) {
                    ReducedVec r{best_feasible.x, *spec, start.n};
                    ck = to_knotvec(expand(r));
                } else {
                    ck.values = best_feasible.x;
                }
                write_knotvec(ck, o.checkpoint_path);
                std::ofstream side(o.checkpoint_path + ".json");
                side << "{ \"eval\": " << evals << ", \"badness\": " << best_feasible.f
                     << ", \"initial_badness\": " << report.initial_badness << " }\n";
            }
        }
        if (o.on_eval) o.on_eval(x, val);
        return val;
    };

    long evals_left = std::max<long>(1, o.max_evals);
    optdetail::DriverResult run;
    if (o.algorithm == Algorithm::NelderMead)
        run = optdetail::nelder_mead(objective, x0, step, o, evals_left);
    else
        run = optdetail::bfgs_fd(objective, x0, step, o, evals_left);

    // hard topology acceptance, independent of the soft penalty
    const TopologyFingerprint run_fp = fingerprint(decode(run.x));
    report.topology_changed = !(run_fp == ref);

    report.evals = evals;
    report.converged = run.converged;
    report.after = best_feasible.breakdown;
    report.final_badness = best_feasible.f;
    report.trajectory.emplace_back(evals, best_feasible.f);

    KnotVec out;
    out.n = start.n;
    if (reduced) {
        ReducedVec r{best_feasible.x, *spec, start.n};
        out = to_knotvec(expand(r));
    } else {
        out.values = best_feasible.x;
    }
    MinimizeResult result{std::move(out), std::move(report)};
    return result;
}

}  // namespace knotfair

#endif  // KNOTFAIR_OPTIMIZE_HPP
