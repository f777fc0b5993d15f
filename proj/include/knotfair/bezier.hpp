#ifndef KNOTFAIR_BEZIER_HPP
#define KNOTFAIR_BEZIER_HPP

#include <algorithm>
#include <array>
#include <utility>

#include "knotfair/base.hpp"

namespace knotfair {

// One cubic Bezier piece of the knot path.
struct CubicSegment {
    Point2 p0, p1, p2, p3;

    bool finite_points() const {
        return finite(p0) && finite(p1) && finite(p2) && finite(p3);
    }
};

struct Box {
    Vec2 lo{0, 0}, hi{0, 0};

    bool overlaps(const Box& o) const {
        return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
    }
    double diagonal() const { return dist(lo, hi); }

    // Distance between two boxes; 0 when they overlap.
    double distance(const Box& o) const {
        const double dx = std::max({0.0, lo.x - o.hi.x, o.lo.x - hi.x});
        const double dy = std::max({0.0, lo.y - o.hi.y, o.lo.y - hi.y});
        return std::hypot(dx, dy);
    }
};

// Control-point bounding box (contains the curve by convexity).
inline Box bounds(const CubicSegment& s) {
    Box b;
    b.lo = {std::min({s.p0.x, s.p1.x, s.p2.x, s.p3.x}), std::min({s.p0.y, s.p1.y, s.p2.y, s.p3.y})};
    b.hi = {std::max({s.p0.x, s.p1.x, s.p2.x, s.p3.x}), std::max({s.p0.y, s.p1.y, s.p2.y, s.p3.y})};
    return b;
}

inline Point2 eval(const CubicSegment& s, double t) {
    const double u = 1.0 - t;
    const double b0 = u * u * u;
    const double b1 = 3.0 * u * u * t;
    const double b2 = 3.0 * u * t * t;
    const double b3 = t * t * t;
    return {b0 * s.p0.x + b1 * s.p1.x + b2 * s.p2.x + b3 * s.p3.x,
            b0 * s.p0.y + b1 * s.p1.y + b2 * s.p2.y + b3 * s.p3.y};
}

struct Derivatives {
    Vec2 d1, d2;
};

inline Derivatives derivatives(const CubicSegment& s, double t) {
    const double u = 1.0 - t;
    const Vec2 q0 = (s.p1 - s.p0) * 3.0;
    const Vec2 q1 = (s.p2 - s.p1) * 3.0;
    const Vec2 q2 = (s.p3 - s.p2) * 3.0;
    Derivatives d;
    d.d1 = q0 * (u * u) + q1 * (2.0 * u * t) + q2 * (t * t);
    d.d2 = (q1 - q0) * (2.0 * u) + (q2 - q1) * (2.0 * t);
    return d;
}

// de Casteljau subdivision at t.
inline std::pair<CubicSegment, CubicSegment> split(const CubicSegment& s, double t) {
    const Vec2 p01 = s.p0 + (s.p1 - s.p0) * t;
    const Vec2 p12 = s.p1 + (s.p2 - s.p1) * t;
    const Vec2 p23 = s.p2 + (s.p3 - s.p2) * t;
    const Vec2 p012 = p01 + (p12 - p01) * t;
    const Vec2 p123 = p12 + (p23 - p12) * t;
    const Vec2 mid = p012 + (p123 - p012) * t;
    return {CubicSegment{s.p0, p01, p012, mid}, CubicSegment{mid, p123, p23, s.p3}};
}

// Sub-segment over parameter interval [t0, t1].
inline CubicSegment slice(const CubicSegment& s, double t0, double t1) {
    CubicSegment right = t0 > 0.0 ? split(s, t0).second : s;
    if (t1 < 1.0) {
        const double local = (t1 - t0) / (1.0 - t0);
        right = split(right, local).first;
    }
    return right;
}

// Speed below this is treated as a cusp/stationary point.
inline double speed_epsilon(const CubicSegment& s) {
    return 1e-9 * bounds(s).diagonal();
}

inline double curvature(const CubicSegment& s, double t) {
    const Derivatives d = derivatives(s, t);
    const double speed = norm(d.d1);
    if (speed <= speed_epsilon(s))
        throw Error(Errc::DegenerateSpeed, "stationary point on segment at t=" + std::to_string(t));
    return std::abs(cross(d.d1, d.d2)) / (speed * speed * speed);
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1].
inline constexpr std::array<double, 24> kGL24X = {
    -0.99518721999702131, -0.97472855597130947, -0.9382745520027328,  -0.88641552700440096,
    -0.82000198597390295, -0.74012419157855436, -0.64809365193697555, -0.54542147138883956,
    -0.43379350762604513, -0.3150426796961634,  -0.19111886747361631, -0.06405689286260563,
    0.06405689286260563,  0.19111886747361631,  0.3150426796961634,   0.43379350762604513,
    0.54542147138883956,  0.64809365193697555,  0.74012419157855436,  0.82000198597390295,
    0.88641552700440096,  0.9382745520027328,   0.97472855597130947,  0.99518721999702131};

inline constexpr std::array<double, 24> kGL24W = {
    0.012341229799987091, 0.028531388628933743, 0.044277438817419551, 0.059298584915436742,
    0.073346481411080411, 0.086190161531953288, 0.097618652104114065, 0.10744427011596561,
    0.11550566805372561,  0.12167047292780342,  0.1258374563468283,   0.12793819534675221,
    0.12793819534675221,  0.1258374563468283,   0.12167047292780342,  0.11550566805372561,
    0.10744427011596561,  0.097618652104114065, 0.086190161531953288, 0.073346481411080411,
    0.059298584915436742, 0.044277438817419551, 0.028531388628933743, 0.012341229799987091};

template <class F>
double gauss24(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGL24X.size(); ++i) sum += kGL24W[i] * f(mid + half * kGL24X[i]);
    return sum * half;
}

// 24-point panels, bisected until two successive refinements agree.
template <class F>
double adaptive_gauss(const F& f, double a, double b, double rel_tol, int depth) {
    const double whole = gauss24(f, a, b);
    const double mid = 0.5 * (a + b);
    const double halves = gauss24(f, a, mid) + gauss24(f, mid, b);
    if (depth <= 0 || std::abs(whole - halves) <= rel_tol * (std::abs(halves) + 1e-300))
        return halves;
    return adaptive_gauss(f, a, mid, rel_tol, depth - 1) +
           adaptive_gauss(f, mid, b, rel_tol, depth - 1);
}

inline constexpr double kQuadRelTol = 1e-8;
inline constexpr int kQuadMaxDepth = 8;

}  // namespace detail

inline double arc_length(const CubicSegment& s) {
    auto speed = [&](double t) { return norm(derivatives(s, t).d1); };
    return detail::adaptive_gauss(speed, 0.0, 1.0, detail::kQuadRelTol, detail::kQuadMaxDepth);
}

// Arc length of the sub-curve [0, t].
inline double arc_length_partial(const CubicSegment& s, double t) {
    if (t <= 0.0) return 0.0;
    auto speed = [&](double u) { return norm(derivatives(s, u).d1); };
    return detail::adaptive_gauss(speed, 0.0, t, detail::kQuadRelTol, detail::kQuadMaxDepth);
}

// Parameter t at which arc length from 0 equals target (monotone bisection).
inline double param_at_length(const CubicSegment& s, double target) {
    const double total = arc_length(s);
    if (target <= 0.0) return 0.0;
    if (target >= total) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (arc_length_partial(s, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Integral of curvature^2 over arc length.
inline double bending_energy(const CubicSegment& s) {
    const double eps = speed_epsilon(s);
    auto integrand = [&](double t) {
        const Derivatives d = derivatives(s, t);
        const double speed = norm(d.d1);
        if (speed <= eps)
            throw Error(Errc::DegenerateSpeed, "stationary point in bending integrand");
        const double k = cross(d.d1, d.d2) / (speed * speed * speed);
        return k * k * speed;
    };
    return detail::adaptive_gauss(integrand, 0.0, 1.0, detail::kQuadRelTol, detail::kQuadMaxDepth);
}

}  // namespace knotfair

#endif  // KNOTFAIR_BEZIER_HPP
