#ifndef KNOTFAIR_BASE_HPP
#define KNOTFAIR_BASE_HPP

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace knotfair {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    bool operator==(const Vec2&) const = default;
};

using Point2 = Vec2;

inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline bool finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Row-major 2x3 affine map: p -> (a*x + c*y + e, b*x + d*y + f).
// Coefficient names follow the SVG "matrix(a,b,c,d,e,f)" convention.
struct Affine {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    Vec2 apply(Vec2 p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }

    // this ∘ o (apply o first, then this)
    Affine compose(const Affine& o) const {
        return {a * o.a + c * o.b,       b * o.a + d * o.b,
                a * o.c + c * o.d,       b * o.c + d * o.d,
                a * o.e + c * o.f + e,   b * o.e + d * o.f + f};
    }

    static Affine identity() { return {}; }
    static Affine translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }
    static Affine scale(double sx, double sy) { return {sx, 0, 0, sy, 0, 0}; }
    static Affine rotate(double rad) {
        const double cs = std::cos(rad), sn = std::sin(rad);
        return {cs, sn, -sn, cs, 0, 0};
    }
};

enum class Errc {
    MalformedPath,
    NoPathFound,
    UnsupportedCommand,
    OpenPath,
    BadLength,
    OutOfRange,
    DegenerateSpeed,
    DegenerateKnot,
    TangentialContact,
    InconsistentSpec,
    TopologyChanged,
    NonFiniteStart,
    NonFiniteProbe,
    OverUnderMismatch,
    IoFailure,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MalformedPath:      return "MalformedPath";
        case Errc::NoPathFound:        return "NoPathFound";
        case Errc::UnsupportedCommand: return "UnsupportedCommand";
        case Errc::OpenPath:           return "OpenPath";
        case Errc::BadLength:          return "BadLength";
        case Errc::OutOfRange:         return "OutOfRange";
        case Errc::DegenerateSpeed:    return "DegenerateSpeed";
        case Errc::DegenerateKnot:     return "DegenerateKnot";
        case Errc::TangentialContact:  return "TangentialContact";
        case Errc::InconsistentSpec:   return "InconsistentSpec";
        case Errc::TopologyChanged:    return "TopologyChanged";
        case Errc::NonFiniteStart:     return "NonFiniteStart";
        case Errc::NonFiniteProbe:     return "NonFiniteProbe";
        case Errc::OverUnderMismatch:  return "OverUnderMismatch";
        case Errc::IoFailure:          return "IoFailure";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

// Thread cap for internal parallel loops; 0 entries mean "serial".
inline unsigned thread_limit() {
    static const unsigned cached = [] {
        unsigned hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        if (const char* env = std::getenv("KNOT_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
            if (v == 1) hw = 1;
        }
        return hw;
    }();
    return cached;
}

// Runs body(i) for i in [0,n). Work is chunked across at most thread_limit()
// threads; the caller is responsible for writing results into per-index slots
// so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned threads = thread_limit();
    if (threads <= 1 || n < 16) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned t = 0; t < used; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += used) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace knotfair

#endif  // KNOTFAIR_BASE_HPP
