#ifndef KNOTFAIR_KNOT_HPP
#define KNOTFAIR_KNOT_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "knotfair/base.hpp"
#include "knotfair/bezier.hpp"

namespace knotfair {

// Raw closed cubic path as drawn: [n0, h0+, h1-, n1, h1+, h2-, ..., h0-, n0].
// The final point duplicates the first node; each node's two handles are
// mirror images through the node (up to the ingestion tolerance).
struct InkscapePath {
    std::vector<Point2> points;

    int node_count() const { return static_cast<int>((points.size() - 1) / 3); }
};

// Redundancy-free form: each node plus its forward handle. The backward
// handle is always reconstructed as 2*node - handle.
struct MinObj {
    std::vector<Point2> nodes;
    std::vector<Point2> handles;

    int size() const { return static_cast<int>(nodes.size()); }
    Point2 backward_handle(int i) const { return nodes[i] * 2.0 - handles[i]; }
};

// Explicit cubic segments, closed chain: segments[i].p3 == segments[i+1].p0.
struct ControlPoints {
    std::vector<CubicSegment> segments;

    int size() const { return static_cast<int>(segments.size()); }
};

// Flat optimization vector: node x,y pairs then handle x,y pairs (4n values).
struct KnotVec {
    std::vector<double> values;
    int n = 0;
};

// Fraction of the bounding-box diagonal tolerated as handle asymmetry before
// the input is rejected as malformed.
inline constexpr double kHandleAsymmetryTol = 0.005;
inline constexpr double kClosureTol = 0.001;

namespace detail {

inline Box points_bounds(const std::vector<Point2>& pts) {
    Box b{pts.front(), pts.front()};
    for (const Point2& p : pts) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
    }
    return b;
}

}  // namespace detail

inline void validate(const InkscapePath& p) {
    const std::size_t len = p.points.size();
    if (len < 10 || len % 3 != 1)
        throw Error(Errc::MalformedPath,
                    "closed cubic path needs 3n+1 points (n>=3), got " + std::to_string(len));
    for (const Point2& pt : p.points)
        if (!finite(pt)) throw Error(Errc::MalformedPath, "non-finite coordinate");
    const double diag = detail::points_bounds(p.points).diagonal();
    if (dist(p.points.front(), p.points.back()) > kClosureTol * diag)
        throw Error(Errc::MalformedPath, "path does not close onto its first node");
}

inline MinObj to_minobj(const InkscapePath& p) {
    validate(p);
    const int n = p.node_count();
    const double diag = detail::points_bounds(p.points).diagonal();
    MinObj m;
    m.nodes.reserve(n);
    m.handles.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Point2 node = p.points[3 * i];
        const Point2 forward = p.points[3 * i + 1];
        const Point2 backward = p.points[i == 0 ? 3 * n - 1 : 3 * i - 1];
        const Point2 mirrored = node * 2.0 - backward;  // forward handle implied by h-
        if (dist(forward, mirrored) > kHandleAsymmetryTol * diag)
            throw Error(Errc::MalformedPath,
                        "handles of node " + std::to_string(i + 1) + " are not symmetric");
        m.nodes.push_back(node);
        m.handles.push_back((forward + mirrored) * 0.5);
    }
    return m;
}

inline InkscapePath to_inkscape(const MinObj& m) {
    const int n = m.size();
    InkscapePath p;
    p.points.resize(3 * n + 1);
    for (int i = 0; i < n; ++i) {
        p.points[3 * i] = m.nodes[i];
        p.points[3 * i + 1] = m.handles[i];
        p.points[3 * i + 2] = m.backward_handle((i + 1) % n);
    }
    p.points[3 * n] = m.nodes[0];
    return p;
}

inline ControlPoints to_controlpoints(const MinObj& m) {
    const int n = m.size();
    ControlPoints c;
    c.segments.reserve(n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        c.segments.push_back({m.nodes[i], m.handles[i], m.backward_handle(j), m.nodes[j]});
    }
    return c;
}

inline MinObj to_minobj(const ControlPoints& c) {
    MinObj m;
    m.nodes.reserve(c.size());
    m.handles.reserve(c.size());
    for (const CubicSegment& s : c.segments) {
        m.nodes.push_back(s.p0);
        m.handles.push_back(s.p1);
    }
    return m;
}

inline KnotVec to_knotvec(const MinObj& m) {
    const int n = m.size();
    KnotVec v;
    v.n = n;
    v.values.reserve(4 * n);
    for (const Point2& p : m.nodes) {
        v.values.push_back(p.x);
        v.values.push_back(p.y);
    }
    for (const Point2& p : m.handles) {
        v.values.push_back(p.x);
        v.values.push_back(p.y);
    }
    return v;
}

inline MinObj from_knotvec(const KnotVec& v) {
    if (v.n < 3 || v.values.size() != static_cast<std::size_t>(4 * v.n))
        throw Error(Errc::BadLength, "knotvec of n=" + std::to_string(v.n) + " needs " +
                                         std::to_string(4 * v.n) + " values, got " +
                                         std::to_string(v.values.size()));
    MinObj m;
    m.nodes.reserve(v.n);
    m.handles.reserve(v.n);
    for (int i = 0; i < v.n; ++i) m.nodes.push_back({v.values[2 * i], v.values[2 * i + 1]});
    for (int i = 0; i < v.n; ++i)
        m.handles.push_back({v.values[2 * v.n + 2 * i], v.values[2 * v.n + 2 * i + 1]});
    return m;
}

// 1-based strand label of a segment, as printed next to the rendered path.
inline int segment_number(const ControlPoints& c, int seg_index) {
    if (seg_index < 1 || seg_index > c.size())
        throw Error(Errc::OutOfRange, "segment index " + std::to_string(seg_index) +
                                          " outside 1.." + std::to_string(c.size()));
    return seg_index;
}

// Text serialization used by optimizer checkpoints: a header line then one
// value per line, 17 significant digits so doubles round-trip exactly.
inline std::string to_text(const KnotVec& v) {
    std::string out = "knotvec n=" + std::to_string(v.n) + "\n";
    char buf[64];
    for (double x : v.values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", x);
        out += buf;
    }
    return out;
}

inline KnotVec knotvec_from_text(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("knotvec n=", 0) != 0)
        throw Error(Errc::BadLength, "missing 'knotvec n=<n>' header");
    KnotVec v;
    v.n = std::atoi(header.c_str() + 10);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        v.values.push_back(std::strtod(line.c_str(), nullptr));
    }
    if (v.n < 3 || v.values.size() != static_cast<std::size_t>(4 * v.n))
        throw Error(Errc::BadLength, "expected " + std::to_string(4 * v.n) + " values, got " +
                                         std::to_string(v.values.size()));
    return v;
}

inline KnotVec read_knotvec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
    return knotvec_from_text(in);
}

inline void write_knotvec(const KnotVec& v, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
    out << to_text(v);
}

}  // namespace knotfair

#endif  // KNOTFAIR_KNOT_HPP
