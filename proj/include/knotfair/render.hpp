#ifndef KNOTFAIR_RENDER_HPP
#define KNOTFAIR_RENDER_HPP

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "knotfair/base.hpp"
#include "knotfair/bezier.hpp"
#include "knotfair/intersect.hpp"
#include "knotfair/knot.hpp"
#include "knotfair/render_doc.hpp"

namespace knotfair {

// Which strand passes over at each crossing: rows of (over, under) segment
// labels, one row per physical crossing.
struct OverUnderSpec {
    std::vector<std::pair<int, int>> rows;
};

struct RenderOptions {
    double gap = 8.0;            // understrand break half-length, display units
    bool show_nodes = false;
    bool show_handles = false;
    bool show_curvature = false;
    double curvature_scale = 0.0;  // 0: auto (0.002 * total length squared)
    bool show_labels = false;
    bool rainbow = false;
    double stroke_width = 4.0;
    int curvature_samples = 120;
};

namespace renderdetail {

inline std::string hsv_hex(double h, double s, double v) {
    h = h - std::floor(h);
    const double c = v * s;
    const double hp = h * 6.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>((r + m) * 255.0 + 0.5),
                  static_cast<int>((g + m) * 255.0 + 0.5),
                  static_cast<int>((b + m) * 255.0 + 0.5));
    return buf;
}

inline Vec2 nodes_centroid(const ControlPoints& c) {
    Vec2 sum{0, 0};
    for (const CubicSegment& s : c.segments) sum += s.p0;
    return sum / static_cast<double>(c.size());
}

struct ArcTable {
    std::vector<double> seg_len;  // per segment
    double total = 0.0;
};

inline ArcTable arc_table(const ControlPoints& c) {
    ArcTable t;
    t.seg_len.reserve(c.size());
    for (const CubicSegment& s : c.segments) {
        t.seg_len.push_back(arc_length(s));
        t.total += t.seg_len.back();
    }
    return t;
}

}  // namespace renderdetail

// Path diagram in the working style: the closed path itself, optionally with
// handle sticks and circles, node squares, curvature discs along the strand,
// per-segment rainbow colors, and strand number labels.
inline RenderDoc knotplot2(const ControlPoints& c, const RenderOptions& opts = {}) {
    using namespace renderdetail;
    RenderDoc doc;
    const int n = c.size();
    const ArcTable arcs = arc_table(c);
    const Vec2 centroid = nodes_centroid(c);

    if (opts.show_curvature) {
        const double scale =
            opts.curvature_scale > 0.0 ? opts.curvature_scale : 0.002 * arcs.total * arcs.total;
        const int samples = std::max(8, opts.curvature_samples);
        double s_next = 0.0;
        double s_done = 0.0;
        const double step = arcs.total / samples;
        for (int i = 0; i < n; ++i) {
            const CubicSegment& seg = c.segments[i];
            while (s_next < s_done + arcs.seg_len[i]) {
                const double local = s_next - s_done;
                const double t = param_at_length(seg, local);
                double kappa = 0.0;
                bool ok = true;
                try {
                    kappa = curvature(seg, t);
                } catch (const Error&) {
                    ok = false;
                }
                if (ok && kappa * scale > 1e-6) {
                    DocCircle disc;
                    disc.center = eval(seg, t);
                    disc.r = kappa * scale;
                    disc.style.stroke = "none";
                    disc.style.fill = hsv_hex(s_next / arcs.total, 0.8, 0.85);
                    disc.style.fill_opacity = 0.45;
                    doc.circles.push_back(disc);
                }
                s_next += step;
            }
            s_done += arcs.seg_len[i];
        }
    }

    if (opts.rainbow) {
        for (int i = 0; i < n; ++i) {
            DocPath p;
            p.segs = {c.segments[i]};
            p.style.stroke = hsv_hex(static_cast<double>(i) / n, 0.85, 0.75);
            p.style.stroke_width = opts.stroke_width;
            doc.paths.push_back(std::move(p));
        }
    } else {
        DocPath p;
        p.segs = c.segments;
        p.closed = true;
        p.style.stroke_width = opts.stroke_width;
        doc.paths.push_back(std::move(p));
    }

    if (opts.show_handles) {
        const MinObj m = to_minobj(c);
        for (int i = 0; i < n; ++i) {
            for (const Point2 h : {m.handles[i], m.backward_handle(i)}) {
                DocPath stick;
                const Vec2 third1 = m.nodes[i] + (h - m.nodes[i]) / 3.0;
                const Vec2 third2 = m.nodes[i] + (h - m.nodes[i]) * (2.0 / 3.0);
                stick.segs = {{m.nodes[i], third1, third2, h}};
                stick.style.stroke = "#4444cc";
                stick.style.stroke_width = opts.stroke_width * 0.25;
                doc.paths.push_back(std::move(stick));
                DocCircle knob;
                knob.center = h;
                knob.r = opts.stroke_width * 0.9;
                knob.style.fill = "#ffffff";
                knob.style.stroke = "#4444cc";
                knob.style.stroke_width = opts.stroke_width * 0.25;
                doc.circles.push_back(knob);
            }
        }
    }

    if (opts.show_nodes) {
        for (const CubicSegment& s : c.segments) {
            DocSquare sq;
            sq.center = s.p0;
            sq.half = opts.stroke_width * 0.9;
            sq.style.fill = "#3366aa";
            sq.style.stroke = "none";
            doc.squares.push_back(sq);
        }
    }

    if (opts.show_labels) {
        const double offset = 0.035 * arcs.total;
        for (int i = 0; i < n; ++i) {
            const CubicSegment& seg = c.segments[i];
            const double t = param_at_length(seg, 0.5 * arcs.seg_len[i]);
            const Point2 pos = eval(seg, t);
            const Vec2 tan = derivatives(seg, t).d1;
            Vec2 normal{-tan.y, tan.x};
            const double len = norm(normal);
            if (len > 0.0) normal = normal / len;
            if (dot(normal, pos - centroid) < 0.0) normal = -normal;
            DocLabel label;
            label.pos = pos + normal * offset;
            label.text = std::to_string(segment_number(c, i + 1));
            label.font_size = std::max(10.0, 0.03 * arcs.total);
            doc.labels.push_back(std::move(label));
        }
    }
    return doc;
}

// The finished diagram: understrands interrupted by arc-length gaps centered
// on each crossing. The over/under rows must cover the detected crossing set
// exactly.
inline RenderDoc knotplot(const ControlPoints& c, const OverUnderSpec& ou,
                          const RenderOptions& opts = {}) {
    using namespace renderdetail;
    const int n = c.size();
    const std::vector<Crossing> crossings = find_crossings(c.segments);

    // match rows to detected crossings by segment pair; ties along seg_a in
    // parameter order, rows in file order
    std::vector<int> row_of(crossings.size(), -1);
    std::vector<std::string> complaints;
    std::vector<bool> row_used(ou.rows.size(), false);
    for (std::size_t ci = 0; ci < crossings.size(); ++ci) {
        const Crossing& cr = crossings[ci];
        for (std::size_t ri = 0; ri < ou.rows.size(); ++ri) {
            if (row_used[ri]) continue;
            const auto [over, under] = ou.rows[ri];
            const int lo = std::min(over, under), hi = std::max(over, under);
            if (lo == cr.seg_a && hi == cr.seg_b) {
                row_of[ci] = static_cast<int>(ri);
                row_used[ri] = true;
                break;
            }
        }
        if (row_of[ci] == -1)
            complaints.push_back("crossing of segments " + std::to_string(cr.seg_a) + " and " +
                                 std::to_string(cr.seg_b) + " has no over/under row");
    }
    for (std::size_t ri = 0; ri < ou.rows.size(); ++ri)
        if (!row_used[ri])
            complaints.push_back("row (" + std::to_string(ou.rows[ri].first) + " over " +
                                 std::to_string(ou.rows[ri].second) +
                                 ") matches no detected crossing");
    if (!complaints.empty()) {
        std::string msg = "over/under rows do not cover the crossing set:";
        for (const std::string& s : complaints) msg += "\n  " + s;
        throw Error(Errc::OverUnderMismatch, msg);
    }

    // break intervals in arc length, per segment
    std::vector<std::vector<std::pair<double, double>>> breaks(n);
    std::vector<double> seg_len(n);
    for (int i = 0; i < n; ++i) seg_len[i] = arc_length(c.segments[i]);
    if (opts.gap > 0.0) {
        for (std::size_t ci = 0; ci < crossings.size(); ++ci) {
            const Crossing& cr = crossings[ci];
            const int under = ou.rows[row_of[ci]].second;
            const int seg = under - 1;
            const double t = under == cr.seg_a ? cr.t_a : cr.t_b;
            const double s = arc_length_partial(c.segments[seg], t);
            breaks[seg].emplace_back(s - opts.gap, s + opts.gap);
        }
        for (int i = 0; i < n; ++i) {
            auto& iv = breaks[i];
            std::sort(iv.begin(), iv.end());
            const double margin = 0.02 * seg_len[i];
            for (auto& [lo, hi] : iv) {
                lo = std::max(lo, margin);          // never swallow a node
                hi = std::min(hi, seg_len[i] - margin);
            }
            for (std::size_t k = 0; k + 1 < iv.size(); ++k) {  // never merge breaks
                if (iv[k].second > iv[k + 1].first) {
                    const double mid = 0.5 * (iv[k + 1].first + iv[k].second);
                    iv[k].second = mid - 0.5 * margin;
                    iv[k + 1].first = mid + 0.5 * margin;
                }
            }
            iv.erase(std::remove_if(iv.begin(), iv.end(),
                                    [](const auto& p) { return p.second <= p.first; }),
                     iv.end());
        }
    }

    // assemble runs of visible pieces
    std::vector<std::vector<CubicSegment>> runs;
    std::vector<CubicSegment> current;
    for (int i = 0; i < n; ++i) {
        const CubicSegment& seg = c.segments[i];
        double t_from = 0.0;
        for (const auto& [lo, hi] : breaks[i]) {
            const double t_lo = param_at_length(seg, lo);
            if (t_lo > t_from) current.push_back(slice(seg, t_from, t_lo));
            if (!current.empty()) runs.push_back(std::move(current));
            current.clear();
            t_from = param_at_length(seg, hi);
        }
        if (t_from < 1.0) current.push_back(slice(seg, t_from, 1.0));
    }
    bool closed = false;
    if (!current.empty()) {
        if (runs.empty()) {
            closed = true;  // no break anywhere: one closed loop
            runs.push_back(std::move(current));
        } else {
            // clamping keeps a stub on both sides of every node, so the
            // junction at node 0 is always intact: wrap the trailing run
            // onto the head run
            runs.front().insert(runs.front().begin(),
                                std::make_move_iterator(current.begin()),
                                std::make_move_iterator(current.end()));
        }
    }

    RenderDoc doc;
    for (auto& run : runs) {
        DocPath p;
        p.segs = std::move(run);
        p.closed = closed;
        p.style.stroke_width = opts.stroke_width;
        doc.paths.push_back(std::move(p));
    }
    return doc;
}

}  // namespace knotfair

#endif  // KNOTFAIR_RENDER_HPP
