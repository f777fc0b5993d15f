#ifndef KNOTFAIR_SVG_HPP
#define KNOTFAIR_SVG_HPP

#include <cctype>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "knotfair/base.hpp"
#include "knotfair/knot.hpp"
#include "knotfair/render_doc.hpp"

namespace knotfair {

struct SvgReadOptions {
    std::string element_id;  // empty: first path in document order
};

namespace svgdetail {

struct RawPath {
    std::string id;
    std::string d;
    Affine transform;
};

inline std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '&') {
            const std::string_view rest = s.substr(i);
            auto starts = [&](std::string_view e) { return rest.rfind(e, 0) == 0; };
            if (starts("&quot;")) { out += '"'; i += 6; continue; }
            if (starts("&apos;")) { out += '\''; i += 6; continue; }
            if (starts("&amp;"))  { out += '&'; i += 5; continue; }
            if (starts("&lt;"))   { out += '<'; i += 4; continue; }
            if (starts("&gt;"))   { out += '>'; i += 4; continue; }
        }
        out += s[i++];
    }
    return out;
}

struct Tag {
    std::string name;
    bool closing = false;      // </name>
    bool self_closing = false; // <name ... />
    std::vector<std::pair<std::string, std::string>> attrs;

    std::optional<std::string> attr(const std::string& key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return v;
        return std::nullopt;
    }
};

// Minimal forgiving scanner for the SVG subset we read: elements, attributes,
// comments, prolog/doctype/CDATA. Content text is ignored.
class TagScanner {
public:
    explicit TagScanner(std::string_view doc) : doc_(doc) {}

    std::optional<Tag> next() {
        while (true) {
            const std::size_t lt = doc_.find('<', pos_);
            if (lt == std::string_view::npos) return std::nullopt;
            pos_ = lt;
            if (match("<!--")) {
                skip_until("-->");
                continue;
            }
            if (match("<![CDATA[")) {
                skip_until("]]>");
                continue;
            }
            if (match("<?")) {
                skip_until("?>");
                continue;
            }
            if (match("<!")) {  // DOCTYPE, possibly with internal subset
                int brackets = 0;
                while (pos_ < doc_.size()) {
                    const char c = doc_[pos_++];
                    if (c == '[') ++brackets;
                    else if (c == ']') --brackets;
                    else if (c == '>' && brackets <= 0) break;
                }
                continue;
            }
            return parse_element();
        }
    }

private:
    bool match(std::string_view prefix) {
        if (doc_.substr(pos_, prefix.size()) == prefix) {
            pos_ += prefix.size();
            return true;
        }
        return false;
    }

    void skip_until(std::string_view end) {
        const std::size_t p = doc_.find(end, pos_);
        pos_ = p == std::string_view::npos ? doc_.size() : p + end.size();
    }

    Tag parse_element() {
        Tag tag;
        ++pos_;  // '<'
        if (pos_ < doc_.size() && doc_[pos_] == '/') {
            tag.closing = true;
            ++pos_;
        }
        while (pos_ < doc_.size() && !std::isspace(static_cast<unsigned char>(doc_[pos_])) &&
               doc_[pos_] != '>' && doc_[pos_] != '/')
            tag.name += doc_[pos_++];
        while (pos_ < doc_.size() && doc_[pos_] != '>') {
            if (doc_[pos_] == '/' && pos_ + 1 < doc_.size() && doc_[pos_ + 1] == '>') {
                tag.self_closing = true;
                pos_ += 1;
                break;
            }
            if (std::isspace(static_cast<unsigned char>(doc_[pos_]))) {
                ++pos_;
                continue;
            }
            std::string key;
            while (pos_ < doc_.size() && doc_[pos_] != '=' && doc_[pos_] != '>' &&
                   !std::isspace(static_cast<unsigned char>(doc_[pos_])))
                key += doc_[pos_++];
            while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) ++pos_;
            if (pos_ >= doc_.size() || doc_[pos_] != '=') continue;  // bare attribute
            ++pos_;
            while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) ++pos_;
            if (pos_ >= doc_.size()) break;
            const char quote = doc_[pos_];
            if (quote != '"' && quote != '\'') continue;
            ++pos_;
            const std::size_t end = doc_.find(quote, pos_);
            if (end == std::string_view::npos) break;
            tag.attrs.emplace_back(key, decode_entities(doc_.substr(pos_, end - pos_)));
            pos_ = end + 1;
        }
        if (pos_ < doc_.size()) ++pos_;  // '>'
        return tag;
    }

    std::string_view doc_;
    std::size_t pos_ = 0;
};

inline void skip_ws(const char*& p) {
    while (*p && (std::isspace(static_cast<unsigned char>(*p)) || *p == ',')) ++p;
}

inline double read_number(const char*& p, const char* what) {
    skip_ws(p);
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p) throw Error(Errc::MalformedPath, std::string("expected number in ") + what);
    p = end;
    return v;
}

// SVG transform list: matrix/translate/scale/rotate, left to right.
inline Affine parse_transform(const std::string& text) {
    Affine total;
    const char* p = text.c_str();
    while (true) {
        skip_ws(p);
        if (!*p) break;
        std::string fn;
        while (*p && (std::isalpha(static_cast<unsigned char>(*p)))) fn += *p++;
        skip_ws(p);
        if (*p != '(') throw Error(Errc::MalformedPath, "bad transform syntax: " + text);
        ++p;
        std::vector<double> args;
        while (true) {
            skip_ws(p);
            if (*p == ')') {
                ++p;
                break;
            }
            if (!*p) throw Error(Errc::MalformedPath, "unterminated transform: " + text);
            args.push_back(read_number(p, "transform"));
        }
        Affine t;
        if (fn == "matrix" && args.size() == 6) {
            t = {args[0], args[1], args[2], args[3], args[4], args[5]};
        } else if (fn == "translate" && (args.size() == 1 || args.size() == 2)) {
            t = Affine::translate(args[0], args.size() == 2 ? args[1] : 0.0);
        } else if (fn == "scale" && (args.size() == 1 || args.size() == 2)) {
            t = Affine::scale(args[0], args.size() == 2 ? args[1] : args[0]);
        } else if (fn == "rotate" && (args.size() == 1 || args.size() == 3)) {
            const double rad = args[0] * 3.14159265358979323846 / 180.0;
            if (args.size() == 3)
                t = Affine::translate(args[1], args[2])
                        .compose(Affine::rotate(rad))
                        .compose(Affine::translate(-args[1], -args[2]));
            else
                t = Affine::rotate(rad);
        } else {
            throw Error(Errc::MalformedPath, "unsupported transform '" + fn + "' in: " + text);
        }
        total = total.compose(t);
    }
    return total;
}

// All path elements with ancestor transforms composed in.
inline std::vector<RawPath> collect_paths(std::string_view xml) {
    TagScanner scanner(xml);
    std::vector<Affine> stack{Affine::identity()};
    std::vector<RawPath> paths;
    while (auto tag = scanner.next()) {
        if (tag->closing) {
            if ((tag->name == "g" || tag->name == "svg") && stack.size() > 1) stack.pop_back();
            continue;
        }
        Affine local = stack.back();
        if (auto tr = tag->attr("transform")) local = local.compose(parse_transform(*tr));
        if (tag->name == "path") {
            RawPath rp;
            rp.id = tag->attr("id").value_or("");
            rp.d = tag->attr("d").value_or("");
            rp.transform = local;
            paths.push_back(std::move(rp));
        } else if ((tag->name == "g" || tag->name == "svg") && !tag->self_closing) {
            stack.push_back(local);
        }
    }
    return paths;
}

// Parse path data into the raw control sequence of a single closed subpath.
inline std::vector<Point2> parse_path_data(const std::string& d) {
    std::vector<Point2> pts;
    const char* p = d.c_str();
    Point2 cur{0, 0};
    Point2 start{0, 0};
    bool started = false;
    bool closed = false;
    char cmd = 0;

    auto read_point = [&](bool relative) {
        const double x = read_number(p, "path data");
        const double y = read_number(p, "path data");
        return relative ? cur + Point2{x, y} : Point2{x, y};
    };
    auto lift_line = [&](Point2 to) {  // straight move as a degenerate cubic
        pts.push_back(cur + (to - cur) / 3.0);
        pts.push_back(cur + (to - cur) * (2.0 / 3.0));
        pts.push_back(to);
        cur = to;
    };

    while (true) {
        skip_ws(p);
        if (!*p) break;
        if (std::isalpha(static_cast<unsigned char>(*p))) cmd = *p++;
        if (closed || (started && (cmd == 'M' || cmd == 'm')))
            throw Error(Errc::MalformedPath, "path contains more than one subpath");
        switch (cmd) {
            case 'M':
            case 'm': {
                cur = start = read_point(cmd == 'm' && started);
                pts.push_back(cur);
                started = true;
                cmd = cmd == 'm' ? 'l' : 'L';  // further pairs are implicit linetos
                break;
            }
            case 'L':
            case 'l':
                if (!started) throw Error(Errc::MalformedPath, "path data does not begin with M");
                lift_line(read_point(cmd == 'l'));
                break;
            case 'C':
            case 'c': {
                if (!started) throw Error(Errc::MalformedPath, "path data does not begin with M");
                const bool rel = cmd == 'c';
                const Point2 c1 = read_point(rel);
                const Point2 c2 = read_point(rel);
                const Point2 end = read_point(rel);
                pts.push_back(c1);
                pts.push_back(c2);
                pts.push_back(end);
                cur = end;
                break;
            }
            case 'Z':
            case 'z':
                closed = true;
                break;
            case 'H':
            case 'h':
            case 'V':
            case 'v':
            case 'S':
            case 's':
            case 'Q':
            case 'q':
            case 'T':
            case 't':
            case 'A':
            case 'a':
                throw Error(Errc::UnsupportedCommand,
                            std::string("path command '") + cmd + "' is not supported");
            default:
                throw Error(Errc::MalformedPath, std::string("unknown path command '") + cmd + "'");
        }
    }
    if (!started || pts.size() < 4)
        throw Error(Errc::MalformedPath, "path data holds no curve");

    const double diag = detail::points_bounds(pts).diagonal();
    if (dist(cur, start) <= kClosureTol * diag) {
        pts.back() = start;  // snap exact closure
    } else if (closed) {
        lift_line(start);  // Z draws the closing line
    } else {
        throw Error(Errc::OpenPath, "path endpoints are distant and there is no Z");
    }
    return pts;
}

}  // namespace svgdetail

// Reads the first (or id-selected) path element of an SVG file as a closed
// cubic loop. Relative commands are resolved, transforms applied, straight
// lines lifted to degenerate cubics.
inline InkscapePath parse_svg(std::string_view xml, const SvgReadOptions& opts = {}) {
    auto paths = svgdetail::collect_paths(xml);
    const svgdetail::RawPath* chosen = nullptr;
    for (const auto& rp : paths) {
        if (opts.element_id.empty() || rp.id == opts.element_id) {
            chosen = &rp;
            break;
        }
    }
    if (!chosen)
        throw Error(Errc::NoPathFound, opts.element_id.empty()
                                           ? "document has no path element"
                                           : "no path with id '" + opts.element_id + "'");
    InkscapePath path;
    path.points = svgdetail::parse_path_data(chosen->d);
    for (Point2& p : path.points) p = chosen->transform.apply(p);
    validate(path);
    return path;
}

inline InkscapePath read_svg(const std::string& file, const SvgReadOptions& opts = {}) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_svg(ss.str(), opts);
}

namespace svgdetail {

// 6 significant digits, negative zero normalized, deterministic.
inline std::string fmt(double v) {
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void append_style(std::string& out, const Style& st) {
    out += " fill=\"" + st.fill + "\"";
    if (st.fill != "none" && st.fill_opacity != 1.0)
        out += " fill-opacity=\"" + fmt(st.fill_opacity) + "\"";
    if (st.stroke != "none") {
        out += " stroke=\"" + st.stroke + "\" stroke-width=\"" + fmt(st.stroke_width) + "\"";
        if (st.linecap != "butt") out += " stroke-linecap=\"" + st.linecap + "\"";
    } else {
        out += " stroke=\"none\"";
    }
}

inline std::string path_data(const DocPath& p) {
    std::string d;
    for (std::size_t i = 0; i < p.segs.size(); ++i) {
        const CubicSegment& s = p.segs[i];
        if (i == 0 || !(p.segs[i - 1].p3 == s.p0))
            d += "M " + fmt(s.p0.x) + " " + fmt(s.p0.y) + " ";
        d += "C " + fmt(s.p1.x) + " " + fmt(s.p1.y) + " " + fmt(s.p2.x) + " " + fmt(s.p2.y) +
             " " + fmt(s.p3.x) + " " + fmt(s.p3.y) + " ";
    }
    if (p.closed) d += "Z";
    else if (!d.empty() && d.back() == ' ') d.pop_back();
    return d;
}

}  // namespace svgdetail

// Serializes a RenderDoc as a standalone SVG 1.1 document. Output bytes are a
// pure function of the document contents.
inline std::string svg_text(const RenderDoc& doc) {
    using svgdetail::fmt;
    // view box over everything drawn
    bool any = false;
    Box bb{{0, 0}, {0, 0}};
    auto grow = [&](Point2 p, double pad) {
        if (!any) {
            bb = {{p.x - pad, p.y - pad}, {p.x + pad, p.y + pad}};
            any = true;
            return;
        }
        bb.lo.x = std::min(bb.lo.x, p.x - pad);
        bb.lo.y = std::min(bb.lo.y, p.y - pad);
        bb.hi.x = std::max(bb.hi.x, p.x + pad);
        bb.hi.y = std::max(bb.hi.y, p.y + pad);
    };
    for (const DocPath& p : doc.paths)
        for (const CubicSegment& s : p.segs) {
            const Box b = bounds(s);
            grow(b.lo, p.style.stroke_width);
            grow(b.hi, p.style.stroke_width);
        }
    for (const DocCircle& c : doc.circles) grow(c.center, c.r + c.style.stroke_width);
    for (const DocSquare& s : doc.squares) grow(s.center, s.half + s.style.stroke_width);
    for (const DocLabel& l : doc.labels) grow(l.pos, l.font_size);
    if (!any) bb = {{0, 0}, {100, 100}};
    const double margin = 0.04 * bb.diagonal() + 1.0;
    const double x0 = bb.lo.x - margin, y0 = bb.lo.y - margin;
    const double w = bb.hi.x - bb.lo.x + 2 * margin, h = bb.hi.y - bb.lo.y + 2 * margin;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + fmt(x0) +
           " " + fmt(y0) + " " + fmt(w) + " " + fmt(h) + "\">\n";
    if (!doc.background.empty())
        out += "  <rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(w) +
               "\" height=\"" + fmt(h) + "\" fill=\"" + doc.background + "\" stroke=\"none\"/>\n";
    for (const DocPath& p : doc.paths) {
        out += "  <path d=\"" + svgdetail::path_data(p) + "\"";
        svgdetail::append_style(out, p.style);
        out += "/>\n";
    }
    for (const DocSquare& s : doc.squares) {
        out += "  <rect x=\"" + fmt(s.center.x - s.half) + "\" y=\"" + fmt(s.center.y - s.half) +
               "\" width=\"" + fmt(2 * s.half) + "\" height=\"" + fmt(2 * s.half) + "\"";
        svgdetail::append_style(out, s.style);
        out += "/>\n";
    }
    for (const DocCircle& c : doc.circles) {
        out += "  <circle cx=\"" + fmt(c.center.x) + "\" cy=\"" + fmt(c.center.y) + "\" r=\"" +
               fmt(c.r) + "\"";
        svgdetail::append_style(out, c.style);
        out += "/>\n";
    }
    for (const DocLabel& l : doc.labels) {
        out += "  <text x=\"" + fmt(l.pos.x) + "\" y=\"" + fmt(l.pos.y) + "\" font-size=\"" +
               fmt(l.font_size) +
               "\" font-family=\"sans-serif\" text-anchor=\"middle\" fill=\"" + l.fill + "\">" +
               l.text + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

inline void write_svg(const RenderDoc& doc, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(Errc::IoFailure, "cannot write " + file);
    out << svg_text(doc);
    if (!out) throw Error(Errc::IoFailure, "write failed for " + file);
}

}  // namespace knotfair

#endif  // KNOTFAIR_SVG_HPP
