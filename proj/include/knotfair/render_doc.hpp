#ifndef KNOTFAIR_RENDER_DOC_HPP
#define KNOTFAIR_RENDER_DOC_HPP

#include <string>
#include <vector>

#include "knotfair/base.hpp"
#include "knotfair/bezier.hpp"

namespace knotfair {

struct Style {
    std::string stroke = "#000000";
    double stroke_width = 4.0;
    std::string fill = "none";
    double fill_opacity = 1.0;
    std::string linecap = "round";
};

// One stroked run of cubic pieces; consecutive pieces share endpoints.
struct DocPath {
    std::vector<CubicSegment> segs;
    bool closed = false;
    Style style;
};

struct DocCircle {
    Point2 center;
    double r = 1.0;
    Style style;
};

// Axis-aligned square marker (node glyph).
struct DocSquare {
    Point2 center;
    double half = 2.0;
    Style style;
};

struct DocLabel {
    Point2 pos;
    std::string text;
    double font_size = 14.0;
    std::string fill = "#000000";
};

// Display list consumed by write_svg. Order within each list is draw order.
struct RenderDoc {
    std::vector<DocPath> paths;
    std::vector<DocCircle> circles;
    std::vector<DocSquare> squares;
    std::vector<DocLabel> labels;
    std::string background = "#ffffff";  // empty: no background rect
};

}  // namespace knotfair

#endif  // KNOTFAIR_RENDER_DOC_HPP
