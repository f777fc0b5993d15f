#ifndef KNOTFAIR_KNOTFAIR_HPP
#define KNOTFAIR_KNOTFAIR_HPP

#include "knotfair/badness.hpp"
#include "knotfair/base.hpp"
#include "knotfair/bezier.hpp"
#include "knotfair/config.hpp"
#include "knotfair/intersect.hpp"
#include "knotfair/knot.hpp"
#include "knotfair/optimize.hpp"
#include "knotfair/render.hpp"
#include "knotfair/render_doc.hpp"
#include "knotfair/svg.hpp"
#include "knotfair/symmetry.hpp"

#endif  // KNOTFAIR_KNOTFAIR_HPP
