#pragma once

#include <span>
#include <vector>

#include "funnel/piecewise.hpp"

namespace funnel {

struct Point2 {
  double x;
  double y;
};

/// Upper convex hull of points sorted by strictly increasing x (monotone chain).
/// Collinear points are dropped, so consecutive hull slopes strictly decrease.
std::vector<Point2> upper_hull(std::span<const Point2> sorted);

/// Least concave majorant of f on [0, f.back_x()], as the hull of the node set.
PiecewiseAffine upper_concave_envelope(const GridFunction& f);

}  // namespace funnel
