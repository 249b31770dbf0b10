#include "funnel/hull.hpp"

#include "funnel/error.hpp"

namespace funnel {

namespace {

// > 0 when o -> a -> b turns left.
double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<Point2> upper_hull(std::span<const Point2> pts) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].x > pts[i - 1].x)) fail(ErrorKind::Domain, "hull input must be sorted by x");
  }
  std::vector<Point2> h;
  h.reserve(pts.size());
  for (const Point2& p : pts) {
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p) >= 0.0) h.pop_back();
    h.push_back(p);
  }
  // The cross test can accept a vertex whose computed slopes are equal or out
  // of order after rounding; drop those so slopes are exactly decreasing.
  bool changed = true;
  while (changed && h.size() >= 3) {
    changed = false;
    std::vector<Point2> out;
    out.reserve(h.size());
    out.push_back(h[0]);
    for (std::size_t i = 1; i + 1 < h.size(); ++i) {
      const Point2& a = out.back();
      const double s1 = (h[i].y - a.y) / (h[i].x - a.x);
      const double s2 = (h[i + 1].y - h[i].y) / (h[i + 1].x - h[i].x);
      if (s2 < s1) {
        out.push_back(h[i]);
      } else {
        changed = true;
      }
    }
    out.push_back(h.back());
    h.swap(out);
  }
  return h;
}

PiecewiseAffine upper_concave_envelope(const GridFunction& f) {
  std::vector<Point2> pts(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) pts[i] = {f.x(i), f.y(i)};
  if (pts.size() == 1) fail(ErrorKind::Domain, "envelope needs at least two nodes");
  const std::vector<Point2> h = upper_hull(pts);
  std::vector<double> bx(h.size()), by(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    bx[i] = h[i].x;
    by[i] = h[i].y;
  }
  return PiecewiseAffine(std::move(bx), std::move(by));
}

}  // namespace funnel
