#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace funnel {

/// Sampled non-negative function on [0, xs.back()] with linear interpolation
/// between nodes. xs starts at 0, is strictly increasing, and ys[0] == 0.
class GridFunction {
 public:
  GridFunction(std::vector<double> xs, std::vector<double> ys);

  /// Throws Domain for t < 0 and Range for t past the last node.
  double operator()(double t) const;

  std::size_t size() const noexcept { return xs_.size(); }
  double x(std::size_t i) const { return xs_[i]; }
  double y(std::size_t i) const { return ys_[i]; }
  double back_x() const noexcept { return xs_.back(); }
  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> ys() const noexcept { return ys_; }

  /// Index of the largest node <= t (t clamped into the domain).
  std::size_t floor_index(double t) const;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Continuous piecewise-affine function on [breakpoints.front(), breakpoints.back()].
class PiecewiseAffine {
 public:
  PiecewiseAffine(std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double x) const;

  /// Slope of the piece to the right of x; x must lie in [first, last).
  double right_slope(double x) const;
  /// Slope of the piece to the left of x; x must lie in (first, last].
  double left_slope(double x) const;

  /// Exact integral over [lo, hi] (lo <= hi, both inside the domain).
  double integral(double lo, double hi) const;

  bool is_concave(double tol = 0.0) const;
  PiecewiseAffine scaled(double factor) const;

  double front() const noexcept { return bp_.front(); }
  double back() const noexcept { return bp_.back(); }
  std::size_t size() const noexcept { return bp_.size(); }
  std::span<const double> breakpoints() const noexcept { return bp_; }
  std::span<const double> values() const noexcept { return vals_; }
  /// slopes()[i] is the slope on [breakpoints[i], breakpoints[i+1]].
  std::span<const double> slopes() const noexcept { return slopes_; }

 private:
  std::size_t segment_of(double x) const;
  double integral_from_front(double x) const;

  std::vector<double> bp_;
  std::vector<double> vals_;
  std::vector<double> slopes_;
  std::vector<double> cumulative_;  // integral from front() to bp_[i]
};

}  // namespace funnel
