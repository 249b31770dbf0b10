#include "funnel/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "funnel/error.hpp"

namespace funnel {

namespace {

void require_strictly_increasing(const std::vector<double>& xs, const char* what) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      fail(ErrorKind::Domain, std::string(what) + " must be strictly increasing (index " +
                                  std::to_string(i) + ")");
    }
  }
}

}  // namespace

GridFunction::GridFunction(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || xs_.size() != ys_.size()) {
    fail(ErrorKind::Domain, "grid function needs equally sized, non-empty xs and ys");
  }
  if (xs_.front() != 0.0) fail(ErrorKind::Domain, "grid function must start at 0");
  if (ys_.front() != 0.0) fail(ErrorKind::Domain, "grid function must vanish at 0");
  require_strictly_increasing(xs_, "grid abscissae");
  for (double y : ys_) {
    if (!(y >= 0.0) || !std::isfinite(y)) {
      fail(ErrorKind::Domain, "grid function values must be finite and non-negative");
    }
  }
}

std::size_t GridFunction::floor_index(double t) const {
  if (t <= xs_.front()) return 0;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
  return static_cast<std::size_t>(it - xs_.begin()) - 1;
}

double GridFunction::operator()(double t) const {
  if (t < 0.0) fail(ErrorKind::Domain, "grid function evaluated at negative argument");
  if (t > xs_.back()) {
    fail(ErrorKind::Range, "grid function evaluated past its last node (" + std::to_string(t) +
                               " > " + std::to_string(xs_.back()) + ")");
  }
  const std::size_t i = floor_index(t);
  if (i + 1 == xs_.size() || t == xs_[i]) return ys_[i];
  const double w = (t - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return ys_[i] + w * (ys_[i + 1] - ys_[i]);
}

PiecewiseAffine::PiecewiseAffine(std::vector<double> breakpoints, std::vector<double> values)
    : bp_(std::move(breakpoints)), vals_(std::move(values)) {
  if (bp_.size() < 2 || bp_.size() != vals_.size()) {
    fail(ErrorKind::Domain, "piecewise-affine function needs at least two breakpoints");
  }
  require_strictly_increasing(bp_, "breakpoints");
  slopes_.resize(bp_.size() - 1);
  cumulative_.assign(bp_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < bp_.size(); ++i) {
    const double dx = bp_[i + 1] - bp_[i];
    slopes_[i] = (vals_[i + 1] - vals_[i]) / dx;
    cumulative_[i + 1] = cumulative_[i] + 0.5 * (vals_[i] + vals_[i + 1]) * dx;
  }
}

std::size_t PiecewiseAffine::segment_of(double x) const {
  auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
  std::size_t i = it == bp_.begin() ? 0 : static_cast<std::size_t>(it - bp_.begin()) - 1;
  return std::min(i, bp_.size() - 2);
}

double PiecewiseAffine::operator()(double x) const {
  if (x < bp_.front() || x > bp_.back()) {
    fail(ErrorKind::Range, "piecewise-affine function evaluated outside [" +
                               std::to_string(bp_.front()) + ", " + std::to_string(bp_.back()) +
                               "] at " + std::to_string(x));
  }
  const std::size_t i = segment_of(x);
  if (x == bp_[i]) return vals_[i];
  if (x == bp_[i + 1]) return vals_[i + 1];
  return vals_[i] + slopes_[i] * (x - bp_[i]);
}

double PiecewiseAffine::right_slope(double x) const {
  if (x < bp_.front() || x >= bp_.back()) {
    fail(ErrorKind::Range, "right slope requested outside [first, last) at " + std::to_string(x));
  }
  return slopes_[segment_of(x)];
}

double PiecewiseAffine::left_slope(double x) const {
  if (x <= bp_.front() || x > bp_.back()) {
    fail(ErrorKind::Range, "left slope requested outside (first, last] at " + std::to_string(x));
  }
  auto it = std::lower_bound(bp_.begin(), bp_.end(), x);
  return slopes_[static_cast<std::size_t>(it - bp_.begin()) - 1];
}

double PiecewiseAffine::integral_from_front(double x) const {
  const std::size_t i = segment_of(x);
  const double fx = (*this)(x);
  return cumulative_[i] + 0.5 * (vals_[i] + fx) * (x - bp_[i]);
}

double PiecewiseAffine::integral(double lo, double hi) const {
  if (lo > hi) fail(ErrorKind::Domain, "integral bounds out of order");
  if (lo < bp_.front() || hi > bp_.back()) {
    fail(ErrorKind::Range, "integral bounds outside the breakpoint span");
  }
  const std::size_t i = segment_of(lo);
  const std::size_t j = segment_of(hi);
  if (i == j) {
    return 0.5 * ((*this)(lo) + (*this)(hi)) * (hi - lo);
  }
  return integral_from_front(hi) - integral_from_front(lo);
}

bool PiecewiseAffine::is_concave(double tol) const {
  for (std::size_t i = 1; i < slopes_.size(); ++i) {
    if (slopes_[i] > slopes_[i - 1] + tol) return false;
  }
  return true;
}

PiecewiseAffine PiecewiseAffine::scaled(double factor) const {
  std::vector<double> v(vals_);
  for (double& y : v) y *= factor;
  return PiecewiseAffine(bp_, std::move(v));
}

}  // namespace funnel
