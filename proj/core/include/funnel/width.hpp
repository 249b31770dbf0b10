#pragma once

#include <optional>

#include "funnel/piecewise.hpp"

namespace funnel {

/// Positive concave width function eta on [0, inf); the funnel is
/// {(x, y) : x > 0, |y| < eta(x)}.
class Width {
 public:
  enum class Kind { Constant, PowerShift, Affine, Piecewise };

  static Width constant(double c);
  /// eta(x) = (s + x)^beta.
  static Width power_shift(double beta, double s);
  static Width affine(double slope, double intercept);
  /// Breakpoints must start at 0; extended past the last breakpoint with the
  /// last slope. Slopes must be non-increasing and non-negative.
  static Width piecewise(PiecewiseAffine f);

  double operator()(double x) const;

  Kind kind() const noexcept { return kind_; }
  double c() const noexcept { return a_; }
  double beta() const noexcept { return a_; }
  double s() const noexcept { return b_; }
  double slope() const noexcept { return a_; }
  double intercept() const noexcept { return b_; }
  const PiecewiseAffine* pieces() const noexcept { return pw_ ? &*pw_ : nullptr; }

 private:
  Width() = default;

  Kind kind_ = Kind::Constant;
  double a_ = 1.0;
  double b_ = 0.0;
  std::optional<PiecewiseAffine> pw_;
};

}  // namespace funnel
