#include "funnel/width.hpp"

#include <cmath>
#include <string>

#include "funnel/error.hpp"

namespace funnel {

Width Width::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::Config, "constant width must be positive");
  Width w;
  w.kind_ = Kind::Constant;
  w.a_ = c;
  return w;
}

Width Width::power_shift(double beta, double s) {
  if (!(beta > 0.0 && beta < 1.0)) fail(ErrorKind::Config, "power-shift width needs beta in (0, 1)");
  if (!(s > 0.0)) fail(ErrorKind::Config, "power-shift width needs s > 0");
  Width w;
  w.kind_ = Kind::PowerShift;
  w.a_ = beta;
  w.b_ = s;
  return w;
}

Width Width::affine(double slope, double intercept) {
  if (!(slope >= 0.0)) fail(ErrorKind::Config, "affine width needs a non-negative slope");
  if (!(intercept > 0.0)) fail(ErrorKind::Config, "affine width needs a positive intercept");
  Width w;
  w.kind_ = Kind::Affine;
  w.a_ = slope;
  w.b_ = intercept;
  return w;
}

Width Width::piecewise(PiecewiseAffine f) {
  if (f.front() != 0.0) fail(ErrorKind::Config, "piecewise width must start at 0");
  if (!(f.values()[0] > 0.0)) fail(ErrorKind::Config, "piecewise width must be positive at 0");
  if (!f.is_concave()) fail(ErrorKind::Config, "piecewise width must be concave");
  if (f.slopes().back() < 0.0) {
    fail(ErrorKind::Config, "piecewise width must be non-decreasing (last slope " +
                                std::to_string(f.slopes().back()) + ")");
  }
  Width w;
  w.kind_ = Kind::Piecewise;
  w.pw_ = std::move(f);
  return w;
}

double Width::operator()(double x) const {
  if (x < 0.0 || std::isnan(x)) fail(ErrorKind::Domain, "width evaluated at negative argument");
  switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::PowerShift: return std::pow(b_ + x, a_);
    case Kind::Affine: return a_ * x + b_;
    case Kind::Piecewise: {
      const PiecewiseAffine& f = *pw_;
      if (x <= f.back()) return f(x);
      return f.values().back() + f.slopes().back() * (x - f.back());
    }
  }
  return 0.0;
}

}  // namespace funnel
