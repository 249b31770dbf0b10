#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "funnel/omega_eta.hpp"
#include "funnel/piecewise.hpp"

namespace funnel {

/// Upper concave envelope psi of a computed omega_eta. Past the last node psi
/// is continued as a constant, so its right derivative there is 0.
struct EnvelopeResult {
  PiecewiseAffine psi;
  std::shared_ptr<const OmegaEtaResult> source;

  double t_max() const noexcept { return psi.back(); }
  double value(double x) const;
  /// Right derivative psi'_+(x) for x >= 0.
  double slope_at(double x) const;
};

EnvelopeResult build_envelope(std::shared_ptr<const OmegaEtaResult> source);

/// Slope of the piece to the right of x; Range error at or past the last breakpoint.
double right_derivative(const PiecewiseAffine& psi, double x);

struct EnvelopeSandwichReport {
  double max_below = 0.0;  // max of omega_eta - psi at nodes
  double max_above = 0.0;  // max of psi - 2 omega_eta at nodes
  bool concave = true;
  bool monotone = true;
  bool passed(double tol) const noexcept {
    return max_below <= tol && max_above <= tol && concave && monotone;
  }
};

EnvelopeSandwichReport check_envelope_sandwich(const EnvelopeResult& env);

struct InequalityReport {
  std::size_t samples = 0;
  std::size_t skipped = 0;
  double max_violation = -1e300;  // max of lhs - rhs - tau
  std::size_t violations = 0;
  bool passed() const noexcept { return violations == 0 && samples > 0; }
};

/// psi(t + eta(t)) <= psi(t) + 2 w(eta(t)) for sampled t with eta(t) <= t and
/// t + eta(t) <= t_max; other t are counted as skipped.
InequalityReport check_envelope_growth(const PiecewiseAffine& psi, const OmegaEtaResult& src,
                                       std::span<const double> ts);

/// psi(x + h) - psi(x) <= 4 max(1, h / eta(x + h)) w(h) for x + h <= t_max.
InequalityReport check_psi_uniform_bound(const PiecewiseAffine& psi, const OmegaEtaResult& src,
                                         const std::vector<std::pair<double, double>>& pairs);

}  // namespace funnel
