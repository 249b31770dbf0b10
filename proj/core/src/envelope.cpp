#include "funnel/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "funnel/error.hpp"
#include "funnel/hull.hpp"

namespace funnel {

double EnvelopeResult::value(double x) const {
  if (x < 0.0) fail(ErrorKind::Domain, "envelope evaluated at negative argument");
  if (x >= psi.back()) return psi.values().back();
  return psi(x);
}

double EnvelopeResult::slope_at(double x) const {
  if (x < 0.0) fail(ErrorKind::Domain, "envelope slope at negative argument");
  if (x >= psi.back()) return 0.0;
  return psi.right_slope(x);
}

EnvelopeResult build_envelope(std::shared_ptr<const OmegaEtaResult> source) {
  if (!source) fail(ErrorKind::Domain, "envelope needs a source result");
  PiecewiseAffine psi = upper_concave_envelope(source->values);
  return EnvelopeResult{std::move(psi), std::move(source)};
}

double right_derivative(const PiecewiseAffine& psi, double x) { return psi.right_slope(x); }

EnvelopeSandwichReport check_envelope_sandwich(const EnvelopeResult& env) {
  EnvelopeSandwichReport rep;
  const GridFunction& v = env.source->values;
  rep.max_below = -1e300;
  rep.max_above = -1e300;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = env.psi(v.x(i));
    rep.max_below = std::max(rep.max_below, v.y(i) - p);
    rep.max_above = std::max(rep.max_above, p - 2.0 * v.y(i));
  }
  rep.concave = env.psi.is_concave();
  for (double s : env.psi.slopes()) {
    if (s < 0.0) rep.monotone = false;
  }
  if (env.psi.values()[0] != 0.0) rep.monotone = false;
  return rep;
}

InequalityReport check_envelope_growth(const PiecewiseAffine& psi, const OmegaEtaResult& src,
                                       std::span<const double> ts) {
  InequalityReport rep;
  for (double t : ts) {
    if (!(t > 0.0)) {
      ++rep.skipped;
      continue;
    }
    const double e = src.eta(t);
    if (e > t || t + e > psi.back()) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    const double v = psi(t + e) - psi(t) - 2.0 * src.omega(e) - tau_grid(src, t + e);
    rep.max_violation = std::max(rep.max_violation, v);
    if (v > 0.0) ++rep.violations;
  }
  return rep;
}

InequalityReport check_psi_uniform_bound(const PiecewiseAffine& psi, const OmegaEtaResult& src,
                                         const std::vector<std::pair<double, double>>& pairs) {
  InequalityReport rep;
  for (const auto& [x, h] : pairs) {
    if (!(x > 0.0 && h > 0.0) || x + h > psi.back()) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    const double rhs = 4.0 * std::max(1.0, h / src.eta(x + h)) * src.omega(h);
    const double v = psi(x + h) - psi(x) - rhs - tau_grid(src, x + h);
    rep.max_violation = std::max(rep.max_violation, v);
    if (v > 0.0) ++rep.violations;
  }
  return rep;
}

}  // namespace funnel
