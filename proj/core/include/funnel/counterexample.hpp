#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "funnel/envelope.hpp"
#include "funnel/sampling.hpp"

namespace funnel {

struct ConstructionOptions {
  double a_min = 1.0;
  /// Threshold for psi'_+(4a); defaults to 1e-12 times the largest slope of psi.
  std::optional<double> eps_pos;
};

/// f(x, y) = g(x) y on the funnel, with g(x) = (1/b) * integral of delta over [a, a + x].
struct CounterexampleBundle {
  EnvelopeResult envelope;
  double a = 0.0;
  double q = 0.0;
  double b = 0.0;
  PiecewiseAffine delta;  // on [a, t_max]
  double x_max = 0.0;     // g is defined on (0, x_max] with x_max = t_max - a

  const OmegaEtaResult& omega_eta() const { return *envelope.source; }
  const Modulus& omega() const { return envelope.source->omega; }
  const Width& eta() const { return envelope.source->eta; }

  double g(double x) const;
  double g_prime(double x) const;
  /// Throws Domain outside {0 < x <= x_max, |y| < eta(x)}.
  double f(double x, double y) const;
  std::pair<double, double> grad_f(double x, double y) const;
  ScalarField as_field() const;
};

/// Throws FlatEnvelope when no node a >= a_min has psi'_+(4a) >= eps_pos.
CounterexampleBundle build_counterexample(const EnvelopeResult& env,
                                          const ConstructionOptions& opt = {});

struct VerificationReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  double max_violation = 0.0;       // largest (lhs - rhs) over samples
  double empirical_constant = 0.0;  // for constant-finding checks
  std::size_t violations = 0;
  /// C(2N) / C(N) for checks repeated at doubled sample size.
  double stability_ratio = 0.0;
  bool passed = false;
};

/// The three g-inequalities with constants 8/b, 8q/b and 1/5, each with
/// slack tau_grid / b. Pairs with x + h > x_max are skipped.
std::vector<VerificationReport> verify_g_conditions(
    const CounterexampleBundle& B, const std::vector<std::pair<double, double>>& pairs);

struct SemiconvexityOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double C = 1.0;
  double rel_tol = 1e-9;
  /// Fraction of q drawn near p rather than independently.
  double local_fraction = 0.5;
  /// If non-empty, lambda cycles through these values instead of being uniform.
  std::vector<double> lambdas;
};

/// Two reports, semiconvexity then semiconcavity, for
/// +-[f(l p + (1-l) q) - l f(p) - (1-l) f(q)] <= C l (1-l) |p-q| w(|p-q|).
/// empirical_constant is the smallest C that would pass on the samples.
std::vector<VerificationReport> verify_semiconvexity(const ScalarField& f, const Modulus& w,
                                                     const ConvexRegion& region,
                                                     const SemiconvexityOptions& opt);

struct TaylorOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double local_fraction = 0.5;
  /// Pass requires C(2N) / C(N) below this.
  double stability_ratio = 1.5;
};

/// empirical C3 = max |f(p+h) - f(p) - grad f(p) h| / (|h| w(|h|)); the run is
/// repeated with twice the samples to fill stability_ratio.
VerificationReport verify_taylor_bound(const ScalarField& f, const Modulus& w,
                                       const ConvexRegion& region, const TaylorOptions& opt);

struct LineOptions {
  std::size_t lines = 1000;
  std::size_t pairs_per_line = 100;
  std::uint64_t seed = 1;
  /// Optional fixed direction; random unit directions otherwise.
  std::optional<Vec> direction;
};

/// empirical C2 = max |grad f(a+t'v).v - grad f(a+tv).v| / w(t' - t).
VerificationReport verify_line_modulus(const ScalarField& f, const Modulus& w,
                                       const ConvexRegion& region, const LineOptions& opt);

struct WitnessRow {
  double x;
  double W;      // |g(x) - g(1)| / w(x - 1)
  double lower;  // (omega_eta(x) - psi(2(a+1)) - tau) / (2 b w(x))
};

struct DivergenceReport {
  std::vector<WitnessRow> rows;
  std::size_t skipped = 0;
  std::size_t lower_bound_failures = 0;
  double growth = 0.0;  // W(x_hi) / W(x_ref)
  double x_ref = 0.0;
  double x_hi = 0.0;
};

/// Tabulates W at the probes (probes <= 1 or past x_max are skipped) and
/// reports the growth between the probe nearest x_ref and the last probe.
DivergenceReport divergence_witness(const CounterexampleBundle& B, std::span<const double> probes,
                                    double x_ref);

}  // namespace funnel
