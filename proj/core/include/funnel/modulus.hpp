#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "funnel/piecewise.hpp"

namespace funnel {

/// A modulus of continuity: non-decreasing on [0, inf) with value 0 at 0.
///
/// The log families are stored as F(h) + C for h >= h0, with
/// F(h) = h^alpha * ln(h)^gamma, and the chord t * (F(h0) + C) / h0 below h0.
/// When C or h0 are omitted they are chosen so that the result is concave.
class Modulus {
 public:
  enum class Kind { Power, PowerLog, LinearOverLog, Sampled };

  static Modulus power(double alpha);
  static Modulus power_log(double alpha, double beta, std::optional<double> C = std::nullopt,
                           std::optional<double> h0 = std::nullopt);
  static Modulus linear_over_log(double beta, std::optional<double> C = std::nullopt,
                                 std::optional<double> h0 = std::nullopt);
  static Modulus sampled(GridFunction samples);

  double operator()(double t) const;

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  /// Exponent of the log factor as entered by the user (beta > 0).
  double beta() const noexcept { return beta_; }
  double C() const noexcept { return C_; }
  double h0() const noexcept { return h0_; }
  const GridFunction* samples() const noexcept { return samples_ ? &*samples_ : nullptr; }

  /// Largest admissible argument (infinity for closed forms).
  double domain_end() const noexcept;
  /// True for the closed-form kinds, which are concave by construction.
  bool concave_by_construction() const noexcept { return kind_ != Kind::Sampled; }

 private:
  Modulus() = default;
  static Modulus log_family(Kind kind, double alpha, double gamma, double beta,
                            std::optional<double> C, std::optional<double> h0);
  double closed_form(double h) const;  // F(h), h >= h0

  Kind kind_ = Kind::Power;
  double alpha_ = 1.0;
  double gamma_ = 0.0;
  double beta_ = 0.0;
  double C_ = 0.0;
  double h0_ = 0.0;
  double chord_slope_ = 0.0;
  std::optional<GridFunction> samples_;
};

/// Successive chord slopes non-increasing up to tol.
bool is_concave_on_grid(const GridFunction& f, double tol = 0.0);

struct SubadditivityReport {
  std::size_t pairs = 0;
  double max_violation = 0.0;  // max of w(x+h) - w(x) - w(h)
  double worst_x = 0.0;
  double worst_h = 0.0;
};

SubadditivityReport is_subadditive_sampled(const Modulus& w,
                                           const std::vector<std::pair<double, double>>& pairs);

/// Concave majorant phi with w <= phi <= 2w at every node of w.
/// Throws SubadditivityViolation when phi > 2w somewhere.
PiecewiseAffine stechkin_concave_majorant(const GridFunction& w, double rel_tol = 1e-12);

struct ConditionStarOptions {
  int n_max = 512;
  double h_lo = 1e3;
  double h_hi = 1e6;
  int samples = 64;
  double eps_star = 0.05;
  double tol = 1e-9;
};

enum class ConditionVerdict { Holds, FailsOnWindow, Inconclusive };
const char* to_string(ConditionVerdict v);

struct ConditionStarReport {
  std::vector<std::pair<int, double>> per_n;  // (n, min over window of w(h) / (n w(h/n)))
  double infimum_estimate = 0.0;
  ConditionVerdict verdict = ConditionVerdict::Inconclusive;
};

/// Holds when some per-n estimate drops below eps_star. FailsOnWindow when,
/// for every n, the ratio is non-decreasing over the upper half of the window
/// and either reaches 1 or rises there. Inconclusive otherwise.
ConditionStarReport condition_star_estimate(const Modulus& w, const ConditionStarOptions& opt);

/// Log-spaced points lo = p_0 < ... < p_{count-1} = hi.
std::vector<double> log_space(double lo, double hi, int count);

}  // namespace funnel
