#include "funnel/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "funnel/error.hpp"
#include "funnel/hull.hpp"

namespace funnel {

namespace {

// Largest u beyond which A u^2 + B u + C0 < 0.
double concavity_threshold(double A, double B, double C0) {
  const double inf = std::numeric_limits<double>::infinity();
  if (A != 0.0) {
    if (A > 0.0) fail(ErrorKind::Domain, "log-family modulus is eventually convex");
    const double disc = B * B - 4.0 * A * C0;
    if (disc < 0.0) return -inf;
    const double s = std::sqrt(disc);
    return std::max((-B + s) / (2.0 * A), (-B - s) / (2.0 * A));
  }
  if (B < 0.0) return -C0 / B;
  if (B > 0.0) fail(ErrorKind::Domain, "log-family modulus is eventually convex");
  if (C0 > 0.0) fail(ErrorKind::Domain, "log-family modulus is convex");
  return -inf;
}

}  // namespace

Modulus Modulus::power(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    fail(ErrorKind::Config, "power modulus needs alpha in (0, 1], got " + std::to_string(alpha));
  }
  Modulus m;
  m.kind_ = Kind::Power;
  m.alpha_ = alpha;
  return m;
}

Modulus Modulus::power_log(double alpha, double beta, std::optional<double> C,
                           std::optional<double> h0) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    fail(ErrorKind::Config, "power-log modulus needs alpha in [0, 1)");
  }
  if (!(beta > 0.0)) fail(ErrorKind::Config, "power-log modulus needs beta > 0");
  return log_family(Kind::PowerLog, alpha, beta, beta, C, h0);
}

Modulus Modulus::linear_over_log(double beta, std::optional<double> C, std::optional<double> h0) {
  if (!(beta > 0.0)) fail(ErrorKind::Config, "linear-over-log modulus needs beta > 0");
  return log_family(Kind::LinearOverLog, 1.0, -beta, beta, C, h0);
}

Modulus Modulus::log_family(Kind kind, double alpha, double gamma, double beta,
                            std::optional<double> C, std::optional<double> h0) {
  Modulus m;
  m.kind_ = kind;
  m.alpha_ = alpha;
  m.gamma_ = gamma;
  m.beta_ = beta;

  double u_req = concavity_threshold(alpha * (alpha - 1.0), 2.0 * alpha * gamma - gamma,
                                     gamma * (gamma - 1.0));
  if (alpha > 0.0) u_req = std::max(u_req, -gamma / alpha);  // F' >= 0
  u_req = std::max(u_req, 1.0);

  if (h0) {
    if (!(*h0 > 1.0)) fail(ErrorKind::Config, "h0 must exceed 1");
    if (std::log(*h0) < u_req * (1.0 - 1e-12)) {
      fail(ErrorKind::Config, "h0 = " + std::to_string(*h0) +
                                  " is below the concavity threshold " +
                                  std::to_string(std::exp(u_req)));
    }
    m.h0_ = *h0;
  } else {
    m.h0_ = std::exp(u_req);
  }

  const double u0 = std::log(m.h0_);
  const double F0 = m.closed_form(m.h0_);
  const double dF0 = std::pow(m.h0_, alpha - 1.0) * std::pow(u0, gamma - 1.0) * (alpha * u0 + gamma);
  const double c_min = std::max(0.0, m.h0_ * dF0 - F0);
  if (C) {
    if (!(*C >= 0.0)) fail(ErrorKind::Config, "C must be non-negative");
    if (*C < c_min - 1e-12 * std::max(1.0, c_min)) {
      fail(ErrorKind::Config, "C = " + std::to_string(*C) +
                                  " leaves a convex kink at h0; need C >= " +
                                  std::to_string(c_min));
    }
    m.C_ = *C;
  } else {
    m.C_ = c_min;
  }
  m.chord_slope_ = (F0 + m.C_) / m.h0_;
  return m;
}

Modulus Modulus::sampled(GridFunction samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples.y(i) < samples.y(i - 1)) {
      fail(ErrorKind::Config, "sampled modulus must be non-decreasing");
    }
  }
  Modulus m;
  m.kind_ = Kind::Sampled;
  m.samples_ = std::move(samples);
  return m;
}

double Modulus::closed_form(double h) const {
  return std::pow(h, alpha_) * std::pow(std::log(h), gamma_);
}

double Modulus::domain_end() const noexcept {
  if (kind_ == Kind::Sampled) return samples_->back_x();
  return std::numeric_limits<double>::infinity();
}

double Modulus::operator()(double t) const {
  if (t < 0.0 || std::isnan(t)) fail(ErrorKind::Domain, "modulus evaluated at negative argument");
  switch (kind_) {
    case Kind::Power:
      if (alpha_ == 1.0) return t;
      return std::pow(t, alpha_);
    case Kind::PowerLog:
    case Kind::LinearOverLog:
      if (t < h0_) return chord_slope_ * t;
      return closed_form(t) + C_;
    case Kind::Sampled:
      return (*samples_)(t);
  }
  return 0.0;
}

bool is_concave_on_grid(const GridFunction& f, double tol) {
  if (f.size() < 3) return true;
  double prev = (f.y(1) - f.y(0)) / (f.x(1) - f.x(0));
  for (std::size_t i = 2; i < f.size(); ++i) {
    const double s = (f.y(i) - f.y(i - 1)) / (f.x(i) - f.x(i - 1));
    if (s > prev + tol) return false;
    prev = s;
  }
  return true;
}

SubadditivityReport is_subadditive_sampled(const Modulus& w,
                                           const std::vector<std::pair<double, double>>& pairs) {
  SubadditivityReport r;
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& [x, h] : pairs) {
    const double v = w(x + h) - w(x) - w(h);
    ++r.pairs;
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst_x = x;
      r.worst_h = h;
    }
  }
  if (r.pairs == 0) r.max_violation = 0.0;
  return r;
}

PiecewiseAffine stechkin_concave_majorant(const GridFunction& w, double rel_tol) {
  PiecewiseAffine phi = upper_concave_envelope(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = w.x(i);
    const double y = w.y(i);
    const double p = phi(x);
    const double slack = rel_tol * std::max(1.0, std::abs(y));
    if (p < y - slack) {
      fail(ErrorKind::InternalConsistency, "envelope below its input at x = " + std::to_string(x));
    }
    if (p > 2.0 * y + slack) {
      fail(ErrorKind::SubadditivityViolation,
           "concave majorant exceeds twice the input at x = " + std::to_string(x) + " (" +
               std::to_string(p) + " > 2 * " + std::to_string(y) + ")");
    }
  }
  return phi;
}

const char* to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::Holds: return "Holds";
    case ConditionVerdict::FailsOnWindow: return "FailsOnWindow";
    case ConditionVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<double> log_space(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || hi < lo) fail(ErrorKind::Domain, "bad log-spaced range");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

ConditionStarReport condition_star_estimate(const Modulus& w, const ConditionStarOptions& opt) {
  if (opt.n_max < 2) fail(ErrorKind::Config, "condition (*) needs n_max >= 2");
  if (!(opt.h_lo > 0.0 && opt.h_lo < opt.h_hi)) fail(ErrorKind::Config, "need 0 < h_lo < h_hi");
  if (opt.samples < 2) fail(ErrorKind::Config, "condition (*) needs at least two samples");
  if (opt.h_hi > w.domain_end()) fail(ErrorKind::Range, "window exceeds the modulus domain");

  const std::vector<double> hs = log_space(opt.h_lo, opt.h_hi, opt.samples);
  ConditionStarReport rep;
  rep.infimum_estimate = std::numeric_limits<double>::infinity();
  bool all_fail = true;
  std::vector<double> r(hs.size());
  for (int n = 1; n <= opt.n_max; ++n) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const double den = n * w(hs[i] / n);
      if (!(den > 0.0)) {
        fail(ErrorKind::DegenerateModulus,
             "modulus vanishes at h/n = " + std::to_string(hs[i] / n));
      }
      r[i] = w(hs[i]) / den;
      lo = std::min(lo, r[i]);
    }
    rep.per_n.emplace_back(n, lo);
    rep.infimum_estimate = std::min(rep.infimum_estimate, lo);

    // The trend is judged on the upper half of the window; for small h/n the
    // chord extension of the log families can bend the ratio downwards.
    const std::size_t tail = r.size() / 2;
    bool monotone = true;
    for (std::size_t i = tail + 1; i < r.size(); ++i) {
      if (r[i] < r[i - 1] - opt.tol) monotone = false;
    }
    const bool at_one = r.back() >= 1.0 - opt.tol;
    const bool rising = r.back() - r[tail] > 1e-6;
    if (!(monotone && (at_one || rising))) all_fail = false;
  }

  if (rep.infimum_estimate < opt.eps_star) {
    rep.verdict = ConditionVerdict::Holds;
  } else if (all_fail) {
    rep.verdict = ConditionVerdict::FailsOnWindow;
  } else {
    rep.verdict = ConditionVerdict::Inconclusive;
  }
  return rep;
}

}  // namespace funnel
