#include "funnel/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "funnel/error.hpp"

namespace funnel {

double CounterexampleBundle::g(double x) const {
  if (x < 0.0 || x > x_max) {
    fail(ErrorKind::Domain, "g evaluated outside [0, " + std::to_string(x_max) + "] at " + std::to_string(x));
  }
  return delta.integral(a, std::min(a + x, delta.back())) / b;
}

double CounterexampleBundle::g_prime(double x) const {
  if (x < 0.0 || x > x_max) {
    fail(ErrorKind::Domain, "g' evaluated outside [0, " + std::to_string(x_max) + "] at " + std::to_string(x));
  }
  return delta(std::min(a + x, delta.back())) / b;
}

namespace {

void require_in_funnel(const CounterexampleBundle& B, double x, double y) {
  if (!(x > 0.0 && x <= B.x_max) || !(std::abs(y) < B.eta()(x))) {
    fail(ErrorKind::Domain, "point (" + std::to_string(x) + ", " + std::to_string(y) +
                                ") is outside the truncated funnel");
  }
}

}  // namespace

double CounterexampleBundle::f(double x, double y) const {
  require_in_funnel(*this, x, y);
  return g(x) * y;
}

std::pair<double, double> CounterexampleBundle::grad_f(double x, double y) const {
  require_in_funnel(*this, x, y);
  return {g_prime(x) * y, g(x)};
}

ScalarField CounterexampleBundle::as_field() const {
  ScalarField s;
  s.dim = 2;
  s.value = [this](const Vec& p) { return f(p[0], p[1]); };
  s.gradient = [this](const Vec& p) {
    const auto [gx, gy] = grad_f(p[0], p[1]);
    Vec d(2);
    d << gx, gy;
    return d;
  };
  return s;
}

CounterexampleBundle build_counterexample(const EnvelopeResult& env, const ConstructionOptions& opt) {
  if (!(opt.a_min > 0.0)) fail(ErrorKind::Config, "a_min must be positive");
  const OmegaEtaResult& src = *env.source;
  const double T = env.t_max();
  const double top = env.psi.slopes()[0];
  if (!(top > 0.0)) fail(ErrorKind::FlatEnvelope, "envelope has no positive slope");
  const double eps = opt.eps_pos.value_or(1e-12 * top);
  if (!(eps > 0.0)) fail(ErrorKind::Config, "eps_pos must be positive");

  const auto& nodes = src.grid.nodes;
  double a = -1.0;
  for (auto it = std::lower_bound(nodes.begin(), nodes.end(), opt.a_min); it != nodes.end(); ++it) {
    if (4.0 * *it >= T) break;
    if (env.slope_at(4.0 * *it) >= eps) {
      a = *it;
      break;
    }
  }
  if (a < 0.0) {
    fail(ErrorKind::FlatEnvelope, "no grid node a >= " + std::to_string(opt.a_min) +
                                      " with psi'_+(4a) >= " + std::to_string(eps));
  }

  const double q = std::max(1.0, src.eta(a) / a);
  const double b = 1280.0 * q * q;

  std::vector<double> bx, by;
  for (double x = a; x <= T; x *= 2.0) {
    bx.push_back(x);
    by.push_back(env.slope_at(x));
  }
  if (bx.back() < T) {
    bx.push_back(T);
    by.push_back(by.back());
  }
  if (bx.size() < 2) fail(ErrorKind::FlatEnvelope, "grid too short for the dyadic construction");

  return CounterexampleBundle{env, a, q, b, PiecewiseAffine(std::move(bx), std::move(by)), T - a};
}

std::vector<VerificationReport> verify_g_conditions(
    const CounterexampleBundle& B, const std::vector<std::pair<double, double>>& pairs) {
  VerificationReport r1{"g_increment"}, r2{"g_slope"}, r3{"g_slope_oscillation"};
  for (VerificationReport* r : {&r1, &r2, &r3}) r->max_violation = -std::numeric_limits<double>::infinity();
  const Modulus& w = B.omega();
  const Width& eta = B.eta();
  const double T = B.envelope.t_max();

  auto record = [](VerificationReport& r, double v) {
    ++r.samples;
    r.max_violation = std::max(r.max_violation, v);
    if (v > 0.0) ++r.violations;
  };

  for (const auto& [x, h] : pairs) {
    if (!(x > 0.0 && h > 0.0) || x + h > B.x_max) {
      ++r1.skipped;
      ++r2.skipped;
      ++r3.skipped;
      continue;
    }
    const double slack = tau_grid(B.omega_eta(), std::min(B.a + x + h, T)) / B.b;
    const double ex = eta(x);
    const double gp_x = B.g_prime(x);
    record(r1, B.g(x + h) - B.g(x) - 8.0 / B.b * std::max(1.0, h / eta(x + h)) * w(h) - slack);
    record(r2, ex * gp_x - 8.0 * B.q / B.b * w(ex) - slack);
    record(r3, ex * (gp_x - B.g_prime(x + h)) - w(h) / 5.0 - slack);
  }
  for (VerificationReport* r : {&r1, &r2, &r3}) r->passed = r->samples > 0 && r->violations == 0;
  return {r1, r2, r3};
}

std::vector<VerificationReport> verify_semiconvexity(const ScalarField& f, const Modulus& w,
                                                     const ConvexRegion& region,
                                                     const SemiconvexityOptions& opt) {
  if (f.dim != region.dim()) fail(ErrorKind::Domain, "function and region dimensions differ");
  VerificationReport vx{"semiconvexity"}, vc{"semiconcavity"};
  vx.max_violation = vc.max_violation = -std::numeric_limits<double>::infinity();
  Rng rng(opt.seed);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const Vec p = region.sample(rng);
    const Vec q = rng.uniform() < opt.local_fraction ? region.sample_near(p, rng) : region.sample(rng);
    const double lam = opt.lambdas.empty() ? rng.uniform() : opt.lambdas[i % opt.lambdas.size()];
    if (!region.contains(p) || !region.contains(q)) {
      fail(ErrorKind::SamplerContract, "sampler produced a point outside the region");
    }
    const Vec m = lam * p + (1.0 - lam) * q;
    if (!region.contains(m)) fail(ErrorKind::SamplerContract, "convex combination left the region");
    const double d = (p - q).norm();
    if (!(d > 0.0)) {
      ++vx.skipped;
      ++vc.skipped;
      continue;
    }
    const double fp = f.value(p);
    const double fq = f.value(q);
    const double fm = f.value(m);
    const double conv = fm - lam * fp - (1.0 - lam) * fq;
    const double base = lam * (1.0 - lam) * d * w(d);
    const double rhs = opt.C * base;
    const double tol = opt.rel_tol * std::max({std::abs(fp), std::abs(fq), std::abs(fm), rhs});
    ++vx.samples;
    ++vc.samples;
    const double ax = conv - rhs;
    const double ac = -conv - rhs;
    vx.max_violation = std::max(vx.max_violation, ax);
    vc.max_violation = std::max(vc.max_violation, ac);
    if (ax > tol) ++vx.violations;
    if (ac > tol) ++vc.violations;
    if (base > 0.0) {
      vx.empirical_constant = std::max(vx.empirical_constant, conv / base);
      vc.empirical_constant = std::max(vc.empirical_constant, -conv / base);
    }
  }
  vx.passed = vx.samples > 0 && vx.violations == 0;
  vc.passed = vc.samples > 0 && vc.violations == 0;
  return {vx, vc};
}

namespace {

double taylor_constant(const ScalarField& f, const Modulus& w, const ConvexRegion& region,
                       const TaylorOptions& opt, std::size_t n, std::size_t& skipped) {
  Rng rng(opt.seed);
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec p = region.sample(rng);
    const Vec q = rng.uniform() < opt.local_fraction ? region.sample_near(p, rng) : region.sample(rng);
    if (!region.contains(p) || !region.contains(q)) {
      fail(ErrorKind::SamplerContract, "sampler produced a point outside the region");
    }
    const Vec h = q - p;
    const double hn = h.norm();
    const double den = hn * w(hn);
    if (!(den > 0.0)) {
      ++skipped;
      continue;
    }
    const double rem = std::abs(f.value(q) - f.value(p) - f.gradient(p).dot(h));
    c = std::max(c, rem / den);
  }
  return c;
}

}  // namespace

VerificationReport verify_taylor_bound(const ScalarField& f, const Modulus& w,
                                       const ConvexRegion& region, const TaylorOptions& opt) {
  VerificationReport r{"taylor_remainder"};
  std::size_t skip_n = 0, skip_2n = 0;
  const double c1 = taylor_constant(f, w, region, opt, opt.samples, skip_n);
  const double c2 = taylor_constant(f, w, region, opt, 2 * opt.samples, skip_2n);
  r.samples = 2 * opt.samples - skip_2n;
  r.skipped = skip_2n;
  r.empirical_constant = c2;
  r.stability_ratio = c1 > 0.0 ? c2 / c1 : (c2 > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  r.max_violation = r.stability_ratio - opt.stability_ratio;
  r.passed = std::isfinite(c2) && r.stability_ratio < opt.stability_ratio;
  return r;
}

VerificationReport verify_line_modulus(const ScalarField& f, const Modulus& w,
                                       const ConvexRegion& region, const LineOptions& opt) {
  VerificationReport r{"line_modulus"};
  Rng rng(opt.seed);
  for (std::size_t l = 0; l < opt.lines; ++l) {
    const Vec a = region.sample(rng);
    Vec v = opt.direction ? opt.direction->normalized() : rng.direction(region.dim());
    const auto span = region.line_interval(a, v);
    if (!span) {
      r.skipped += opt.pairs_per_line;
      continue;
    }
    for (std::size_t k = 0; k < opt.pairs_per_line; ++k) {
      double t0 = rng.uniform(span->first, span->second);
      double t1 = rng.uniform(span->first, span->second);
      if (t1 < t0) std::swap(t0, t1);
      const Vec p0 = a + t0 * v;
      const Vec p1 = a + t1 * v;
      const double den = w(t1 - t0);
      if (!(den > 0.0) || !region.contains(p0) || !region.contains(p1)) {
        ++r.skipped;
        continue;
      }
      ++r.samples;
      const double diff = std::abs(f.gradient(p1).dot(v) - f.gradient(p0).dot(v));
      r.empirical_constant = std::max(r.empirical_constant, diff / den);
    }
  }
  r.max_violation = r.empirical_constant;
  r.passed = r.samples > 0 && std::isfinite(r.empirical_constant);
  return r;
}

DivergenceReport divergence_witness(const CounterexampleBundle& B, std::span<const double> probes,
                                    double x_ref) {
  if (B.x_max < 1.0) fail(ErrorKind::Domain, "witness needs x = 1 inside the domain");
  const double T = B.envelope.t_max();
  if (2.0 * (B.a + 1.0) > T) fail(ErrorKind::Domain, "witness needs 2(a+1) <= t_max");
  const Modulus& w = B.omega();
  const double g1 = B.g(1.0);
  const double psi_anchor = B.envelope.value(2.0 * (B.a + 1.0));

  DivergenceReport rep;
  for (double x : probes) {
    if (!(x > 1.0) || x > B.x_max) {
      ++rep.skipped;
      continue;
    }
    const double W = std::abs(B.g(x) - g1) / w(x - 1.0);
    const double lower = (B.omega_eta().value_at(x) - psi_anchor - tau_grid(B.omega_eta(), x)) /
                         (2.0 * B.b * w(x));
    if (W < lower) ++rep.lower_bound_failures;
    rep.rows.push_back({x, W, lower});
  }
  if (rep.rows.empty()) fail(ErrorKind::Domain, "no admissible witness probes");
  const WitnessRow* ref = &rep.rows.front();
  for (const WitnessRow& row : rep.rows) {
    if (std::abs(std::log(row.x / x_ref)) < std::abs(std::log(ref->x / x_ref))) ref = &row;
  }
  rep.x_ref = ref->x;
  rep.x_hi = rep.rows.back().x;
  rep.growth = rep.rows.back().W / ref->W;
  return rep;
}

}  // namespace funnel
