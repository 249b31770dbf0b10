#include "funnel/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "funnel/error.hpp"

namespace funnel {

double Rng::log_uniform(double lo, double hi) {
  if (!(lo > 0.0 && hi >= lo)) fail(ErrorKind::Domain, "log-uniform range must be positive");
  const double v = std::exp(uniform(std::log(lo), std::log(hi)));
  return std::clamp(v, lo, hi);
}

Vec Rng::direction(int dim) {
  Vec v(dim);
  double n = 0.0;
  while (!(n > 1e-12)) {
    for (int i = 0; i < dim; ++i) v[i] = normal();
    n = v.norm();
  }
  return v / n;
}

Vec ConvexRegion::sample_near(const Vec& p, Rng& rng) const {
  const double s = local_scale(p);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double r = rng.log_uniform(1e-6 * s, 10.0 * s);
    Vec q = p + r * rng.direction(dim());
    if (contains(q)) return q;
  }
  return sample(rng);
}

std::optional<std::pair<double, double>> ConvexRegion::line_interval(const Vec& a, const Vec& v) const {
  if (!contains(a)) fail(ErrorKind::SamplerContract, "line base point outside the region");
  const double vn = v.norm();
  if (!(vn > 0.0)) return std::nullopt;
  const double reach = 4.0 * (extent() + a.norm()) / vn;
  auto edge = [&](double sign) {
    double in = 0.0;
    double out = reach;
    if (contains(a + sign * out * v)) return sign * out;
    for (int it = 0; it < 200 && out - in > 1e-13 * std::max(1.0, out); ++it) {
      const double mid = 0.5 * (in + out);
      if (contains(a + sign * mid * v)) {
        in = mid;
      } else {
        out = mid;
      }
    }
    return sign * in;
  };
  const double lo = edge(-1.0);
  const double hi = edge(1.0);
  if (!(hi > lo)) return std::nullopt;
  return std::make_pair(lo, hi);
}

FunnelRegion::FunnelRegion(Width eta, double x_lo, double x_max)
    : eta_(std::move(eta)), x_lo_(x_lo), x_max_(x_max) {
  if (!(x_lo > 0.0 && x_lo < x_max)) fail(ErrorKind::Config, "funnel sampling needs 0 < x_lo < x_max");
}

bool FunnelRegion::contains(const Vec& p) const {
  return p.size() == 2 && p[0] > 0.0 && p[0] <= x_max_ && std::abs(p[1]) < eta_(p[0]);
}

Vec FunnelRegion::sample(Rng& rng) const {
  Vec p(2);
  p[0] = rng.log_uniform(x_lo_, x_max_);
  p[1] = (2.0 * rng.uniform() - 1.0) * eta_(p[0]) * (1.0 - 1e-12);
  return p;
}

double FunnelRegion::extent() const { return x_max_ + eta_(x_max_); }

double FunnelRegion::local_scale(const Vec& p) const { return eta_(std::max(p[0], 0.0)); }

}  // namespace funnel
