#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "funnel/envelope.hpp"

using namespace funnel;

namespace {

std::shared_ptr<const OmegaEtaResult> standard(double t_max) {
  const Modulus w = Modulus::power(0.5);
  const Width eta = Width::power_shift(0.4, 1.0);
  GridOptions opt;
  opt.t_max = t_max;
  return std::make_shared<const OmegaEtaResult>(compute_omega_eta(w, eta, build_grid(eta, opt)));
}

}  // namespace

TEST(Envelope, SandwichConcaveMonotone) {
  const auto r = standard(1e5);
  const EnvelopeResult env = build_envelope(r);
  const EnvelopeSandwichReport s = check_envelope_sandwich(env);
  EXPECT_TRUE(s.passed(1e-9 * env.psi.values().back()));
  const auto sl = env.psi.slopes();
  for (std::size_t i = 1; i < sl.size(); ++i) EXPECT_LT(sl[i], sl[i - 1]);
  for (std::size_t k = 0; k < r->grid.size(); ++k) {
    const double x = r->grid.nodes[k];
    EXPECT_GE(env.value(x), r->values.y(k) - 1e-9);
    EXPECT_LE(env.value(x), 2.0 * r->values.y(k) + 1e-9);
  }
}

TEST(Envelope, ConstantBeyondTmax) {
  const EnvelopeResult env = build_envelope(standard(1e3));
  EXPECT_EQ(env.value(2e3), env.value(1e3));
  EXPECT_EQ(env.slope_at(1e3), 0.0);
  EXPECT_GT(env.slope_at(10.0), 0.0);
  EXPECT_EQ(right_derivative(env.psi, 10.0), env.slope_at(10.0));
}

TEST(Envelope, GrowthAndUniformBounds) {
  const auto r = standard(1e5);
  const EnvelopeResult env = build_envelope(r);
  std::mt19937_64 eng(9);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e5));
  std::vector<double> ts;
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 1000; ++i) {
    ts.push_back(std::exp(u(eng)));
    pairs.emplace_back(std::exp(u(eng)), std::exp(u(eng)));
  }
  const InequalityReport g = check_envelope_growth(env.psi, *r, ts);
  EXPECT_TRUE(g.passed());
  EXPECT_GT(g.samples, 100u);
  EXPECT_TRUE(check_psi_uniform_bound(env.psi, *r, pairs).passed());
}
