#include <cmath>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "funnel/counterexample.hpp"
#include "funnel/error.hpp"

using namespace funnel;

namespace {

CounterexampleBundle make_bundle(const Modulus& w, double t_max) {
  const Width eta = Width::power_shift(0.4, 1.0);
  GridOptions opt;
  opt.t_max = t_max;
  opt.anchors = {1.0};
  auto r = std::make_shared<const OmegaEtaResult>(compute_omega_eta(w, eta, build_grid(eta, opt)));
  return build_counterexample(build_envelope(r));
}

const CounterexampleBundle& standard() {
  static const CounterexampleBundle B = make_bundle(Modulus::power(0.5), 65536.0);
  return B;
}

std::vector<std::pair<double, double>> pairs(std::uint64_t seed, double hi, int n) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(hi));
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) out.emplace_back(std::exp(u(eng)), std::exp(u(eng)));
  return out;
}

}  // namespace

TEST(Counterexample, ConstantsFollowFormulas) {
  const CounterexampleBundle& B = standard();
  EXPECT_GE(B.a, 1.0);
  EXPECT_EQ(B.q, std::max(1.0, B.eta()(B.a) / B.a));
  EXPECT_EQ(B.b, 1280.0 * B.q * B.q);
  EXPECT_EQ(B.x_max, B.envelope.t_max() - B.a);
  EXPECT_GT(B.envelope.slope_at(4.0 * B.a), 0.0);
}

TEST(Counterexample, DeltaBracketsEnvelopeSlope) {
  const CounterexampleBundle& B = standard();
  std::mt19937_64 eng(4);
  std::uniform_real_distribution<double> u(std::log(B.a), std::log(B.envelope.t_max()));
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(u(eng));
    const double d = B.delta(x);
    EXPECT_LE(B.envelope.slope_at(2.0 * x), d * (1 + 1e-12)) << x;
    EXPECT_LE(d, B.envelope.slope_at(0.5 * x) * (1 + 1e-12)) << x;
  }
}

TEST(Counterexample, GMatchesIndependentIntegral) {
  const CounterexampleBundle& B = standard();
  const auto bp = B.delta.breakpoints();
  std::mt19937_64 eng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double x = B.x_max * u(eng) * u(eng);
    // trapezoids over the pieces of delta clipped to [a, a + x]
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      const double lo = std::max(B.a, bp[k]), hi = std::min(B.a + x, bp[k + 1]);
      if (hi > lo) s += 0.5 * (hi - lo) * (B.delta(lo) + B.delta(hi));
    }
    EXPECT_NEAR(B.g(x), s / B.b, 1e-13 * std::max(1e-300, s / B.b) + 1e-18);
    const double gp = B.g_prime(x);
    EXPECT_NEAR(gp * B.b, B.delta(B.a + x), 1e-15 * B.delta(B.a + x));
  }
  EXPECT_THROW(B.f(0.0, 0.0), Error);
  EXPECT_THROW(B.f(1.0, 10.0), Error);
  EXPECT_DOUBLE_EQ(B.f(2.0, 0.5), B.g(2.0) * 0.5);
}

TEST(Counterexample, GConditionsHold) {
  const CounterexampleBundle& B = standard();
  for (const VerificationReport& r : verify_g_conditions(B, pairs(1, B.x_max, 10000))) {
    EXPECT_TRUE(r.passed) << r.name << " max " << r.max_violation;
  }
}

TEST(Counterexample, GConditionsDetectInflatedDelta) {
  CounterexampleBundle B = standard();
  B.delta = B.delta.scaled(1e3);
  std::size_t violations = 0;
  for (const VerificationReport& r : verify_g_conditions(B, pairs(1, B.x_max, 2000))) violations += r.violations;
  EXPECT_GT(violations, 0u);
}

TEST(Counterexample, SemiconvexAndSemiconcave) {
  const CounterexampleBundle& B = standard();
  const FunnelRegion region(B.eta(), 1e-3, B.x_max);
  SemiconvexityOptions so;
  so.samples = 20000;
  for (const VerificationReport& r : verify_semiconvexity(B.as_field(), B.omega(), region, so)) {
    EXPECT_TRUE(r.passed) << r.name;
    EXPECT_LT(r.empirical_constant, 1.0);
  }
}

TEST(Counterexample, SemiconvexityDetectsConcaveQuadratic) {
  const CounterexampleBundle& B = standard();
  const FunnelRegion region(B.eta(), 1e-3, B.x_max);
  ScalarField f;
  f.dim = 2;
  f.value = [](const Vec& p) { return -p.squaredNorm(); };
  f.gradient = [](const Vec& p) { return Vec(-2.0 * p); };
  SemiconvexityOptions so;
  so.samples = 2000;
  const auto reps = verify_semiconvexity(f, B.omega(), region, so);
  EXPECT_FALSE(reps[0].passed);
  EXPECT_GT(reps[0].violations, 0u);
  EXPECT_TRUE(reps[1].passed);
}

TEST(Counterexample, TaylorAndLineConstantsAreStable) {
  const CounterexampleBundle& B = standard();
  const FunnelRegion region(B.eta(), 1e-3, B.x_max);
  TaylorOptions to;
  to.samples = 5000;
  const VerificationReport t = verify_taylor_bound(B.as_field(), B.omega(), region, to);
  EXPECT_TRUE(t.passed);
  EXPECT_LT(t.stability_ratio, 1.5);
  LineOptions lo;
  lo.lines = 100;
  lo.pairs_per_line = 20;
  EXPECT_TRUE(verify_line_modulus(B.as_field(), B.omega(), region, lo).passed);
}

TEST(Counterexample, DivergenceWitness) {
  const CounterexampleBundle& B = standard();
  const auto probes = log_space(10.0, 6e4, 20);
  const DivergenceReport d = divergence_witness(B, probes, 100.0);
  EXPECT_EQ(d.lower_bound_failures, 0u);
  EXPECT_GT(d.growth, 2.0);

  const CounterexampleBundle L = make_bundle(Modulus::power(1.0), 65536.0);
  const DivergenceReport c = divergence_witness(L, probes, 100.0);
  EXPECT_EQ(c.lower_bound_failures, 0u);
  EXPECT_LE(c.growth, 1.5);
}

TEST(Counterexample, FlatEnvelopeIsRejected) {
  const Width eta = Width::constant(1.0);
  GridOptions opt;
  opt.t_max = 100.0;
  auto r = std::make_shared<const OmegaEtaResult>(compute_omega_eta(Modulus::power(0.5), eta, build_grid(eta, opt)));
  ConstructionOptions co;
  co.a_min = 50.0;
  co.eps_pos = 1e6;
  EXPECT_THROW(build_counterexample(build_envelope(r), co), Error);
}
