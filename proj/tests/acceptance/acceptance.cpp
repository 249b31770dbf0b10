// One line per acceptance criterion; exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cli/commands.hpp"
#include "funnel/counterexample.hpp"
#include "funnel/error.hpp"
#include "funnel/geometry.hpp"

using namespace funnel;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FUNNEL_TEST_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Pairs with x + h <= hi, so that none is skipped by the checkers.
std::vector<std::pair<double, double>> admissible_pairs(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  while (out.size() < n) {
    const double x = rng.log_uniform(lo, hi);
    const double h = rng.log_uniform(lo, hi);
    if (x + h <= hi) out.emplace_back(x, h);
  }
  return out;
}

std::shared_ptr<const OmegaEtaResult> standard_dp(double t_max, std::vector<double> anchors, double* secs) {
  const auto t0 = std::chrono::steady_clock::now();
  const Modulus w = Modulus::power(0.5);
  const Width eta = Width::power_shift(0.4, 1.0);
  GridOptions opt;
  opt.t_max = t_max;
  opt.anchors = std::move(anchors);
  auto r = std::make_shared<const OmegaEtaResult>(compute_omega_eta(w, eta, build_grid(eta, opt)));
  if (secs) *secs = seconds_since(t0);
  return r;
}

CounterexampleBundle bundle_for(const Modulus& w) {
  const Width eta = Width::power_shift(0.4, 1.0);
  GridOptions opt;
  opt.t_max = 2097152.0;
  opt.anchors = {1.0};
  auto r = std::make_shared<const OmegaEtaResult>(compute_omega_eta(w, eta, build_grid(eta, opt)));
  return build_counterexample(build_envelope(r));
}

Outcome criterion1(const OmegaEtaResult& r, double secs) {
  double lower_gap = 1e300, upper_gap = 1e300;
  for (std::size_t k = 1; k < r.grid.size(); ++k) {
    const double h = r.grid.nodes[k];
    const double lo = h * r.omega(r.eta(h)) / r.eta(h);
    const double up = std::max(1.0, h / r.eta(h)) * r.omega(h);
    lower_gap = std::min(lower_gap, r.values.y(k) - (lo - 1e-9));
    upper_gap = std::min(upper_gap, up + 1e-9 - r.values.y(k));
  }
  return {lower_gap >= 0.0 && upper_gap >= 0.0 && secs <= 60.0,
          fmt::format("{} nodes, min lower margin {:.3g}, min upper margin {:.3g}, {:.2f} s", r.grid.size(),
                      lower_gap, upper_gap, secs)};
}

Outcome criterion2() {
  const Modulus w = Modulus::power(0.5);
  const Width eta = Width::constant(1.0);
  GridOptions opt;
  opt.t_max = 200.0;
  opt.anchors = {100.0};
  const OmegaEtaResult r = compute_omega_eta(w, eta, build_grid(eta, opt));
  double frac = 0.0;
  for (std::size_t k = 0; k + 1 < r.grid.size() && r.grid.nodes[k] < 100.0; ++k) {
    frac = std::max(frac, (r.grid.nodes[k + 1] - r.grid.nodes[k]) / eta(r.grid.nodes[k + 1]));
  }
  std::vector<double> unit;
  for (int i = 0; i <= 100; ++i) unit.push_back(i);
  const double unit_cost = partition_cost(Partition{unit}, eta, w);
  const double v = r.value_at(100.0);
  const double hi = 100.0 * (1.0 + 5.0 * frac);
  return {v >= 100.0 && v <= hi && std::abs(unit_cost - 100.0) < 1e-12,
          fmt::format("value {:.9g} in [100, {:.6g}], unit-piece partition cost {:.17g}", v, hi, unit_cost)};
}

Outcome criterion3(const OmegaEtaResult& r) {
  Rng rng(301);
  // node pairs whose snapped sum lands on a later node
  const auto& xs = r.grid.nodes;
  std::vector<std::pair<double, double>> pairs;
  while (pairs.size() < 1000) {
    const std::size_t i = r.grid.floor_index(rng.log_uniform(xs[1], r.grid.t_max));
    const std::size_t j = r.grid.floor_index(rng.log_uniform(xs[1], r.grid.t_max));
    if (i == 0 || j == 0 || xs[i] + xs[j] > r.grid.t_max) continue;
    if (r.grid.floor_index(xs[i] + xs[j]) > i) pairs.emplace_back(xs[i], xs[j]);
  }
  const StructuralReport st = check_structural_inequalities(r, pairs);
  return {st.passed() && st.pairs_checked == 1000,
          fmt::format("{} pairs checked ({} skipped), {} violations", st.pairs_checked, st.pairs_skipped,
                      st.violations)};
}

Outcome criterion4(const std::shared_ptr<const OmegaEtaResult>& r) {
  const EnvelopeResult env = build_envelope(r);
  bool ok = true;
  double worst = -1e300;
  for (std::size_t k = 0; k < r->grid.size(); ++k) {
    const double x = r->grid.nodes[k], v = r->values.y(k), p = env.value(x);
    worst = std::max({worst, v - p, p - 2.0 * v});
  }
  ok &= worst <= 1e-9 * std::max(1.0, env.psi.values().back());
  const auto sl = env.psi.slopes();
  for (std::size_t i = 1; i < sl.size(); ++i) ok &= sl[i] < sl[i - 1];
  Rng rng(401);
  std::vector<double> ts;
  while (ts.size() < 1000) {
    const double t = rng.log_uniform(r->grid.nodes[1], r->grid.t_max);
    const double e = r->eta(t);
    if (e <= t && t + e <= r->grid.t_max) ts.push_back(t);
  }
  const InequalityReport g = check_envelope_growth(env.psi, *r, ts);
  ok &= g.passed() && g.samples == 1000;
  return {ok, fmt::format("max sandwich excess {:.3g}, slopes strictly decreasing, growth check {} samples, {} violations",
                          worst, g.samples, g.violations)};
}

Outcome criterion5(const CounterexampleBundle& B) {
  bool ok = B.q == std::max(1.0, B.eta()(B.a) / B.a) && B.b == 1280.0 * B.q * B.q;
  Rng rng(501);
  std::size_t bracket_fail = 0;
  double worst_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.log_uniform(B.a, B.envelope.t_max());
    const double d = B.delta(x);
    if (B.envelope.slope_at(2.0 * x) > d || d > B.envelope.slope_at(0.5 * x)) ++bracket_fail;
    const double y = rng.uniform(0.0, B.x_max);
    const double ref = B.delta(B.a + y);
    worst_rel = std::max(worst_rel, std::abs(B.g_prime(y) * B.b - ref) / ref);
  }
  ok &= bracket_fail == 0 && worst_rel <= 1e-15;
  return {ok, fmt::format("a {} q {:.17g} b {:.17g}, delta bracket failures {}, max rel |g' b - delta| {:.3g}", B.a,
                          B.q, B.b, bracket_fail, worst_rel)};
}

Outcome criterion6(const CounterexampleBundle& B) {
  Rng rng(601);
  const auto reps = verify_g_conditions(B, admissible_pairs(rng, 10000, 1e-3, B.x_max));
  bool ok = true;
  std::string d;
  for (const VerificationReport& r : reps) {
    ok &= r.passed && r.samples == 10000;
    d += fmt::format("{}: {} samples {} violations; ", r.name, r.samples, r.violations);
  }
  return {ok, d};
}

Outcome criterion7(const CounterexampleBundle& B) {
  const FunnelRegion region(B.eta(), 1e-3, B.x_max);
  SemiconvexityOptions so;
  so.samples = 100000;
  so.seed = 701;
  const auto t0 = std::chrono::steady_clock::now();
  const auto reps = verify_semiconvexity(B.as_field(), B.omega(), region, so);
  const double secs = seconds_since(t0);
  bool ok = secs <= 30.0;
  std::string d;
  for (const VerificationReport& r : reps) {
    ok &= r.passed && r.samples == 100000;
    d += fmt::format("{}: {} violations, C {:.3g}; ", r.name, r.violations, r.empirical_constant);
  }
  return {ok, d + fmt::format("{:.2f} s", secs)};
}

Outcome criterion8(const CounterexampleBundle& B, const CounterexampleBundle& control) {
  const auto probes = log_space(10.0, 1e6, 26);
  const DivergenceReport d = divergence_witness(B, probes, 1e3);
  const DivergenceReport c = divergence_witness(control, probes, 1e3);
  const bool ok = d.lower_bound_failures == 0 && !d.rows.empty() && d.growth >= 4.0 && c.growth <= 1.5;
  return {ok, fmt::format("growth W(1e6)/W(1e3) {:.4g}, lower-bound failures {}, control growth {:.4g}", d.growth,
                          d.lower_bound_failures, c.growth)};
}

Outcome criterion9() {
  ConditionStarOptions opt;
  const ConditionStarReport p = condition_star_estimate(Modulus::power(0.5), opt);
  double worst = 0.0;
  for (const auto& [n, v] : p.per_n) {
    if (n == 2 || n == 4 || n == 8 || n == 16) worst = std::max(worst, std::abs(v - std::pow(n, -0.5)));
  }
  const ConditionVerdict lin = condition_star_estimate(Modulus::power(1.0), opt).verdict;
  const ConditionVerdict lol = condition_star_estimate(Modulus::linear_over_log(1.0), opt).verdict;
  const bool ok = worst <= 1e-9 && lin == ConditionVerdict::FailsOnWindow && lol == ConditionVerdict::FailsOnWindow;
  return {ok, fmt::format("max |estimate - n^-0.5| {:.3g}, Power(1) {}, LinearOverLog {}", worst, to_string(lin),
                          to_string(lol))};
}

Outcome criterion10(const fs::path& out) {
  const HPolyhedron P = cli::parse_polyhedron(nlohmann::json::parse(slurp(kData / "funnel3.json")));
  const Projection pr = build_projection(P);
  ProjectionCheckOptions po;
  po.lambdas = {1.0, 10.0, 100.0};
  const ProjectionReport rep = check_projection(P, pr.L, po);
  const auto orth = cli::run_command("reduce", kData / "pipeline_orthant.json", out / "c10_orthant");
  const auto strip = cli::run_command("reduce", kData / "pipeline_strip.json", out / "c10_strip");
  const bool ok = rep.valid() && rep.min_axis >= -1e-12 && orth.exit_code == cli::kGeometryError &&
                  orth.report["kind"] == "HypothesisViolated" && strip.exit_code == cli::kOutOfScope &&
                  strip.report["classification"] == "Strip";
  return {ok, fmt::format("funnel3 off-axis {:.3g}, ray checks {}/{} ok, orthant exit {}, strip exit {}",
                          rep.max_off_axis, rep.ray_checks - rep.ray_failures, rep.ray_checks, orth.exit_code,
                          strip.exit_code)};
}

Outcome criterion11(const cli::CommandResult& run) {
  bool ok = run.exit_code == cli::kPass;
  std::string d = fmt::format("exit {}", run.exit_code);
  if (run.report.contains("lifted")) {
    const auto& l = run.report["lifted"];
    for (const auto& s : l["semiconvexity"]) ok &= s["passed"].get<bool>() && s["samples"].get<std::size_t>() == 100000;
    const double ratio = l["witness"]["ratio"].get<double>();
    ok &= ratio <= 2.0 && ratio >= 0.5;
    d += fmt::format(", lifted growth {:.4g} vs planar {:.4g}", l["witness"]["growth"].get<double>(),
                     l["witness"]["planar_growth"].get<double>());
  } else {
    ok = false;
  }
  return {ok, d};
}

Outcome criterion12(const fs::path& out, const fs::path& first_pipeline) {
  bool ok = true;
  std::string d;
  const fs::path a = out / "c12_construct_a", b = out / "c12_construct_b";
  ok &= cli::run_command("construct", kData / "construct.json", a).exit_code == cli::kPass;
  ok &= cli::run_command("construct", kData / "construct.json", b).exit_code == cli::kPass;
  for (const char* f : {"verification.json", "witness.csv", "bundle.json"}) {
    const bool same = !slurp(a / f).empty() && slurp(a / f) == slurp(b / f);
    ok &= same;
    d += fmt::format("{} {}; ", f, same ? "identical" : "DIFFERS");
  }
  const fs::path p = out / "c12_pipeline";
  ok &= cli::run_command("pipeline", kData / "pipeline_funnel3.json", p).exit_code == cli::kPass;
  for (const char* f : {"report.json", "lifted_witness.csv"}) {
    const bool same = !slurp(p / f).empty() && slurp(p / f) == slurp(first_pipeline / f);
    ok &= same;
    d += fmt::format("pipeline {} {}; ", f, same ? "identical" : "DIFFERS");
  }
  return {ok, d};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "funnel_acceptance";
  fs::remove_all(out);
  fs::create_directories(out);
  int failed = 0;
  auto report = [&](int id, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
    std::cout << fmt::format("criterion {:>2}: {} | {}", id, o.pass ? "PASS" : "FAIL", o.detail) << std::endl;
  };

  double dp_secs = 0.0;
  std::shared_ptr<const OmegaEtaResult> dp;
  try {
    dp = standard_dp(1e6, {}, &dp_secs);
  } catch (const std::exception& e) {
    std::cerr << "DP failed: " << e.what() << "\n";
  }
  auto need_dp = [&]() -> const OmegaEtaResult& {
    if (!dp) throw std::runtime_error("omega_eta run unavailable");
    return *dp;
  };
  report(1, [&] { return criterion1(need_dp(), dp_secs); });
  report(2, criterion2);
  report(3, [&] { return criterion3(need_dp()); });
  report(4, [&] { need_dp(); return criterion4(dp); });

  std::unique_ptr<CounterexampleBundle> B, control;
  auto need_bundle = [&]() -> const CounterexampleBundle& {
    if (!B) B = std::make_unique<CounterexampleBundle>(bundle_for(Modulus::power(0.5)));
    return *B;
  };
  report(5, [&] { return criterion5(need_bundle()); });
  report(6, [&] { return criterion6(need_bundle()); });
  report(7, [&] { return criterion7(need_bundle()); });
  report(8, [&] {
    if (!control) control = std::make_unique<CounterexampleBundle>(bundle_for(Modulus::power(1.0)));
    return criterion8(need_bundle(), *control);
  });
  report(9, criterion9);
  report(10, [&] { return criterion10(out); });

  const fs::path first = out / "c11_pipeline";
  cli::CommandResult pipeline;
  report(11, [&] {
    pipeline = cli::run_command("pipeline", kData / "pipeline_funnel3.json", first);
    return criterion11(pipeline);
  });
  report(12, [&] { return criterion12(out, first); });

  std::cout << fmt::format("{} of 12 criteria passed", 12 - failed) << std::endl;
  return failed == 0 ? 0 : 1;
}
