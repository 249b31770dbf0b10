#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <memory>

#include <fmt/format.h>

#include "funnel/envelope.hpp"
#include "funnel/error.hpp"

namespace funnel::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::GridTooFine:
    case ErrorKind::DegenerateModulus:
    case ErrorKind::SubadditivityViolation:
      return kConfigError;
    case ErrorKind::Infeasible:
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::ReductionNotApplicable:
    case ErrorKind::ProjectionInvalid:
    case ErrorKind::ExtractionFailed:
    case ErrorKind::HypothesisViolated:
      return kGeometryError;
    default:
      return kConstructionError;
  }
}

namespace {

struct Run {
  const PipelineConfig& cfg;
  fs::path out;
  std::string stage = "setup";
  ojson checks = ojson::array();

  void check(const std::string& name, bool passed, ojson detail = ojson::object()) {
    ojson c;
    c["stage"] = stage;
    c["name"] = name;
    c["passed"] = passed;
    if (!detail.empty()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
  }

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ojson& c) { return c["passed"].get<bool>(); });
  }
};

const Modulus& need_omega(const PipelineConfig& cfg) {
  if (!cfg.omega) fail(ErrorKind::Config, "config needs a 'modulus'");
  return *cfg.omega;
}

const Width& need_eta(const PipelineConfig& cfg) {
  if (!cfg.eta) fail(ErrorKind::Config, "config needs a 'width'");
  return *cfg.eta;
}

const HPolyhedron& need_polyhedron(const PipelineConfig& cfg) {
  if (!cfg.polyhedron) fail(ErrorKind::Config, "config needs a 'polyhedron'");
  return *cfg.polyhedron;
}

std::vector<std::pair<double, double>> log_pairs(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.log_uniform(lo, hi);
    const double h = rng.log_uniform(lo, hi);
    out.emplace_back(x, h);
  }
  return out;
}

std::vector<double> witness_probes(const VerificationParams& v, double x_max) {
  std::vector<double> probes;
  for (double x : log_space(v.probe_lo, v.probe_hi, v.probe_count)) {
    if (x <= x_max) probes.push_back(x);
  }
  return probes;
}

ojson condition_json(const ConditionStarReport& c) {
  ojson j;
  j["verdict"] = to_string(c.verdict);
  j["infimum_estimate"] = c.infimum_estimate;
  ojson n = ojson::array(), v = ojson::array();
  for (const auto& [k, r] : c.per_n) {
    n.push_back(k);
    v.push_back(r);
  }
  j["n"] = std::move(n);
  j["estimate"] = std::move(v);
  return j;
}

std::shared_ptr<const OmegaEtaResult> stage_omega_eta(Run& run, const Modulus& omega, const Width& eta,
                                                      ojson& summary) {
  run.stage = "omega_eta";
  const PipelineConfig& cfg = run.cfg;
  const AdaptiveGrid grid = build_grid(eta, cfg.grid);
  auto r = std::make_shared<const OmegaEtaResult>(compute_omega_eta(omega, eta, grid));

  CsvWriter csv({"h", "omega_eta", "lower", "upper", "ratio"});
  double below = -1e300, above = -1e300;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double h = grid.nodes[k];
    const double v = r->values.y(k);
    const double lo = r->lower_bound.y(k);
    const double up = r->upper_bound.y(k);
    below = std::max(below, (lo - v) / std::max(1.0, std::abs(lo)));
    above = std::max(above, (v - up) / std::max(1.0, std::abs(up)));
    csv.row({h, v, lo, up, omega(h) / v});
  }
  write_file(run.out / "omega_eta.csv", csv.text());

  std::string parts;
  ojson probes = ojson::array();
  for (double h : cfg.probe_h) {
    const Partition p = optimal_partition(*r, h);
    const double cost = partition_cost(p, eta, omega);
    parts += fmt::format("h={} value={} cost={} pieces={}\n", format_double(h), format_double(r->value_at(h)),
                         format_double(cost), p.points.size() - 1);
    for (std::size_t i = 0; i < p.points.size(); ++i) parts += (i ? "," : "") + format_double(p.points[i]);
    parts += "\n";
    ojson pj;
    pj["h"] = h;
    pj["value"] = r->value_at(h);
    pj["partition_cost"] = cost;
    pj["pieces"] = p.points.size() - 1;
    probes.push_back(std::move(pj));
  }
  write_file(run.out / "partitions.txt", parts);

  const double tol = 1e-9;
  ojson sandwich;
  sandwich["max_lower_excess"] = below;
  sandwich["max_upper_excess"] = above;
  sandwich["lower_bound_asserted"] = r->lower_bound_asserted;
  sandwich["max_monotone_drop"] = r->max_monotone_drop;
  run.check("sandwich", (below <= tol || !r->lower_bound_asserted) && above <= tol, sandwich);

  Rng rng(cfg.seed + 3);
  const auto pairs = log_pairs(rng, cfg.verify.structural_pairs, grid.nodes[1], grid.t_max);
  const StructuralReport st = check_structural_inequalities(*r, pairs);
  ojson sj;
  sj["pairs_checked"] = st.pairs_checked;
  sj["pairs_skipped"] = st.pairs_skipped;
  sj["est2_checked"] = st.est2_checked;
  sj["max_subadditivity"] = st.max_subadditivity;
  sj["max_est"] = st.max_est;
  sj["max_est2"] = st.max_est2;
  sj["violations"] = st.violations;
  run.check("structural", st.passed(), sj);

  summary["omega"] = to_json(omega);
  summary["eta"] = to_json(eta);
  summary["nodes"] = grid.size();
  summary["t_max"] = grid.t_max;
  summary["probes"] = std::move(probes);

  const double hi = std::min(cfg.condition.h_hi, grid.t_max);
  const double lo = std::min(cfg.condition.h_lo, hi / 10.0);
  const LiminfRatioReport lr = liminf_ratio_report(*r, lo, hi);
  ojson lj;
  lj["h_lo"] = lo;
  lj["h_hi"] = hi;
  lj["first_ratio"] = lr.first_ratio;
  lj["last_ratio"] = lr.last_ratio;
  lj["decay"] = lr.decay;
  lj["non_increasing"] = lr.non_increasing;
  summary["ratio_window"] = std::move(lj);
  return r;
}

ojson condition_stage(Run& run, const Modulus& omega) {
  run.stage = "condition_star";
  if (omega.domain_end() < run.cfg.condition.h_hi) {
    ojson j;
    j["verdict"] = "Skipped";
    j["reason"] = "modulus domain ends before the condition window";
    return j;
  }
  const ConditionStarReport c = condition_star_estimate(omega, run.cfg.condition);
  ojson j = condition_json(c);
  if (c.verdict != ConditionVerdict::Holds) {
    const std::string warning = std::string("condition (*) ") +
                                (c.verdict == ConditionVerdict::FailsOnWindow ? "fails on window" : "is inconclusive");
    std::cerr << "warning: " << warning << "\n";
    j["warning"] = warning;
  }
  return j;
}

EnvelopeResult stage_envelope(Run& run, std::shared_ptr<const OmegaEtaResult> r, ojson& summary) {
  run.stage = "envelope";
  EnvelopeResult env = build_envelope(r);
  CsvWriter csv({"t", "psi", "right_slope"});
  const auto bp = env.psi.breakpoints();
  const auto vals = env.psi.values();
  const auto sl = env.psi.slopes();
  for (std::size_t i = 0; i < bp.size(); ++i) csv.row({bp[i], vals[i], i < sl.size() ? sl[i] : 0.0});
  write_file(run.out / "psi.csv", csv.text());

  const EnvelopeSandwichReport es = check_envelope_sandwich(env);
  const double scale = std::max(1.0, vals.back());
  ojson ej;
  ej["max_below"] = es.max_below;
  ej["max_above"] = es.max_above;
  ej["concave"] = es.concave;
  ej["monotone"] = es.monotone;
  run.check("envelope_sandwich", es.passed(1e-9 * scale), ej);

  Rng rng(run.cfg.seed + 4);
  std::vector<double> ts;
  for (std::size_t i = 0; i < run.cfg.verify.envelope_samples; ++i) ts.push_back(rng.log_uniform(r->grid.nodes[1], r->grid.t_max));
  const InequalityReport g = check_envelope_growth(env.psi, *r, ts);
  const auto pairs = log_pairs(rng, run.cfg.verify.envelope_samples, r->grid.nodes[1], r->grid.t_max);
  const InequalityReport u = check_psi_uniform_bound(env.psi, *r, pairs);
  for (const auto& [name, rep] : {std::pair{"envelope_growth", g}, std::pair{"psi_uniform_bound", u}}) {
    ojson j;
    j["samples"] = rep.samples;
    j["skipped"] = rep.skipped;
    j["max_violation"] = rep.max_violation;
    j["violations"] = rep.violations;
    run.check(name, rep.passed(), j);
  }
  summary["breakpoints"] = bp.size();
  return env;
}

struct Construction {
  CounterexampleBundle bundle;
  DivergenceReport divergence;
};

Construction stage_construct(Run& run, const EnvelopeResult& env, ojson& verification) {
  run.stage = "construct";
  const PipelineConfig& cfg = run.cfg;
  const VerificationParams& v = cfg.verify;
  Construction c{build_counterexample(env, cfg.construction), {}};
  const CounterexampleBundle& B = c.bundle;

  ojson bundle;
  bundle["omega"] = to_json(B.omega());
  bundle["eta"] = to_json(B.eta());
  bundle["t_max"] = env.t_max();
  bundle["a"] = B.a;
  bundle["q"] = B.q;
  bundle["b"] = B.b;
  bundle["x_max"] = B.x_max;
  bundle["delta"] = to_json(B.delta);
  write_json(run.out / "bundle.json", bundle);

  run.stage = "verify_planar";
  Rng rng(cfg.seed + 5);
  const auto pairs = log_pairs(rng, v.g_pairs, 1e-3, B.x_max);
  for (const VerificationReport& r : verify_g_conditions(B, pairs)) {
    verification["g_conditions"].push_back(to_json(r));
    run.check(r.name, r.passed);
  }

  const FunnelRegion region(B.eta(), v.x_lo, B.x_max);
  const ScalarField f = B.as_field();
  SemiconvexityOptions so;
  so.samples = v.semiconvexity_samples;
  so.seed = cfg.seed;
  so.C = v.C;
  so.rel_tol = v.rel_tol;
  for (const VerificationReport& r : verify_semiconvexity(f, B.omega(), region, so)) {
    verification["semiconvexity"].push_back(to_json(r));
    run.check(r.name, r.passed);
  }

  TaylorOptions to;
  to.samples = v.taylor_samples;
  to.seed = cfg.seed + 1;
  verification["taylor"] = to_json(verify_taylor_bound(f, B.omega(), region, to));
  LineOptions lo;
  lo.lines = v.lines;
  lo.pairs_per_line = v.pairs_per_line;
  lo.seed = cfg.seed + 2;
  verification["line_modulus"] = to_json(verify_line_modulus(f, B.omega(), region, lo));

  run.stage = "divergence";
  const std::vector<double> probes = witness_probes(v, B.x_max);
  c.divergence = divergence_witness(B, probes, v.x_ref);
  CsvWriter csv({"x", "W", "lower"});
  for (const WitnessRow& row : c.divergence.rows) csv.row({row.x, row.W, row.lower});
  write_file(run.out / "witness.csv", csv.text());
  ojson dj;
  dj["probes"] = c.divergence.rows.size();
  dj["skipped"] = c.divergence.skipped;
  dj["lower_bound_failures"] = c.divergence.lower_bound_failures;
  dj["x_ref"] = c.divergence.x_ref;
  dj["x_hi"] = c.divergence.x_hi;
  dj["growth"] = c.divergence.growth;
  verification["divergence"] = dj;
  run.check("divergence_lower_bound", c.divergence.lower_bound_failures == 0 && !c.divergence.rows.empty(), dj);
  return c;
}

ojson reduction_json(const HPolyhedron& P, const FunnelReduction& R) {
  const PolyCone rec = recession_cone(P);
  ojson j;
  j["dimension"] = P.dim();
  ojson rj;
  rj["span_dim"] = rec.span_dim;
  rj["rays"] = ojson::array();
  for (const Vec& r : rec.rays) rj["rays"].push_back(to_json(r));
  rj["lineality"] = ojson::array();
  for (const Vec& l : rec.lineality) rj["lineality"].push_back(to_json(l));
  j["recession_cone"] = std::move(rj);
  j["classification"] = R.kind == ReductionCase::Funnel ? "Funnel" : "Strip";
  j["L"] = to_json(R.projection.L.M);
  j["op_norm"] = R.projection.L.op_norm;
  ojson steps = ojson::array();
  for (const ProjectionStep& s : R.projection.steps) {
    ojson sj;
    sj["case"] = s.case_tag;
    sj["from_dim"] = s.from_dim;
    if (s.kernel.size() > 0) sj["kernel"] = to_json(s.kernel);
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  ojson vr;
  vr["generators"] = R.report.generators;
  vr["max_off_axis"] = R.report.max_off_axis;
  vr["min_axis"] = R.report.min_axis;
  vr["some_positive"] = R.report.some_positive;
  vr["strip"] = R.report.strip;
  vr["ray_checks"] = R.report.ray_checks;
  vr["ray_failures"] = R.report.ray_failures;
  vr["image_checks"] = R.report.image_checks;
  vr["image_failures"] = R.report.image_failures;
  vr["min_image_margin"] = R.report.min_image_margin;
  vr["valid"] = R.report.valid();
  j["projection_check"] = std::move(vr);
  if (R.funnel) {
    ojson fj;
    fj["b"] = to_json(R.funnel->shift);
    fj["eta"] = to_json(*R.funnel->eta.pieces());
    fj["upper"] = to_json(R.funnel->upper);
    fj["lower"] = to_json(R.funnel->lower);
    fj["axis_start"] = R.funnel->axis_start;
    j["funnel"] = std::move(fj);
  }
  if (R.strip) {
    ojson sj;
    sj["Q"] = to_json(R.strip->Q);
    sj["b"] = to_json(R.strip->b);
    sj["y_lo"] = R.strip->y_lo;
    sj["y_hi"] = R.strip->y_hi;
    j["strip"] = std::move(sj);
  }
  return j;
}

const char* kStripMessage = "classified Strip; witness out of scope (external reference)";

std::optional<FunnelReduction> stage_reduce(Run& run, ojson& reduction) {
  run.stage = "reduce";
  const HPolyhedron& P = need_polyhedron(run.cfg);
  ProjectionCheckOptions po;
  po.point_samples = run.cfg.verify.projection_samples;
  po.seed = run.cfg.seed + 6;
  FunnelReduction R = reduce(P, po);
  reduction = reduction_json(P, R);
  write_json(run.out / "reduction.json", reduction);
  run.check("projection", R.report.valid());
  return R;
}

CommandResult guarded(const char* command, const PipelineConfig& cfg, const fs::path& out,
                      const std::function<CommandResult(Run&)>& body) {
  Run run{cfg, out};
  try {
    fs::create_directories(out);
    return body(run);
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_code_for(e.kind());
    r.report["command"] = command;
    r.report["stage"] = run.stage;
    r.report["kind"] = to_string(e.kind());
    r.report["message"] = e.what();
    r.report["exit_code"] = r.exit_code;
    std::cerr << "error [" << run.stage << "]: " << e.what() << "\n";
    std::error_code ec;
    if (fs::is_directory(out, ec)) write_json(out / "error.json", r.report);
    return r;
  }
}

CommandResult finish(Run& run, ojson report, const fs::path& file) {
  CommandResult r;
  report["checks"] = run.checks;
  report["passed"] = run.all_passed();
  r.exit_code = run.all_passed() ? kPass : kCheckFailed;
  write_json(run.out / file, report);
  r.report = std::move(report);
  return r;
}

}  // namespace

CommandResult cmd_omega_eta(const PipelineConfig& cfg, const fs::path& out) {
  return guarded("omega-eta", cfg, out, [](Run& run) {
    ojson summary;
    summary["command"] = "omega-eta";
    summary["seed"] = run.cfg.seed;
    stage_omega_eta(run, need_omega(run.cfg), need_eta(run.cfg), summary);
    summary["condition_star"] = condition_stage(run, need_omega(run.cfg));
    return finish(run, std::move(summary), "omega_eta.json");
  });
}

CommandResult cmd_envelope(const PipelineConfig& cfg, const fs::path& out) {
  return guarded("envelope", cfg, out, [](Run& run) {
    ojson summary;
    summary["command"] = "envelope";
    summary["seed"] = run.cfg.seed;
    ojson oe;
    auto r = stage_omega_eta(run, need_omega(run.cfg), need_eta(run.cfg), oe);
    summary["omega_eta"] = std::move(oe);
    ojson env;
    stage_envelope(run, r, env);
    summary["envelope"] = std::move(env);
    return finish(run, std::move(summary), "envelope.json");
  });
}

CommandResult cmd_construct(const PipelineConfig& cfg, const fs::path& out) {
  return guarded("construct", cfg, out, [](Run& run) {
    ojson v;
    v["command"] = "construct";
    v["seed"] = run.cfg.seed;
    const Modulus& omega = need_omega(run.cfg);
    v["condition_star"] = condition_stage(run, omega);
    ojson oe, env;
    auto r = stage_omega_eta(run, omega, need_eta(run.cfg), oe);
    const EnvelopeResult e = stage_envelope(run, r, env);
    stage_construct(run, e, v);
    return finish(run, std::move(v), "verification.json");
  });
}

CommandResult cmd_reduce(const PipelineConfig& cfg, const fs::path& out) {
  return guarded("reduce", cfg, out, [](Run& run) {
    ojson red;
    const auto R = stage_reduce(run, red);
    if (R->kind == ReductionCase::Strip) {
      CommandResult r;
      r.exit_code = kOutOfScope;
      r.report = red;
      r.report["message"] = kStripMessage;
      write_json(run.out / "reduction.json", r.report);
      return r;
    }
    CommandResult r = finish(run, std::move(red), "reduction.json");
    return r;
  });
}

CommandResult cmd_pipeline(const PipelineConfig& cfg, const fs::path& out) {
  return guarded("pipeline", cfg, out, [](Run& run) {
    const PipelineConfig& c = run.cfg;
    const VerificationParams& v = c.verify;
    ojson report;
    report["command"] = "pipeline";
    report["seed"] = c.seed;
    const Modulus& omega = need_omega(c);
    const HPolyhedron& P = need_polyhedron(c);

    ojson red;
    const auto R = stage_reduce(run, red);
    report["classification"] = red["classification"];
    if (R->kind == ReductionCase::Strip) {
      report["message"] = kStripMessage;
      report["checks"] = run.checks;
      write_json(run.out / "report.json", report);
      return CommandResult{kOutOfScope, report};
    }
    const FunnelExtraction& fx = *R->funnel;
    report["condition_star"] = condition_stage(run, omega);

    ojson oe, env;
    auto r = stage_omega_eta(run, omega, fx.eta, oe);
    report["omega_eta"] = std::move(oe);
    const EnvelopeResult e = stage_envelope(run, r, env);
    report["envelope"] = std::move(env);
    ojson verification;
    verification["command"] = "pipeline";
    verification["seed"] = c.seed;
    const Construction con = stage_construct(run, e, verification);
    write_json(run.out / "verification.json", verification);
    const CounterexampleBundle& B = con.bundle;
    report["construction"] = {{"a", B.a}, {"q", B.q}, {"b", B.b}, {"x_max", B.x_max}};

    run.stage = "verify_lifted";
    if (!(v.lifted_x0 > fx.axis_start) || !(v.lifted_x0 < B.x_max)) {
      fail(ErrorKind::Config, "lifted_x0 must lie on the image axis inside (axis_start, x_max)");
    }
    const ScalarField F = pullback(B.as_field(), R->projection.L, fx.shift);
    const PolyhedronRegion region(P, R->projection.L, fx.shift, fx.eta, v.x_lo, B.x_max);
    SemiconvexityOptions so;
    so.samples = v.lifted_samples;
    so.seed = c.seed + 7;
    so.C = v.C;
    so.rel_tol = v.rel_tol;
    ojson lifted;
    for (const VerificationReport& rep : verify_semiconvexity(F, omega, region, so)) {
      lifted["semiconvexity"].push_back(to_json(rep));
      run.check("lifted_" + rep.name, rep.passed);
    }

    std::vector<double> probes;
    for (double x : witness_probes(v, B.x_max)) {
      if (x > v.lifted_x0) probes.push_back(x);
    }
    const LiftedWitnessReport lw = lifted_witness(F, omega, P, R->projection.L, fx.shift, v.lifted_x0,
                                                  probes, v.x_ref);
    CsvWriter csv({"x", "W_planar", "W_lifted"});
    for (const LiftedWitnessRow& row : lw.rows) {
      double planar = std::nan("");
      for (const WitnessRow& pr : con.divergence.rows) {
        if (pr.x == row.x) planar = pr.W;
      }
      csv.row({row.x, planar, row.W});
    }
    write_file(run.out / "lifted_witness.csv", csv.text());
    const double ratio = lw.growth / con.divergence.growth;
    ojson wj;
    wj["x0"] = lw.x0;
    wj["base_point"] = to_json(lw.base_point);
    wj["direction"] = to_json(lw.direction);
    wj["growth"] = lw.growth;
    wj["planar_growth"] = con.divergence.growth;
    wj["ratio"] = ratio;
    lifted["witness"] = wj;
    run.check("lifted_growth", std::isfinite(ratio) && ratio <= v.growth_factor && ratio >= 1.0 / v.growth_factor, wj);
    report["lifted"] = std::move(lifted);
    return finish(run, std::move(report), "report.json");
  });
}

CommandResult run_command(const std::string& name, const fs::path& config, const fs::path& out,
                          std::optional<std::uint64_t> seed_override) {
  std::optional<PipelineConfig> cfg;
  try {
    cfg = load_config(config, seed_override);
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_code_for(e.kind());
    r.report["command"] = name;
    r.report["stage"] = "config";
    r.report["kind"] = to_string(e.kind());
    r.report["message"] = e.what();
    r.report["exit_code"] = r.exit_code;
    std::cerr << "error [config]: " << e.what() << "\n";
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!ec) write_json(out / "error.json", r.report);
    return r;
  }
  if (name == "omega-eta") return cmd_omega_eta(*cfg, out);
  if (name == "envelope") return cmd_envelope(*cfg, out);
  if (name == "construct") return cmd_construct(*cfg, out);
  if (name == "reduce") return cmd_reduce(*cfg, out);
  if (name == "pipeline") return cmd_pipeline(*cfg, out);
  fail(ErrorKind::Config, "unknown command '" + name + "'");
}

}  // namespace funnel::cli
