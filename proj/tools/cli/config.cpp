#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "funnel/error.hpp"

namespace funnel::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const char* where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(ErrorKind::Config, std::string(where) + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail(ErrorKind::Config, std::string(where) + ": unknown key '" + k + "'");
  }
}

double number(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) fail(ErrorKind::Config, std::string(where) + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) fail(ErrorKind::Config, std::string(where) + ": '" + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> maybe_number(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) return std::nullopt;
  return number(j, key, where);
}

double positive(const json& j, const char* key, const char* where, double fallback) {
  const double v = j.contains(key) ? number(j, key, where) : fallback;
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorKind::Config, std::string(where) + ": '" + key + "' must be positive and finite");
  }
  return v;
}

std::size_t count(const json& j, const char* key, const char* where, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    fail(ErrorKind::Config, std::string(where) + ": '" + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

std::vector<double> numbers(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    fail(ErrorKind::Config, std::string(where) + ": '" + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const json& v : j.at(key)) {
    if (!v.is_number()) fail(ErrorKind::Config, std::string(where) + ": '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string kind_of(const json& j, const char* where) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    fail(ErrorKind::Config, std::string(where) + " needs a string 'kind'");
  }
  return j.at("kind").get<std::string>();
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, path.string() + ": " + e.what());
  }
}

}  // namespace

Modulus parse_modulus(const json& j) {
  const std::string kind = kind_of(j, "modulus");
  if (kind == "power") {
    only_keys(j, "modulus", {"kind", "alpha"});
    return Modulus::power(number(j, "alpha", "modulus"));
  }
  if (kind == "power_log") {
    only_keys(j, "modulus", {"kind", "alpha", "beta", "C", "h0"});
    return Modulus::power_log(number(j, "alpha", "modulus"), number(j, "beta", "modulus"),
                              maybe_number(j, "C", "modulus"), maybe_number(j, "h0", "modulus"));
  }
  if (kind == "linear_over_log") {
    only_keys(j, "modulus", {"kind", "beta", "C", "h0"});
    return Modulus::linear_over_log(number(j, "beta", "modulus"), maybe_number(j, "C", "modulus"),
                                    maybe_number(j, "h0", "modulus"));
  }
  if (kind == "sampled") {
    only_keys(j, "modulus", {"kind", "xs", "ys"});
    try {
      return Modulus::sampled(GridFunction(numbers(j, "xs", "modulus"), numbers(j, "ys", "modulus")));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Domain) fail(ErrorKind::Config, std::string("modulus: ") + e.what());
      throw;
    }
  }
  fail(ErrorKind::Config, "modulus: unknown kind '" + kind + "'");
}

Width parse_width(const json& j) {
  const std::string kind = kind_of(j, "width");
  if (kind == "constant") {
    only_keys(j, "width", {"kind", "c"});
    return Width::constant(number(j, "c", "width"));
  }
  if (kind == "power_shift") {
    only_keys(j, "width", {"kind", "beta", "s"});
    return Width::power_shift(number(j, "beta", "width"), number(j, "s", "width"));
  }
  if (kind == "affine") {
    only_keys(j, "width", {"kind", "slope", "intercept"});
    return Width::affine(number(j, "slope", "width"), number(j, "intercept", "width"));
  }
  if (kind == "piecewise") {
    only_keys(j, "width", {"kind", "breakpoints", "values"});
    try {
      return Width::piecewise(
          PiecewiseAffine(numbers(j, "breakpoints", "width"), numbers(j, "values", "width")));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Domain) fail(ErrorKind::Config, std::string("width: ") + e.what());
      throw;
    }
  }
  fail(ErrorKind::Config, "width: unknown kind '" + kind + "'");
}

HPolyhedron parse_polyhedron(const json& j) {
  only_keys(j, "polyhedron", {"A", "c", "open"});
  if (!j.contains("A") || !j.at("A").is_array() || j.at("A").empty()) {
    fail(ErrorKind::Config, "polyhedron: 'A' must be a non-empty array of rows");
  }
  const json& rows = j.at("A");
  const std::vector<double> c = numbers(j, "c", "polyhedron");
  if (c.size() != rows.size()) fail(ErrorKind::Config, "polyhedron: 'A' and 'c' differ in length");
  const std::size_t n = rows[0].is_array() ? rows[0].size() : 0;
  Mat A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != n || n == 0) {
      fail(ErrorKind::Config, "polyhedron: rows of 'A' must be equally sized arrays");
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!rows[i][k].is_number()) fail(ErrorKind::Config, "polyhedron: 'A' must hold numbers");
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
    }
  }
  bool open = true;
  if (j.contains("open")) {
    if (!j.at("open").is_boolean()) fail(ErrorKind::Config, "polyhedron: 'open' must be a boolean");
    open = j.at("open").get<bool>();
  }
  return HPolyhedron(std::move(A), Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size())),
                     open);
}

PipelineConfig parse_config(const json& doc, const std::filesystem::path& base_dir,
                            std::optional<std::uint64_t> seed_override) {
  only_keys(doc, "config", {"seed", "modulus", "width", "polyhedron", "grid", "construction",
                            "condition_star", "verification", "probe_h"});
  PipelineConfig cfg;
  if (seed_override) {
    cfg.seed = *seed_override;
  } else if (doc.contains("seed") && doc.at("seed").is_number_unsigned()) {
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  } else if (doc.contains("seed") && doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() >= 0) {
    cfg.seed = static_cast<std::uint64_t>(doc.at("seed").get<long long>());
  } else {
    fail(ErrorKind::Config, "config: a non-negative integer 'seed' is mandatory");
  }

  if (doc.contains("modulus")) cfg.omega = parse_modulus(doc.at("modulus"));
  if (doc.contains("width")) cfg.eta = parse_width(doc.at("width"));
  if (doc.contains("polyhedron")) {
    const json& p = doc.at("polyhedron");
    if (p.is_string()) {
      std::filesystem::path file = p.get<std::string>();
      if (file.is_relative()) file = base_dir / file;
      cfg.polyhedron = parse_polyhedron(read_json(file));
    } else {
      cfg.polyhedron = parse_polyhedron(p);
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    only_keys(g, "grid", {"t_max", "gamma", "rho", "cap", "h_min", "anchors"});
    cfg.grid.t_max = positive(g, "t_max", "grid", cfg.grid.t_max);
    cfg.grid.gamma = positive(g, "gamma", "grid", cfg.grid.gamma);
    cfg.grid.rho = positive(g, "rho", "grid", cfg.grid.rho);
    cfg.grid.cap = count(g, "cap", "grid", cfg.grid.cap);
    cfg.grid.h_min = positive(g, "h_min", "grid", cfg.grid.h_min);
    if (g.contains("anchors")) cfg.grid.anchors = numbers(g, "anchors", "grid");
  }
  if (!(cfg.grid.gamma > 1.0)) fail(ErrorKind::Config, "grid: 'gamma' must exceed 1");

  if (doc.contains("construction")) {
    const json& c = doc.at("construction");
    only_keys(c, "construction", {"a_min", "eps_pos"});
    cfg.construction.a_min = positive(c, "a_min", "construction", cfg.construction.a_min);
    if (c.contains("eps_pos")) cfg.construction.eps_pos = positive(c, "eps_pos", "construction", 1.0);
  }

  if (doc.contains("condition_star")) {
    const json& c = doc.at("condition_star");
    only_keys(c, "condition_star", {"n_max", "h_lo", "h_hi", "samples", "eps_star", "tol"});
    cfg.condition.n_max = static_cast<int>(count(c, "n_max", "condition_star", 512));
    cfg.condition.h_lo = positive(c, "h_lo", "condition_star", cfg.condition.h_lo);
    cfg.condition.h_hi = positive(c, "h_hi", "condition_star", cfg.condition.h_hi);
    cfg.condition.samples = static_cast<int>(count(c, "samples", "condition_star", 64));
    cfg.condition.eps_star = positive(c, "eps_star", "condition_star", cfg.condition.eps_star);
    cfg.condition.tol = positive(c, "tol", "condition_star", cfg.condition.tol);
  }
  if (!(cfg.condition.h_lo < cfg.condition.h_hi)) {
    fail(ErrorKind::Config, "condition_star: need h_lo < h_hi");
  }

  if (doc.contains("verification")) {
    const json& v = doc.at("verification");
    VerificationParams& s = cfg.verify;
    only_keys(v, "verification",
              {"structural_pairs", "envelope_samples", "g_pairs", "semiconvexity_samples",
               "lifted_samples", "taylor_samples", "lines", "pairs_per_line", "projection_samples",
               "C", "rel_tol", "x_lo", "probe_lo", "probe_hi", "probe_count", "x_ref", "lifted_x0",
               "growth_factor"});
    const char* w = "verification";
    s.structural_pairs = count(v, "structural_pairs", w, s.structural_pairs);
    s.envelope_samples = count(v, "envelope_samples", w, s.envelope_samples);
    s.g_pairs = count(v, "g_pairs", w, s.g_pairs);
    s.semiconvexity_samples = count(v, "semiconvexity_samples", w, s.semiconvexity_samples);
    s.lifted_samples = count(v, "lifted_samples", w, s.lifted_samples);
    s.taylor_samples = count(v, "taylor_samples", w, s.taylor_samples);
    s.lines = count(v, "lines", w, s.lines);
    s.pairs_per_line = count(v, "pairs_per_line", w, s.pairs_per_line);
    s.projection_samples = count(v, "projection_samples", w, s.projection_samples);
    s.C = positive(v, "C", w, s.C);
    s.rel_tol = positive(v, "rel_tol", w, s.rel_tol);
    s.x_lo = positive(v, "x_lo", w, s.x_lo);
    s.probe_lo = positive(v, "probe_lo", w, s.probe_lo);
    s.probe_hi = positive(v, "probe_hi", w, s.probe_hi);
    s.probe_count = static_cast<int>(count(v, "probe_count", w, static_cast<std::size_t>(s.probe_count)));
    s.x_ref = positive(v, "x_ref", w, s.x_ref);
    s.lifted_x0 = positive(v, "lifted_x0", w, s.lifted_x0);
    s.growth_factor = positive(v, "growth_factor", w, s.growth_factor);
  }
  if (!(cfg.verify.probe_lo < cfg.verify.probe_hi) || cfg.verify.probe_count < 2) {
    fail(ErrorKind::Config, "verification: need probe_lo < probe_hi and probe_count >= 2");
  }
  if (!(cfg.verify.growth_factor >= 1.0)) fail(ErrorKind::Config, "verification: growth_factor must be >= 1");

  if (doc.contains("probe_h")) {
    cfg.probe_h = numbers(doc, "probe_h", "config");
    for (double h : cfg.probe_h) {
      if (!(h > 0.0 && h <= cfg.grid.t_max)) fail(ErrorKind::Config, "probe_h entries must lie in (0, t_max]");
      cfg.grid.anchors.push_back(h);
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  return parse_config(read_json(path), path.parent_path(), seed_override);
}

}  // namespace funnel::cli
