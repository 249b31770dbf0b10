#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "funnel/counterexample.hpp"
#include "funnel/geometry.hpp"
#include "funnel/modulus.hpp"
#include "funnel/omega_eta.hpp"
#include "funnel/width.hpp"

namespace funnel::cli {

struct VerificationParams {
  std::size_t structural_pairs = 1000;
  std::size_t envelope_samples = 1000;
  std::size_t g_pairs = 10000;
  std::size_t semiconvexity_samples = 100000;
  std::size_t lifted_samples = 100000;
  std::size_t taylor_samples = 20000;
  std::size_t lines = 200;
  std::size_t pairs_per_line = 50;
  std::size_t projection_samples = 32;
  double C = 1.0;
  double rel_tol = 1e-9;
  double x_lo = 1e-3;  // smallest abscissa drawn by the region samplers
  double probe_lo = 10.0;
  double probe_hi = 1e6;
  int probe_count = 26;
  double x_ref = 1e3;
  double lifted_x0 = 1.0;
  double growth_factor = 2.0;  // allowed lifted/planar growth mismatch
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::optional<Modulus> omega;
  std::optional<Width> eta;
  std::optional<HPolyhedron> polyhedron;
  GridOptions grid;
  ConstructionOptions construction;
  ConditionStarOptions condition;
  VerificationParams verify;
  std::vector<double> probe_h;  // abscissae reported in partitions.txt
};

/// Throws Config on malformed input. Relative polyhedron paths resolve against base_dir.
PipelineConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                            std::optional<std::uint64_t> seed_override = std::nullopt);
PipelineConfig load_config(const std::filesystem::path& path,
                           std::optional<std::uint64_t> seed_override = std::nullopt);

Modulus parse_modulus(const nlohmann::json& j);
Width parse_width(const nlohmann::json& j);
HPolyhedron parse_polyhedron(const nlohmann::json& j);

}  // namespace funnel::cli
