#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "funnel/modulus.hpp"
#include "funnel/piecewise.hpp"
#include "funnel/width.hpp"

namespace funnel {

struct GridOptions {
  double t_max = 1e6;
  double gamma = 1.05;
  double rho = 4.0;
  std::size_t cap = 200000;
  /// Upper bound for the first positive node.
  double h_min = 1e-3;
  /// Extra abscissae inserted as nodes (points outside (0, t_max) are ignored).
  std::vector<double> anchors;
};

struct AdaptiveGrid {
  std::vector<double> nodes;  // 0 = nodes[0] < ... < nodes.back() = t_max
  double gamma = 0.0;
  double rho = 0.0;
  double t_max = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Index of the largest node <= x (x clamped to [0, t_max]).
  std::size_t floor_index(double x) const;
  /// Index of the node equal to x; throws Range if x is not a node.
  std::size_t index_of(double x) const;
};

/// Steps x_{k+1} - x_k = min((gamma - 1) max(x_k, x_1), eta(x_k) / rho) with
/// x_1 = min(h_min, eta(0) / rho). Throws GridTooFine past opt.cap nodes.
AdaptiveGrid build_grid(const Width& eta, const GridOptions& opt);

/// max(1, (x - x_prev) / eta(x)) * w(x - x_prev).
double segment_cost(double x_prev, double x, const Width& eta, const Modulus& w);

struct DpOptions {
  /// Stop scanning predecessors once the segment cost alone reaches the
  /// current best. Exact, since the cost grows with segment length.
  bool prune = true;
  /// Sandwich bounds are asserted up to tol * max(1, |bound|).
  double sandwich_tol = 1e-9;
};

struct OmegaEtaResult {
  Modulus omega;
  Width eta;
  AdaptiveGrid grid;
  GridFunction values;
  std::vector<std::size_t> predecessors;
  GridFunction lower_bound;  // h w(eta(h)) / eta(h)
  GridFunction upper_bound;  // max(1, h / eta(h)) w(h)
  /// False when the modulus is sampled and not concave; the lower bound is
  /// then reported but not asserted.
  bool lower_bound_asserted = true;
  /// Largest values[k-1] - values[k] (0 when values are non-decreasing).
  double max_monotone_drop = 0.0;

  /// Linear interpolation of the DP values.
  double value_at(double h) const { return values(h); }
};

/// Grid-restricted DP for the partition infimum. The result over-approximates
/// the true infimum. Throws InternalConsistency on a sandwich violation.
OmegaEtaResult compute_omega_eta(const Modulus& w, const Width& eta, const AdaptiveGrid& grid,
                                 const DpOptions& opt = {});

struct Partition {
  std::vector<double> points;  // 0 = points[0] < ... < points.back() = h
};

Partition optimal_partition(const OmegaEtaResult& r, double h);
double partition_cost(const Partition& p, const Width& eta, const Modulus& w);

/// Additive slack for inequalities at scale x: twice the cost of the grid step
/// starting at the node below x.
double tau_grid(const OmegaEtaResult& r, double x);

struct StructuralReport {
  std::size_t pairs_checked = 0;
  std::size_t pairs_skipped = 0;
  std::size_t est2_checked = 0;
  // Each max is over (lhs - rhs - tau); <= 0 means the inequality held.
  double max_subadditivity = -1e300;
  double max_est = -1e300;
  double max_est2 = -1e300;
  std::size_t violations = 0;

  bool passed() const noexcept { return violations == 0; }
};

/// Checks subadditivity and the two one-step estimates on pairs (x, h) snapped
/// to the node below; x + h is replaced by the node below x + h.
StructuralReport check_structural_inequalities(const OmegaEtaResult& r,
                                               const std::vector<std::pair<double, double>>& pairs);

struct RatioRow {
  double h;
  double ratio;  // w(h) / omega_eta(h)
};

struct LiminfRatioReport {
  std::vector<RatioRow> rows;
  double first_ratio = 0.0;
  double last_ratio = 0.0;
  double decay = 0.0;  // last_ratio / first_ratio
  bool non_increasing = true;
};

/// Tabulates w(h) / omega_eta(h) at log-spaced nodes of [h_lo, h_hi].
LiminfRatioReport liminf_ratio_report(const OmegaEtaResult& r, double h_lo, double h_hi,
                                      int count = 32);

}  // namespace funnel
