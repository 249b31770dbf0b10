#include "funnel/omega_eta.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>

#include "funnel/error.hpp"

namespace funnel {

std::size_t AdaptiveGrid::floor_index(double x) const {
  if (x <= nodes.front()) return 0;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

std::size_t AdaptiveGrid::index_of(double x) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it == nodes.end() || *it != x) {
    fail(ErrorKind::Range, "h = " + std::to_string(x) + " is not a grid node");
  }
  return static_cast<std::size_t>(it - nodes.begin());
}

AdaptiveGrid build_grid(const Width& eta, const GridOptions& opt) {
  if (!(opt.t_max > 0.0) || !std::isfinite(opt.t_max)) fail(ErrorKind::Config, "t_max must be positive");
  if (!(opt.gamma > 1.0)) fail(ErrorKind::Config, "gamma must exceed 1");
  if (!(opt.rho >= 2.0)) fail(ErrorKind::Config, "rho must be at least 2");
  if (!(opt.h_min > 0.0)) fail(ErrorKind::Config, "h_min must be positive");
  if (opt.cap < 2) fail(ErrorKind::Config, "grid cap must be at least 2");

  AdaptiveGrid g;
  g.gamma = opt.gamma;
  g.rho = opt.rho;
  g.t_max = opt.t_max;
  g.nodes.push_back(0.0);

  const double x1 = std::min({opt.h_min, eta(0.0) / opt.rho, opt.t_max});
  double x = x1;
  g.nodes.push_back(x);
  while (x < opt.t_max) {
    const double step = std::min((opt.gamma - 1.0) * std::max(x, x1), eta(x) / opt.rho);
    if (!(step > 0.0)) fail(ErrorKind::Domain, "grid step vanished at x = " + std::to_string(x));
    x = std::min(x + step, opt.t_max);
    g.nodes.push_back(x);
    if (g.nodes.size() > opt.cap) {
      fail(ErrorKind::GridTooFine, "grid needs more than " + std::to_string(opt.cap) +
                                       " nodes (reached x = " + std::to_string(x) + ")");
    }
  }

  std::vector<double> extra;
  for (double a : opt.anchors) {
    if (a > 0.0 && a < opt.t_max && !std::binary_search(g.nodes.begin(), g.nodes.end(), a)) {
      extra.push_back(a);
    }
  }
  if (!extra.empty()) {
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    std::vector<double> merged;
    merged.reserve(g.nodes.size() + extra.size());
    std::merge(g.nodes.begin(), g.nodes.end(), extra.begin(), extra.end(),
               std::back_inserter(merged));
    g.nodes.swap(merged);
    if (g.nodes.size() > opt.cap) {
      fail(ErrorKind::GridTooFine, "grid with anchors exceeds " + std::to_string(opt.cap) + " nodes");
    }
  }
  return g;
}

double segment_cost(double x_prev, double x, const Width& eta, const Modulus& w) {
  if (!(x > x_prev) || x_prev < 0.0) fail(ErrorKind::Domain, "segment must satisfy 0 <= x_prev < x");
  const double len = x - x_prev;
  return std::max(1.0, len / eta(x)) * w(len);
}

OmegaEtaResult compute_omega_eta(const Modulus& w, const Width& eta, const AdaptiveGrid& grid,
                                 const DpOptions& opt) {
  const std::vector<double>& xs = grid.nodes;
  const std::size_t n = xs.size();
  if (n < 2 || xs.front() != 0.0) fail(ErrorKind::Domain, "grid must start at 0 with a positive node");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs[i] > xs[i - 1])) fail(ErrorKind::Domain, "grid nodes must be strictly increasing");
  }
  if (xs.back() > w.domain_end() || eta(xs.back()) > w.domain_end()) {
    fail(ErrorKind::Range, "modulus samples do not cover the grid span and eta(t_max)");
  }

  std::vector<double> vals(n, 0.0);
  std::vector<std::size_t> pred(n, 0);
  for (std::size_t k = 1; k < n; ++k) {
    const double xk = xs[k];
    const double ek = eta(xk);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = k; j-- > 0;) {
      const double len = xk - xs[j];
      const double cost = std::max(1.0, len / ek) * w(len);
      if (opt.prune && cost >= best) break;
      const double cand = vals[j] + cost;
      if (cand < best) {
        best = cand;
        arg = j;
      }
    }
    vals[k] = best;
    pred[k] = arg;
  }

  const bool assert_lower = w.concave_by_construction() || is_concave_on_grid(*w.samples(), 1e-12);
  std::vector<double> lo(n, 0.0), hi(n, 0.0);
  double drop = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double h = xs[k];
    const double e = eta(h);
    lo[k] = h * w(e) / e;
    hi[k] = std::max(1.0, h / e) * w(h);
    const double tl = opt.sandwich_tol * std::max(1.0, std::abs(lo[k]));
    const double th = opt.sandwich_tol * std::max(1.0, std::abs(hi[k]));
    if (vals[k] > hi[k] + th) {
      fail(ErrorKind::InternalConsistency, "DP value above the single-piece bound at h = " +
                                               std::to_string(h));
    }
    if (assert_lower && vals[k] < lo[k] - tl) {
      fail(ErrorKind::InternalConsistency, "DP value below the analytic lower bound at h = " +
                                               std::to_string(h));
    }
    drop = std::max(drop, vals[k - 1] - vals[k]);
  }

  return OmegaEtaResult{w,
                        eta,
                        grid,
                        GridFunction(xs, std::move(vals)),
                        std::move(pred),
                        GridFunction(xs, std::move(lo)),
                        GridFunction(xs, std::move(hi)),
                        assert_lower,
                        drop};
}

Partition optimal_partition(const OmegaEtaResult& r, double h) {
  std::size_t k = r.grid.index_of(h);
  if (k == 0) fail(ErrorKind::Range, "partition of [0, 0] requested");
  std::vector<double> pts;
  while (k != 0) {
    pts.push_back(r.grid.nodes[k]);
    k = r.predecessors[k];
  }
  pts.push_back(0.0);
  std::reverse(pts.begin(), pts.end());
  return Partition{std::move(pts)};
}

double partition_cost(const Partition& p, const Width& eta, const Modulus& w) {
  double s = 0.0;
  for (std::size_t i = 1; i < p.points.size(); ++i) s += segment_cost(p.points[i - 1], p.points[i], eta, w);
  return s;
}

double tau_grid(const OmegaEtaResult& r, double x) {
  const auto& xs = r.grid.nodes;
  std::size_t i = r.grid.floor_index(x);
  if (i + 1 >= xs.size()) i = xs.size() - 2;
  return 2.0 * segment_cost(xs[i], xs[i + 1], r.eta, r.omega);
}

StructuralReport check_structural_inequalities(const OmegaEtaResult& r,
                                               const std::vector<std::pair<double, double>>& pairs) {
  StructuralReport rep;
  const auto& xs = r.grid.nodes;
  const auto v = r.values.ys();
  for (const auto& [x_raw, h_raw] : pairs) {
    const std::size_t ix = r.grid.floor_index(x_raw);
    const std::size_t ih = r.grid.floor_index(h_raw);
    if (ix == 0 || ih == 0 || xs[ix] + xs[ih] > r.grid.t_max) {
      ++rep.pairs_skipped;
      continue;
    }
    const std::size_t is = r.grid.floor_index(xs[ix] + xs[ih]);
    if (is <= ix) {
      ++rep.pairs_skipped;
      continue;
    }
    ++rep.pairs_checked;
    const double x = xs[ix];
    const double s = xs[is];
    const double h_eff = s - x;
    const double tau = tau_grid(r, s);
    bool bad = false;

    const double sub = v[is] - v[ix] - v[ih] - tau;
    rep.max_subadditivity = std::max(rep.max_subadditivity, sub);
    bad |= sub > 0.0;

    const double est = v[is] - v[ix] - segment_cost(x, s, r.eta, r.omega) - tau;
    rep.max_est = std::max(rep.max_est, est);
    bad |= est > 0.0;

    const double ex = r.eta(x);
    if (h_eff >= ex / 2.0) {
      ++rep.est2_checked;
      const double est2 = v[is] - v[ix] - 2.0 * h_eff * r.omega(ex) / ex - tau;
      rep.max_est2 = std::max(rep.max_est2, est2);
      bad |= est2 > 0.0;
    }
    if (bad) ++rep.violations;
  }
  return rep;
}

LiminfRatioReport liminf_ratio_report(const OmegaEtaResult& r, double h_lo, double h_hi, int count) {
  if (!(h_lo > 0.0 && h_lo < h_hi) || h_hi > r.grid.t_max) {
    fail(ErrorKind::Config, "ratio window must satisfy 0 < h_lo < h_hi <= t_max");
  }
  LiminfRatioReport rep;
  std::size_t last = 0;
  for (double h : log_space(h_lo, h_hi, count)) {
    const std::size_t k = r.grid.floor_index(h);
    if (k == 0 || k == last) continue;
    last = k;
    const double node = r.grid.nodes[k];
    const double val = r.values.y(k);
    if (!(val > 0.0)) fail(ErrorKind::DegenerateModulus, "omega_eta vanishes at h = " + std::to_string(node));
    rep.rows.push_back({node, r.omega(node) / val});
  }
  if (rep.rows.empty()) fail(ErrorKind::Config, "ratio window contains no grid node");
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].ratio > rep.rows[i - 1].ratio) rep.non_increasing = false;
  }
  rep.first_ratio = rep.rows.front().ratio;
  rep.last_ratio = rep.rows.back().ratio;
  rep.decay = rep.last_ratio / rep.first_ratio;
  return rep;
}

}  // namespace funnel
