#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "funnel/width.hpp"

namespace funnel {

using Vec = Eigen::VectorXd;

/// Seeded generator; uniform draws use the top 53 bits so sequences do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi);
  double normal() { return normal_(eng_); }
  /// Uniform direction on the unit sphere of R^dim.
  Vec direction(int dim);

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
};

/// Differentiable function on a region of R^dim.
struct ScalarField {
  int dim = 2;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

class ConvexRegion {
 public:
  virtual ~ConvexRegion() = default;
  virtual int dim() const = 0;
  virtual bool contains(const Vec& p) const = 0;
  virtual Vec sample(Rng& rng) const = 0;
  /// A point of the region near p (falls back to sample()).
  virtual Vec sample_near(const Vec& p, Rng& rng) const;
  /// Bound on |p| over the region, used to bracket line traces.
  virtual double extent() const = 0;
  /// {t : a + t v in region} for a inside, as (t_lo, t_hi) found by bisection.
  std::optional<std::pair<double, double>> line_interval(const Vec& a, const Vec& v) const;

 protected:
  /// Typical local length scale at p for sample_near.
  virtual double local_scale(const Vec& p) const = 0;
};

/// {(x, y) : 0 < x <= x_max, |y| < eta(x)}; x is drawn log-uniform on [x_lo, x_max].
class FunnelRegion : public ConvexRegion {
 public:
  FunnelRegion(Width eta, double x_lo, double x_max);

  int dim() const override { return 2; }
  bool contains(const Vec& p) const override;
  Vec sample(Rng& rng) const override;
  double extent() const override;

  const Width& eta() const noexcept { return eta_; }
  double x_lo() const noexcept { return x_lo_; }
  double x_max() const noexcept { return x_max_; }

 protected:
  double local_scale(const Vec& p) const override;

 private:
  Width eta_;
  double x_lo_;
  double x_max_;
};

}  // namespace funnel
