#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "funnel/cone.hpp"
#include "funnel/counterexample.hpp"
#include "funnel/hull.hpp"
#include "funnel/sampling.hpp"
#include "funnel/width.hpp"

namespace funnel {

using Mat = Eigen::MatrixXd;

/// {x : A x < c} (open) or {x : A x <= c}. Construction certifies a
/// non-empty interior and stores a deep interior point.
class HPolyhedron {
 public:
  HPolyhedron(Mat A, Vec c, bool open = true);

  int dim() const noexcept { return static_cast<int>(A_.cols()); }
  const Mat& A() const noexcept { return A_; }
  const Vec& c() const noexcept { return c_; }
  bool open() const noexcept { return open_; }
  const Vec& interior_point() const noexcept { return interior_; }
  /// Radius of the inscribed ball at interior_point() (capped at 1).
  double interior_radius() const noexcept { return radius_; }
  bool contains(const Vec& p) const;

 private:
  Mat A_;
  Vec c_;
  bool open_;
  Vec interior_;
  double radius_ = 0.0;
};

/// Chebyshev center with the radius capped at 1; nullopt if there is no interior.
std::optional<std::pair<Vec, double>> chebyshev_center(const Mat& A, const Vec& c);

/// {A d <= 0}; the open flag does not matter. Throws UnsupportedDimension for n > 6.
PolyCone recession_cone(const HPolyhedron& P);
bool has_full_cone(const HPolyhedron& P);
bool is_bounded(const HPolyhedron& P);

struct LinearMap {
  Mat M;  // rows x n
  double op_norm = 0.0;

  Vec operator()(const Vec& p) const { return M * p; }
};

LinearMap make_linear_map(Mat M);

struct ProjectionStep {
  std::string case_tag;  // "a", "b", "c" or "base"
  int from_dim = 0;
  Mat factor;            // (from_dim - 1) x from_dim, or 2 x 2 at the base
  Vec kernel;            // kernel direction in the from_dim space (empty at the base)
};

struct Projection {
  LinearMap L;  // 2 x n with orthonormal rows
  std::vector<ProjectionStep> steps;
};

/// Surjection onto R^2 mapping rec(P) into span{e1} with e1 in the image.
/// Throws ReductionNotApplicable unless 1 <= dim span rec(P) < n.
Projection build_projection(const HPolyhedron& P);

struct ProjectionReport {
  std::size_t generators = 0;
  double max_off_axis = 0.0;   // max |(L g)_2| / |g|
  double min_axis = 0.0;       // min (L g)_1 / |g| over rays and +-lines
  bool some_positive = false;  // some generator maps to a positive multiple of e1
  bool strip = false;          // -e1 in L(rec P)
  std::size_t ray_checks = 0;
  std::size_t ray_failures = 0;    // p + lambda r outside P
  std::size_t image_checks = 0;
  std::size_t image_failures = 0;  // L p + lambda e1 outside L(P)
  double min_image_margin = 0.0;

  bool valid(double tol = 1e-9) const {
    return max_off_axis <= tol && some_positive && ray_failures == 0 && image_failures == 0;
  }
};

struct ProjectionCheckOptions {
  std::size_t point_samples = 32;
  std::vector<double> lambdas{1.0, 10.0, 100.0};
  std::uint64_t seed = 1;
};

ProjectionReport check_projection(const HPolyhedron& P, const LinearMap& L,
                                  const ProjectionCheckOptions& opt = {});
/// Throws ProjectionInvalid when check_projection fails.
ProjectionReport verify_projection(const HPolyhedron& P, const LinearMap& L,
                                   const ProjectionCheckOptions& opt = {});

/// Largest s <= 1 with a z-preimage p satisfying a_i p + |a_i| s <= c_i (L p = z).
/// z lies in L(P) for open P iff the margin is positive.
std::optional<std::pair<Vec, double>> image_preimage(const HPolyhedron& P, const LinearMap& L,
                                                     const Vec& z);

/// Vertices of closure(P) intersected with the orthogonal complement of its lineality space.
std::vector<Vec> polyhedron_vertices(const HPolyhedron& P);

struct FunnelExtraction {
  Vec shift;                 // b, so that L(P) + b lies in the funnel of eta
  PiecewiseAffine upper;     // sup of y over closure(L(P)) + b at x (x >= 0)
  PiecewiseAffine lower;     // inf of y over closure(L(P)) + b at x
  Width eta;
  double axis_start = 0.0;   // {(x, 0) : x > axis_start} lies in L(P) + b
  std::vector<Point2> image_vertices;  // shifted
};

/// Funnel data for an image whose recession cone is the ray R+ e1.
FunnelExtraction extract_funnel(const HPolyhedron& P, const LinearMap& L);

enum class ReductionCase { Funnel, Strip };

struct StripData {
  Mat Q;   // 2 x 2
  Vec b;   // Q(L(P)) + b = R x (0, 1)
  double y_lo = 0.0;
  double y_hi = 0.0;
};

struct FunnelReduction {
  Projection projection;
  ProjectionReport report;
  ReductionCase kind = ReductionCase::Funnel;
  std::optional<FunnelExtraction> funnel;
  std::optional<StripData> strip;
};

/// Throws HypothesisViolated for bounded P or P containing a full-dimensional cone.
FunnelReduction reduce(const HPolyhedron& P, const ProjectionCheckOptions& opt = {});

/// F(p) = f0(L p + b), grad F = L^T grad f0(L p + b).
ScalarField pullback(const ScalarField& f0, const LinearMap& L, const Vec& b);

/// Points of P whose image under L + b has first coordinate in [x_lo, x_max].
class PolyhedronRegion : public ConvexRegion {
 public:
  PolyhedronRegion(const HPolyhedron& P, const LinearMap& L, Vec b, Width eta, double x_lo,
                   double x_max);

  int dim() const override { return P_.dim(); }
  bool contains(const Vec& p) const override;
  Vec sample(Rng& rng) const override;
  double extent() const override;

  /// Recession direction d with L d = e1.
  const Vec& axis_direction() const noexcept { return d_; }

 protected:
  double local_scale(const Vec& p) const override;

 private:
  double image_x(const Vec& p) const { return L_.M.row(0).dot(p) + b_[0]; }

  HPolyhedron P_;
  LinearMap L_;
  Vec b_;
  Width eta_;
  double x_lo_;
  double x_max_;
  Vec center_;
  Vec d_;
  double box_;
};

/// Recession generator d of P with L d = e1 (rescaled), preferring the shortest.
Vec axis_preimage_direction(const HPolyhedron& P, const LinearMap& L);

struct LiftedWitnessRow {
  double x;
  double W;
};

struct LiftedWitnessReport {
  Vec base_point;  // p0 with L p0 + b = (x0, 0)
  Vec direction;   // d with L d = e1
  double x0 = 1.0;
  std::vector<LiftedWitnessRow> rows;
  double growth = 0.0;  // W(last) / W(probe nearest x_ref)
};

/// |d_u F(p0 + (x - x0) d) - d_u F(p0)| / w((x - x0)|d|) with u the second row of L.
LiftedWitnessReport lifted_witness(const ScalarField& F, const Modulus& w, const HPolyhedron& P,
                                   const LinearMap& L, const Vec& b, double x0,
                                   const std::vector<double>& probes, double x_ref);

}  // namespace funnel
