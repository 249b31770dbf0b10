#include "funnel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "funnel/error.hpp"
#include "funnel/lp.hpp"

namespace funnel {

namespace {

constexpr double kTol = 1e-9;

Vec row_norms(const Mat& A) {
  Vec n(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) n[i] = A.row(i).norm();
  return n;
}

// max s (<= 1) subject to A p + |a_i| s <= c and E p = e.
std::optional<std::pair<Vec, double>> max_margin(const Mat& A, const Vec& c, const Mat& E, const Vec& e) {
  const Eigen::Index n = A.cols();
  const Eigen::Index m = A.rows();
  Mat Aub(m + 1, n + 1);
  Vec bub(m + 1);
  Aub.topLeftCorner(m, n) = A;
  Aub.topRightCorner(m, 1) = row_norms(A);
  Aub.row(m).setZero();
  Aub(m, n) = 1.0;
  bub.head(m) = c;
  bub[m] = 1.0;
  Mat Aeq(E.rows(), n + 1);
  if (E.rows() > 0) {
    Aeq.leftCols(n) = E;
    Aeq.col(n).setZero();
  }
  Vec obj = Vec::Zero(n + 1);
  obj[n] = 1.0;
  const LpResult r = linprog(obj, Aub, bub, Aeq, e);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  return std::make_pair(Vec(r.x.head(n)), r.x[n]);
}

Mat rows_to_matrix(const std::vector<Vec>& rows, int n) {
  Mat M(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return M;
}

// Points with distinct x (merged within tol), keeping the largest y.
std::vector<Point2> top_chain(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y > b.y);
  });
  std::vector<Point2> out;
  for (const Point2& p : pts) {
    if (!out.empty() && p.x - out.back().x <= 1e-12 * std::max(1.0, std::abs(p.x))) {
      out.back().y = std::max(out.back().y, p.y);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

PiecewiseAffine from_points(const std::vector<Point2>& h) {
  std::vector<double> xs, ys;
  for (const Point2& p : h) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  return PiecewiseAffine(std::move(xs), std::move(ys));
}

// Smallest x >= front with f(x') > 0 for every x' > x (f non-decreasing).
double positive_from(const PiecewiseAffine& f) {
  const auto xs = f.breakpoints();
  const auto ys = f.values();
  if (ys[0] > 0.0) return xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (ys[i] > 0.0) return xs[i - 1] + (0.0 - ys[i - 1]) * (xs[i] - xs[i - 1]) / (ys[i] - ys[i - 1]);
  }
  fail(ErrorKind::ExtractionFailed, "image never contains the axis");
}

}  // namespace

std::optional<std::pair<Vec, double>> chebyshev_center(const Mat& A, const Vec& c) {
  auto r = max_margin(A, c, Mat(0, A.cols()), Vec(0));
  if (!r || !(r->second > kTol)) return std::nullopt;
  return r;
}

HPolyhedron::HPolyhedron(Mat A, Vec c, bool open) : A_(std::move(A)), c_(std::move(c)), open_(open) {
  if (A_.cols() < 2) fail(ErrorKind::Config, "polyhedron must live in R^n with n >= 2");
  if (A_.rows() != c_.size()) fail(ErrorKind::Config, "polyhedron: A and c sizes differ");
  if (!A_.allFinite() || !c_.allFinite()) fail(ErrorKind::Config, "polyhedron data must be finite");
  const auto cc = chebyshev_center(A_, c_);
  if (!cc) fail(ErrorKind::Infeasible, "polyhedron has empty interior");
  interior_ = cc->first;
  radius_ = cc->second;
}

bool HPolyhedron::contains(const Vec& p) const {
  if (p.size() != dim()) return false;
  if (A_.rows() == 0) return true;
  const double worst = (A_ * p - c_).maxCoeff();
  return open_ ? worst < 0.0 : worst <= 0.0;
}

PolyCone recession_cone(const HPolyhedron& P) {
  if (P.dim() > 6) {
    fail(ErrorKind::UnsupportedDimension, "recession cones are supported up to n = 6, got n = " +
                                              std::to_string(P.dim()));
  }
  return cone_from_hform(P.dim(), P.A());
}

bool has_full_cone(const HPolyhedron& P) { return recession_cone(P).span_dim == P.dim(); }

bool is_bounded(const HPolyhedron& P) { return recession_cone(P).span_dim == 0; }

LinearMap make_linear_map(Mat M) {
  Eigen::JacobiSVD<Mat> svd(M);
  const double s = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  return LinearMap{std::move(M), s};
}

Projection build_projection(const HPolyhedron& P) {
  const int n = P.dim();
  const PolyCone rec = recession_cone(P);
  if (rec.span_dim < 1 || rec.span_dim >= n) {
    fail(ErrorKind::ReductionNotApplicable,
         "need 1 <= dim span rec(P) < n, got " + std::to_string(rec.span_dim) + " in R^" +
             std::to_string(n));
  }
  Projection out;
  Mat M = Mat::Identity(n, n);
  std::vector<Vec> rays = rec.rays;
  std::vector<Vec> lines = rec.lineality;
  int d = n;
  while (d > 2) {
    const std::vector<Vec> W = orthonormal_basis(d, lines);
    std::vector<Vec> gens = W;
    gens.insert(gens.end(), rays.begin(), rays.end());
    const std::vector<Vec> S = orthonormal_basis(d, gens);
    const int k = static_cast<int>(S.size());
    ProjectionStep step;
    step.from_dim = d;
    Vec w;
    if (k < d - 1) {
      step.case_tag = "a";
      w = orthogonal_complement(d, S)[0];
    } else if (W.empty()) {
      step.case_tag = "b";
      const PolyCone here = cone_from_generators(d, rays, lines);
      Mat B(d, 2);
      B.col(0) = S[0];
      B.col(1) = S[1];
      const PolyCone slice = cone_from_hform(2, here.A.rows() > 0 ? Mat(here.A * B) : Mat(0, 2));
      if (!slice.lineality.empty()) {
        fail(ErrorKind::InternalConsistency, "pointed cone has a planar slice with a line");
      }
      Eigen::Vector2d w2(1.0, 0.0);
      if (!slice.rays.empty()) {
        Eigen::Vector2d u = slice.rays[0];
        if (slice.rays.size() >= 2) u += slice.rays[1];
        w2 = Eigen::Vector2d(-u[1], u[0]).normalized();
      }
      w = (w2[0] * S[0] + w2[1] * S[1]).normalized();
    } else {
      step.case_tag = "c";
      w = W[0];
    }
    const Mat L1 = rows_to_matrix(orthogonal_complement(d, {w}), d);
    step.factor = L1;
    step.kernel = w;

    std::vector<Vec> r2, l2;
    for (const Vec& r : rays) {
      Vec v = L1 * r;
      if (v.norm() > kTol) r2.push_back(v);
    }
    for (const Vec& l : lines) {
      Vec v = L1 * l;
      if (v.norm() > kTol) l2.push_back(v);
    }
    const PolyCone img = cone_from_generators(d - 1, r2, l2);
    rays = img.rays;
    lines = img.lineality;
    M = L1 * M;
    out.steps.push_back(std::move(step));
    --d;
  }

  Vec u;
  if (!lines.empty()) {
    u = lines[0];
  } else if (rays.size() == 1) {
    u = rays[0];
  } else {
    fail(ErrorKind::InternalConsistency, "planar image cone is not one-dimensional");
  }
  u.normalize();
  Mat L2(2, 2);
  L2 << u[0], u[1], -u[1], u[0];
  M = L2 * M;
  ProjectionStep base;
  base.case_tag = "base";
  base.from_dim = 2;
  base.factor = L2;
  out.steps.push_back(std::move(base));
  out.L = make_linear_map(std::move(M));
  return out;
}

std::optional<std::pair<Vec, double>> image_preimage(const HPolyhedron& P, const LinearMap& L,
                                                     const Vec& z) {
  return max_margin(P.A(), P.c(), L.M, z);
}

ProjectionReport check_projection(const HPolyhedron& P, const LinearMap& L,
                                  const ProjectionCheckOptions& opt) {
  if (L.M.rows() != 2 || L.M.cols() != P.dim()) fail(ErrorKind::Domain, "map must be 2 x n");
  const PolyCone rec = recession_cone(P);
  std::vector<Vec> gens = rec.rays;
  for (const Vec& l : rec.lineality) {
    gens.push_back(l);
    gens.push_back(-l);
  }
  ProjectionReport rep;
  rep.generators = gens.size();
  rep.min_axis = std::numeric_limits<double>::infinity();
  Vec sum = Vec::Zero(P.dim());
  for (const Vec& g : gens) {
    const Vec img = L.M * g;
    const double ng = g.norm();
    rep.max_off_axis = std::max(rep.max_off_axis, std::abs(img[1]) / ng);
    rep.min_axis = std::min(rep.min_axis, img[0] / ng);
    if (img[0] / ng > kTol) rep.some_positive = true;
    if (img[0] / ng < -kTol) rep.strip = true;
    sum += g / ng;
  }
  if (gens.empty()) rep.min_axis = 0.0;

  Rng rng(opt.seed);
  Eigen::Vector2d e1(1.0, 0.0);
  rep.min_image_margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < opt.point_samples; ++s) {
    Vec p = P.interior_point() + 0.9 * P.interior_radius() * rng.uniform() * rng.direction(P.dim()) +
            rng.uniform(0.0, 10.0) * sum;
    if (!P.contains(p)) fail(ErrorKind::InternalConsistency, "interior sample left the polyhedron");
    for (double lam : opt.lambdas) {
      for (const Vec& g : gens) {
        ++rep.ray_checks;
        if (!P.contains(p + lam * g)) ++rep.ray_failures;
      }
      ++rep.image_checks;
      const auto pre = image_preimage(P, L, Vec(L.M * p + lam * e1));
      const double margin = pre ? pre->second : -std::numeric_limits<double>::infinity();
      rep.min_image_margin = std::min(rep.min_image_margin, margin);
      if (!(margin > kTol)) ++rep.image_failures;
    }
  }
  return rep;
}

ProjectionReport verify_projection(const HPolyhedron& P, const LinearMap& L,
                                   const ProjectionCheckOptions& opt) {
  ProjectionReport rep = check_projection(P, L, opt);
  if (!rep.valid()) {
    fail(ErrorKind::ProjectionInvalid,
         "projection check failed (off-axis " + std::to_string(rep.max_off_axis) +
             ", positive " + std::to_string(rep.some_positive) + ", ray failures " +
             std::to_string(rep.ray_failures) + ", image failures " +
             std::to_string(rep.image_failures) + ")");
  }
  return rep;
}

std::vector<Vec> polyhedron_vertices(const HPolyhedron& P) {
  const int n = P.dim();
  const PolyCone rec = recession_cone(P);
  const std::vector<Vec> U = orthogonal_complement(n, rec.lineality);
  const int r = static_cast<int>(U.size());
  if (r == 0) return {};
  Mat Um(n, r);
  for (int j = 0; j < r; ++j) Um.col(j) = U[static_cast<std::size_t>(j)];
  const Eigen::Index m = P.A().rows();
  Mat H(m + 1, r + 1);
  H.topLeftCorner(m, r) = P.A() * Um;
  H.topRightCorner(m, 1) = -P.c();
  H.row(m).setZero();
  H(m, r) = -1.0;
  const PolyCone homog = cone_from_hform(r + 1, H);
  std::vector<Vec> out;
  for (const Vec& g : homog.rays) {
    if (g[r] > kTol) out.push_back(Um * (g.head(r) / g[r]));
  }
  return out;
}

FunnelExtraction extract_funnel(const HPolyhedron& P, const LinearMap& L) {
  const std::vector<Vec> V = polyhedron_vertices(P);
  if (V.empty()) fail(ErrorKind::ExtractionFailed, "polyhedron has no vertices modulo lineality");
  std::vector<Point2> Q;
  for (const Vec& v : V) {
    const Vec z = L.M * v;
    Q.push_back({z[0], z[1]});
  }
  double xmin = Q[0].x, xmax = Q[0].x, ytop = Q[0].y, ybot = Q[0].y;
  for (const Point2& q : Q) {
    xmin = std::min(xmin, q.x);
    xmax = std::max(xmax, q.x);
    ytop = std::max(ytop, q.y);
    ybot = std::min(ybot, q.y);
  }
  Vec b(2);
  b << 0.0 - xmin, 0.0 - 0.5 * (ytop + ybot);
  const double top = 0.5 * (ytop - ybot);
  const double far = (xmax - xmin) + std::max(1.0, xmax - xmin);

  std::vector<Point2> up, down;
  for (Point2& q : Q) {
    q.x += b[0];
    q.y += b[1];
    up.push_back(q);
    down.push_back({q.x, -q.y});
  }
  up = top_chain(up);
  down = top_chain(down);
  up.push_back({far, top});
  down.push_back({far, top});
  const PiecewiseAffine upper = from_points(upper_hull(up));
  const PiecewiseAffine neg_lower = from_points(upper_hull(down));

  std::vector<double> xs(upper.breakpoints().begin(), upper.breakpoints().end());
  xs.insert(xs.end(), neg_lower.breakpoints().begin(), neg_lower.breakpoints().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Point2> mx;
  for (double x : xs) mx.push_back({x, std::max(upper(x), neg_lower(x))});
  std::vector<Point2> eh = upper_hull(mx);
  if (!(eh.front().y > 1e-12 * std::max(1.0, top))) {
    const double bump = 1e-6 * std::max(top, 1e-300);
    for (Point2& p : eh) p.y += bump;
  }

  FunnelExtraction fx{b, upper, neg_lower.scaled(-1.0), Width::piecewise(from_points(eh)), 0.0, Q};
  fx.axis_start = std::max(positive_from(upper), positive_from(neg_lower));
  return fx;
}

FunnelReduction reduce(const HPolyhedron& P, const ProjectionCheckOptions& opt) {
  const PolyCone rec = recession_cone(P);
  if (rec.span_dim == 0) fail(ErrorKind::HypothesisViolated, "G bounded");
  if (rec.span_dim == P.dim()) {
    fail(ErrorKind::HypothesisViolated, "contains a translate of a cone with non-empty interior");
  }
  FunnelReduction out;
  out.projection = build_projection(P);
  out.report = verify_projection(P, out.projection.L, opt);
  if (out.report.strip) {
    out.kind = ReductionCase::Strip;
    const Vec e2 = out.projection.L.M.row(1).transpose();
    const Mat none(0, P.dim());
    const LpResult hi = linprog(e2, P.A(), P.c(), none, Vec(0));
    const LpResult lo = linprog(-e2, P.A(), P.c(), none, Vec(0));
    if (hi.status != LpStatus::Optimal || lo.status != LpStatus::Optimal) {
      fail(ErrorKind::InternalConsistency, "strip image is unbounded across the axis");
    }
    StripData s;
    s.y_lo = -lo.value;
    s.y_hi = hi.value;
    const double width = s.y_hi - s.y_lo;
    s.Q = Mat::Identity(2, 2);
    s.Q(1, 1) = 1.0 / width;
    s.b = Vec(2);
    s.b << 0.0, -s.y_lo / width;
    out.strip = s;
  } else {
    out.kind = ReductionCase::Funnel;
    out.funnel = extract_funnel(P, out.projection.L);
  }
  return out;
}

ScalarField pullback(const ScalarField& f0, const LinearMap& L, const Vec& b) {
  if (f0.dim != 2 || L.M.rows() != 2 || b.size() != 2) fail(ErrorKind::Domain, "pullback needs a planar f0");
  ScalarField F;
  F.dim = static_cast<int>(L.M.cols());
  const Mat M = L.M;
  const Vec shift = b;
  const auto value = f0.value;
  const auto grad = f0.gradient;
  F.value = [M, shift, value](const Vec& p) { return value(Vec(M * p + shift)); };
  F.gradient = [M, shift, grad](const Vec& p) { return Vec(M.transpose() * grad(Vec(M * p + shift))); };
  return F;
}

Vec axis_preimage_direction(const HPolyhedron& P, const LinearMap& L) {
  const PolyCone rec = recession_cone(P);
  Vec best;
  for (const Vec& r : rec.rays) {
    const Vec img = L.M * r;
    if (img[0] > kTol && std::abs(img[1]) <= kTol * r.norm()) {
      Vec d = r / img[0];
      if (best.size() == 0 || d.norm() < best.norm()) best = d;
    }
  }
  if (best.size() == 0) fail(ErrorKind::ProjectionInvalid, "no recession ray maps onto the positive axis");
  return best;
}

PolyhedronRegion::PolyhedronRegion(const HPolyhedron& P, const LinearMap& L, Vec b, Width eta,
                                   double x_lo, double x_max)
    : P_(P), L_(L), b_(std::move(b)), eta_(std::move(eta)), x_lo_(x_lo), x_max_(x_max) {
  if (!(x_lo > 0.0 && x_lo < x_max)) fail(ErrorKind::Config, "region needs 0 < x_lo < x_max");
  d_ = axis_preimage_direction(P_, L_);
  center_ = P_.interior_point();
  box_ = 4.0 * (x_max_ + center_.lpNorm<Eigen::Infinity>() + 1.0);
}

bool PolyhedronRegion::contains(const Vec& p) const {
  if (!P_.contains(p)) return false;
  const double x = image_x(p);
  return x > 0.0 && x <= x_max_ && (p - center_).lpNorm<Eigen::Infinity>() <= box_;
}

double PolyhedronRegion::extent() const { return box_ + center_.norm(); }

double PolyhedronRegion::local_scale(const Vec& p) const { return eta_(std::max(image_x(p), 0.0)); }

Vec PolyhedronRegion::sample(Rng& rng) const {
  const double xt = rng.log_uniform(x_lo_, x_max_);
  Mat E = L_.M.row(0);
  Vec e(1);
  e[0] = xt - b_[0];
  const auto base = max_margin(P_.A(), P_.c(), E, e);
  if (!base || !(base->second > 0.0)) {
    fail(ErrorKind::DomainTruncation, "no interior point of P maps to x = " + std::to_string(xt));
  }
  const Vec p0 = base->first;
  const Vec u = rng.direction(dim());
  const auto span = line_interval(p0, u);
  if (!span) return p0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Vec p = p0 + rng.uniform(span->first, span->second) * u;
    if (contains(p)) return p;
  }
  return p0;
}

LiftedWitnessReport lifted_witness(const ScalarField& F, const Modulus& w, const HPolyhedron& P,
                                   const LinearMap& L, const Vec& b, double x0,
                                   const std::vector<double>& probes, double x_ref) {
  LiftedWitnessReport rep;
  rep.x0 = x0;
  Vec z(2);
  z << x0 - b[0], -b[1];
  const auto pre = image_preimage(P, L, z);
  if (!pre || !(pre->second > kTol)) {
    fail(ErrorKind::Domain, "(x0, 0) is not inside the shifted image");
  }
  rep.base_point = pre->first;
  rep.direction = axis_preimage_direction(P, L);
  const Vec u = L.M.row(1).transpose();
  const double du0 = F.gradient(rep.base_point).dot(u);
  const double dn = rep.direction.norm();
  for (double x : probes) {
    if (!(x > x0)) continue;
    const Vec p = rep.base_point + (x - x0) * rep.direction;
    const double W = std::abs(F.gradient(p).dot(u) - du0) / w((x - x0) * dn);
    rep.rows.push_back({x, W});
  }
  if (rep.rows.empty()) fail(ErrorKind::Domain, "no lifted witness probes beyond x0");
  const LiftedWitnessRow* ref = &rep.rows.front();
  for (const LiftedWitnessRow& r : rep.rows) {
    if (std::abs(std::log(r.x / x_ref)) < std::abs(std::log(ref->x / x_ref))) ref = &r;
  }
  rep.growth = rep.rows.back().W / ref->W;
  return rep;
}

}  // namespace funnel
