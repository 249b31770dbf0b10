#include "funnel/cone.hpp"

#include <algorithm>
#include <cmath>

#include "funnel/error.hpp"

namespace funnel {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kTight = 1e-9;

Mat stack_rows(const std::vector<Vec>& rows, int n) {
  Mat M(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return M;
}

int rank_of_tight(const std::vector<Vec>& rows, const Vec& p, const Vec* q, int n) {
  std::vector<Vec> z;
  for (const Vec& a : rows) {
    if (std::abs(a.dot(p)) <= kTight && (!q || std::abs(a.dot(*q)) <= kTight)) z.push_back(a);
  }
  if (z.empty()) return 0;
  return numeric_rank(stack_rows(z, n));
}

}  // namespace

int numeric_rank(const Mat& M, double tol) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol * std::max(1.0, s[0])) ++r;
  }
  return r;
}

std::vector<Vec> orthonormal_basis(int n, const std::vector<Vec>& vs, double tol) {
  std::vector<Vec> out;
  for (const Vec& v : vs) {
    Vec w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& u : out) w -= u.dot(w) * u;
    }
    const double nw = w.norm();
    if (nw > tol * std::max(1.0, v.norm())) out.push_back(w / nw);
    if (static_cast<int>(out.size()) == n) break;
  }
  return out;
}

std::vector<Vec> orthogonal_complement(int n, const std::vector<Vec>& vs, double tol) {
  std::vector<Vec> all = orthonormal_basis(n, vs, tol);
  const std::size_t k = all.size();
  for (int i = 0; i < n; ++i) all.push_back(Vec::Unit(n, i));
  all = orthonormal_basis(n, all, tol);
  return std::vector<Vec>(all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
}

bool PolyCone::contains(const Vec& d, double tol) const {
  if (A.rows() == 0) return true;
  return (A * d).maxCoeff() <= tol * std::max(1.0, d.norm());
}

PolyCone cone_from_hform(int n, const Mat& A) {
  if (n < 1) fail(ErrorKind::Domain, "cone dimension must be positive");
  if (A.rows() > 0 && A.cols() != n) fail(ErrorKind::Domain, "constraint matrix has wrong width");

  std::vector<Vec> lines;
  for (int i = 0; i < n; ++i) lines.push_back(Vec::Unit(n, i));
  std::vector<Vec> rays;
  std::vector<Vec> done;

  for (Eigen::Index row = 0; row < A.rows(); ++row) {
    Vec a = A.row(row).transpose();
    const double na = a.norm();
    if (!(na > 0.0)) continue;
    a /= na;

    std::size_t li = lines.size();
    double best = kTight;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const double v = std::abs(a.dot(lines[i]));
      if (v > best) {
        best = v;
        li = i;
      }
    }
    if (li < lines.size()) {
      const Vec l = lines[li];
      const double al = a.dot(l);
      lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(li));
      for (Vec& o : lines) o -= (a.dot(o) / al) * l;
      for (Vec& r : rays) {
        r -= (a.dot(r) / al) * l;
        r.normalize();
      }
      rays.push_back((al > 0.0 ? -l : l).normalized());
      done.push_back(a);
      continue;
    }

    std::vector<Vec> pos, neg, next;
    std::vector<double> sp, sn;
    for (const Vec& r : rays) {
      const double s = a.dot(r);
      if (s > kTight) {
        pos.push_back(r);
        sp.push_back(s);
      } else if (s < -kTight) {
        neg.push_back(r);
        sn.push_back(s);
        next.push_back(r);
      } else {
        next.push_back(r);
      }
    }
    const int target = n - static_cast<int>(lines.size()) - 2;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = 0; j < neg.size(); ++j) {
        if (rank_of_tight(done, pos[i], &neg[j], n) != target) continue;
        Vec r = sp[i] * neg[j] - sn[j] * pos[i];
        const double nr = r.norm();
        if (nr > 0.0) next.push_back(r / nr);
      }
    }
    rays.swap(next);
    done.push_back(a);
  }

  PolyCone cone;
  cone.A = A.rows() > 0 ? A : Mat(0, n);
  cone.lineality = orthonormal_basis(n, lines);

  const int want = n - static_cast<int>(cone.lineality.size()) - 1;
  std::vector<Vec> rows;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double na = A.row(i).norm();
    if (na > 0.0) rows.push_back(A.row(i).transpose() / na);
  }
  for (Vec r : rays) {
    for (const Vec& l : cone.lineality) r -= l.dot(r) * l;
    const double nr = r.norm();
    if (!(nr > kTight)) continue;
    r /= nr;
    if (rank_of_tight(rows, r, nullptr, n) != want) continue;
    const bool dup = std::any_of(cone.rays.begin(), cone.rays.end(),
                                 [&](const Vec& s) { return (s - r).norm() < 1e-8; });
    if (!dup) cone.rays.push_back(r);
  }
  std::sort(cone.rays.begin(), cone.rays.end(), [](const Vec& x, const Vec& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size(),
                                        [](double u, double v) { return u > v + 1e-12; });
  });

  std::vector<Vec> gens = cone.rays;
  gens.insert(gens.end(), cone.lineality.begin(), cone.lineality.end());
  cone.span_dim = gens.empty() ? 0 : numeric_rank(stack_rows(gens, n));
  return cone;
}

PolyCone cone_from_generators(int n, const std::vector<Vec>& rays, const std::vector<Vec>& lines) {
  std::vector<Vec> rows;
  for (const Vec& r : rays) {
    if (r.norm() > kTight) rows.push_back(r.normalized());
  }
  for (const Vec& l : lines) {
    if (l.norm() > kTight) {
      rows.push_back(l.normalized());
      rows.push_back(-l.normalized());
    }
  }
  const PolyCone polar = cone_from_hform(n, rows.empty() ? Mat(0, n) : stack_rows(rows, n));
  std::vector<Vec> h = polar.rays;
  for (const Vec& l : polar.lineality) {
    h.push_back(l);
    h.push_back(-l);
  }
  return cone_from_hform(n, h.empty() ? Mat(0, n) : stack_rows(h, n));
}

}  // namespace funnel
