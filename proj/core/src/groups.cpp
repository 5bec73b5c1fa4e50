#include "gmech/groups.hpp"

#include <cmath>

namespace gmech {

GroupId group_from_string(const std::string& name) {
  if (name == "so3") return GroupId::SO3;
  if (name == "se2") return GroupId::SE2;
  if (name == "h3") return GroupId::H3;
  if (name == "r3") return GroupId::R3;
  throw usage_error("unknown group id: " + name);
}

const char* to_string(GroupId id) {
  switch (id) {
    case GroupId::SO3: return "so3";
    case GroupId::SE2: return "se2";
    case GroupId::H3: return "h3";
    case GroupId::R3: return "r3";
  }
  return "?";
}

namespace {

Mat unit(int n, int r, int c) {
  Mat m = Mat::Zero(n, n);
  m(r, c) = 1.0;
  return m;
}

std::vector<Mat> so3_basis() {
  Mat e1 = Mat::Zero(3, 3), e2 = Mat::Zero(3, 3), e3 = Mat::Zero(3, 3);
  e1(2, 1) = 1; e1(1, 2) = -1;
  e2(0, 2) = 1; e2(2, 0) = -1;
  e3(1, 0) = 1; e3(0, 1) = -1;
  return {e1, e2, e3};
}

std::vector<Mat> se2_basis() {
  Mat e1 = Mat::Zero(3, 3);
  e1(1, 0) = 1; e1(0, 1) = -1;
  return {e1, unit(3, 0, 2), unit(3, 1, 2)};
}

std::vector<Mat> h3_basis() { return {unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)}; }

std::vector<Mat> r3_basis() { return {unit(4, 0, 3), unit(4, 1, 3), unit(4, 2, 3)}; }

// Polar factor of a near-rotation 2x2 block.
Eigen::Matrix2d polar2(const Eigen::Matrix2d& a) {
  const double c = 0.5 * (a(0, 0) + a(1, 1));
  const double s = 0.5 * (a(1, 0) - a(0, 1));
  const double n = std::hypot(c, s);
  Eigen::Matrix2d r;
  r << c / n, -s / n, s / n, c / n;
  return r;
}

}  // namespace

Group::Group(GroupId id, std::string name, int mat_size, std::vector<Mat> basis)
    : id_(id), name_(std::move(name)), dim_(static_cast<int>(basis.size())),
      mat_size_(mat_size), basis_(std::move(basis)) {
  basis_norm2_.resize(dim_);
  for (int i = 0; i < dim_; ++i) basis_norm2_[i] = basis_[i].squaredNorm();
  c_.assign(dim_ * dim_ * dim_, 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Mat comm = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      for (int k = 0; k < dim_; ++k)
        c_[(i * dim_ + j) * dim_ + k] = comm.cwiseProduct(basis_[k]).sum() / basis_norm2_[k];
    }
}

const Group& Group::get(GroupId id) {
  static const Group so3(GroupId::SO3, "so3", 3, so3_basis());
  static const Group se2(GroupId::SE2, "se2", 3, se2_basis());
  static const Group h3(GroupId::H3, "h3", 3, h3_basis());
  static const Group r3(GroupId::R3, "r3", 4, r3_basis());
  switch (id) {
    case GroupId::SO3: return so3;
    case GroupId::SE2: return se2;
    case GroupId::H3: return h3;
    case GroupId::R3: return r3;
  }
  throw usage_error("bad group id");
}

GroupElement Group::identity() const { return {id_, Mat::Identity(mat_size_, mat_size_)}; }

Mat Group::algebra_to_matrix(const AlgebraVector& xi) const {
  Mat m = Mat::Zero(mat_size_, mat_size_);
  for (int i = 0; i < dim_; ++i) m += xi.c[i] * basis_[i];
  return m;
}

AlgebraVector Group::matrix_to_algebra(const Mat& m) const {
  Vec v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = m.cwiseProduct(basis_[i]).sum() / basis_norm2_[i];
  return AlgebraVector(v);
}

GroupElement Group::exp(const AlgebraVector& xi) const {
  switch (id_) {
    case GroupId::SO3: {
      // Rodrigues, series near zero.
      const Vec& w = xi.c;
      const double t = w.norm();
      Mat k = algebra_to_matrix(xi);
      double a, b;
      if (t < 1e-6) {
        a = 1.0 - t * t / 6.0;
        b = 0.5 - t * t / 24.0;
      } else {
        a = std::sin(t) / t;
        b = (1.0 - std::cos(t)) / (t * t);
      }
      return {id_, Mat::Identity(3, 3) + a * k + b * (k * k)};
    }
    case GroupId::SE2: {
      const double th = xi.c[0];
      double s, c1;  // sin(th)/th, (1-cos(th))/th
      if (std::abs(th) < 1e-6) {
        s = 1.0 - th * th / 6.0;
        c1 = th / 2.0 - th * th * th / 24.0;
      } else {
        s = std::sin(th) / th;
        c1 = (1.0 - std::cos(th)) / th;
      }
      Mat g = Mat::Identity(3, 3);
      g(0, 0) = std::cos(th); g(0, 1) = -std::sin(th);
      g(1, 0) = std::sin(th); g(1, 1) = std::cos(th);
      g(0, 2) = s * xi.c[1] - c1 * xi.c[2];
      g(1, 2) = c1 * xi.c[1] + s * xi.c[2];
      return {id_, g};
    }
    case GroupId::H3: {
      // Nilpotent of order 3: exact.
      Mat n = algebra_to_matrix(xi);
      return {id_, Mat::Identity(3, 3) + n + 0.5 * (n * n)};
    }
    case GroupId::R3: {
      Mat g = Mat::Identity(4, 4);
      for (int i = 0; i < 3; ++i) g(i, 3) = xi.c[i];
      return {id_, g};
    }
  }
  throw usage_error("bad group id");
}

double Group::closure_residual(const GroupElement& g) const {
  switch (id_) {
    case GroupId::SO3: {
      double r = (g.m.transpose() * g.m - Mat::Identity(3, 3)).cwiseAbs().maxCoeff();
      return std::max(r, std::abs(g.m.determinant() - 1.0));
    }
    case GroupId::SE2: {
      Eigen::Matrix2d r = g.m.topLeftCorner<2, 2>();
      double res = (r.transpose() * r - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
      res = std::max(res, std::abs(r.determinant() - 1.0));
      res = std::max({res, std::abs(g.m(2, 0)), std::abs(g.m(2, 1)), std::abs(g.m(2, 2) - 1.0)});
      return res;
    }
    case GroupId::H3: {
      double res = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j)
          res = std::max(res, std::abs(g.m(i, j) - (i == j ? 1.0 : 0.0)));
      return res;
    }
    case GroupId::R3: {
      Mat d = g.m - Mat::Identity(4, 4);
      d.col(3).head(3).setZero();
      return d.cwiseAbs().maxCoeff();
    }
  }
  return 0.0;
}

void Group::project(GroupElement& g) const {
  switch (id_) {
    case GroupId::SO3: {
      // Newton iteration for the polar factor; quadratic from near-orthogonal.
      Mat x = g.m;
      for (int it = 0; it < 4; ++it) x = 0.5 * (x + x.transpose().inverse());
      g.m = x;
      break;
    }
    case GroupId::SE2: {
      Eigen::Matrix2d r = polar2(g.m.topLeftCorner<2, 2>());
      g.m.topLeftCorner<2, 2>() = r;
      g.m(2, 0) = 0; g.m(2, 1) = 0; g.m(2, 2) = 1;
      break;
    }
    case GroupId::H3: {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) g.m(i, j) = (i == j) ? 1.0 : 0.0;
      break;
    }
    case GroupId::R3: {
      Vec x = g.m.col(3).head(3);
      g.m = Mat::Identity(4, 4);
      g.m.col(3).head(3) = x;
      break;
    }
  }
}

GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
  if (g.id != h.id) throw usage_error("group_mul: mismatched group ids");
  return {g.id, g.m * h.m};
}

GroupElement inverse(const GroupElement& g) {
  switch (g.id) {
    case GroupId::SO3: return {g.id, g.m.transpose()};
    default: return {g.id, g.m.inverse()};
  }
}

AlgebraVector Ad(const GroupElement& g, const AlgebraVector& xi) {
  const Group& gr = Group::get(g.id);
  return gr.matrix_to_algebra(g.m * gr.algebra_to_matrix(xi) * inverse(g).m);
}

CoalgebraVector coAd(const GroupElement& g, const CoalgebraVector& mu) {
  const Group& gr = Group::get(g.id);
  GroupElement gi = inverse(g);
  Vec out(gr.dim());
  for (int i = 0; i < gr.dim(); ++i) {
    Vec e = Vec::Zero(gr.dim());
    e[i] = 1.0;
    out[i] = pairing(mu, Ad(gi, AlgebraVector(e)));
  }
  return CoalgebraVector(out);
}

AlgebraVector ad(const Group& gr, const AlgebraVector& xi, const AlgebraVector& eta) {
  const int n = gr.dim();
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = xi.c[i] * eta.c[j];
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out[k] += w * gr.structure_constant(i, j, k);
    }
  return AlgebraVector(out);
}

CoalgebraVector coad(const Group& gr, const AlgebraVector& xi, const CoalgebraVector& mu) {
  const int n = gr.dim();
  Vec out = Vec::Zero(n);
  // <coad(xi,mu), e_j> = <mu, [xi, e_j]>
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (xi.c[i] == 0.0) continue;
      for (int k = 0; k < n; ++k)
        out[j] += xi.c[i] * gr.structure_constant(i, j, k) * mu.c[k];
    }
  return CoalgebraVector(out);
}

CoalgebraVector rt_gradient(const Group& gr, const GroupScalar& f, const GroupElement& g,
                            double h_fd) {
  const int n = gr.dim();
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    if (f.directional) {
      out[i] = f.directional(g, gr.basis(i));
    } else {
      Vec e = Vec::Zero(n);
      e[i] = 1.0;
      GroupElement gp = group_mul(gr.exp(AlgebraVector(h_fd * e)), g);
      GroupElement gm = group_mul(gr.exp(AlgebraVector(-h_fd * e)), g);
      const double fp = f.value(gp), fm = f.value(gm);
      if (!std::isfinite(fp) || !std::isfinite(fm))
        throw numerical_error("rt_gradient: non-finite function value");
      out[i] = (fp - fm) / (2.0 * h_fd);
    }
  }
  if (!out.allFinite()) throw numerical_error("rt_gradient: non-finite gradient");
  return CoalgebraVector(out);
}

double check_Ad_to_ad(const Group& gr, const AlgebraVector& xi, const CoalgebraVector& mu,
                      double h) {
  GroupElement gp = gr.exp(AlgebraVector(h * xi.c));
  GroupElement gm = gr.exp(AlgebraVector(-h * xi.c));
  Vec deriv = (coAd(gp, mu).c - coAd(gm, mu).c) / (2.0 * h);
  return (deriv + coad(gr, xi, mu).c).norm();
}

}  // namespace gmech
