#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmech/types.hpp"

namespace gmech {

enum class GroupId { SO3, SE2, H3, R3 };

GroupId group_from_string(const std::string& name);
const char* to_string(GroupId id);

/// Coordinates of a Lie algebra element in the fixed basis {e_i}.
struct AlgebraVector {
  Vec c;
  AlgebraVector() = default;
  explicit AlgebraVector(Vec v) : c(std::move(v)) {}
};

/// Coordinates of a dual element in the dual basis, <eps_i, e_j> = delta_ij.
struct CoalgebraVector {
  Vec c;
  CoalgebraVector() = default;
  explicit CoalgebraVector(Vec v) : c(std::move(v)) {}
};

inline AlgebraVector operator+(const AlgebraVector& a, const AlgebraVector& b) {
  return AlgebraVector(a.c + b.c);
}
inline AlgebraVector operator-(const AlgebraVector& a, const AlgebraVector& b) {
  return AlgebraVector(a.c - b.c);
}
inline AlgebraVector operator*(double s, const AlgebraVector& a) { return AlgebraVector(s * a.c); }
inline CoalgebraVector operator+(const CoalgebraVector& a, const CoalgebraVector& b) {
  return CoalgebraVector(a.c + b.c);
}
inline CoalgebraVector operator-(const CoalgebraVector& a, const CoalgebraVector& b) {
  return CoalgebraVector(a.c - b.c);
}
inline CoalgebraVector operator*(double s, const CoalgebraVector& a) {
  return CoalgebraVector(s * a.c);
}

/// <mu, xi> in the fixed basis pair.
inline double pairing(const CoalgebraVector& mu, const AlgebraVector& xi) {
  return mu.c.dot(xi.c);
}

/// A point of a concrete group in its fixed faithful matrix representation.
struct GroupElement {
  GroupId id;
  Mat m;
};

/// Group descriptor: basis, structure constants, exponential and closure
/// projection for one concrete group.
///
/// Bases:
///   so(3) : hat matrices, (e_i)_{jk} = -eps_{ijk}; [e1,e2] = e3.
///   se(2) : rotation generator then the two translations.
///   h3    : strictly upper triangular units E12, E23, E13; [e1,e2] = e3.
///   r3    : translation slots of the homogeneous 4x4 representation.
class Group {
 public:
  static const Group& get(GroupId id);
  static const Group& get(const std::string& name) { return get(group_from_string(name)); }

  GroupId id() const { return id_; }
  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int mat_size() const { return mat_size_; }
  const Mat& basis(int i) const { return basis_[i]; }
  /// C[i][j][k]:  [e_i, e_j] = sum_k C[i][j][k] e_k.
  double structure_constant(int i, int j, int k) const { return c_[(i * dim_ + j) * dim_ + k]; }

  GroupElement identity() const;
  GroupElement exp(const AlgebraVector& xi) const;

  Mat algebra_to_matrix(const AlgebraVector& xi) const;
  AlgebraVector matrix_to_algebra(const Mat& m) const;

  /// Distance from the representation's closure constraints.
  double closure_residual(const GroupElement& g) const;
  /// Re-impose the closure constraints (polar projection for the rotation
  /// blocks, pattern enforcement for the nilpotent/abelian groups).
  void project(GroupElement& g) const;

 private:
  Group(GroupId id, std::string name, int mat_size, std::vector<Mat> basis);

  GroupId id_;
  std::string name_;
  int dim_;
  int mat_size_;
  std::vector<Mat> basis_;
  std::vector<double> basis_norm2_;
  std::vector<double> c_;
};

GroupElement group_mul(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

/// Adjoint action, Ad(g) xi = g xi g^{-1} in the representation.
/// Composition order: Ad(gh) = Ad(g) o Ad(h).
AlgebraVector Ad(const GroupElement& g, const AlgebraVector& xi);

/// Coadjoint action defined by <coAd(g,mu), xi> = <mu, Ad(g^{-1}) xi>.
CoalgebraVector coAd(const GroupElement& g, const CoalgebraVector& mu);

/// ad(xi,eta) = [xi,eta], the matrix commutator of the representation.
AlgebraVector ad(const Group& gr, const AlgebraVector& xi, const AlgebraVector& eta);

/// coad(xi,mu), the dual of ad: <coad(xi,mu), eta> = <mu, [xi,eta]>.
CoalgebraVector coad(const Group& gr, const AlgebraVector& xi, const CoalgebraVector& mu);

/// Scalar function on the group together with an optional analytic
/// directional derivative d/dt f(exp(t D) g) at t = 0.
struct GroupScalar {
  std::function<double(const GroupElement&)> value;
  std::function<double(const GroupElement&, const Mat& dir)> directional;  // may be empty
};

/// Right-trivialized gradient: component i is d/dt f(exp(t e_i) g) at t = 0.
/// Uses the analytic directional derivative when available, otherwise a
/// central finite difference with step h_fd.
CoalgebraVector rt_gradient(const Group& gr, const GroupScalar& f, const GroupElement& g,
                            double h_fd = 1e-6);

/// || d/dt coAd(exp(t xi), mu)|_0 + coad(xi, mu) ||, differenced with step h.
double check_Ad_to_ad(const Group& gr, const AlgebraVector& xi, const CoalgebraVector& mu,
                      double h = 1e-5);

}  // namespace gmech
