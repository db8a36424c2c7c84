// Generator fields of the K-groups of spheres and their Euclidean forms:
//
//   Weyl Hamiltonian   Q(x) = sum_{j<=d+1} x_j G_j          (d even, C_{d+1} rep)
//   Dirac phase        U(x) = sum_{j<=d} x_j G_j + i x_{d+1}  (d odd, C_d rep)
//   Dirac Hamiltonian  Q(x) = sum_{j<=d+1} x_j G_j          (d odd, C_{d+1} rep, chiral)
//
// plus the bounded transform T (1 + T^*T)^{-1/2} and the resolvent profile
// that witnesses the compact-resolvent condition.
#pragma once

#include "kgen/clifford.hpp"
#include "kgen/fields.hpp"
#include "kgen/sampling.hpp"

#include <utility>
#include <vector>

namespace kgen {

enum class FieldDomain { Sphere, Euclidean };

inline MatrixPolyField weyl_field(int d, const CliffordRep& rep, FieldDomain domain = FieldDomain::Sphere) {
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  if (domain == FieldDomain::Sphere && d % 2 != 0)
    throw Error(Errc::invalid_argument, "Weyl generator on the sphere requires even d");
  if (rep.d != d + 1) throw Error(Errc::dimension_mismatch, "Weyl field needs a representation of C_{d+1}");
  const DomainTag tag = domain == FieldDomain::Sphere ? DomainTag::sphere(d) : DomainTag::euclidean(d + 1);
  MatrixPolyField f(tag, rep.size());
  for (int j = 0; j <= d; ++j) f.add_linear(j, rep[j]);
  return f;
}

inline MatrixPolyField dirac_phase_field(int d, const CliffordRep& rep, FieldDomain domain = FieldDomain::Sphere) {
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  if (domain == FieldDomain::Sphere && d % 2 != 1)
    throw Error(Errc::invalid_argument, "Dirac phase on the sphere requires odd d");
  if (rep.d != d) throw Error(Errc::dimension_mismatch, "Dirac phase needs a representation of C_d");
  const DomainTag tag = domain == FieldDomain::Sphere ? DomainTag::sphere(d) : DomainTag::euclidean(d + 1);
  MatrixPolyField f(tag, rep.size());
  for (int j = 0; j < d; ++j) f.add_linear(j, rep[j]);
  f.add_linear(d, I * identity(rep.size()));
  return f;
}

struct ChiralField {
  MatrixPolyField field;
  Grading grading;
};

inline ChiralField dirac_hamiltonian_field(int d, const CliffordRep& rep) {
  if (d < 1 || d % 2 != 1) throw Error(Errc::invalid_argument, "Dirac Hamiltonian requires odd d");
  if (rep.d != d + 1) throw Error(Errc::dimension_mismatch, "Dirac Hamiltonian needs a representation of C_{d+1}");
  MatrixPolyField f(DomainTag::sphere(d), rep.size());
  for (int j = 0; j <= d; ++j) f.add_linear(j, rep[j]);
  return {std::move(f), grading_of(rep)};
}

/// Unitary W with W^* J W = diag(1_p, -1_q) for a Hermitian unitary J, and p.
struct ChiralBasis {
  Matrix w;
  int plus = 0;
};

inline ChiralBasis chiral_basis(const Matrix& j) {
  const int n = static_cast<int>(j.rows());
  // Diagonal +-1 gradings use a permutation so blocks come out without phase noise.
  if (max_abs(j - Matrix(j.diagonal().asDiagonal())) == 0.0) {
    std::vector<int> plus, minus;
    for (int k = 0; k < n; ++k) {
      const Complex v = j(k, k);
      if (v == Complex(1.0, 0.0)) plus.push_back(k);
      else if (v == Complex(-1.0, 0.0)) minus.push_back(k);
      else throw Error(Errc::invalid_chiral, "grading diagonal entries must be +-1");
    }
    Matrix w = Matrix::Zero(n, n);
    int col = 0;
    for (int k : plus) w(k, col++) = 1.0;
    for (int k : minus) w(k, col++) = 1.0;
    return {w, static_cast<int>(plus.size())};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(j);
  const auto& ev = es.eigenvalues();
  Matrix w(n, n);
  int plus = 0;
  for (int k = n - 1; k >= 0; --k) {  // ascending order; take +1 eigenvectors first
    if (std::abs(std::abs(ev(k)) - 1.0) > 1e-10) throw Error(Errc::invalid_chiral, "grading is not unitary");
    w.col(n - 1 - k) = es.eigenvectors().col(k);
    if (ev(k) > 0) ++plus;
  }
  return {w, plus};
}

/// Lower-left block of a chiral field written in the eigenbasis of the grading
/// ordered as diag(1, -1).
inline MatrixPolyField chiral_block(const MatrixPolyField& field, const Matrix& grading, double tol = 1e-12) {
  if (grading.rows() != field.size()) throw Error(Errc::dimension_mismatch, "grading size differs from field size");
  const double r = field.anticommutator_residual(grading);
  if (r > tol) throw Error(Errc::not_chiral, "field does not anti-commute with the grading (residual " + std::to_string(r) + ")");
  const ChiralBasis basis = chiral_basis(grading);
  const int n = field.size();
  if (2 * basis.plus != n) throw Error(Errc::not_chiral, "grading has unequal +1 and -1 eigenspaces");
  const int p = basis.plus;
  MatrixPolyField out(field.domain(), p);
  for (const auto& [a, m] : field.terms()) {
    const Matrix rotated = basis.w.adjoint() * m * basis.w;
    out.add_term(a, rotated.bottomLeftCorner(p, p));
  }
  return out;
}

inline MatrixPolyField chiral_block(const MatrixPolyField& field, const Grading& grading) {
  return chiral_block(field, grading.matrix);
}

/// F(T)(x) = T(x) (1 + T(x)^* T(x))^{-1/2}.
inline EvaluableField bounded_transform(const EvaluableField& field) {
  return {field.domain, field.size, [f = field.evaluator, n = field.size](const Point& x) {
            const Matrix t = f(x);
            return Matrix(t * hermitian_inv_sqrt(identity(n) + t.adjoint() * t));
          }};
}

inline EvaluableField bounded_transform(const MatrixPolyField& field) {
  if (field.domain().kind != DomainKind::Euclidean) throw Error(Errc::invalid_argument, "bounded transform acts on Euclidean fields");
  return bounded_transform(as_evaluable(field));
}

struct ResolventSample {
  double radius = 0.0;
  double sup_norm = 0.0;  // sup over directions of max(|(1+T^*T)^{-1}|, |(1+TT^*)^{-1}|)
};

/// Resolvent norms on spheres of the given radii, sampled over the coordinate
/// axes and `random_directions` seeded random directions.
inline std::vector<ResolventSample> compact_resolvent_profile(const EvaluableField& field, const std::vector<double>& radii,
                                                              int random_directions = 64, std::uint64_t seed = 1) {
  const int m = field.ambient_dim();
  const int n = field.size;
  std::vector<Point> dirs;
  for (int k = 0; k < m; ++k) {
    Point e = Point::Zero(m);
    e(k) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  Rng rng(seed);
  for (int k = 0; k < random_directions; ++k) dirs.push_back(sample_sphere(m, rng));

  std::vector<ResolventSample> out;
  for (double r : radii) {
    if (!(r >= 0.0)) throw Error(Errc::invalid_argument, "radii must be non-negative");
    double sup = 0.0;
    for (const auto& u : dirs) {
      const Matrix t = field(r * u);
      const Matrix a = (identity(n) + t.adjoint() * t).inverse();
      const Matrix b = (identity(n) + t * t.adjoint()).inverse();
      sup = std::max({sup, operator_norm(a), operator_norm(b)});
    }
    out.push_back({r, sup});
  }
  return out;
}

inline std::vector<ResolventSample> compact_resolvent_profile(const MatrixPolyField& field, const std::vector<double>& radii,
                                                              int random_directions = 64, std::uint64_t seed = 1) {
  return compact_resolvent_profile(as_evaluable(field), radii, random_directions, seed);
}

/// Decay verdict for a profile sampled at increasing radii: non-increasing and
/// below `tail` at the largest radius.
inline bool profile_decays(const std::vector<ResolventSample>& profile, double tail = 0.05) {
  if (profile.empty()) return false;
  for (std::size_t k = 1; k < profile.size(); ++k) {
    if (profile[k].radius <= profile[k - 1].radius) return false;
    if (profile[k].sup_norm > profile[k - 1].sup_norm + 1e-12) return false;
  }
  return profile.back().sup_norm < tail;
}

}  // namespace kgen
