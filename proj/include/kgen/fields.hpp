// Matrix-valued fields on spheres, discs and Euclidean space.
#pragma once

#include "kgen/core.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace kgen {

enum class DomainKind { Sphere, ClosedDisc, Euclidean };

/// Domain of a field. `dim` is the intrinsic dimension: Sphere(d) lives in
/// R^{d+1}, ClosedDisc(m) and Euclidean(m) in R^m.
struct DomainTag {
  DomainKind kind = DomainKind::Euclidean;
  int dim = 0;

  int ambient_dim() const { return kind == DomainKind::Sphere ? dim + 1 : dim; }
  static DomainTag sphere(int d) { return {DomainKind::Sphere, d}; }
  static DomainTag disc(int m) { return {DomainKind::ClosedDisc, m}; }
  static DomainTag euclidean(int m) { return {DomainKind::Euclidean, m}; }
};

inline std::string to_string(const DomainTag& t) {
  switch (t.kind) {
    case DomainKind::Sphere: return "sphere(" + std::to_string(t.dim) + ")";
    case DomainKind::ClosedDisc: return "disc(" + std::to_string(t.dim) + ")";
    case DomainKind::Euclidean: return "euclidean(" + std::to_string(t.dim) + ")";
  }
  return "?";
}

using MultiIndex = std::vector<int>;

/// Value and ambient partial derivatives of a field at a point.
struct Jet {
  Matrix value;
  std::vector<Matrix> grad;
};

using JetFn = std::function<Jet(const Point&)>;

/// sum_alpha x^alpha M_alpha with exact evaluation and exact derivatives.
class MatrixPolyField {
 public:
  MatrixPolyField() = default;
  MatrixPolyField(DomainTag domain, int size) : domain_(domain), size_(size) {
    if (size < 1) throw Error(Errc::invalid_argument, "field size must be positive");
    if (domain.ambient_dim() < 1) throw Error(Errc::invalid_argument, "ambient dimension must be positive");
  }

  const DomainTag& domain() const { return domain_; }
  int ambient_dim() const { return domain_.ambient_dim(); }
  int size() const { return size_; }
  const std::map<MultiIndex, Matrix>& terms() const { return terms_; }

  MatrixPolyField with_domain(DomainTag domain) const {
    if (domain.ambient_dim() != ambient_dim()) throw Error(Errc::dimension_mismatch, "domain changes ambient dimension");
    MatrixPolyField f = *this;
    f.domain_ = domain;
    return f;
  }

  /// Adds `m` to the coefficient of x^powers.
  MatrixPolyField& add_term(const MultiIndex& powers, const Matrix& m) {
    if (static_cast<int>(powers.size()) != ambient_dim())
      throw Error(Errc::dimension_mismatch, "multi-index length differs from ambient dimension");
    for (int p : powers)
      if (p < 0) throw Error(Errc::invalid_argument, "negative exponent in multi-index");
    if (m.rows() != size_ || m.cols() != size_) throw Error(Errc::dimension_mismatch, "coefficient size differs from field size");
    auto [it, inserted] = terms_.try_emplace(powers, m);
    if (!inserted) it->second += m;
    return *this;
  }

  /// Adds `m` times the linear monomial x_j (0-based j).
  MatrixPolyField& add_linear(int j, const Matrix& m) {
    MultiIndex a(static_cast<std::size_t>(ambient_dim()), 0);
    a.at(static_cast<std::size_t>(j)) = 1;
    return add_term(a, m);
  }

  MatrixPolyField& add_constant(const Matrix& m) {
    return add_term(MultiIndex(static_cast<std::size_t>(ambient_dim()), 0), m);
  }

  int degree() const {
    int deg = 0;
    for (const auto& [a, m] : terms_) {
      int s = 0;
      for (int p : a) s += p;
      deg = std::max(deg, s);
    }
    return deg;
  }

  Matrix operator()(const Point& x) const {
    check_point(x);
    Matrix out = Matrix::Zero(size_, size_);
    for (const auto& [a, m] : terms_) out += monomial(a, x) * m;
    return out;
  }

  /// Exact partial derivative field d/dx_j (0-based j).
  MatrixPolyField partial(int j) const {
    if (j < 0 || j >= ambient_dim()) throw Error(Errc::invalid_argument, "derivative index out of range");
    MatrixPolyField out(domain_, size_);
    for (const auto& [a, m] : terms_) {
      const int p = a[static_cast<std::size_t>(j)];
      if (p == 0) continue;
      MultiIndex b = a;
      b[static_cast<std::size_t>(j)] = p - 1;
      out.add_term(b, static_cast<double>(p) * m);
    }
    return out;
  }

  Jet jet(const Point& x) const {
    check_point(x);
    Jet out{Matrix::Zero(size_, size_), std::vector<Matrix>(static_cast<std::size_t>(ambient_dim()), Matrix::Zero(size_, size_))};
    for (const auto& [a, m] : terms_) {
      out.value += monomial(a, x) * m;
      for (int j = 0; j < ambient_dim(); ++j) {
        const int p = a[static_cast<std::size_t>(j)];
        if (p == 0) continue;
        MultiIndex b = a;
        b[static_cast<std::size_t>(j)] = p - 1;
        out.grad[static_cast<std::size_t>(j)] += static_cast<double>(p) * monomial(b, x) * m;
      }
    }
    return out;
  }

  JetFn jet_fn() const {
    return [f = *this](const Point& x) { return f.jet(x); };
  }

  /// Max Hermiticity residual over coefficients; zero iff the field is
  /// Hermitian at every real point.
  double hermiticity_residual() const {
    double r = 0.0;
    for (const auto& [a, m] : terms_) r = std::max(r, kgen::hermiticity_residual(m));
    return r;
  }

  /// Max anti-commutator residual of the coefficients with a fixed matrix.
  double anticommutator_residual(const Matrix& g) const {
    double r = 0.0;
    for (const auto& [a, m] : terms_) r = std::max(r, kgen::anticommutator_residual(m, g));
    return r;
  }

  /// Conjugated field W^* F W for a constant matrix W.
  MatrixPolyField conjugated(const Matrix& w) const {
    if (w.rows() != size_ || w.cols() != size_) throw Error(Errc::dimension_mismatch, "conjugating matrix size");
    MatrixPolyField out(domain_, size_);
    for (const auto& [a, m] : terms_) out.add_term(a, w.adjoint() * m * w);
    return out;
  }

  /// Pull-back along the reflection x_j -> -x_j (0-based j).
  MatrixPolyField reflected(int j) const {
    MatrixPolyField out(domain_, size_);
    for (const auto& [a, m] : terms_) out.add_term(a, (a.at(static_cast<std::size_t>(j)) % 2 == 0 ? 1.0 : -1.0) * m);
    return out;
  }

 private:
  void check_point(const Point& x) const {
    if (x.size() != ambient_dim())
      throw Error(Errc::dimension_mismatch, "point has " + std::to_string(x.size()) + " coordinates, field expects " +
                                                std::to_string(ambient_dim()));
  }

  static double monomial(const MultiIndex& a, const Point& x) {
    double v = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k)
      for (int p = 0; p < a[k]; ++p) v *= x(static_cast<Eigen::Index>(k));
    return v;
  }

  DomainTag domain_{};
  int size_ = 0;
  std::map<MultiIndex, Matrix> terms_;
};

/// Block-diagonal direct sum of two fields over the same domain.
inline MatrixPolyField direct_sum(const MatrixPolyField& a, const MatrixPolyField& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(Errc::dimension_mismatch, "direct sum of fields on different domains");
  const int n = a.size() + b.size();
  MatrixPolyField out(a.domain(), n);
  for (const auto& [alpha, m] : a.terms()) {
    Matrix big = Matrix::Zero(n, n);
    big.topLeftCorner(a.size(), a.size()) = m;
    out.add_term(alpha, big);
  }
  for (const auto& [alpha, m] : b.terms()) {
    Matrix big = Matrix::Zero(n, n);
    big.bottomRightCorner(b.size(), b.size()) = m;
    out.add_term(alpha, big);
  }
  return out;
}

/// General matrix-valued function on a domain, for non-polynomial constructions.
struct EvaluableField {
  DomainTag domain;
  int size = 0;
  std::function<Matrix(const Point&)> evaluator;

  int ambient_dim() const { return domain.ambient_dim(); }
  Matrix operator()(const Point& x) const {
    if (x.size() != ambient_dim()) throw Error(Errc::dimension_mismatch, "point dimension differs from field domain");
    return evaluator(x);
  }
};

inline EvaluableField as_evaluable(const MatrixPolyField& f) {
  return {f.domain(), f.size(), [f](const Point& x) { return f(x); }};
}

}  // namespace kgen
