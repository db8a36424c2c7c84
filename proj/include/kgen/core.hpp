// Shared numeric types, error type and small dense linear-algebra helpers.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgen {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Point = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double Pi = 3.14159265358979323846;

// Largest supported matrix size (d <= 13 Clifford generators).
inline constexpr int MaxMatrixSize = 64;

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  not_irreducible,
  inconsistent_representation,
  not_chiral,
  domain_error,
  pole_error,
  lift_invalid,
  gap_closed,
  unsupported_dimension,
  parse_error,
  non_hermitian,
  invalid_chiral,
  enclosure_invalid,
  missing_chiral,
};

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::not_irreducible: return "not-irreducible";
    case Errc::inconsistent_representation: return "inconsistent-representation";
    case Errc::not_chiral: return "not-chiral";
    case Errc::domain_error: return "domain-error";
    case Errc::pole_error: return "pole-error";
    case Errc::lift_invalid: return "lift-invalid";
    case Errc::gap_closed: return "gap-closed";
    case Errc::unsupported_dimension: return "unsupported-dimension";
    case Errc::parse_error: return "parse-error";
    case Errc::non_hermitian: return "non-hermitian";
    case Errc::invalid_chiral: return "invalid-chiral";
    case Errc::enclosure_invalid: return "enclosure-invalid";
    case Errc::missing_chiral: return "missing-chiral";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Max absolute entry of a matrix; 0 for empty matrices.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix identity(int n) { return Matrix::Identity(n, n); }

inline double hermiticity_residual(const Matrix& m) { return max_abs(m - m.adjoint()); }

inline double unitarity_residual(const Matrix& m) {
  return max_abs(m.adjoint() * m - identity(static_cast<int>(m.cols())));
}

inline double anticommutator_residual(const Matrix& a, const Matrix& b) {
  return max_abs(a * b + b * a);
}

/// Applies a scalar function (real or complex valued) to a Hermitian matrix
/// through its eigendecomposition.
template <class F>
Matrix hermitian_apply(const Matrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& ev = es.eigenvalues();
  Eigen::VectorXcd fv(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) fv(k) = Complex(f(ev(k)));
  return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
}

// Eigenvalues of positive semidefinite arguments are clamped at this floor
// before taking roots.
inline constexpr double SqrtClamp = 1e-14;

inline Matrix hermitian_sqrt(const Matrix& h) {
  return hermitian_apply(h, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

inline Matrix hermitian_inv_sqrt(const Matrix& h) {
  return hermitian_apply(h, [](double v) { return 1.0 / std::sqrt(std::max(v, SqrtClamp)); });
}

inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& h) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline Eigen::VectorXd singular_values(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

inline double min_singular_value(const Matrix& m) {
  const auto sv = singular_values(m);
  return sv.size() == 0 ? 0.0 : sv.minCoeff();
}

inline double operator_norm(const Matrix& m) {
  const auto sv = singular_values(m);
  return sv.size() == 0 ? 0.0 : sv.maxCoeff();
}

/// Block matrix [[a, b], [c, d]] from equally sized square blocks.
inline Matrix block2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  const auto n = a.rows();
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a;
  out.topRightCorner(n, n) = b;
  out.bottomLeftCorner(n, n) = c;
  out.bottomRightCorner(n, n) = d;
  return out;
}

}  // namespace kgen
