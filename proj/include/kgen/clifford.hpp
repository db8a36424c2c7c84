// Irreducible matrix representations of the complex Clifford algebras C_d.
//
// Representations are built iteratively from the 1x1 representation (+1) of
// C_1: a representation (s_1..s_k) of C_k, k odd, is extended to C_{k+2} by
//
//   G_i     = [[0, s_i], [s_i, 0]]   i <= k
//   G_{k+1} = [[0, i1], [-i1, 0]]
//   G_{k+2} = [[1, 0], [0, -1]]
//
// and truncated to k+1 generators for even algebras. All entries lie in
// {0, +-1, +-i}, so every algebraic identity below holds exactly in floating
// point.
#pragma once

#include "kgen/core.hpp"
#include "kgen/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kgen {

enum class Handedness { Left, Right, NotApplicable };

inline const char* to_string(Handedness h) {
  switch (h) {
    case Handedness::Left: return "left";
    case Handedness::Right: return "right";
    case Handedness::NotApplicable: return "n/a";
  }
  return "n/a";
}

inline Handedness opposite(Handedness h) {
  if (h == Handedness::Left) return Handedness::Right;
  if (h == Handedness::Right) return Handedness::Left;
  return h;
}

inline constexpr int MaxCliffordGenerators = 13;

struct CliffordRep {
  int d = 0;
  Handedness handedness = Handedness::NotApplicable;
  std::vector<Matrix> gammas;

  int size() const { return gammas.empty() ? 0 : static_cast<int>(gammas.front().rows()); }
  const Matrix& operator[](int j) const { return gammas.at(static_cast<std::size_t>(j)); }
};

/// i^k for integer k (exact).
inline Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Scalar that Gamma_1...Gamma_d equals for a left-handed representation of odd d.
inline Complex left_handed_scalar(int d) { return i_power((d - 1) / 2); }

inline int clifford_dimension(int d) { return 1 << (d / 2); }

inline Matrix ordered_product(const std::vector<Matrix>& ms) {
  Matrix p = identity(static_cast<int>(ms.front().rows()));
  for (const auto& m : ms) p = p * m;
  return p;
}

namespace detail {

inline Handedness classify_scalar(int d, Complex lambda, double tol) {
  const Complex left = left_handed_scalar(d);
  if (std::abs(lambda - left) < tol) return Handedness::Left;
  if (std::abs(lambda + left) < tol) return Handedness::Right;
  throw Error(Errc::inconsistent_representation,
              "generator product scalar is not +-i^((d-1)/2) for d=" + std::to_string(d));
}

inline void check_scalar(const Matrix& p, Complex lambda, double tol) {
  if (max_abs(p - lambda * identity(static_cast<int>(p.rows()))) > tol)
    throw Error(Errc::not_irreducible, "generator product is not a scalar matrix");
}

}  // namespace detail

/// Computes the handedness of an odd-d representation from the scalar
/// Gamma_1...Gamma_d = lambda * 1.
inline Handedness handedness_of(const CliffordRep& rep) {
  if (rep.d % 2 == 0) throw Error(Errc::invalid_argument, "handedness requires odd d");
  const Matrix p = ordered_product(rep.gammas);
  const Complex lambda = p(0, 0);
  detail::check_scalar(p, lambda, 1e-10);
  if (std::abs(std::abs(lambda) - 1.0) > 1e-10)
    throw Error(Errc::inconsistent_representation, "generator product scalar is not unimodular");
  return detail::classify_scalar(rep.d, lambda, 1e-10);
}

inline CliffordRep extend(const CliffordRep& rep) {
  if (rep.d % 2 == 0) throw Error(Errc::invalid_argument, "extend requires an odd generator count");
  if (rep.d + 2 > MaxCliffordGenerators)
    throw Error(Errc::invalid_argument, "extension would exceed the size guard d <= 13");
  const int n = rep.size();
  const Matrix zero = Matrix::Zero(n, n);
  const Matrix one = identity(n);

  CliffordRep out;
  out.d = rep.d + 2;
  out.gammas.reserve(static_cast<std::size_t>(out.d));
  for (const auto& s : rep.gammas) out.gammas.push_back(block2(zero, s, s, zero));
  out.gammas.push_back(block2(zero, I * one, -I * one, zero));
  out.gammas.push_back(block2(one, zero, zero, -one));
  out.handedness = handedness_of(out);
  return out;
}

/// First `count` generators of a representation (even counts drop handedness).
inline CliffordRep truncate(const CliffordRep& rep, int count) {
  if (count < 1 || count > rep.d) throw Error(Errc::invalid_argument, "truncation count out of range");
  CliffordRep out;
  out.d = count;
  out.gammas.assign(rep.gammas.begin(), rep.gammas.begin() + count);
  out.handedness = count % 2 == 0 ? Handedness::NotApplicable : handedness_of(out);
  return out;
}

inline CliffordRep flip_first(const CliffordRep& rep) {
  CliffordRep out = rep;
  out.gammas.front() = -out.gammas.front();
  out.handedness = opposite(rep.handedness);
  return out;
}

/// The verbatim iterative chain (1) -> C_3 -> C_5 -> ..., truncated for even d.
inline CliffordRep iterative_rep(int d) {
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  if (d > MaxCliffordGenerators) throw Error(Errc::invalid_argument, "d exceeds size guard 13");
  CliffordRep rep{1, Handedness::Left, {identity(1)}};
  const int odd = d % 2 == 1 ? d : d + 1;
  while (rep.d < odd) rep = extend(rep);
  return d == odd ? rep : truncate(rep, d);
}

/// Irreducible representation of C_d. For odd d the iterative representation
/// is flipped when its computed handedness differs from the one requested;
/// for even d the handedness argument is ignored.
inline CliffordRep build_rep(int d, Handedness handedness = Handedness::Left) {
  CliffordRep rep = iterative_rep(d);
  if (d % 2 == 0) return rep;
  if (handedness == Handedness::NotApplicable)
    throw Error(Errc::invalid_argument, "odd d requires left or right handedness");
  return rep.handedness == handedness ? rep : flip_first(rep);
}

struct Violation {
  std::string invariant;  // "hermitian", "anticommutation", "dimension", "handedness"
  int i = -1;
  int j = -1;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double max_residual = 0.0;  // over all checked invariants, including passing ones

  bool ok() const { return violations.empty(); }
  bool has(const std::string& invariant) const {
    for (const auto& v : violations)
      if (v.invariant == invariant) return true;
    return false;
  }
};

inline ValidationReport verify_rep(const CliffordRep& rep, double tol = 1e-12) {
  ValidationReport report;
  auto note = [&](const std::string& what, int i, int j, double r) {
    report.max_residual = std::max(report.max_residual, r);
    if (r > tol) report.violations.push_back({what, i, j, r});
  };

  const int n = rep.size();
  if (static_cast<int>(rep.gammas.size()) != rep.d || n != clifford_dimension(rep.d)) {
    report.violations.push_back({"dimension", -1, -1, 0.0});
    return report;
  }
  for (const auto& g : rep.gammas) {
    if (g.rows() != n || g.cols() != n) {
      report.violations.push_back({"dimension", -1, -1, 0.0});
      return report;
    }
  }
  for (int i = 0; i < rep.d; ++i) note("hermitian", i, i, hermiticity_residual(rep[i]));
  for (int i = 0; i < rep.d; ++i) {
    for (int j = i; j < rep.d; ++j) {
      Matrix ac = rep[i] * rep[j] + rep[j] * rep[i];
      if (i == j) ac -= 2.0 * identity(n);
      note("anticommutation", i, j, max_abs(ac));
    }
  }
  if (rep.d % 2 == 1 && rep.handedness != Handedness::NotApplicable) {
    const Complex expected = rep.handedness == Handedness::Left ? left_handed_scalar(rep.d)
                                                                : -left_handed_scalar(rep.d);
    note("handedness", -1, -1, max_abs(ordered_product(rep.gammas) - expected * identity(n)));
  }
  return report;
}

struct Grading {
  Matrix matrix;
  Complex phase;
};

/// Grading lambda * Gamma_1...Gamma_d of an even-d representation. Of the two
/// unit phases making the product Hermitian, the one whose first nonzero entry
/// (row-major) is positive is chosen; iterative representations then give
/// diag(1, -1).
inline Grading grading_of(const CliffordRep& rep) {
  if (rep.d % 2 != 0) throw Error(Errc::invalid_argument, "grading requires an even generator count");
  const Matrix p = ordered_product(rep.gammas);
  const int n = rep.size();
  for (int k = 0; k < 4; ++k) {
    const Complex phase = i_power(k);
    const Matrix g = phase * p;
    if (hermiticity_residual(g) > 1e-12 || max_abs(g * g - identity(n)) > 1e-12) continue;
    for (Eigen::Index e = 0; e < g.size(); ++e) {
      const Complex v = g(e / g.cols(), e % g.cols());
      if (std::abs(v) < 1e-12) continue;
      if (v.real() > 0 && std::abs(v.imag()) < 1e-12) return {g, phase};
      break;
    }
  }
  throw Error(Errc::inconsistent_representation, "no unit phase makes the generator product a Hermitian unitary");
}

inline Json rep_to_json(const CliffordRep& rep) {
  Json j;
  j["d"] = rep.d;
  j["handedness"] = rep.handedness == Handedness::NotApplicable ? Json(nullptr) : Json(to_string(rep.handedness));
  j["gammas"] = Json::array();
  for (const auto& g : rep.gammas) j["gammas"].push_back(matrix_to_json(g));
  return j;
}

inline CliffordRep rep_from_json(const Json& j) {
  CliffordRep rep;
  try {
    rep.d = j.at("d").get<int>();
    const Json& h = j.at("handedness");
    if (h.is_null()) rep.handedness = Handedness::NotApplicable;
    else if (h == "left") rep.handedness = Handedness::Left;
    else if (h == "right") rep.handedness = Handedness::Right;
    else throw Error(Errc::parse_error, "handedness must be \"left\", \"right\" or null");
    for (const auto& g : j.at("gammas")) rep.gammas.push_back(matrix_from_json(g));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
  return rep;
}

}  // namespace kgen
