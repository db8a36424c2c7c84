// Coordinate charts between disc, Euclidean space and sphere, and the two
// connecting maps of K-theory written as pointwise matrix formulas.
#pragma once

#include "kgen/fields.hpp"
#include "kgen/sampling.hpp"

#include <algorithm>
#include <string>

namespace kgen {

// ---------------------------------------------------------------------------
// Charts
//
//   disc y in D^{m}  ->  z = y / sqrt(1 - |y|^2) in R^{m}
//                    ->  x = (2z, |z|^2 - 1) / (1 + |z|^2) in S^{m} \ {north pole}
//
// which composes to x = (2 y sqrt(1 - |y|^2), 2|y|^2 - 1).
// ---------------------------------------------------------------------------

struct ChartPoint {
  Point disc_y;
  Point euclid_z;
  Point sphere_x;
};

inline ChartPoint chart(const Point& y) {
  const double r = y.squaredNorm();
  if (!(r < 1.0)) throw Error(Errc::domain_error, "disc point must satisfy |y| < 1");
  const double s = std::sqrt(1.0 - r);
  const auto m = y.size();
  ChartPoint p;
  p.disc_y = y;
  p.euclid_z = y / s;
  p.sphere_x.resize(m + 1);
  p.sphere_x.head(m) = 2.0 * s * y;
  p.sphere_x(m) = 2.0 * r - 1.0;
  return p;
}

inline ChartPoint chart_inverse(const Point& x) {
  if (x.size() < 2) throw Error(Errc::invalid_argument, "sphere point needs at least two coordinates");
  if (std::abs(x.norm() - 1.0) > 1e-10) throw Error(Errc::domain_error, "point is not on the unit sphere");
  const auto m = x.size() - 1;
  const double last = x(m);
  if (!(last < 1.0)) throw Error(Errc::pole_error, "north pole has no chart preimage");
  const double s = std::sqrt((1.0 - last) / 2.0);  // sqrt(1 - |y|^2)
  ChartPoint p;
  p.disc_y = x.head(m) / (2.0 * s);
  p.euclid_z = p.disc_y / s;
  p.sphere_x = x;
  return p;
}

// ---------------------------------------------------------------------------
// Index map: a contraction lift B of a unitary on the boundary sphere goes to
// the Hermitian unitary
//
//   V = [[2BB^* - 1,            2B sqrt(1 - B^*B)],
//        [2B^* sqrt(1 - BB^*),  1 - 2B^*B        ]].
// ---------------------------------------------------------------------------

inline constexpr double LiftTolerance = 1e-10;

namespace detail {

inline void check_contraction(const Matrix& b) {
  const double top = hermitian_eigenvalues(b.adjoint() * b).maxCoeff();
  if (top > 1.0 + LiftTolerance) throw Error(Errc::lift_invalid, "lift is not a contraction (|B|^2 = " + std::to_string(top) + ")");
}

inline void check_boundary(const EvaluableField& b, bool selfadjoint) {
  Rng rng(0x5eed);
  const int m = b.ambient_dim();
  for (int k = 0; k < 32; ++k) {
    const Point y = sample_sphere(m, rng);
    const Matrix v = b(y);
    if (selfadjoint && hermiticity_residual(v) > LiftTolerance)
      throw Error(Errc::lift_invalid, "lift is not selfadjoint on the boundary");
    if (unitarity_residual(v) > LiftTolerance) throw Error(Errc::lift_invalid, "boundary value is not unitary");
  }
}

inline void check_lift_domain(const EvaluableField& b) {
  if (b.domain.kind != DomainKind::ClosedDisc) throw Error(Errc::invalid_argument, "connecting maps take fields on the closed disc");
}

}  // namespace detail

inline Matrix index_map_value(const Matrix& b) {
  detail::check_contraction(b);
  const int n = static_cast<int>(b.rows());
  const Matrix one = identity(n);
  const Matrix bsb = b.adjoint() * b;
  const Matrix bbs = b * b.adjoint();
  return block2(2.0 * bbs - one, 2.0 * b * hermitian_sqrt(one - bsb), 2.0 * b.adjoint() * hermitian_sqrt(one - bbs),
                one - 2.0 * bsb);
}

inline EvaluableField index_map(const EvaluableField& b) {
  detail::check_lift_domain(b);
  detail::check_boundary(b, false);
  return {b.domain, 2 * b.size, [f = b.evaluator](const Point& y) { return index_map_value(f(y)); }};
}

inline EvaluableField index_map(const MatrixPolyField& b) { return index_map(as_evaluable(b)); }

// ---------------------------------------------------------------------------
// Exponential map: a selfadjoint contraction lift B of a selfadjoint unitary
// goes to the unitary 2B sqrt(1 - B^2) + i (1 - 2B^2) ("direct"), or to its
// adjoint 2B sqrt(1 - B^2) + i (2B^2 - 1) ("adjoint"), which equals i at the
// boundary and reproduces the Dirac phase on the nose.
// ---------------------------------------------------------------------------

enum class ExpConvention { Direct, Adjoint };

inline Matrix exp_map_value(const Matrix& b, ExpConvention convention = ExpConvention::Adjoint) {
  if (hermiticity_residual(b) > LiftTolerance) throw Error(Errc::lift_invalid, "exponential map needs a selfadjoint lift");
  const double sign = convention == ExpConvention::Adjoint ? 1.0 : -1.0;
  return hermitian_apply(b, [&](double v) {
    if (std::abs(v) > 1.0 + LiftTolerance) throw Error(Errc::lift_invalid, "lift is not a contraction");
    const double c = std::min(1.0, std::abs(v));
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    return Complex(2.0 * v * s, sign * (2.0 * v * v - 1.0));
  });
}

inline EvaluableField exp_map(const EvaluableField& b, ExpConvention convention = ExpConvention::Adjoint) {
  detail::check_lift_domain(b);
  detail::check_boundary(b, true);
  return {b.domain, b.size, [f = b.evaluator, convention](const Point& y) { return exp_map_value(f(y), convention); }};
}

inline EvaluableField exp_map(const MatrixPolyField& b, ExpConvention convention = ExpConvention::Adjoint) {
  return exp_map(as_evaluable(b), convention);
}

/// A_t = (-t cos(pi B) + (1 - t^2)(2B^2 - 1)) + i (t sin(pi B) + (1 - t^2) 2B sqrt(1 - B^2)),
/// joining i * Exp_direct(B) at t = 0 to -exp(-i pi B) at t = 1.
inline Matrix homotopy_at(const Matrix& b, double t) {
  if (hermiticity_residual(b) > LiftTolerance) throw Error(Errc::lift_invalid, "homotopy needs a selfadjoint lift");
  if (t < 0.0 || t > 1.0) throw Error(Errc::invalid_argument, "homotopy parameter must lie in [0, 1]");
  return hermitian_apply(b, [t](double v) {
    const double c = std::clamp(v, -1.0, 1.0);
    const double s = std::sqrt(1.0 - c * c);
    const double w = 1.0 - t * t;
    return Complex(-t * std::cos(Pi * c) + w * (2.0 * c * c - 1.0), t * std::sin(Pi * c) + w * 2.0 * c * s);
  });
}

inline Matrix homotopy_at(const EvaluableField& b, double t, const Point& y) { return homotopy_at(b(y), t); }

// ---------------------------------------------------------------------------
// K-groups of spheres
// ---------------------------------------------------------------------------

enum class Group { Zero, Z, ZPlusZ };

inline const char* to_string(Group g) {
  switch (g) {
    case Group::Zero: return "0";
    case Group::Z: return "Z";
    case Group::ZPlusZ: return "Z+Z";
  }
  return "?";
}

struct KGroupTable {
  int d = 0;
  Group k0 = Group::Zero;
  Group k1 = Group::Zero;
  Group reduced_k0 = Group::Zero;
};

inline KGroupTable kgroup_table(int d) {
  if (d < 1) throw Error(Errc::invalid_argument, "sphere dimension must be >= 1");
  const bool even = d % 2 == 0;
  return {d, even ? Group::ZPlusZ : Group::Zero, even ? Group::Zero : Group::Z, even ? Group::Z : Group::Zero};
}

}  // namespace kgen
