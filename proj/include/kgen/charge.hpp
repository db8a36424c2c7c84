// Topological charges of fields restricted to small spheres:
//
//   S^1: winding  (1/2 pi i)     int tr(U^{-1} dU)
//   S^2: Chern    (1/2 pi i)     int tr(P [dP, dP])       P = projection below fermi
//   S^3: winding  -(1/24 pi^2)   int tr((U^{-1} dU)^3)
//
// Fields are supplied as jets (value plus ambient gradient), so all
// derivatives are exact. The sphere of radius r around a center c is
// parametrized by c + r n with n on the unit grid of `sphere_grid`.
#pragma once

#include "kgen/fields.hpp"
#include "kgen/generators.hpp"
#include "kgen/parallel.hpp"
#include "kgen/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace kgen {

struct Enclosure {
  Point center;
  double radius = 1.0;

  static Enclosure unit(int ambient) { return {Point::Zero(ambient), 1.0}; }
};

struct ChargeOptions {
  int resolution = 0;  // 0 selects the per-dimension default
  double fermi = 0.0;
  int threads = 1;
};

inline int default_resolution(int dim) {
  switch (dim) {
    case 1: return 256;
    case 2: return 64;
    case 3: return 24;
    default: throw Error(Errc::unsupported_dimension, "charges are defined on S^1, S^2 and S^3");
  }
}

// Nodes where the field is closer than this to singular (or to the Fermi
// level) make the invariant undefined.
inline constexpr double GapFloor = 1e-8;

struct ChargeResult {
  double raw = 0.0;
  long charge = 0;
  double residual = 0.0;
  int resolution = 0;
  std::array<double, 2> convergence_pair{};  // raw at n and at 2n
  bool converged = false;
};

/// Raw integral at one resolution together with the smallest gap (singular
/// value or distance to the Fermi level) seen at the nodes.
struct RawIntegral {
  double value = 0.0;
  double min_gap = 0.0;
};

namespace detail {

inline std::vector<Matrix> tangent_derivatives(const Jet& jet, const std::vector<Point>& frame, double radius) {
  std::vector<Matrix> out;
  out.reserve(frame.size());
  for (const auto& t : frame) {
    Matrix d = Matrix::Zero(jet.value.rows(), jet.value.cols());
    for (std::size_t k = 0; k < jet.grad.size(); ++k)
      if (t(static_cast<Eigen::Index>(k)) != 0.0) d += (radius * t(static_cast<Eigen::Index>(k))) * jet.grad[k];
    out.push_back(std::move(d));
  }
  return out;
}

struct NodeValue {
  double integrand = 0.0;
  double gap = 0.0;
};

template <class Integrand>
RawIntegral integrate(const JetFn& field, const Enclosure& enc, int dim, int n, int threads, double prefactor,
                      Integrand&& integrand) {
  if (enc.center.size() != dim + 1) throw Error(Errc::dimension_mismatch, "enclosure center dimension differs from sphere ambient dimension");
  if (!(enc.radius > 0.0)) throw Error(Errc::invalid_argument, "enclosure radius must be positive");
  const SphereGrid grid = sphere_grid(dim, n);
  const auto values = parallel_map<NodeValue>(grid.size(), threads, [&](std::size_t k) {
    const Jet jet = field(enc.center + enc.radius * grid.nodes[k]);
    const auto derivs = tangent_derivatives(jet, grid.frames[k], enc.radius);
    NodeValue v = integrand(jet.value, derivs);
    v.integrand *= grid.weights[k];
    return v;
  });
  std::vector<double> terms(values.size());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    terms[k] = values[k].integrand;
    min_gap = std::min(min_gap, values[k].gap);
  }
  return {prefactor * pairwise_sum(terms), min_gap};
}

inline void require_gap(const RawIntegral& r, const char* what) {
  if (r.min_gap < GapFloor)
    throw Error(Errc::gap_closed, std::string(what) + " (min gap " + std::to_string(r.min_gap) + ")");
}

inline ChargeResult finish(double raw_n, double raw_2n, int n) {
  ChargeResult out;
  out.raw = raw_n;
  out.charge = std::lround(raw_n);
  out.residual = std::abs(raw_n - static_cast<double>(out.charge));
  out.resolution = n;
  out.convergence_pair = {raw_n, raw_2n};
  out.converged = out.residual < 0.01 &&
                  std::abs(raw_2n - static_cast<double>(out.charge)) <= out.residual + 1e-9;
  return out;
}

}  // namespace detail

inline RawIntegral winding_1_raw(const JetFn& u, const Enclosure& enc, int n, int threads = 1) {
  return detail::integrate(u, enc, 1, n, threads, 1.0 / (2.0 * Pi), [](const Matrix& v, const std::vector<Matrix>& d) {
    Eigen::PartialPivLU<Matrix> lu(v);
    // tr(U^{-1} dU) / i
    const Complex tr = lu.solve(d[0]).trace();
    return detail::NodeValue{(tr / I).real(), min_singular_value(v)};
  });
}

/// Projection onto eigenvalues below `fermi` and its derivatives along the
/// given directions, by first-order perturbation of the eigenvectors.
struct ProjectionJet {
  Matrix p;
  std::vector<Matrix> dp;
  double gap = 0.0;
};

inline ProjectionJet projection_jet(const Matrix& h, const std::vector<Matrix>& dh, double fermi) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& ev = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();
  const int n = static_cast<int>(h.rows());
  int occ = 0;
  while (occ < n && ev(occ) < fermi) ++occ;
  ProjectionJet out;
  out.gap = (ev.array() - fermi).abs().minCoeff();
  const Matrix vo = vecs.leftCols(occ);
  const Matrix vu = vecs.rightCols(n - occ);
  out.p = vo * vo.adjoint();
  for (const auto& d : dh) {
    // <i|dH|j> / (e_i - e_j) for occupied i, unoccupied j
    Matrix m = vo.adjoint() * d * vu;
    for (int i = 0; i < occ; ++i)
      for (int j = 0; j < n - occ; ++j) m(i, j) /= (ev(i) - ev(occ + j));
    const Matrix half = vo * m * vu.adjoint();
    out.dp.push_back(half + half.adjoint());
  }
  return out;
}

inline RawIntegral chern_2_raw(const JetFn& h, const Enclosure& enc, int n, double fermi = 0.0, int threads = 1) {
  return detail::integrate(h, enc, 2, n, threads, 1.0 / (2.0 * Pi), [fermi](const Matrix& v, const std::vector<Matrix>& d) {
    const ProjectionJet pj = projection_jet(v, d, fermi);
    // tr(P [dP_1, dP_2]) / i
    const Complex tr = (pj.p * (pj.dp[0] * pj.dp[1] - pj.dp[1] * pj.dp[0])).trace();
    return detail::NodeValue{(tr / I).real(), pj.gap};
  });
}

inline RawIntegral winding_3_raw(const JetFn& u, const Enclosure& enc, int n, int threads = 1) {
  return detail::integrate(u, enc, 3, n, threads, -1.0 / (24.0 * Pi * Pi), [](const Matrix& v, const std::vector<Matrix>& d) {
    Eigen::PartialPivLU<Matrix> lu(v);
    const Matrix a1 = lu.solve(d[0]), a2 = lu.solve(d[1]), a3 = lu.solve(d[2]);
    // Full antisymmetrization: cyclic permutations share a trace.
    const Complex tr = 3.0 * ((a1 * a2 * a3).trace() - (a1 * a3 * a2).trace());
    return detail::NodeValue{tr.real(), min_singular_value(v)};
  });
}

inline ChargeResult winding_1(const JetFn& u, const Enclosure& enc, const ChargeOptions& opt = {}) {
  const int n = opt.resolution > 0 ? opt.resolution : default_resolution(1);
  const auto a = winding_1_raw(u, enc, n, opt.threads);
  detail::require_gap(a, "field is singular on the circle");
  const auto b = winding_1_raw(u, enc, 2 * n, opt.threads);
  detail::require_gap(b, "field is singular on the circle");
  return detail::finish(a.value, b.value, n);
}

inline ChargeResult chern_2(const JetFn& h, const Enclosure& enc, const ChargeOptions& opt = {}) {
  const int n = opt.resolution > 0 ? opt.resolution : default_resolution(2);
  const auto a = chern_2_raw(h, enc, n, opt.fermi, opt.threads);
  detail::require_gap(a, "spectral gap closes at the Fermi level on the sphere");
  const auto b = chern_2_raw(h, enc, 2 * n, opt.fermi, opt.threads);
  detail::require_gap(b, "spectral gap closes at the Fermi level on the sphere");
  return detail::finish(a.value, b.value, n);
}

inline ChargeResult winding_3(const JetFn& u, const Enclosure& enc, const ChargeOptions& opt = {}) {
  const int n = opt.resolution > 0 ? opt.resolution : default_resolution(3);
  const auto a = winding_3_raw(u, enc, n, opt.threads);
  detail::require_gap(a, "field is singular on the 3-sphere");
  const auto b = winding_3_raw(u, enc, 2 * n, opt.threads);
  detail::require_gap(b, "field is singular on the 3-sphere");
  return detail::finish(a.value, b.value, n);
}

namespace detail {

inline void require_sphere_ambient(const MatrixPolyField& f, int dim) {
  if (f.ambient_dim() != dim + 1)
    throw Error(Errc::dimension_mismatch, "field ambient dimension " + std::to_string(f.ambient_dim()) + " does not match S^" +
                                              std::to_string(dim));
}

}  // namespace detail

inline ChargeResult winding_1(const MatrixPolyField& u, const ChargeOptions& opt = {}) {
  detail::require_sphere_ambient(u, 1);
  return winding_1(u.jet_fn(), Enclosure::unit(2), opt);
}

inline ChargeResult chern_2(const MatrixPolyField& h, const ChargeOptions& opt = {}) {
  detail::require_sphere_ambient(h, 2);
  if (h.hermiticity_residual() > 1e-12) throw Error(Errc::non_hermitian, "Chern number needs a selfadjoint field");
  return chern_2(h.jet_fn(), Enclosure::unit(3), opt);
}

inline ChargeResult winding_3(const MatrixPolyField& u, const ChargeOptions& opt = {}) {
  detail::require_sphere_ambient(u, 3);
  return winding_3(u.jet_fn(), Enclosure::unit(4), opt);
}

/// Dispatch on the sphere dimension: S^1 and S^3 winding, S^2 Chern number.
inline ChargeResult charge_of(const MatrixPolyField& field, int dim, std::optional<double> fermi = std::nullopt,
                              int threads = 1) {
  ChargeOptions opt;
  opt.fermi = fermi.value_or(0.0);
  opt.threads = threads;
  switch (dim) {
    case 1: return winding_1(field, opt);
    case 2: return chern_2(field, opt);
    case 3: return winding_3(field, opt);
    default: throw Error(Errc::unsupported_dimension, "charge_of supports S^1, S^2 and S^3 only");
  }
}

/// Sign convention constant: the Chern number of the Weyl generator
/// x -> sum x_j G_j on S^2 for the left-handed representation of C_3. Computed
/// once at first use.
inline int chern_sign_weyl() {
  static const int sign = [] {
    const ChargeResult r = chern_2(weyl_field(2, build_rep(3, Handedness::Left)));
    if (!r.converged || std::abs(r.charge) != 1) throw Error(Errc::inconsistent_representation, "Weyl generator charge is not +-1");
    return static_cast<int>(r.charge);
  }();
  return sign;
}

}  // namespace kgen
