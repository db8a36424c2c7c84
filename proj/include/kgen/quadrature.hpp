// Product quadrature grids on S^1, S^2 and S^3 with positively oriented
// orthonormal tangent frames at every node.
#pragma once

#include "kgen/core.hpp"

#include <gsl/gsl_integration.h>

#include <memory>
#include <utility>
#include <vector>

namespace kgen {

struct SphereGrid {
  int dim = 0;
  int resolution = 0;
  std::vector<Point> nodes;
  std::vector<double> weights;
  // frames[k][a] is the a-th unit tangent at nodes[k]; (node, frame...) is a
  // positively oriented basis of the ambient space.
  std::vector<std::vector<Point>> frames;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [a, b]. GSL tables for sizes it does
/// not store are only good to ~1e-11, so nodes get two Newton polishing steps
/// and the weights are recomputed from P_n'.
inline std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)), &gsl_integration_glfixed_table_free);
  if (!table) throw Error(Errc::invalid_argument, "cannot allocate Gauss-Legendre table");
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return std::pair{p1, dp};
  };
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, table.get());
    for (int it = 0; it < 2; ++it) {
      const auto [p, dp] = legendre(x);
      x -= p / dp;
    }
    const double dp = legendre(x).second;
    w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[static_cast<std::size_t>(i)] = {mid + half * x, half * w};
  }
  return out;
}

inline double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0 * Pi;
    case 2: return 4.0 * Pi;
    case 3: return 2.0 * Pi * Pi;
    default: throw Error(Errc::unsupported_dimension, "sphere dimension must be 1, 2 or 3");
  }
}

/// S^1: n equispaced angles. S^2: n Gauss-Legendre nodes in cos(theta) times 2n
/// azimuths. S^3: n second-kind Gauss-Chebyshev nodes in cos(psi), n
/// Gauss-Legendre nodes in cos(theta), 2n azimuths. Polynomials of degree
/// < 2n in the coordinates are integrated exactly.
inline SphereGrid sphere_grid(int dim, int n) {
  if (dim < 1 || dim > 3) throw Error(Errc::unsupported_dimension, "sphere dimension must be 1, 2 or 3");
  if (n < 4) throw Error(Errc::invalid_argument, "grid resolution must be >= 4");
  SphereGrid g;
  g.dim = dim;
  g.resolution = n;
  auto push = [&g](Point node, double w, std::vector<Point> frame) {
    g.nodes.push_back(std::move(node));
    g.weights.push_back(w);
    g.frames.push_back(std::move(frame));
  };

  if (dim == 1) {
    const double dt = 2.0 * Pi / n;
    for (int k = 0; k < n; ++k) {
      const double t = dt * k;
      push(Point{{std::cos(t), std::sin(t)}}, dt, {Point{{-std::sin(t), std::cos(t)}}});
    }
    return g;
  }

  const int azimuths = 2 * n;
  const double dphi = 2.0 * Pi / azimuths;
  if (dim == 2) {
    for (const auto& [u, wu] : gauss_legendre(n, -1.0, 1.0)) {
      const double ct = u;
      const double st = std::sqrt(1.0 - u * u);
      for (int k = 0; k < azimuths; ++k) {
        const double phi = dphi * k;
        const double cp = std::cos(phi), sp = std::sin(phi);
        push(Point{{st * cp, st * sp, ct}}, wu * dphi, {Point{{ct * cp, ct * sp, -st}}, Point{{-sp, cp, 0.0}}});
      }
    }
    return g;
  }

  const auto polar = gauss_legendre(n, -1.0, 1.0);
  for (int i = 1; i <= n; ++i) {
    const double a = Pi * i / (n + 1);
    const double cs = std::cos(a), ss = std::sin(a);
    const double wpsi = Pi / (n + 1) * ss * ss;
    for (const auto& [ct, wtheta] : polar) {
      const double st = std::sqrt(1.0 - ct * ct);
      for (int k = 0; k < azimuths; ++k) {
        const double phi = dphi * k;
        const double cp = std::cos(phi), sp = std::sin(phi);
        Point node{{ss * st * cp, ss * st * sp, ss * ct, cs}};
        Point e_psi{{cs * st * cp, cs * st * sp, cs * ct, -ss}};
        Point e_theta{{ct * cp, ct * sp, -st, 0.0}};
        Point e_phi{{-sp, cp, 0.0, 0.0}};
        push(std::move(node), wpsi * wtheta * dphi, {std::move(e_psi), std::move(e_phi), std::move(e_theta)});
      }
    }
  }
  return g;
}

}  // namespace kgen
