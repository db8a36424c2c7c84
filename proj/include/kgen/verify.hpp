// Verification suites: pointwise identities between generators, connecting
// maps and charts, reported as max residuals over seeded samples.
#pragma once

#include "kgen/clifford.hpp"
#include "kgen/generators.hpp"
#include "kgen/json_io.hpp"
#include "kgen/kmaps.hpp"
#include "kgen/parallel.hpp"
#include "kgen/sampling.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kgen {

struct VerifyConfig {
  int d = 1;
  int samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct VerifyReport {
  std::string suite;
  int d = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::map<std::string, double> metrics;
};

inline Json report_to_json(const VerifyReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["d"] = r.d;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_residual"] = r.max_residual;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  j["metrics"] = Json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = v;
  return j;
}

namespace detail {

inline double max_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, x);
  return m;
}

inline void require_d(bool ok, const std::string& msg) {
  if (!ok) throw Error(Errc::invalid_argument, msg);
}

}  // namespace detail

inline VerifyReport verify_clifford(const VerifyConfig& cfg) {
  detail::require_d(cfg.d >= 1 && cfg.d <= MaxCliffordGenerators, "clifford suite needs 1 <= d <= 13");
  VerifyReport r{"clifford", cfg.d, 0, cfg.seed, 0.0, 0.0, true, {}};
  const std::vector<Handedness> variants =
      cfg.d % 2 == 1 ? std::vector<Handedness>{Handedness::Left, Handedness::Right} : std::vector<Handedness>{Handedness::NotApplicable};
  for (Handedness h : variants) {
    const CliffordRep rep = build_rep(cfg.d, h == Handedness::NotApplicable ? Handedness::Left : h);
    const ValidationReport v = verify_rep(rep, 0.0);
    const std::string tag = cfg.d % 2 == 1 ? to_string(h) : "even";
    r.metrics["residual_" + tag] = v.max_residual;
    r.max_residual = std::max(r.max_residual, v.max_residual);
    if (!v.ok()) r.pass = false;
    if (cfg.d % 2 == 1) {
      const Matrix p = ordered_product(rep.gammas);
      const Complex expected = (h == Handedness::Left ? 1.0 : -1.0) * left_handed_scalar(cfg.d);
      const double dev = max_abs(p - expected * identity(rep.size()));
      r.metrics["scalar_deviation_" + tag] = dev;
      r.max_residual = std::max(r.max_residual, dev);
      if (dev != 0.0 || handedness_of(rep) != h) r.pass = false;
    }
    ++r.samples;
  }
  return r;
}

/// Index map of the Dirac phase lift versus the Weyl generator one dimension
/// up, compared at sphere points through the disc chart.
inline VerifyReport verify_index(const VerifyConfig& cfg) {
  detail::require_d(cfg.d == 1 || cfg.d == 3 || cfg.d == 5, "index suite needs d in {1, 3, 5}");
  const int d = cfg.d;
  const CliffordRep rep = build_rep(d, Handedness::Left);
  const MatrixPolyField lift = dirac_phase_field(d, rep, FieldDomain::Euclidean).with_domain(DomainTag::disc(d + 1));
  const EvaluableField v = index_map(lift);
  const MatrixPolyField weyl = weyl_field(d + 1, extend(rep));

  Rng rng(cfg.seed);
  std::vector<Point> xs;
  while (static_cast<int>(xs.size()) < cfg.samples) {
    Point x = sample_sphere(d + 2, rng);
    if (x(d + 1) <= 0.996) xs.push_back(std::move(x));  // keeps |y| <= 0.999
  }
  const auto res = parallel_map<double>(xs.size(), cfg.threads, [&](std::size_t k) {
    const ChartPoint p = chart_inverse(xs[k]);
    return max_abs(v(p.disc_y) - weyl(xs[k]));
  });
  VerifyReport r{"index", d, cfg.samples, cfg.seed, detail::max_of(res), 1e-10, false, {}};
  r.pass = r.max_residual < r.threshold;
  return r;
}

/// Exponential map (adjoint convention) of the Weyl lift versus the Dirac phase one dimension
/// up at the chart image of each disc point.
inline VerifyReport verify_exp(const VerifyConfig& cfg) {
  detail::require_d(cfg.d == 2 || cfg.d == 4, "exp suite needs d in {2, 4}");
  const int d = cfg.d;
  const CliffordRep rep = build_rep(d + 1, Handedness::Left);
  const MatrixPolyField lift = weyl_field(d, rep, FieldDomain::Euclidean).with_domain(DomainTag::disc(d + 1));
  const EvaluableField e = exp_map(lift, ExpConvention::Adjoint);
  const MatrixPolyField dirac = dirac_phase_field(d + 1, rep);

  Rng rng(cfg.seed);
  std::vector<Point> ys;
  for (int k = 0; k < cfg.samples; ++k) ys.push_back(sample_ball(d + 1, 0.999, rng));
  const auto res = parallel_map<double>(ys.size(), cfg.threads, [&](std::size_t k) {
    return max_abs(e(ys[k]) - dirac(chart(ys[k]).sphere_x));
  });
  VerifyReport r{"exp", d, cfg.samples, cfg.seed, detail::max_of(res), 1e-10, false, {}};
  r.pass = r.max_residual < r.threshold;
  return r;
}

/// Smallest singular value of A_t over 11 values of t and the disc samples.
/// max_residual records |A_0 - i Exp_direct(B)|.
inline VerifyReport verify_homotopy(const VerifyConfig& cfg) {
  detail::require_d(cfg.d == 2 || cfg.d == 4, "homotopy suite needs d in {2, 4}");
  const int d = cfg.d;
  const CliffordRep rep = build_rep(d + 1, Handedness::Left);
  const MatrixPolyField lift = weyl_field(d, rep, FieldDomain::Euclidean).with_domain(DomainTag::disc(d + 1));

  Rng rng(cfg.seed);
  std::vector<Point> ys;
  for (int k = 0; k < cfg.samples; ++k) ys.push_back(sample_ball(d + 1, 1.0, rng));
  struct Probe {
    double sigma = 0.0;
    double endpoint = 0.0;
  };
  const auto probes = parallel_map<Probe>(ys.size(), cfg.threads, [&](std::size_t k) {
    const Matrix b = lift(ys[k]);
    Probe p{std::numeric_limits<double>::infinity(), 0.0};
    for (int s = 0; s <= 10; ++s) p.sigma = std::min(p.sigma, min_singular_value(homotopy_at(b, s / 10.0)));
    p.endpoint = max_abs(homotopy_at(b, 0.0) - I * exp_map_value(b, ExpConvention::Direct));
    return p;
  });
  double sigma = std::numeric_limits<double>::infinity(), endpoint = 0.0;
  for (const auto& p : probes) {
    sigma = std::min(sigma, p.sigma);
    endpoint = std::max(endpoint, p.endpoint);
  }
  VerifyReport r{"homotopy", d, cfg.samples, cfg.seed, endpoint, 1e-3, false, {}};
  r.metrics["min_singular_value"] = sigma;
  r.metrics["t_points"] = 11;
  r.pass = sigma > r.threshold && endpoint < 1e-12;
  return r;
}

/// Resolvent profile and bounded transform of the unbounded generator:
/// H^W_d for even d, A^D_d for odd d.
inline VerifyReport verify_fredholm(const VerifyConfig& cfg) {
  detail::require_d(cfg.d >= 1 && cfg.d <= 8, "fredholm suite needs 1 <= d <= 8");
  const int d = cfg.d;
  const MatrixPolyField t = d % 2 == 0 ? weyl_field(d, build_rep(d + 1), FieldDomain::Euclidean)
                                       : dirac_phase_field(d, build_rep(d), FieldDomain::Euclidean);
  VerifyReport r{"fredholm", d, cfg.samples, cfg.seed, 0.0, 1e-12, false, {}};
  const std::vector<double> radii{0.0, 1.0, 7.0};
  const auto profile = compact_resolvent_profile(t, radii, 64, cfg.seed);
  for (const auto& s : profile) {
    const double dev = std::abs(s.sup_norm - 1.0 / (1.0 + s.radius * s.radius));
    r.metrics["profile_r" + std::to_string(static_cast<int>(s.radius))] = s.sup_norm;
    r.max_residual = std::max(r.max_residual, dev);
  }

  const EvaluableField f = bounded_transform(t);
  Rng rng(cfg.seed);
  std::vector<Point> xs;
  for (int k = 0; k < cfg.samples; ++k) xs.push_back(sample_ball(t.ambient_dim(), 10.0, rng));
  const int n = t.size();
  const auto res = parallel_map<double>(xs.size(), cfg.threads, [&](std::size_t k) {
    const Matrix fx = f(xs[k]);
    const double lhs = operator_norm(identity(n) - fx.adjoint() * fx);
    return std::abs(lhs - 1.0 / (1.0 + xs[k].squaredNorm()));
  });
  const double probe = detail::max_of(res);
  r.metrics["bounded_transform_residual"] = probe;
  r.max_residual = std::max(r.max_residual, probe);
  r.pass = r.max_residual < r.threshold;
  return r;
}

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"clifford", "index", "exp", "homotopy", "fredholm"};
  return names;
}

inline VerifyReport run_verify(const std::string& suite, const VerifyConfig& cfg) {
  if (cfg.samples < 1) throw Error(Errc::invalid_argument, "samples must be positive");
  if (suite == "clifford") return verify_clifford(cfg);
  if (suite == "index") return verify_index(cfg);
  if (suite == "exp") return verify_exp(cfg);
  if (suite == "homotopy") return verify_homotopy(cfg);
  if (suite == "fredholm") return verify_fredholm(cfg);
  throw Error(Errc::invalid_argument, "unknown suite '" + suite + "'");
}

}  // namespace kgen
