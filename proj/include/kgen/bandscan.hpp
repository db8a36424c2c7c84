// Momentum-space band models: loading, gap evaluation, crossing search and
// charge assignment for isolated band crossings.
#pragma once

#include "kgen/charge.hpp"
#include "kgen/generators.hpp"
#include "kgen/json_io.hpp"
#include "kgen/parallel.hpp"
#include "kgen/sampling.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kgen {

struct BandModel {
  MatrixPolyField h;  // Euclidean(dimension)
  std::optional<Matrix> chiral;
  double fermi = 0.0;
  std::string name;

  int dimension() const { return h.ambient_dim(); }
  int size() const { return h.size(); }
};

// ---------------------------------------------------------------------------
// Serialization
//
// {"dimension": m, "size": N, "fermi": f, "name": str, "chiral": matrix|null,
//  "terms": [{"powers": [m ints], "matrix": [[[re, im], ...], ...]}, ...]}
// ---------------------------------------------------------------------------

inline Json field_to_json(const MatrixPolyField& f, const std::string& name = "", const std::optional<Matrix>& chiral = std::nullopt,
                          double fermi = 0.0) {
  Json j;
  j["name"] = name;
  j["dimension"] = f.ambient_dim();
  j["size"] = f.size();
  j["fermi"] = fermi;
  j["chiral"] = chiral ? matrix_to_json(*chiral) : Json(nullptr);
  j["terms"] = Json::array();
  for (const auto& [powers, m] : f.terms()) j["terms"].push_back({{"powers", powers}, {"matrix", matrix_to_json(m)}});
  return j;
}

inline Json model_to_json(const BandModel& model) { return field_to_json(model.h, model.name, model.chiral, model.fermi); }

/// Parses the term format without physical validation (any dimension, any
/// matrices); used for non-Hermitian generator exports as well.
inline BandModel model_from_json_unchecked(const Json& j) {
  BandModel model;
  try {
    const int m = j.at("dimension").get<int>();
    const int n = j.at("size").get<int>();
    if (m < 1) throw Error(Errc::parse_error, "dimension must be positive");
    if (n < 1 || n > MaxMatrixSize) throw Error(Errc::parse_error, "size must lie in [1, 64]");
    model.h = MatrixPolyField(DomainTag::euclidean(m), n);
    model.fermi = j.value("fermi", 0.0);
    model.name = j.value("name", std::string{});
    const auto& terms = j.at("terms");
    if (!terms.is_array()) throw Error(Errc::parse_error, "terms must be an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto powers = terms[t].at("powers").get<MultiIndex>();
      const Matrix mat = matrix_from_json(terms[t].at("matrix"));
      if (static_cast<int>(powers.size()) != m)
        throw Error(Errc::parse_error, "term " + std::to_string(t) + ": powers length differs from dimension");
      if (mat.rows() != n || mat.cols() != n)
        throw Error(Errc::parse_error, "term " + std::to_string(t) + ": matrix is not " + std::to_string(n) + "x" + std::to_string(n));
      model.h.add_term(powers, mat);
    }
    if (j.contains("chiral") && !j["chiral"].is_null()) {
      Matrix c = matrix_from_json(j["chiral"]);
      if (c.rows() != n || c.cols() != n) throw Error(Errc::parse_error, "chiral matrix size differs from model size");
      model.chiral = std::move(c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) throw;
    throw Error(Errc::parse_error, e.what());
  }
  return model;
}

inline constexpr double HermitianTolerance = 1e-12;
inline constexpr double ChiralTolerance = 1e-10;

/// Checks the physical invariants: dimension 2 or 3, Hermitian coefficients
/// (and samples), and a valid chiral symmetry when present.
inline void validate_model(const BandModel& model) {
  const int m = model.dimension();
  if (m != 2 && m != 3) throw Error(Errc::unsupported_dimension, "band models must have dimension 2 or 3");
  std::ostringstream bad;
  int idx = 0;
  for (const auto& [a, mat] : model.h.terms()) {
    if (hermiticity_residual(mat) > HermitianTolerance) bad << (bad.tellp() > 0 ? ", " : "") << idx;
    ++idx;
  }
  if (bad.tellp() > 0) throw Error(Errc::non_hermitian, "non-Hermitian coefficient in terms [" + bad.str() + "]");

  Rng rng(0xbadc0de);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 64; ++s) {
    Point x(m);
    for (int k = 0; k < m; ++k) x(k) = u(rng);
    if (hermiticity_residual(model.h(x)) > HermitianTolerance) throw Error(Errc::non_hermitian, "model is not Hermitian at a sample point");
  }

  if (model.chiral) {
    const Matrix& jm = *model.chiral;
    const int n = model.size();
    if (hermiticity_residual(jm) > ChiralTolerance) throw Error(Errc::invalid_chiral, "chiral matrix is not Hermitian");
    if (max_abs(jm * jm - identity(n)) > ChiralTolerance) throw Error(Errc::invalid_chiral, "chiral matrix does not square to 1");
    idx = 0;
    for (const auto& [a, mat] : model.h.terms()) {
      if (max_abs(jm * mat * jm + mat) > ChiralTolerance) bad << (bad.tellp() > 0 ? ", " : "") << idx;
      ++idx;
    }
    if (bad.tellp() > 0) throw Error(Errc::invalid_chiral, "terms [" + bad.str() + "] do not anti-commute with the chiral matrix");
    for (int s = 0; s < 64; ++s) {
      Point x(m);
      for (int k = 0; k < m; ++k) x(k) = u(rng);
      const Matrix hx = model.h(x);
      if (max_abs(jm * hx * jm + hx) > ChiralTolerance) throw Error(Errc::invalid_chiral, "chiral symmetry fails at a sample point");
    }
  }
}

// Term checks against the input order, so reported indices match the file.
inline BandModel model_from_json(const Json& j) {
  BandModel model = model_from_json_unchecked(j);
  const int m = model.dimension();
  if (m != 2 && m != 3) throw Error(Errc::unsupported_dimension, "band models must have dimension 2 or 3");
  auto offending = [&j](auto&& bad) {
    std::string list;
    const auto& terms = j.at("terms");
    for (std::size_t t = 0; t < terms.size(); ++t)
      if (bad(matrix_from_json(terms[t].at("matrix")))) list += (list.empty() ? "" : ", ") + std::to_string(t);
    return list;
  };
  const std::string nh = offending([](const Matrix& a) { return hermiticity_residual(a) > HermitianTolerance; });
  if (!nh.empty()) throw Error(Errc::non_hermitian, "non-Hermitian coefficient in terms [" + nh + "]");
  if (model.chiral && hermiticity_residual(*model.chiral) <= ChiralTolerance &&
      max_abs(*model.chiral * *model.chiral - identity(model.size())) <= ChiralTolerance) {
    const Matrix jm = *model.chiral;
    const std::string nc = offending([&jm](const Matrix& a) { return max_abs(jm * a * jm + a) > ChiralTolerance; });
    if (!nc.empty()) throw Error(Errc::invalid_chiral, "terms [" + nc + "] do not anti-commute with the chiral matrix");
  }
  validate_model(model);
  return model;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
}

inline BandModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Gaps and crossings
// ---------------------------------------------------------------------------

inline double gap_at(const BandModel& model, const Point& x) {
  return (hermitian_eigenvalues(model.h(x)).array() - model.fermi).abs().minCoeff();
}

struct Box {
  Point lo;
  Point hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double max_edge() const { return (hi - lo).maxCoeff(); }
  bool contains(const Point& x) const { return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all(); }
  static Box cube(int m, double half) { return {Point::Constant(m, -half), Point::Constant(m, half)}; }
};

inline void check_box(const BandModel& model, const Box& box) {
  if (box.dim() != model.dimension() || box.hi.size() != box.lo.size())
    throw Error(Errc::dimension_mismatch, "box dimension differs from model dimension");
  if (!((box.hi.array() > box.lo.array()).all())) throw Error(Errc::invalid_argument, "box must be nonempty");
}

struct Minimum {
  Point location;
  double gap = 0.0;
};

/// Compass search on gap_at inside the box: poll +-step along each axis, move
/// to the best improving point, otherwise halve the step.
inline Minimum refine_minimum(const BandModel& model, const Box& box, Point x, Point step, int max_iterations = 200,
                              double target = 0.0) {
  double best = gap_at(model, x);
  const int m = box.dim();
  for (int it = 0; it < max_iterations && best > target; ++it) {
    Point best_x = x;
    double best_gap = best;
    for (int k = 0; k < m; ++k) {
      for (double dir : {-1.0, 1.0}) {
        Point y = x;
        y(k) = std::clamp(y(k) + dir * step(k), box.lo(k), box.hi(k));
        const double g = gap_at(model, y);
        if (g < best_gap) {
          best_gap = g;
          best_x = y;
        }
      }
    }
    if (best_gap < best) {
      x = best_x;
      best = best_gap;
    } else {
      step *= 0.5;
      if (step.maxCoeff() < 1e-15) break;
    }
  }
  return {x, best};
}

struct ScanGrid {
  std::vector<Point> points;
  std::vector<double> gaps;
  std::vector<int> shape;
  Point spacing;
};

inline ScanGrid coarse_scan(const BandModel& model, const Box& box, int coarse_n, int threads = 1) {
  check_box(model, box);
  if (coarse_n < 2) throw Error(Errc::invalid_argument, "coarse grid needs at least two points per axis");
  const int m = box.dim();
  ScanGrid g;
  g.shape.assign(static_cast<std::size_t>(m), coarse_n);
  g.spacing = (box.hi - box.lo) / (coarse_n - 1);
  std::size_t total = 1;
  for (int k = 0; k < m; ++k) total *= static_cast<std::size_t>(coarse_n);
  g.points.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point x(m);
    std::size_t rest = idx;
    for (int k = m - 1; k >= 0; --k) {  // last axis fastest
      x(k) = box.lo(k) + g.spacing(k) * static_cast<double>(rest % static_cast<std::size_t>(coarse_n));
      rest /= static_cast<std::size_t>(coarse_n);
    }
    g.points[idx] = x;
  }
  g.gaps = parallel_map<double>(total, threads, [&](std::size_t k) { return gap_at(model, g.points[k]); });
  return g;
}

namespace detail {

/// Indices of grid points whose gap is <= every neighbour in the 3^m stencil.
inline std::vector<std::size_t> local_minima(const ScanGrid& g) {
  const int m = static_cast<int>(g.shape.size());
  const int n = g.shape.front();
  std::vector<std::size_t> out;
  std::vector<int> coord(static_cast<std::size_t>(m));
  std::size_t stencil = 1;
  for (int k = 0; k < m; ++k) stencil *= 3;
  for (std::size_t idx = 0; idx < g.points.size(); ++idx) {
    std::size_t rest = idx;
    for (int k = m - 1; k >= 0; --k) {
      coord[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    bool is_min = true;
    for (std::size_t s = 0; s < stencil && is_min; ++s) {
      std::size_t code = s, nb = 0;
      bool inside = true, self = true;
      for (int k = 0; k < m; ++k) {
        const int off = static_cast<int>(code % 3) - 1;
        code /= 3;
        const int c = coord[static_cast<std::size_t>(k)] + off;
        if (off != 0) self = false;
        if (c < 0 || c >= n) inside = false;
        nb = nb * static_cast<std::size_t>(n) + static_cast<std::size_t>(std::clamp(c, 0, n - 1));
      }
      if (!inside || self) continue;
      if (g.gaps[nb] < g.gaps[idx]) is_min = false;
    }
    if (is_min) out.push_back(idx);
  }
  return out;
}

inline bool lex_less(const Point& a, const Point& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a(k) < b(k)) return true;
    if (a(k) > b(k)) return false;
  }
  return false;
}

}  // namespace detail

struct CrossingSearch {
  int coarse_n = 16;
  double gap_tol = 1e-8;
  double merge_radius = 1e-3;  // fraction of the longest box edge
  int max_iterations = 200;
  int threads = 1;
};

/// Band crossings (points with gap_at < gap_tol) in the box, sorted
/// lexicographically. Every coarse-grid local minimum is refined by compass
/// search; refined points closer than the merge radius are merged.
inline std::vector<Point> find_crossings(const BandModel& model, const Box& box, const CrossingSearch& cfg = {}) {
  if (cfg.coarse_n < 8) throw Error(Errc::invalid_argument, "coarse grid needs at least 8 points per axis");
  const ScanGrid grid = coarse_scan(model, box, cfg.coarse_n, cfg.threads);
  const auto minima = detail::local_minima(grid);
  const auto refined = parallel_map<Minimum>(minima.size(), cfg.threads, [&](std::size_t k) {
    return refine_minimum(model, box, grid.points[minima[k]], grid.spacing, cfg.max_iterations, 0.0);
  });

  const double merge = cfg.merge_radius * box.max_edge();
  std::vector<Minimum> kept;
  for (const auto& r : refined) {
    if (!(r.gap < cfg.gap_tol)) continue;
    auto near = std::find_if(kept.begin(), kept.end(), [&](const Minimum& o) { return (o.location - r.location).norm() < merge; });
    if (near == kept.end()) kept.push_back(r);
    else if (r.gap < near->gap) *near = r;
  }
  std::vector<Point> out;
  for (const auto& k : kept) out.push_back(k.location);
  std::sort(out.begin(), out.end(), detail::lex_less);
  return out;
}

/// Smallest gap in the box: coarse scan, then compass search from the best
/// grid point.
inline Minimum min_gap(const BandModel& model, const Box& box, int coarse_n = 16, int max_iterations = 200) {
  const ScanGrid grid = coarse_scan(model, box, coarse_n);
  const auto best = static_cast<std::size_t>(std::min_element(grid.gaps.begin(), grid.gaps.end()) - grid.gaps.begin());
  return refine_minimum(model, box, grid.points[best], grid.spacing, max_iterations, 0.0);
}

// ---------------------------------------------------------------------------
// Charges of crossings
// ---------------------------------------------------------------------------

enum class Classification { Weyl, DiracChiral, Trivial, Unclassified };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Weyl: return "weyl";
    case Classification::DiracChiral: return "dirac-chiral";
    case Classification::Trivial: return "trivial";
    case Classification::Unclassified: return "unclassified";
  }
  return "unclassified";
}

struct CrossingReport {
  Point location;
  double gap_at_location = 0.0;
  double enclosure_radius = 0.0;
  std::optional<ChargeResult> charge;
  Classification classification = Classification::Unclassified;
  bool radius_capped = false;  // auto-radius limited by the configured cap
  bool near_boundary = false;  // enclosure leaves the scan box
  std::string error;
};

struct ChargeConfig {
  int resolution = 0;
  double gap_tol = 1e-8;
  int threads = 1;
};

/// Enclosure gap check: every quadrature node (at n and 2n) must have gap
/// above 10 * gap_tol.
inline double enclosure_min_gap(const BandModel& model, const Enclosure& enc, int sphere_dim, int n) {
  double lowest = std::numeric_limits<double>::infinity();
  for (int res : {n, 2 * n}) {
    const SphereGrid grid = sphere_grid(sphere_dim, res);
    for (const auto& node : grid.nodes) lowest = std::min(lowest, gap_at(model, enc.center + enc.radius * node));
  }
  return lowest;
}

inline CrossingReport charge_crossing(const BandModel& model, const Point& point, double radius, const ChargeConfig& cfg = {}) {
  const int m = model.dimension();
  if (point.size() != m) throw Error(Errc::dimension_mismatch, "crossing location dimension differs from model dimension");
  if (m != 2 && m != 3) throw Error(Errc::unsupported_dimension, "enclosures are implemented for dimension 2 and 3");
  if (m == 2 && !model.chiral) throw Error(Errc::missing_chiral, "2D crossings carry a charge only with a chiral symmetry");

  const int sphere_dim = m - 1;
  const int n = cfg.resolution > 0 ? cfg.resolution : default_resolution(sphere_dim);
  const Enclosure enc{point, radius};
  const double lowest = enclosure_min_gap(model, enc, sphere_dim, n);
  if (!(lowest > 10.0 * cfg.gap_tol))
    throw Error(Errc::enclosure_invalid, "gap closes on the enclosing sphere (min gap " + std::to_string(lowest) +
                                             "); try a different radius");

  CrossingReport report;
  report.location = point;
  report.gap_at_location = gap_at(model, point);
  report.enclosure_radius = radius;

  ChargeOptions opt;
  opt.resolution = n;
  opt.fermi = model.fermi;
  opt.threads = cfg.threads;
  ChargeResult r;
  if (m == 3) {
    r = chern_2(model.h.jet_fn(), enc, opt);
  } else {
    const MatrixPolyField block = chiral_block(model.h, *model.chiral, ChiralTolerance);
    r = winding_1(block.jet_fn(), enc, opt);
  }
  report.charge = r;
  if (!r.converged) report.classification = Classification::Unclassified;
  else if (r.charge == 0) report.classification = Classification::Trivial;
  else report.classification = m == 3 ? Classification::Weyl : Classification::DiracChiral;
  return report;
}

struct ScanConfig {
  CrossingSearch search;
  double max_radius = 0.5;
  int resolution = 0;
  int threads = 1;
};

/// Finds crossings and charges each one. The enclosure radius is half the
/// distance to the nearest other crossing, capped at max_radius. Per-crossing
/// failures are recorded in the report instead of aborting the scan.
inline std::vector<CrossingReport> scan(const BandModel& model, const Box& box, const ScanConfig& cfg = {}) {
  CrossingSearch search = cfg.search;
  search.threads = cfg.threads;
  const auto points = find_crossings(model, box, search);
  std::vector<CrossingReport> out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t o = 0; o < points.size(); ++o)
      if (o != k) nearest = std::min(nearest, (points[o] - points[k]).norm());
    const double radius = std::min(0.5 * nearest, cfg.max_radius);

    CrossingReport report;
    try {
      report = charge_crossing(model, points[k], radius, {cfg.resolution, search.gap_tol, cfg.threads});
    } catch (const Error& e) {
      report.location = points[k];
      report.gap_at_location = gap_at(model, points[k]);
      report.enclosure_radius = radius;
      report.error = e.what();
    }
    report.radius_capped = 0.5 * nearest > cfg.max_radius;
    report.near_boundary = ((points[k].array() - radius) < box.lo.array()).any() || ((points[k].array() + radius) > box.hi.array()).any();
    out.push_back(std::move(report));
  }
  return out;
}

inline Json charge_to_json(const ChargeResult& r) {
  return {{"raw", r.raw}, {"charge", r.charge}, {"residual", r.residual}, {"resolution", r.resolution}, {"converged", r.converged}};
}

inline Json crossing_to_json(const CrossingReport& r) {
  Json loc = Json::array();
  for (Eigen::Index k = 0; k < r.location.size(); ++k) loc.push_back(r.location(k));
  return {{"location", loc},
          {"gap_at_location", r.gap_at_location},
          {"enclosure_radius", r.enclosure_radius},
          {"radius_capped", r.radius_capped},
          {"near_boundary", r.near_boundary},
          {"charge", r.charge ? charge_to_json(*r.charge) : Json(nullptr)},
          {"classification", to_string(r.classification)},
          {"error", r.error.empty() ? Json(nullptr) : Json(r.error)}};
}

/// CSV gap map: header x1..xm,gap then one row per coarse grid point.
inline std::string gap_map_csv(const ScanGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  const auto m = grid.shape.size();
  for (std::size_t k = 0; k < m; ++k) os << 'x' << (k + 1) << ',';
  os << "gap\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    for (std::size_t k = 0; k < m; ++k) os << grid.points[i](static_cast<Eigen::Index>(k)) << ',';
    os << grid.gaps[i] << '\n';
  }
  return os.str();
}

}  // namespace kgen
