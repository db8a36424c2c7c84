// Command-line front end. `run` is kept in a header so tests can drive it
// in-process with string streams.
#pragma once

#include "kgen/kgen.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace kgen::cli {

enum ExitCode { Success = 0, NumericalFailure = 1, UsageError = 2 };

inline int exit_code_for(Errc c) {
  switch (c) {
    case Errc::gap_closed:
    case Errc::enclosure_invalid:
    case Errc::not_chiral:
    case Errc::lift_invalid:
    case Errc::domain_error:
    case Errc::pole_error:
    case Errc::not_irreducible:
    case Errc::inconsistent_representation:
      return NumericalFailure;
    default:
      return UsageError;
  }
}

inline Point to_point(const std::vector<double>& v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) p(static_cast<Eigen::Index>(k)) = v[k];
  return p;
}

inline Json point_json(const Point& p) {
  Json j = Json::array();
  for (Eigen::Index k = 0; k < p.size(); ++k) j.push_back(p(k));
  return j;
}

inline Handedness parse_handedness(const std::string& s) {
  if (s == "left") return Handedness::Left;
  if (s == "right") return Handedness::Right;
  throw Error(Errc::invalid_argument, "handedness must be left or right");
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::invalid_argument, "cannot write " + path);
  f << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Options {
  int d = 0;
  std::string handedness = "left";
  std::string kind;
  std::vector<double> point;
  std::string suite;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string model;
  std::vector<double> center;
  double radius = 0.5;
  int resolution = 0;
  std::vector<double> box;
  int grid = 16;
  double gap_tol = 1e-8;
  double max_radius = 0.5;
  std::string csv;
  int threads = 1;
};

inline int cmd_clifford(const Options& o, std::ostream& out) {
  if (o.d < 1 || o.d > MaxCliffordGenerators) throw Error(Errc::invalid_argument, "d must lie in [1, 13] (matrix size guard N <= 64)");
  emit(dump(rep_to_json(build_rep(o.d, parse_handedness(o.handedness)))), o.out, out);
  return Success;
}

inline int cmd_generator(const Options& o, std::ostream& out) {
  const Handedness h = parse_handedness(o.handedness);
  MatrixPolyField field;
  std::optional<Matrix> chiral;
  std::string name;
  if (o.kind == "weyl") {
    if (o.d < 2 || o.d % 2 != 0) throw Error(Errc::invalid_argument, "weyl generator needs even d >= 2");
    field = weyl_field(o.d, build_rep(o.d + 1, h));
    name = "weyl-" + std::to_string(o.d);
  } else if (o.kind == "dirac-phase") {
    if (o.d < 1 || o.d % 2 != 1) throw Error(Errc::invalid_argument, "dirac-phase generator needs odd d");
    field = dirac_phase_field(o.d, build_rep(o.d, h));
    name = "dirac-phase-" + std::to_string(o.d);
  } else if (o.kind == "dirac-hamiltonian") {
    if (o.d < 1 || o.d % 2 != 1) throw Error(Errc::invalid_argument, "dirac-hamiltonian generator needs odd d");
    const ChiralField cf = dirac_hamiltonian_field(o.d, build_rep(o.d + 1));
    field = cf.field;
    chiral = cf.grading.matrix;
    name = "dirac-hamiltonian-" + std::to_string(o.d);
  } else {
    throw Error(Errc::invalid_argument, "kind must be weyl, dirac-phase or dirac-hamiltonian");
  }
  if (field.size() > MaxMatrixSize) throw Error(Errc::invalid_argument, "matrix size exceeds 64");

  if (!o.point.empty()) {
    if (static_cast<int>(o.point.size()) != field.ambient_dim())
      throw Error(Errc::dimension_mismatch, "--point needs " + std::to_string(field.ambient_dim()) + " coordinates");
    const Point x = to_point(o.point);
    emit(dump({{"kind", o.kind}, {"d", o.d}, {"point", point_json(x)}, {"value", matrix_to_json(field(x))}}), o.out, out);
    return Success;
  }
  emit(dump(field_to_json(field, name, chiral, 0.0)), o.out, out);
  return Success;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  VerifyConfig cfg;
  cfg.d = o.d;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.threads = resolve_threads(o.threads);
  const VerifyReport r = run_verify(o.suite, cfg);
  emit(dump(report_to_json(r)), o.out, out);
  return r.pass ? Success : NumericalFailure;
}

inline int cmd_charge(const Options& o, std::ostream& out) {
  const BandModel model = load_model(o.model);
  const int m = model.dimension();
  const Point center = o.center.empty() ? Point(Point::Zero(m)) : to_point(o.center);
  if (center.size() != m) throw Error(Errc::dimension_mismatch, "--center needs " + std::to_string(m) + " coordinates");
  if (!(o.radius > 0.0)) throw Error(Errc::invalid_argument, "--radius must be positive");
  ChargeConfig cfg;
  cfg.resolution = o.resolution;
  cfg.gap_tol = o.gap_tol;
  cfg.threads = resolve_threads(o.threads);
  const CrossingReport rep = charge_crossing(model, center, o.radius, cfg);
  Json j = charge_to_json(*rep.charge);
  j["center"] = point_json(center);
  j["radius"] = o.radius;
  j["classification"] = to_string(rep.classification);
  j["convergence_pair"] = {rep.charge->convergence_pair[0], rep.charge->convergence_pair[1]};
  emit(dump(j), o.out, out);
  return rep.charge->converged ? Success : NumericalFailure;
}

inline Box parse_box(const std::vector<double>& v, int m) {
  if (v.empty()) return Box::cube(m, 1.0);
  Box b{Point(m), Point(m)};
  if (v.size() == 2) {
    b.lo.setConstant(v[0]);
    b.hi.setConstant(v[1]);
  } else if (static_cast<int>(v.size()) == 2 * m) {
    for (int k = 0; k < m; ++k) {
      b.lo(k) = v[static_cast<std::size_t>(2 * k)];
      b.hi(k) = v[static_cast<std::size_t>(2 * k + 1)];
    }
  } else {
    throw Error(Errc::invalid_argument, "--box takes 'lo hi' or one 'lo hi' pair per axis");
  }
  return b;
}

inline int cmd_scan(const Options& o, std::ostream& out) {
  const BandModel model = load_model(o.model);
  const int m = model.dimension();
  const Box box = parse_box(o.box, m);
  check_box(model, box);
  const int threads = resolve_threads(o.threads);

  ScanConfig cfg;
  cfg.search.coarse_n = o.grid;
  cfg.search.gap_tol = o.gap_tol;
  cfg.max_radius = o.max_radius;
  cfg.resolution = o.resolution;
  cfg.threads = threads;
  const auto reports = scan(model, box, cfg);

  Json crossings = Json::array();
  long total = 0;
  for (const auto& r : reports) {
    crossings.push_back(crossing_to_json(r));
    if (r.charge) total += r.charge->charge;
  }
  const Minimum lowest = min_gap(model, box, o.grid);
  Json j{{"name", model.name},
         {"box", {{"lo", point_json(box.lo)}, {"hi", point_json(box.hi)}}},
         {"grid", o.grid},
         {"gap_tol", o.gap_tol},
         {"min_gap", lowest.gap},
         {"min_gap_location", point_json(lowest.location)},
         {"total_charge", total},
         {"crossings", crossings}};
  emit(dump(j), o.out, out);
  if (!o.csv.empty()) {
    std::ofstream f(o.csv, std::ios::binary);
    if (!f) throw Error(Errc::invalid_argument, "cannot write " + o.csv);
    f << gap_map_csv(coarse_scan(model, box, o.grid, threads));
  }
  return Success;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"K-theory generators, connecting maps and band-crossing charges"};
  app.require_subcommand(1);
  Options o;

  auto* clifford = app.add_subcommand("clifford", "Print an irreducible Clifford representation as JSON");
  clifford->add_option("--d", o.d, "Number of generators (1..13)")->required();
  clifford->add_option("--handedness", o.handedness, "left or right (odd d)")->check(CLI::IsMember({"left", "right"}));
  clifford->add_option("--out", o.out, "Output file (default stdout)");

  auto* generator = app.add_subcommand("generator", "Export a generator field as a model file or evaluate it");
  generator->add_option("--kind", o.kind, "weyl, dirac-phase or dirac-hamiltonian")
      ->required()
      ->check(CLI::IsMember({"weyl", "dirac-phase", "dirac-hamiltonian"}));
  generator->add_option("--d", o.d, "Sphere dimension")->required();
  generator->add_option("--handedness", o.handedness, "left or right")->check(CLI::IsMember({"left", "right"}));
  generator->add_option("--point", o.point, "Evaluate at this point instead of exporting");
  generator->add_option("--out", o.out, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", o.suite, "clifford, index, exp, homotopy or fredholm")
      ->required()
      ->check(CLI::IsMember(verify_suites()));
  verify->add_option("--d", o.d, "Dimension")->required();
  verify->add_option("--samples", o.samples, "Random samples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--threads", o.threads, "Worker threads (K_GEN_THREADS overrides)")->check(CLI::PositiveNumber);
  verify->add_option("--out", o.out, "Output file (default stdout)");

  auto* charge = app.add_subcommand("charge", "Charge of a model on one enclosing sphere");
  charge->add_option("model", o.model, "Model JSON file")->required();
  charge->add_option("--center", o.center, "Enclosure center (default origin)");
  charge->add_option("--radius", o.radius, "Enclosure radius");
  charge->add_option("--resolution", o.resolution, "Quadrature resolution (0 = default)")->check(CLI::NonNegativeNumber);
  charge->add_option("--gap-tol", o.gap_tol, "Gap tolerance");
  charge->add_option("--threads", o.threads, "Worker threads (K_GEN_THREADS overrides)")->check(CLI::PositiveNumber);
  charge->add_option("--out", o.out, "Output file (default stdout)");

  auto* scan_cmd = app.add_subcommand("scan", "Find and charge band crossings in a box");
  scan_cmd->add_option("model", o.model, "Model JSON file")->required();
  scan_cmd->add_option("--box", o.box, "'lo hi' for every axis, or one 'lo hi' pair per axis (default -1 1)");
  scan_cmd->add_option("--grid", o.grid, "Coarse grid points per axis (>= 8)");
  scan_cmd->add_option("--gap-tol", o.gap_tol, "Gap below which a point counts as a crossing");
  scan_cmd->add_option("--max-radius", o.max_radius, "Cap on the enclosure radius");
  scan_cmd->add_option("--resolution", o.resolution, "Quadrature resolution (0 = default)")->check(CLI::NonNegativeNumber);
  scan_cmd->add_option("--csv", o.csv, "Write the coarse gap map as CSV");
  scan_cmd->add_option("--threads", o.threads, "Worker threads (K_GEN_THREADS overrides)")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--out", o.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return UsageError;
  }

  try {
    if (*clifford) return cmd_clifford(o, out);
    if (*generator) return cmd_generator(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*charge) return cmd_charge(o, out);
    if (*scan_cmd) return cmd_scan(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return NumericalFailure;
  }
  return UsageError;
}

}  // namespace kgen::cli
