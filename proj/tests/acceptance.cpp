// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include "kgen/kgen.hpp"
#include "kgen_cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

using namespace kgen;
namespace fs = std::filesystem;

namespace {

const std::string Models = KGEN_MODELS_DIR;

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [fail: " << what << "]";
    }
  }
};

Matrix pauli(int k) {
  Matrix m(2, 2);
  switch (k) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, I, -I, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Matrix random_matrix(int n, double norm, bool hermitian, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  if (hermitian) a = ((a + a.adjoint()) / 2.0).eval();
  return a * (norm / operator_norm(a));
}

Matrix random_unitary(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * identity(n);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kgen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

// ---- criteria ------------------------------------------------------------------

void clifford_suite(Check& c) {
  double worst = 0.0;
  for (int d = 1; d <= 9; ++d) {
    const VerifyReport r = verify_clifford({d, 0, 1, 1});
    c.expect(r.pass, "clifford d=" + std::to_string(d));
    worst = std::max(worst, r.max_residual);
    // Direct check of the relations on both variants.
    for (Handedness h : {Handedness::Left, Handedness::Right}) {
      if (d % 2 == 0 && h == Handedness::Right) continue;
      const CliffordRep rep = build_rep(d, h);
      const int n = rep.size();
      for (int i = 0; i < d; ++i) {
        c.expect(rep[i] == rep[i].adjoint(), "hermitian");
        c.expect(rep[i] * rep[i] == identity(n), "unitary");
        for (int j = i + 1; j < d; ++j) c.expect(rep[i] * rep[j] + rep[j] * rep[i] == Matrix::Zero(n, n), "anticommute");
      }
      if (d % 2 == 1) {
        Matrix p = identity(n);
        for (int i = 0; i < d; ++i) p = p * rep[i];
        const int k = ((d - 1) / 2) % 4;
        const Complex ik[4] = {1.0, I, -1.0, -I};
        const Complex expected = (h == Handedness::Left ? 1.0 : -1.0) * ik[k];
        c.expect(p == expected * identity(n), "scalar d=" + std::to_string(d));
      }
    }
  }
  c.expect(worst == 0.0, "residual not exactly zero");
  c.notes << " max_residual=" << worst;
}

void index_identity(Check& c) {
  for (int d : {1, 3}) {
    const VerifyReport r = verify_index({d, 1000, 1, 1});
    c.expect(r.max_residual < 1e-10, "index d=" + std::to_string(d));
    c.notes << " d" << d << "=" << r.max_residual;
  }
}

void exp_identity(Check& c) {
  for (int d : {2, 4}) {
    const VerifyReport r = verify_exp({d, 1000, 1, 1});
    c.expect(r.max_residual < 1e-10, "exp d=" + std::to_string(d));
    c.notes << " d" << d << "=" << r.max_residual;
  }
}

void homotopy(Check& c) {
  const VerifyReport r = verify_homotopy({2, 500, 1, 1});
  const double s = r.metrics.at("min_singular_value");
  c.expect(s > 1e-3, "min singular value");
  c.notes << " min_sigma=" << s;
}

void generator_charges(Check& c) {
  struct Case {
    const char* name;
    std::function<RawIntegral(int)> raw;
    int n;
    double tol;
  };
  const MatrixPolyField u1 = dirac_phase_field(1, build_rep(1));
  const MatrixPolyField q2 = weyl_field(2, build_rep(3));
  const MatrixPolyField u3 = dirac_phase_field(3, build_rep(3));
  const std::vector<Case> cases{
      {"w1", [&](int n) { return winding_1_raw(u1.jet_fn(), Enclosure::unit(2), n); }, 256, 1e-8},
      {"c2", [&](int n) { return chern_2_raw(q2.jet_fn(), Enclosure::unit(3), n); }, 64, 1e-6},
      {"w3", [&](int n) { return winding_3_raw(u3.jet_fn(), Enclosure::unit(4), n); }, 24, 1e-4},
  };
  for (const auto& k : cases) {
    const double a = k.raw(k.n).value, b = k.raw(2 * k.n).value;
    const double q = std::round(a);
    const double ra = std::abs(a - q), rb = std::abs(b - q);
    c.expect(std::abs(q) == 1.0, std::string(k.name) + " not +-1");
    c.expect(ra < k.tol, std::string(k.name) + " residual");
    c.expect(rb <= ra + 1e-13, std::string(k.name) + " doubling");
    c.notes << " " << k.name << "=" << q << " res=" << ra << "->" << rb;
  }
}

void charge_algebra(Check& c) {
  const MatrixPolyField u1 = dirac_phase_field(1, build_rep(1));
  const MatrixPolyField q2 = weyl_field(2, build_rep(3));
  const MatrixPolyField u3 = dirac_phase_field(3, build_rep(3));
  const long c1 = winding_1(u1).charge, c2 = chern_2(q2).charge, c3 = winding_3(u3).charge;

  c.expect(winding_1(direct_sum(u1, u1.reflected(0))).charge == 0, "w1 sum");
  c.expect(chern_2(direct_sum(q2, q2)).charge == 2 * c2, "c2 sum");
  c.expect(winding_3(direct_sum(u3, u3)).charge == 2 * c3, "w3 sum");
  c.expect(winding_1(u1.reflected(0)).charge == -c1, "w1 reflect");
  c.expect(chern_2(q2.reflected(0)).charge == -c2, "c2 reflect");
  c.expect(winding_3(u3.reflected(0)).charge == -c3, "w3 reflect");

  Rng rng(2024);
  const Matrix w = random_unitary(2, rng);
  c.expect(chern_2(q2.conjugated(w)).charge == c2, "c2 conjugate");
  c.expect(winding_3(u3.conjugated(w)).charge == c3, "w3 conjugate");

  int stable = 0;
  for (int s = 0; s < 20; ++s) {
    MatrixPolyField h = q2, u = u3, v = u1;
    h.add_constant(random_matrix(2, 0.025, true, rng));
    u.add_constant(random_matrix(2, 0.02, false, rng));
    v.add_constant(random_matrix(1, 0.05, false, rng));
    for (int j = 0; j < 3; ++j) h.add_linear(j, random_matrix(2, 0.025, true, rng));
    for (int j = 0; j < 4; ++j) u.add_linear(j, random_matrix(2, 0.02, false, rng));
    for (int j = 0; j < 2; ++j) v.add_linear(j, random_matrix(1, 0.025, false, rng));
    if (chern_2(h).charge == c2 && winding_3(u).charge == c3 && winding_1(v).charge == c1) ++stable;
  }
  c.expect(stable == 20, "perturbations");
  c.notes << " perturbations_stable=" << stable << "/20";
}

void band_phenomenology(Check& c) {
  const BandModel two = load_model(Models + "/two_weyl.json");
  const auto reports = scan(two, Box::cube(3, 1.0));
  c.expect(reports.size() == 2, "two crossings");
  long total = 0;
  for (const auto& r : reports) {
    const double target = r.location(2) > 0 ? 0.5 : -0.5;
    c.expect((r.location - Point{{0.0, 0.0, target}}).norm() < 1e-5, "crossing location");
    c.expect(r.charge.has_value(), "crossing charged");
    if (r.charge) total += r.charge->charge;
  }
  c.expect(total == 0, "charges sum");
  const CrossingReport big = charge_crossing(two, Point::Zero(3), 1.0);
  c.expect(big.charge && std::abs(big.charge->raw) < 0.01, "large sphere");

  const BandModel mass = load_model(Models + "/dirac2d_mass.json");
  c.expect(scan(mass, Box::cube(2, 1.0)).empty(), "mass scan empty");
  const double gap = min_gap(mass, Box::cube(2, 1.0)).gap;
  c.expect(std::abs(gap - 0.1) < 1e-9, "min gap");

  const BandModel chiral = load_model(Models + "/dirac2d_chiral.json");
  const long base = charge_crossing(chiral, Point::Zero(2), 0.5).charge->charge;
  c.expect(std::abs(base) == 1, "chiral winding");
  Rng rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int stable = 0;
  for (int s = 0; s < 10; ++s) {
    BandModel m = chiral;
    const double a = u(rng), b = u(rng), cc = u(rng), d = u(rng);
    const double scale = 0.25 / (std::abs(a) + std::abs(b) + 0.5 * (std::abs(cc) + std::abs(d)));
    m.h.add_constant(scale * (a * pauli(1) + b * pauli(2)));
    m.h.add_linear(0, scale * cc * pauli(2));
    m.h.add_linear(1, scale * d * pauli(1));
    validate_model(m);
    const auto pts = find_crossings(m, Box::cube(2, 1.0));
    if (pts.size() == 1 && charge_crossing(m, pts[0], 0.5).charge->charge == base) ++stable;
  }
  c.expect(stable == 10, "chiral perturbations");
  c.notes << " crossings=" << reports.size() << " big_raw=" << (big.charge ? big.charge->raw : 0.0) << " min_gap=" << gap
          << " chiral_stable=" << stable << "/10";
}

void fredholm(Check& c) {
  for (int d : {2, 1}) {
    const VerifyReport r = verify_fredholm({d, 1000, 1, 1});
    c.expect(r.max_residual < 1e-12, "fredholm d=" + std::to_string(d));
    c.notes << " d" << d << "=" << r.max_residual;
  }
}

void determinism(Check& c) {
  const fs::path dir = fs::temp_directory_path() / "kgen_acceptance";
  fs::create_directories(dir);
  const std::vector<std::vector<std::string>> commands{
      {"clifford", "--d", "9", "--handedness", "right"},
      {"generator", "--kind", "weyl", "--d", "4"},
      {"verify", "--suite", "homotopy", "--d", "2", "--seed", "3", "--threads", "2"},
      {"verify", "--suite", "index", "--d", "3", "--seed", "8"},
      {"charge", Models + "/two_weyl.json", "--center", "0", "0", "0.5", "--radius", "0.4", "--threads", "2"},
      {"scan", Models + "/two_weyl.json", "--threads", "2", "--csv", (dir / "gap.csv").string()},
  };
  int same = 0, k = 0;
  for (const auto& cmd : commands) {
    std::string first;
    bool ok = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("run" + std::to_string(k) + "_" + std::to_string(rep) + ".json");
      auto args = cmd;
      args.insert(args.end(), {"--out", out.string()});
      ok = ok && run_cli(args) == 0;
      const std::string body = slurp(out) + (cmd[0] == "scan" ? slurp(dir / "gap.csv") : "");
      if (rep == 0) first = body;
      else ok = ok && !body.empty() && body == first;
    }
    if (ok) ++same;
    c.expect(ok, cmd[0] + " output differs");
    ++k;
  }
  fs::remove_all(dir);
  c.notes << " identical=" << same << "/" << commands.size();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*fn)(Check&);
    double budget_s;  // 0 means no runtime bound
  };
  const Criterion criteria[] = {
      {"clifford suite", clifford_suite, 1.0},   {"index identity", index_identity, 5.0},
      {"exp identity", exp_identity, 5.0},       {"homotopy invertible", homotopy, 0.0},
      {"generator charges", generator_charges, 30.0}, {"charge algebra", charge_algebra, 0.0},
      {"band phenomenology", band_phenomenology, 0.0}, {"fredholm profile", fredholm, 0.0},
      {"determinism", determinism, 0.0},
  };
  int failures = 0, k = 0;
  for (const auto& cr : criteria) {
    ++k;
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_s > 0) c.expect(secs < cr.budget_s, "runtime budget");
    if (!c.ok) ++failures;
    std::printf("%s %d %s (%.2fs)%s\n", c.ok ? "PASS" : "FAIL", k, cr.name, secs, c.notes.str().c_str());
  }
  std::printf("%d/%d criteria passed\n", k - failures, k);
  return failures == 0 ? 0 : 1;
}
