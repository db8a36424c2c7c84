#include "kgen/bandscan.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

using namespace kgen;

namespace {

const std::string Models = KGEN_MODELS_DIR;

Matrix pauli(int k) {
  Matrix m(2, 2);
  switch (k) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, I, -I, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

BandModel weyl() { return load_model(Models + "/weyl.json"); }
BandModel two_weyl() { return load_model(Models + "/two_weyl.json"); }
BandModel chiral2d() { return load_model(Models + "/dirac2d_chiral.json"); }
BandModel mass2d() { return load_model(Models + "/dirac2d_mass.json"); }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::invalid_argument;
}

}  // namespace

TEST(Models, LoadShippedModels) {
  const BandModel w = weyl();
  EXPECT_EQ(w.dimension(), 3);
  EXPECT_EQ(w.size(), 2);
  EXPECT_FALSE(w.chiral);
  const BandModel c = chiral2d();
  ASSERT_TRUE(c.chiral);
  EXPECT_EQ(max_abs(*c.chiral - pauli(3)), 0.0);
  EXPECT_EQ(load_model(Models + "/gapped3d.json").dimension(), 3);
  EXPECT_EQ(mass2d().name, "dirac 2d + mass 0.1");
}

TEST(Models, ValidationErrors) {
  Json j = model_to_json(chiral2d());
  j["terms"].push_back({{"powers", {0, 0}}, {"matrix", matrix_to_json(0.1 * pauli(3))}});
  EXPECT_EQ(code_of([&] { model_from_json(j); }), Errc::invalid_chiral);

  Json nh = model_to_json(weyl());
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  const std::string index = "[" + std::to_string(nh["terms"].size()) + "]";
  nh["terms"].push_back({{"powers", {1, 1, 0}}, {"matrix", matrix_to_json(bad)}});
  try {
    model_from_json(nh);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_hermitian);
    EXPECT_NE(std::string(e.what()).find(index), std::string::npos) << e.what();
  }

  Json badj = model_to_json(chiral2d());
  badj["chiral"] = matrix_to_json(2.0 * pauli(3));
  EXPECT_EQ(code_of([&] { model_from_json(badj); }), Errc::invalid_chiral);

  EXPECT_EQ(code_of([] { model_from_json(Json::parse(R"({"dimension": 3})")); }), Errc::parse_error);
  Json wrong = model_to_json(weyl());
  wrong["terms"][0]["powers"] = {1, 0};
  EXPECT_EQ(code_of([&] { model_from_json(wrong); }), Errc::parse_error);
  Json four = model_to_json(weyl());
  four["dimension"] = 4;
  for (auto& t : four["terms"]) t["powers"].push_back(0);
  EXPECT_EQ(code_of([&] { model_from_json(four); }), Errc::unsupported_dimension);
  EXPECT_EQ(code_of([] { load_model("/nonexistent/model.json"); }), Errc::parse_error);
}

TEST(Models, RoundTripExactly) {
  const BandModel m = two_weyl();
  const BandModel back = model_from_json(Json::parse(model_to_json(m).dump()));
  const Point x{{0.1, -0.2, 0.3}};
  EXPECT_EQ(max_abs(m.h(x) - back.h(x)), 0.0);
  EXPECT_EQ(back.name, m.name);
}

TEST(Models, ExportedGeneratorReproducesCharge) {
  const MatrixPolyField q = weyl_field(2, build_rep(3));
  const BandModel m = model_from_json(field_to_json(q, "weyl-2"));
  const ChargeResult direct = chern_2(q);
  const ChargeResult via = chern_2(m.h.jet_fn(), Enclosure::unit(3));
  EXPECT_EQ(direct.raw, via.raw);
  EXPECT_EQ(direct.charge, via.charge);

  const ChiralField cf = dirac_hamiltonian_field(1, build_rep(2));
  const BandModel c = model_from_json(field_to_json(cf.field, "dh-1", cf.grading.matrix));
  EXPECT_EQ(winding_1(chiral_block(c.h, *c.chiral)).raw, winding_1(chiral_block(cf.field, cf.grading)).raw);
}

TEST(Gap, KnownValues) {
  EXPECT_EQ(gap_at(weyl(), Point::Zero(3)), 0.0);
  EXPECT_NEAR(gap_at(weyl(), Point{{0.3, 0.4, 0.0}}), 0.5, 1e-15);
  const BandModel m = mass2d();
  EXPECT_NEAR(gap_at(m, Point::Zero(2)), 0.1, 1e-15);
  EXPECT_NEAR(gap_at(m, Point{{0.3, 0.4}}), std::sqrt(0.25 + 0.01), 1e-15);
}

TEST(Crossings, SingleWeyl) {
  const auto pts = find_crossings(weyl(), Box::cube(3, 1.0));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_LT(pts[0].norm(), 1e-6);
}

TEST(Crossings, TwoWeylOddGrid) {
  // 15 points per axis put no grid node on the crossings.
  CrossingSearch cfg;
  cfg.coarse_n = 15;
  const auto pts = find_crossings(two_weyl(), Box::cube(3, 1.0), cfg);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_LT((pts[0] - Point{{0, 0, -0.5}}).norm(), 1e-5);
  EXPECT_LT((pts[1] - Point{{0, 0, 0.5}}).norm(), 1e-5);
}

TEST(Crossings, EmptyWhenGapped) {
  EXPECT_TRUE(find_crossings(mass2d(), Box::cube(2, 1.0)).empty());
  EXPECT_TRUE(find_crossings(load_model(Models + "/gapped3d.json"), Box::cube(3, 1.0)).empty());
  EXPECT_TRUE(find_crossings(weyl(), Box{Point{{0.2, 0.2, 0.2}}, Point{{1.0, 1.0, 1.0}}}).empty());
  EXPECT_THROW(find_crossings(weyl(), Box::cube(3, 1.0), {4}), Error);
  EXPECT_THROW(find_crossings(weyl(), Box::cube(2, 1.0)), Error);
}

TEST(Crossings, MinGapOfMassModel) {
  const Minimum m = min_gap(mass2d(), Box::cube(2, 1.0));
  EXPECT_NEAR(m.gap, 0.1, 1e-9);
  EXPECT_LT(m.location.norm(), 1e-6);
  const Minimum off = min_gap(mass2d(), Box{Point{{-0.7, -0.9}}, Point{{0.3, 0.8}}}, 9);
  EXPECT_NEAR(off.gap, 0.1, 1e-9);
}

TEST(Charges, WeylNode) {
  const CrossingReport r = charge_crossing(weyl(), Point::Zero(3), 0.5);
  ASSERT_TRUE(r.charge);
  // sigma.x with sigma_2 = [[0, i], [-i, 0]] is the x1-mirror of the left-handed generator.
  EXPECT_EQ(r.charge->charge, -chern_sign_weyl());
  EXPECT_EQ(r.classification, Classification::Weyl);
  EXPECT_EQ(r.gap_at_location, 0.0);
}

TEST(Charges, TwoWeylOppositeAndConserved) {
  const BandModel m = two_weyl();
  const long up = charge_crossing(m, Point{{0, 0, 0.5}}, 0.4).charge->charge;
  const long down = charge_crossing(m, Point{{0, 0, -0.5}}, 0.4).charge->charge;
  EXPECT_EQ(std::abs(up), 1);
  EXPECT_EQ(up + down, 0);
  const CrossingReport big = charge_crossing(m, Point::Zero(3), 1.0);
  EXPECT_LT(std::abs(big.charge->raw), 0.01);
  EXPECT_EQ(big.classification, Classification::Trivial);
}

TEST(Charges, ChiralDirac2D) {
  const CrossingReport r = charge_crossing(chiral2d(), Point::Zero(2), 0.5);
  EXPECT_EQ(std::abs(r.charge->charge), 1);
  EXPECT_EQ(r.classification, Classification::DiracChiral);
}

TEST(Charges, Errors) {
  EXPECT_EQ(code_of([] { charge_crossing(mass2d(), Point::Zero(2), 0.5); }), Errc::missing_chiral);
  // A circle node lands exactly on the crossing at the origin.
  EXPECT_EQ(code_of([] { charge_crossing(chiral2d(), Point{{0.3, 0.0}}, 0.3); }), Errc::enclosure_invalid);
  EXPECT_EQ(code_of([] { charge_crossing(weyl(), Point::Zero(2), 0.5); }), Errc::dimension_mismatch);
}

TEST(Charges, WeylStableUnderConstantShift) {
  const long base = -chern_sign_weyl();
  for (int j = 1; j <= 3; ++j) {
    for (double t : {-0.3, 0.15, 0.3}) {
      BandModel m = weyl();
      m.h.add_constant(t * pauli(j));
      const auto reports = scan(m, Box::cube(3, 1.0));
      ASSERT_EQ(reports.size(), 1u) << j << " " << t;
      EXPECT_GT(reports[0].location.norm(), 0.1);
      ASSERT_TRUE(reports[0].charge);
      EXPECT_EQ(reports[0].charge->charge, base);
    }
  }
}

TEST(Charges, ChiralProtection) {
  Rng rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const long base = charge_crossing(chiral2d(), Point::Zero(2), 0.5).charge->charge;
  for (int s = 0; s < 10; ++s) {
    BandModel m = chiral2d();
    // Terms built from sigma_1 and sigma_2 anti-commute with sigma_3; total norm < 0.3 on the enclosure.
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const double scale = 0.25 / (std::abs(a) + std::abs(b) + 0.5 * (std::abs(c) + std::abs(d)));
    m.h.add_constant(scale * (a * pauli(1) + b * pauli(2)));
    m.h.add_linear(0, scale * c * pauli(2));
    m.h.add_linear(1, scale * d * pauli(1));
    validate_model(m);
    const auto pts = find_crossings(m, Box::cube(2, 1.0));
    ASSERT_EQ(pts.size(), 1u) << s;
    const CrossingReport r = charge_crossing(m, pts[0], 0.5);
    EXPECT_EQ(r.charge->charge, base) << s;
  }
}

TEST(Scan, TwoWeylReports) {
  const auto reports = scan(two_weyl(), Box::cube(3, 1.0));
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_LT(reports[0].location(2), reports[1].location(2));
  long total = 0;
  for (const auto& r : reports) {
    ASSERT_TRUE(r.charge) << r.error;
    EXPECT_TRUE(r.error.empty());
    EXPECT_NEAR(r.enclosure_radius, 0.5, 1e-5);
    EXPECT_EQ(r.classification, Classification::Weyl);
    total += r.charge->charge;
  }
  EXPECT_EQ(total, 0);
  EXPECT_TRUE(scan(mass2d(), Box::cube(2, 1.0)).empty());
}

TEST(Scan, RadiusCapAndBoundaryFlags) {
  ScanConfig cfg;
  cfg.max_radius = 0.2;
  const auto reports = scan(weyl(), Box::cube(3, 0.1), cfg);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].enclosure_radius, 0.2);
  EXPECT_TRUE(reports[0].near_boundary);
  EXPECT_TRUE(reports[0].radius_capped);
}

TEST(Scan, ThreadsDoNotChangeReports) {
  ScanConfig one, three;
  three.threads = 3;
  const auto a = scan(two_weyl(), Box::cube(3, 1.0), one);
  const auto b = scan(two_weyl(), Box::cube(3, 1.0), three);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(crossing_to_json(a[k]).dump(), crossing_to_json(b[k]).dump());
  }
}

TEST(Scan, GapMapCsv) {
  const ScanGrid g = coarse_scan(mass2d(), Box::cube(2, 1.0), 8);
  const std::string csv = gap_map_csv(g);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x1,x2,gap");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);
}
