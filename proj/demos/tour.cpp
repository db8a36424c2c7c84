// Walks through the library: representations, identities, generator charges
// and a crossing scan of the two-node model shipped in demos/models.
#include "kgen/kgen.hpp"

#include <cstdio>
#include <string>

using namespace kgen;

int main(int argc, char** argv) {
  const std::string models = argc > 1 ? argv[1] : KGEN_MODELS_DIR;

  for (int d = 1; d <= 5; ++d) {
    const CliffordRep rep = build_rep(d, Handedness::Left);
    std::printf("C_%d: %dx%d, handedness %s, residual %.1e\n", d, rep.size(), rep.size(), to_string(rep.handedness),
                verify_rep(rep).max_residual);
  }

  for (const auto& [suite, d] : {std::pair<std::string, int>{"index", 1}, {"index", 3}, {"exp", 2}, {"homotopy", 2}}) {
    const VerifyReport r = run_verify(suite, {d, 1000, 1, 1});
    std::printf("%-9s d=%d  max residual %.3e  %s\n", suite.c_str(), d, r.max_residual, r.pass ? "pass" : "FAIL");
  }

  const auto w1 = winding_1(dirac_phase_field(1, build_rep(1)));
  const auto c2 = chern_2(weyl_field(2, build_rep(3)));
  const auto w3 = winding_3(dirac_phase_field(3, build_rep(3)));
  std::printf("winding_1 = %+.12f\nchern_2   = %+.12f\nwinding_3 = %+.12f\n", w1.raw, c2.raw, w3.raw);

  const BandModel model = load_model(models + "/two_weyl.json");
  for (const auto& r : scan(model, Box::cube(3, 1.0))) {
    std::printf("crossing at (%+.6f, %+.6f, %+.6f)  charge %+ld  %s\n", r.location(0), r.location(1), r.location(2),
                r.charge ? r.charge->charge : 0L, to_string(r.classification));
  }
  return 0;
}
