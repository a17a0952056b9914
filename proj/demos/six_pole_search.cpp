// Searches for the six-pole dimension-2 space over F_9, validates the
// witness, and checks the refined lift bound on each combination's poles.

#include <logforms/log_space.hpp>
#include <logforms/search.hpp>
#include <logforms/witt_lift.hpp>

#include <cstdio>
#include <vector>

using namespace logforms;

int main() {
  SearchOptions opt;
  opt.find_one = true;
  SearchResult res = space_search_dim2(3, 2, 5, opt);
  if (res.verdict != SearchVerdict::found) {
    std::puts("no witness over F_9; widen the search");
    return 1;
  }
  const auto& [A, B] = res.pair_witnesses.front();
  std::printf("witness over %s after %llu candidates:\n", A.field()->label().c_str(),
              static_cast<unsigned long long>(res.candidates));
  std::printf("  A = %s\n  B = %s\n", A.str("z").c_str(), B.str("z").c_str());

  ABReport ab = forms_from_AB(A, B);
  LogFormSpace S;
  S.F = A.field();
  S.m = 5;
  S.n = 2;
  S.basis = {ab.w1, ab.w2};
  SpaceDiagnostics diag = validate_space(S);
  std::printf("validate_space: %s, %d poles in the union, %d common\n",
              diag.valid ? "ok" : diag.failure.c_str(), diag.total_poles, diag.common_poles);

  std::puts("pole:class lists and the p-part of the lifted product:");
  for (const auto& c : projective_representatives(3, 2)) {
    DifferentialForm w = combine(S.basis, c);
    std::vector<u32> poles;
    std::vector<int> classes;
    for (const PoleDatum& d : poles_and_residues(w)) {
      poles.push_back(d.location.packed());
      classes.push_back(static_cast<int>(d.residue.packed()));
    }
    std::printf("  (%u,%u):", c[0], c[1]);
    for (size_t i = 0; i < poles.size(); ++i) std::printf(" %u:%d", poles[i], classes[i]);
    RefinedShapeReport rep = refined_lift_shape(S.F, poles, classes, 5);
    if (rep.observed_valuation < 0)
      std::printf("  ->  product recomposes exactly, no p-part\n");
    else
      std::printf("  ->  p-part valuation %d, bound %d\n", rep.observed_valuation,
                  rep.required_valuation);
  }
  return 0;
}
