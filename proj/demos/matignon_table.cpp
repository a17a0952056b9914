// Conductor and pole statistics of the additive-polynomial spaces: the
// conductor is p^{n-1}(p-1), the pole union and the common core follow it.

#include <logforms/constructions.hpp>

#include <cstdio>
#include <vector>

using namespace logforms;

int main() {
  struct Cell {
    int p, n;
    std::vector<u32> as;
  };
  const Cell cells[] = {
      {2, 2, {1, 2}}, {2, 3, {1, 2, 4}}, {3, 2, {1, 3}}, {3, 3, {1, 3, 9}}, {5, 2, {1, 5}},
  };
  std::puts("  p  n    m+1  union  common  spanning points");
  for (const Cell& c : cells) {
    const FieldSpec* F = FieldSpec::get(c.p, c.n);
    LogFormSpace S = matignon_space(F, c.as);
    SpaceDiagnostics diag = validate_space(S);
    if (!diag.valid) {
      std::printf("%3d %2d  invalid: %s\n", c.p, c.n, diag.failure.c_str());
      return 1;
    }
    std::printf("%3d %2d %6d %6d %7d ", c.p, c.n, S.m + 1, diag.total_poles, diag.common_poles);
    for (u32 a : c.as) std::printf(" %u", a);
    std::printf("   over %s\n", F->label().c_str());
  }
  return 0;
}
