// Lifts two points over F_4 to characteristic zero and shows why the
// correction matters: the raw product of (1 - X_i X) misses the good
// reduction shape, the eps-corrected product restores z^2 - z = u t^{2n-1}.

#include <logforms/witt_lift.hpp>

#include <cstdio>

using namespace logforms;

namespace {

void print_coords(const char* name, const WittElement& e) {
  std::printf("  %s = (", name);
  const auto& c = e.coords();
  for (size_t i = 0; i < c.size(); ++i)
    std::printf("%s%llu", i ? ", " : "", static_cast<unsigned long long>(c[i]));
  std::puts(")");
}

}  // namespace

int main() {
  const WittRing* W = WittRing::get(2, 2, 6);
  // X_1 = 2 reduces to 0, X_2 = 1 is already Teichmuller; the slope is 1.
  std::vector<WittElement> X = {WittElement::from_int(W, 2), WittElement::one(W)};
  LiftP2Report rep = lift_p2(X, WittElement::one(W));

  std::printf("residue certificate over %s: %s\n", W->F->label().c_str(),
              rep.f1.str("z").c_str());
  std::printf("residues x_1..x_%d:", 2 * rep.n);
  for (u32 r : rep.residues) std::printf(" %u", r);
  std::puts("");
  std::puts("corrections (Witt coordinates, first n slots and the last stay zero):");
  for (size_t i = 0; i < rep.eps.size(); ++i) {
    char name[8];
    std::snprintf(name, sizeof name, "eps_%zu", i + 1);
    print_coords(name, rep.eps[i]);
  }
  std::printf("uncorrected product reduces to %s\n", rep.Ftilde.reduce().str("X").c_str());
  std::printf("  reduction_check_p2: %s\n",
              reduction_check_p2(rep.Ftilde, rep.n) ? "good" : "bad");
  std::printf("corrected product reduces to %s\n", rep.F.reduce().str("X").c_str());
  std::printf("  reduction_check_p2: %s\n", reduction_check_p2(rep.F, rep.n) ? "good" : "bad");
  return 0;
}
