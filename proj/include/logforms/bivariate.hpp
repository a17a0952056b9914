#pragma once

#include <utility>
#include <vector>

#include "logforms/polynomial.hpp"

namespace logforms {

// Polynomial in X whose coefficients are polynomials in a over F_p.  The X
// side is only ever handled modulo X^p - X, which keeps the X-degree below p.
struct BivariatePoly {
  const FieldSpec* F = nullptr;
  std::vector<Polynomial> cx;  // cx[i] multiplies X^i

  static BivariatePoly x_plus_a(const FieldSpec* F) {
    return {F, {Polynomial::x(F), Polynomial::one(F)}};
  }
  static BivariatePoly x_power(const FieldSpec* F, int d) {
    std::vector<Polynomial> c(static_cast<size_t>(d) + 1, Polynomial(F));
    c.back() = Polynomial::one(F);
    return {F, std::move(c)};
  }

  int xdegree() const {
    for (int i = static_cast<int>(cx.size()) - 1; i >= 0; --i)
      if (!cx[static_cast<size_t>(i)].is_zero()) return i;
    return -1;
  }
  Polynomial coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(cx.size())) return Polynomial(F);
    return cx[static_cast<size_t>(i)];
  }
};

// Folds X^{p+j} onto X^{1+j} until the X-degree drops below p.
inline void reduce_mod_xp_x(BivariatePoly& f) {
  const int p = f.F->p;
  for (int d = f.xdegree(); d >= p; --d) {
    Polynomial& top = f.cx[static_cast<size_t>(d)];
    if (top.is_zero()) continue;
    f.cx[static_cast<size_t>(d - p + 1)] = f.cx[static_cast<size_t>(d - p + 1)] + top;
    top = Polynomial(f.F);
  }
  while (f.cx.size() > static_cast<size_t>(p)) f.cx.pop_back();
}

inline BivariatePoly biv_mul_mod(const BivariatePoly& f, const BivariatePoly& g) {
  check_precondition(f.F->same(*g.F), "bivariate operands over different fields");
  BivariatePoly out{f.F, {}};
  int df = f.xdegree(), dg = g.xdegree();
  if (df < 0 || dg < 0) return out;
  out.cx.assign(static_cast<size_t>(df + dg) + 1, Polynomial(f.F));
  for (int i = 0; i <= df; ++i) {
    if (f.cx[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; j <= dg; ++j)
      out.cx[static_cast<size_t>(i + j)] =
          out.cx[static_cast<size_t>(i + j)] +
          f.cx[static_cast<size_t>(i)] * g.cx[static_cast<size_t>(j)];
  }
  reduce_mod_xp_x(out);
  return out;
}

inline BivariatePoly biv_pow_mod(BivariatePoly base, u64 e) {
  reduce_mod_xp_x(base);
  BivariatePoly acc{base.F, {Polynomial::one(base.F)}};
  while (e) {
    if (e & 1) acc = biv_mul_mod(acc, base);
    e >>= 1;
    if (e) base = biv_mul_mod(base, base);
  }
  return acc;
}

inline Polynomial coeff_xp1_mod(BivariatePoly expr) {
  reduce_mod_xp_x(expr);
  return expr.coeff(expr.F->p - 1);
}

struct Lemma210Report {
  bool equal = false;
  u64 exponent = 0;
  int q = 0;
  Polynomial extracted;    // coefficient of X^{p-1} in (X+a)^exponent mod X^p - X
  Polynomial closed_form;  // binom(q,2) (a - a^p)^{q-2}
};

// Compares the X^{p-1} coefficient of (X+a)^{(np-(n+1))(p-1)/n} against
// binom(q,2)(a - a^p)^{q-2} with q = ((n-1)p + (n+1))/n, as an identity in
// F_p[a].  When n = p-1 the binomial vanishes mod p and both sides are zero.
inline Lemma210Report lemma210_verify(int p, int n) {
  check_precondition(p >= 2 && is_prime_u32(static_cast<u32>(p)), "p must be prime");
  check_precondition(n >= 2, "n must be at least 2");
  check_precondition((p - 1) % n == 0, "requires p = 1 mod n");
  const FieldSpec* F = FieldSpec::get(p, 1);

  Lemma210Report rep;
  rep.exponent = static_cast<u64>(n * p - (n + 1)) * static_cast<u64>(p - 1) / static_cast<u64>(n);
  rep.q = ((n - 1) * p + (n + 1)) / n;
  rep.extracted = coeff_xp1_mod(biv_pow_mod(BivariatePoly::x_plus_a(F), rep.exponent));

  u32 binom = static_cast<u32>((static_cast<u64>(rep.q) * (rep.q - 1) / 2) % p);
  Polynomial base = Polynomial::x(F) - Polynomial::monomial(F, p);
  rep.closed_form = base.pow(static_cast<u64>(rep.q - 2)).times(binom);
  rep.equal = rep.extracted == rep.closed_form;
  return rep;
}

}  // namespace logforms
