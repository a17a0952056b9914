#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "logforms/linalg.hpp"
#include "logforms/log_space.hpp"

namespace logforms {

// Branch-class data of a p-cyclic cover: one class h_i in F_p^* per finite
// branch point.  The classes sum to zero mod p (no branching at infinity).
struct HurwitzDatum {
  int p = 0;
  std::vector<int> classes;  // each in [1, p)

  bool operator==(const HurwitzDatum& o) const { return p == o.p && classes == o.classes; }
  bool operator!=(const HurwitzDatum& o) const { return !(*this == o); }
};

inline void validate_datum(const HurwitzDatum& d) {
  check_precondition(d.p >= 2 && is_prime_u32(static_cast<u32>(d.p)), "datum characteristic is not prime");
  check_precondition(!d.classes.empty(), "datum has no branch classes");
  long sum = 0;
  for (int h : d.classes) {
    check_precondition(h >= 1 && h < d.p, "branch class outside [1, p)");
    sum += h;
  }
  check_precondition(sum % d.p == 0, "branch classes do not sum to zero mod p");
}

inline std::string datum_str(const HurwitzDatum& d) {
  std::string s = "(";
  for (size_t i = 0; i < d.classes.size(); ++i) s += (i ? "," : "") + std::to_string(d.classes[i]);
  return s + ")";
}

// Reads a Hurwitz datum off a form with simple prime-field residues.  classes
// are listed in increasing packed pole order.
inline HurwitzDatum hurwitz_from_form(const DifferentialForm& w) {
  check_precondition(!w.is_zero(), "zero form carries no branch data");
  const FieldSpec* F = w.field();
  HurwitzDatum d;
  d.p = F->p;
  long sum = 0;
  for (const PoleDatum& pd : poles_and_residues(w)) {
    check_precondition(pd.order == 1, "branch data requires simple poles");
    check_precondition(pd.residue.in_prime_field() && !pd.residue.is_zero(),
                       "residue lies outside F_p*");
    int h = static_cast<int>(pd.residue.packed());
    d.classes.push_back(h);
    sum += h;
  }
  check_precondition(sum % d.p == 0,
                     "residue classes do not sum to zero mod p (pole at infinity)");
  return d;
}

// Product of (z - s) over every F_p-combination s of the given points.  Empty
// input gives z.  The result is additive; when the points are independent its
// roots are exactly their F_p-span.
inline Polynomial additive_poly(const FieldSpec* F, const std::vector<u32>& pts) {
  const int s = static_cast<int>(pts.size());
  check_precondition(s <= 12, "too many spanning points");
  u64 tuples = detail::ipow(static_cast<u64>(F->p), s);
  check_precondition(tuples <= (u64{1} << 20), "additive polynomial degree out of range");

  std::vector<u32> roots;
  roots.reserve(tuples);
  for (u64 idx = 0; idx < tuples; ++idx) {
    u64 t = idx;
    u32 acc = 0;
    for (int i = 0; i < s; ++i) {
      u32 eps = static_cast<u32>(t % F->p);
      t /= F->p;
      if (eps) acc = F->add(acc, F->mul(eps, pts[static_cast<size_t>(i)]));
    }
    roots.push_back(acc);
  }
  Polynomial ad = Polynomial::from_roots(F, roots);

  for (int e = 0; e <= ad.degree(); ++e)
    check_internal(ad.coeff(e) == 0 || e == 1 || e % F->p == 0,
                   "additive polynomial has a stray exponent");
  std::vector<u32> samples;
  for (u32 c : {0u, 1u, 2u, 3u, 5u, 11u}) samples.push_back(static_cast<u32>(c % F->q));
  samples.push_back(static_cast<u32>(F->q - 1));
  for (u32 a : samples)
    for (u32 b : samples)
      check_internal(ad.eval(F->add(a, b)) == F->add(ad.eval(a), ad.eval(b)),
                     "additive polynomial is not additive");
  return ad;
}

namespace detail {
// Classical Moore determinant of scalars: nonzero iff F_p-independent.
inline bool fp_independent(const FieldSpec* F, const std::vector<u32>& vals) {
  std::vector<Polynomial> consts;
  consts.reserve(vals.size());
  for (u32 v : vals) consts.push_back(Polynomial::constant(F, v));
  return !moore_product(consts).is_zero();
}

// Monic q of degree |xs| with q(x_i) = sqrt(slope x_i), so q^2 + slope z
// vanishes on the x_i.  Vandermonde solve; nonsingular for distinct points.
inline Polynomial p2_half(const FieldSpec* F, const std::vector<u32>& xs, u32 slope) {
  const int n = static_cast<int>(xs.size());
  Matrix V(F, n, n);
  std::vector<u32> b(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    u32 xi = xs[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) V.at(i, j) = F->pow(xi, static_cast<u64>(j));
    b[static_cast<size_t>(i)] =
        F->sub(F->frobenius_inverse(F->mul(slope, xi)), F->pow(xi, static_cast<u64>(n)));
  }
  auto sol = solve_square(std::move(V), std::move(b));
  check_internal(sol.has_value(), "Vandermonde system singular for distinct points");
  sol->push_back(1);
  return Polynomial(F, std::move(*sol));
}
}  // namespace detail

// The explicit L_{m+1,n} with m+1 = p^{n-1}(p-1): basis form j has a pole at
// every combination sum with eps_j != 0, and the numerator u_j is tuned so the
// residue there is exactly eps_j.
inline LogFormSpace matignon_space(const FieldSpec* F, const std::vector<u32>& as) {
  const int n = static_cast<int>(as.size());
  const int p = F->p;
  check_precondition(n >= 2, "need at least two spanning points");
  check_precondition(detail::fp_independent(F, as),
                     "spanning points are F_p-linearly dependent");

  LogFormSpace S;
  S.F = F;
  S.n = n;
  S.m = static_cast<int>(detail::ipow(static_cast<u64>(p), n - 1)) * (p - 1) - 1;

  std::vector<u32> us;
  for (int j = 0; j < n; ++j) {
    std::vector<u32> others;
    for (int i = 0; i < n; ++i)
      if (i != j) others.push_back(as[static_cast<size_t>(i)]);
    Polynomial ad = additive_poly(F, others);
    u32 alpha = ad.coeff(1);
    u32 ad_at_aj = ad.eval(as[static_cast<size_t>(j)]);
    check_internal(alpha != 0 && ad_at_aj != 0, "degenerate additive polynomial for independent points");
    u32 uj = F->neg(F->mul(alpha, F->pow(ad_at_aj, static_cast<u64>(p - 2))));
    us.push_back(uj);

    std::vector<u32> poles;
    std::map<u32, int> eps_at;
    u64 tuples = detail::ipow(static_cast<u64>(p), n);
    for (u64 idx = 0; idx < tuples; ++idx) {
      u64 t = idx;
      u32 sum = 0;
      int eps_j = 0;
      for (int i = 0; i < n; ++i) {
        u32 eps = static_cast<u32>(t % p);
        t /= p;
        if (i == j) eps_j = static_cast<int>(eps);
        if (eps) sum = F->add(sum, F->mul(eps, as[static_cast<size_t>(i)]));
      }
      if (eps_j == 0) continue;
      poles.push_back(sum);
      eps_at[sum] = eps_j;
    }
    Polynomial D = Polynomial::from_roots(F, poles);
    // Same divisor through the additive machinery: the eps_j = c slice is the
    // root set of Ad_j(z) - c Ad_j(a_j), and the product over c telescopes.
    Polynomial via_ad = ad.pow(static_cast<u64>(p - 1)) -
                        Polynomial::constant(F, F->pow(ad_at_aj, static_cast<u64>(p - 1)));
    check_internal(D == via_ad, "pole divisor disagrees with additive-polynomial route");

    DifferentialForm wj(Polynomial::constant(F, uj), D);
    for (const PoleDatum& pd : poles_and_residues(wj)) {
      auto it = eps_at.find(pd.location.packed());
      check_internal(it != eps_at.end(), "unexpected pole location");
      check_internal(pd.residue.packed() == static_cast<u32>(it->second),
                     "residue does not match its combination coefficient");
    }
    S.basis.push_back(std::move(wj));
  }
  check_precondition(detail::fp_independent(F, us),
                     "numerator coefficients u_j are F_p-linearly dependent");
  return S;
}

// Characteristic-2 pair f_i = q_i^2 + (slope) z through a Vandermonde solve:
// q(x_i) = sqrt(u x_i) forces f_1(x_i) = 0, so f_1 and f_2 share exactly the
// roots x_1..x_n and contribute n fresh roots each.
inline LogFormSpace construct_p2(const FieldSpec* F, const std::vector<u32>& xs, u32 u, u32 v,
                                 bool allow_extension = false) {
  const int n = static_cast<int>(xs.size());
  check_precondition(F->p == 2, "construction requires characteristic 2");
  check_precondition(n >= 1, "need at least one base point");
  check_precondition(u != 0 && v != 0, "slopes must be nonzero");
  check_precondition(u != v, "slopes must differ");
  {
    std::vector<u32> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    check_precondition(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                       "base points must be pairwise distinct");
  }

  Polynomial q = detail::p2_half(F, xs, u);
  Polynomial r = detail::p2_half(F, xs, v);

  Polynomial f1 = q * q + Polynomial(F, {0, u});
  Polynomial f2 = r * r + Polynomial(F, {0, v});
  check_internal(f1.derivative() == Polynomial::constant(F, u), "f1' != u");
  check_internal(f2.derivative() == Polynomial::constant(F, v), "f2' != v");

  u32 su = F->frobenius_inverse(u), sv = F->frobenius_inverse(v);
  Polynomial shared = q.times(sv) + r.times(su);
  check_internal(shared == Polynomial::from_roots(F, xs).times(F->add(su, sv)),
                 "shared-root certificate has the wrong divisor");

  Polynomial prod = f1 * f2;
  if (!splits_over_base(prod)) {
    int j = splitting_degree(prod, std::max(64, 4 * n));
    check_internal(j > 1, "splitting degree out of range");
    if (!allow_extension)
      throw NeedsLargerField("constructed polynomials do not split over " + F->label(), j);
    const FieldSpec* G = FieldSpec::get(2, F->k * j);
    std::vector<u32> exs;
    exs.reserve(xs.size());
    for (u32 x : xs) exs.push_back(embed(FieldElement(F, x), G).packed());
    return construct_p2(G, exs, embed(FieldElement(F, u), G).packed(),
                        embed(FieldElement(F, v), G).packed(), false);
  }

  std::vector<u32> all;
  for (const Polynomial& f : {f1, f2})
    for (const auto& [root, mult] : roots_exhaustive(f)) {
      check_internal(mult == 1, "constructed polynomial is not squarefree");
      all.push_back(root);
    }
  std::sort(all.begin(), all.end());
  int distinct = static_cast<int>(std::unique(all.begin(), all.end()) - all.begin());
  check_internal(distinct == 3 * n, "pole points are not 3n distinct values");

  DifferentialForm w1 = dlog(f1);
  DifferentialForm w2 = dlog(f2);
  check_internal(w1 == DifferentialForm(Polynomial::constant(F, u), f1), "w1 != u dz/f1");
  check_internal(w2 == DifferentialForm(Polynomial::constant(F, v), f2), "w2 != v dz/f2");

  LogFormSpace S;
  S.F = F;
  S.m = 2 * n - 1;
  S.n = 2;
  S.basis = {std::move(w1), std::move(w2)};
  return S;
}

// Pullback along Phi(t) = alpha t + P(t^p).  Phi' = alpha, so the pullback of
// dz picks up only the constant factor and every pole stays simple.
inline LogFormSpace pullback_etale(const LogFormSpace& S, u32 alpha, const Polynomial& P) {
  const FieldSpec* F = S.F;
  check_precondition(F != nullptr && !S.basis.empty(), "empty space");
  check_precondition(P.field()->same(*F), "substitution over a different FieldSpec");
  check_precondition(alpha != 0, "pullback is not etale for alpha = 0");

  Polynomial phi = Polynomial(F, {0, alpha}) + inflate(P, F->p);
  int d = phi.degree();

  LogFormSpace out;
  out.F = F;
  out.n = S.n;
  out.m = (S.m + 1) * d - 1;
  for (const DifferentialForm& w : S.basis)
    out.basis.push_back(DifferentialForm(w.numerator().compose(phi).times(alpha),
                                         w.denominator().compose(phi)));

  SpaceDiagnostics diag = validate_space(out);
  check_internal(diag.valid, "pullback failed validation: " + diag.failure);
  return out;
}

// d(f o Q)/(f o Q) for f given by its root/class data.  Ramification of Q is
// only allowed over the branch points; each pole t0 over x_i acquires class
// e h_i where e is the ramification index.
inline std::pair<DifferentialForm, HurwitzDatum> hurwitz_substitution(
    const std::vector<u32>& xs, const std::vector<int>& hs, const Polynomial& Q) {
  const FieldSpec* F = Q.field();
  const int p = F->p;
  check_precondition(xs.size() == hs.size() && !xs.empty(), "mismatched branch data");
  check_precondition(Q.degree() >= 1, "substitution must be nonconstant");
  {
    HurwitzDatum base{p, hs};
    validate_datum(base);
    std::vector<u32> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    check_precondition(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                       "branch points must be pairwise distinct");
  }

  Polynomial Qp = Q.derivative();
  Polynomial fQ = Polynomial::one(F);
  for (size_t i = 0; i < xs.size(); ++i) {
    Polynomial factor = Q - Polynomial::constant(F, xs[i]);
    fQ = fQ * factor.pow(static_cast<u64>(hs[i]));
  }
  if (Qp.is_zero() || !divmod(fQ, Qp).second.is_zero())
    throw PreconditionError("Q' does not divide f(Q): ramification away from the branch points");

  Polynomial den = Polynomial::one(F);
  std::vector<Polynomial> factors;
  for (u32 x : xs) {
    factors.push_back(Q - Polynomial::constant(F, x));
    den = den * factors.back();
  }
  Polynomial num = Polynomial::zero(F);
  for (size_t i = 0; i < xs.size(); ++i) {
    Polynomial cof = Qp.times(static_cast<u32>(hs[i]));
    for (size_t j = 0; j < xs.size(); ++j)
      if (j != i) cof = cof * factors[j];
    num = num + cof;
  }
  DifferentialForm w(num, den);

  Polynomial pole_locus = radical(den);
  check_precondition(w.denominator() == pole_locus,
                     "substitution collapses a pole (residue class divisible by p)");

  HurwitzDatum d = hurwitz_from_form(w);

  // Pure-power substitutions give the split datum (d h_0, h_1 x d, ...):
  // e = deg Q at t = 0 over x = 0, e = 1 everywhere else.
  if (Q == Polynomial::monomial(F, Q.degree())) {
    std::map<int, int> expect, got;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == 0)
        expect[(hs[i] * Q.degree()) % p] += 1;
      else
        expect[hs[i]] += Q.degree();
    }
    for (int h : d.classes) got[h] += 1;
    check_internal(expect == got, "pure-power substitution datum mismatch");
  }
  return {std::move(w), std::move(d)};
}

}  // namespace logforms
