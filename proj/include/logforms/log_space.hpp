#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logforms/rational_form.hpp"

namespace logforms {

// Candidate basis for a space whose nonzero elements each have exactly m+1
// distinct simple poles, a single zero of order m-1 at infinity, and are
// logarithmic.  validate_space enforces the definition; the struct itself is
// plain data.
struct LogFormSpace {
  const FieldSpec* F = nullptr;
  int m = 0;
  int n = 0;
  std::vector<DifferentialForm> basis;
};

struct CombinationReport {
  std::vector<u32> coeffs;  // F_p coefficients, first nonzero entry is 1
  std::vector<u32> poles;   // sorted packed locations
  bool ok = false;
  std::string failure;
};

struct SpaceDiagnostics {
  bool valid = false;
  std::string failure;               // first violating combination + criterion
  int total_poles = 0;               // T, size of the pole union
  int common_poles = 0;              // poles shared by every combination
  std::vector<CombinationReport> combinations;
  std::vector<u32> numerator_leads;  // u_i over the common monic denominator
};

// Projective representatives of F_p^n \ {0}: tuples with first nonzero entry 1,
// enumerated by increasing packed index (little-endian base-p digits).
inline std::vector<std::vector<u32>> projective_representatives(int p, int n) {
  std::vector<std::vector<u32>> out;
  u64 count = 1;
  for (int i = 0; i < n; ++i) count *= static_cast<u64>(p);
  for (u64 idx = 1; idx < count; ++idx) {
    u64 t = idx;
    std::vector<u32> c(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) { c[static_cast<size_t>(i)] = static_cast<u32>(t % p); t /= p; }
    u32 first = 0;
    for (u32 v : c)
      if (v) { first = v; break; }
    if (first == 1) out.push_back(std::move(c));
  }
  return out;
}

inline DifferentialForm combine(const std::vector<DifferentialForm>& basis,
                                const std::vector<u32>& coeffs) {
  check_precondition(!basis.empty() && basis.size() == coeffs.size(),
                     "combination length does not match basis size");
  DifferentialForm acc = DifferentialForm::zero(basis[0].field());
  for (size_t i = 0; i < basis.size(); ++i)
    if (coeffs[i]) acc = acc + basis[i].times(coeffs[i]);
  return acc;
}

namespace detail {
inline std::string combo_str(const std::vector<u32>& c) {
  std::string s = "(";
  for (size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

inline u64 ipow(u64 b, int e) {
  u64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}
}  // namespace detail

// Checks the space definition on every projective combination (F_p*-scaling
// preserves all defining properties, so representatives suffice).  On success
// the pole-sharing counts forced by the conductor are asserted, not just
// reported.
inline SpaceDiagnostics validate_space(const LogFormSpace& S) {
  const FieldSpec* F = S.F;
  check_precondition(F != nullptr && !S.basis.empty(), "empty candidate basis");
  check_precondition(static_cast<int>(S.basis.size()) == S.n, "basis size differs from n");
  check_precondition(S.m >= 1 && S.m % F->p != 0, "m must be positive and prime to p");
  for (const auto& w : S.basis)
    check_precondition(w.field()->same(*F), "basis form over a different field");

  SpaceDiagnostics diag;
  const int target_poles = S.m + 1;
  auto reps = projective_representatives(F->p, S.n);
  for (const auto& c : reps) {
    DifferentialForm w = combine(S.basis, c);
    if (w.is_zero())
      throw PreconditionError("basis is F_p-linearly dependent: combination " +
                              detail::combo_str(c) + " vanishes");
    CombinationReport rep;
    rep.coeffs = c;
    auto pr = poles_and_residues(w);
    for (const auto& d : pr) rep.poles.push_back(d.location.packed());
    std::sort(rep.poles.begin(), rep.poles.end());
    std::string why;
    for (const auto& d : pr)
      if (d.order != 1) { why = "pole of order " + std::to_string(d.order); break; }
    if (why.empty() && static_cast<int>(pr.size()) != target_poles)
      why = std::to_string(pr.size()) + " poles, expected " + std::to_string(target_poles);
    if (why.empty() && order_at_infinity(w) != S.m - 1)
      why = "order " + std::to_string(order_at_infinity(w)) + " at infinity, expected " +
            std::to_string(S.m - 1);
    if (why.empty() && !is_logarithmic(w)) why = "not logarithmic";
    rep.ok = why.empty();
    if (!rep.ok) rep.failure = why;
    diag.combinations.push_back(std::move(rep));
    if (!why.empty()) {
      diag.valid = false;
      diag.failure = "combination " + detail::combo_str(c) + ": " + why;
      return diag;
    }
  }

  diag.valid = true;
  std::set<u32> uni;
  std::set<u32> common;  // intersection over the n basis forms, not all combos
  bool common_started = false;
  for (const auto& rep : diag.combinations) {
    uni.insert(rep.poles.begin(), rep.poles.end());
    int nonzero = 0;
    for (u32 v : rep.coeffs) nonzero += (v != 0);
    if (nonzero != 1) continue;
    if (!common_started) {
      common.insert(rep.poles.begin(), rep.poles.end());
      common_started = true;
    } else {
      std::set<u32> keep;
      for (u32 x : rep.poles)
        if (common.count(x)) keep.insert(x);
      common.swap(keep);
    }
  }
  diag.total_poles = static_cast<int>(uni.size());
  diag.common_poles = static_cast<int>(common.size());

  const u64 p = static_cast<u64>(F->p);
  const u64 m1 = static_cast<u64>(S.m) + 1;
  const u64 pn1 = detail::ipow(p, S.n - 1);
  check_internal(m1 % pn1 == 0, "m+1 is not divisible by p^{n-1} on a valid space");
  u64 t_num = m1 * (detail::ipow(p, S.n) - 1);
  u64 t_den = (p - 1) * pn1;
  check_internal(t_num % t_den == 0 && diag.total_poles == static_cast<int>(t_num / t_den),
                 "total pole count does not match the union formula");
  u64 c_num = detail::ipow(p - 1, S.n - 1) * m1;
  check_internal(c_num % pn1 == 0 && diag.common_poles == static_cast<int>(c_num / pn1),
                 "common pole count does not match the intersection formula");
  if (S.n >= 2) {
    u64 pair_expect = (p - 1) * m1 / p;
    for (size_t i = 0; i < diag.combinations.size(); ++i)
      for (size_t j = i + 1; j < diag.combinations.size(); ++j) {
        std::vector<u32> inter;
        std::set_intersection(diag.combinations[i].poles.begin(), diag.combinations[i].poles.end(),
                              diag.combinations[j].poles.begin(), diag.combinations[j].poles.end(),
                              std::back_inserter(inter));
        check_internal(inter.size() == pair_expect,
                       "pairwise shared pole count differs from (p-1)(m+1)/p");
      }
  }

  // Over the common monic denominator P the basis numerators have leading
  // coefficients whose F_p-combinations never vanish.
  std::vector<u32> union_pts(uni.begin(), uni.end());
  Polynomial P = Polynomial::from_roots(F, union_pts);
  std::vector<u32> leads;
  for (const auto& w : S.basis) {
    Polynomial Q = w.numerator() * div_exact(P, w.denominator());
    check_internal(Q.degree() == diag.total_poles - target_poles,
                   "numerator degree over the common denominator is off");
    leads.push_back(Q.lc());
  }
  for (const auto& c : reps) {
    u32 acc = 0;
    for (size_t i = 0; i < leads.size(); ++i)
      acc = F->add(acc, F->mul(c[i], leads[i]));
    check_internal(acc != 0, "leading coefficients are F_p-linearly dependent");
  }
  diag.numerator_leads = std::move(leads);
  return diag;
}

struct PoleStatistics {
  std::vector<std::vector<u32>> pole_sets;  // per form, sorted
  std::vector<int> subset_counts;           // index = bitmask over forms, [1, 2^n)
  int total = 0;                            // inclusion-exclusion, equals |union|
};

// All N_{i_1...i_k} intersection counts of the forms' pole sets plus the
// inclusion-exclusion total, cross-checked against the direct union.  Makes no
// validity assumption; usable as a diagnostic on broken candidates.
inline PoleStatistics pole_statistics(const std::vector<DifferentialForm>& forms) {
  check_precondition(!forms.empty() && forms.size() <= 14, "pole_statistics expects 1..14 forms");
  PoleStatistics st;
  for (const auto& w : forms) {
    std::vector<u32> ps;
    for (const auto& d : poles_and_residues(w)) {
      check_precondition(d.order == 1, "pole_statistics expects simple poles only");
      ps.push_back(d.location.packed());
    }
    std::sort(ps.begin(), ps.end());
    st.pole_sets.push_back(std::move(ps));
  }
  const size_t n = forms.size();
  std::set<u32> uni;
  for (const auto& ps : st.pole_sets) uni.insert(ps.begin(), ps.end());
  std::vector<std::vector<u32>> inter(1u << n);
  st.subset_counts.assign(1u << n, 0);
  long long ie = 0;
  for (u32 mask = 1; mask < (1u << n); ++mask) {
    u32 low = mask & (mask - 1);  // mask without its lowest set bit
    size_t bit = static_cast<size_t>(__builtin_ctz(mask));
    if (low == 0) {
      inter[mask] = st.pole_sets[bit];
    } else {
      std::set_intersection(inter[low].begin(), inter[low].end(), st.pole_sets[bit].begin(),
                            st.pole_sets[bit].end(), std::back_inserter(inter[mask]));
    }
    st.subset_counts[mask] = static_cast<int>(inter[mask].size());
    long long sz = static_cast<long long>(inter[mask].size());
    ie += (__builtin_popcount(mask) & 1) ? sz : -sz;
  }
  check_internal(ie == static_cast<long long>(uni.size()),
                 "inclusion-exclusion total differs from the direct union");
  st.total = static_cast<int>(ie);
  return st;
}

struct ABReport {
  DifferentialForm w1, w2;
  bool condition_holds = false;  // ((A^p - A B^{p-1})^{p-1})^{(p-1)} = -1
  bool logarithmic = false;      // both forms pass is_logarithmic
};

// Builds w1 = A dz/(A^p B - A B^p), w2 = B dz/(A^p B - A B^p) and evaluates the
// differential condition alongside the Cartier verdicts.  The two routes must
// agree; disagreement is an internal error.
inline ABReport forms_from_AB(const Polynomial& A, const Polynomial& B) {
  const FieldSpec* F = A.field();
  check_precondition(F->same(*B.field()), "A and B over different FieldSpecs");
  check_precondition(!A.is_zero() && !B.is_zero(), "A and B must be nonzero");
  const int p = F->p;
  int lam = std::max(A.degree(), B.degree());
  for (const auto& c : projective_representatives(p, 2)) {
    Polynomial comb = A.times(c[0]) + B.times(c[1]);
    check_precondition(comb.degree() == lam,
                       "degree of combinations is not constant over the projective line");
  }
  Polynomial moore = moore_product({A, B});
  check_precondition(!moore.is_zero(), "A and B are F_p-linearly dependent");

  ABReport rep;
  rep.w1 = DifferentialForm(A, moore);
  rep.w2 = DifferentialForm(B, moore);
  Polynomial f = A.pow(static_cast<u64>(p)) - A * B.pow(static_cast<u64>(p - 1));
  Polynomial g = f.pow(static_cast<u64>(p - 1));
  for (int i = 0; i < p - 1; ++i) g = g.derivative();
  rep.condition_holds = (g == Polynomial::constant(F, F->neg(1)));
  rep.logarithmic = is_logarithmic(rep.w1) && is_logarithmic(rep.w2);
  check_internal(rep.condition_holds == rep.logarithmic,
                 "differential condition and Cartier verdicts disagree");
  return rep;
}

// Recovers the (A, B) parametrization of a validated two-dimensional space:
// with P the monic pole-union polynomial, Q_i = N_i P / D_i = u_i P_i, the
// scaling alpha with alpha^p v (a^p - a) = 1 and a = u/v makes
// (A, B) = (alpha a P_0, alpha P_p) reproduce the basis exactly.
inline std::pair<Polynomial, Polynomial> extract_AB(const LogFormSpace& S) {
  check_precondition(S.n == 2 && S.basis.size() == 2, "extraction requires a two-dimensional space");
  const FieldSpec* F = S.F;
  const int p = F->p;
  check_precondition((S.m + 1) % p == 0, "m+1 must be divisible by p");

  std::set<u32> uni;
  for (const auto& c : projective_representatives(p, 2)) {
    DifferentialForm w = combine(S.basis, c);
    check_internal(!w.is_zero(), "dependent basis passed into extraction");
    for (const auto& d : poles_and_residues(w)) {
      check_internal(d.order == 1, "non-simple pole in validated space");
      uni.insert(d.location.packed());
    }
  }
  Polynomial P = Polynomial::from_roots(F, std::vector<u32>(uni.begin(), uni.end()));
  Polynomial Q1 = S.basis[0].numerator() * div_exact(P, S.basis[0].denominator());
  Polynomial Q2 = S.basis[1].numerator() * div_exact(P, S.basis[1].denominator());
  const int lam = (S.m + 1) / p;
  check_internal(Q1.degree() == lam && Q2.degree() == lam,
                 "numerators over the pole union do not have degree (m+1)/p");

  u32 u = Q1.lc(), v = Q2.lc();
  u32 a = F->div(u, v);
  check_internal(a >= static_cast<u32>(p), "leading-coefficient ratio lies in the prime field");
  u32 alpha = F->frobenius_inverse(F->inv(F->mul(v, F->sub(F->pow(a, static_cast<u64>(p)), a))));
  Polynomial A = Q1.monic().times(F->mul(alpha, a));
  Polynomial B = Q2.monic().times(alpha);

  for (const auto& c : projective_representatives(p, 2)) {
    Polynomial comb = A.times(c[0]) + B.times(c[1]);
    check_internal(comb.degree() == lam, "extracted pair violates the degree condition");
  }
  ABReport round = forms_from_AB(A, B);
  check_internal(round.w1 == S.basis[0] && round.w2 == S.basis[1],
                 "extracted pair does not reproduce the basis");
  check_internal(round.condition_holds, "extracted pair fails the differential condition");
  return {A, B};
}

}  // namespace logforms
