#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "logforms/constructions.hpp"
#include "logforms/witt.hpp"

namespace logforms {

// Polynomial over a Witt ring, coefficients low degree first, trailing zeros
// trimmed.  The zero polynomial has degree -1.
class WittPoly {
 public:
  WittPoly() : R_(nullptr) {}
  explicit WittPoly(const WittRing* R) : R_(R) {}
  WittPoly(const WittRing* R, std::vector<WittElement> coeffs) : R_(R), c_(std::move(coeffs)) {
    check_precondition(R != nullptr, "polynomial needs a ring");
    for (const auto& x : c_) check_precondition(x.ring() == R, "coefficient from the wrong ring");
    trim();
  }

  static WittPoly zero(const WittRing* R) { return WittPoly(R); }
  static WittPoly one(const WittRing* R) { return constant(R, WittElement::one(R)); }
  static WittPoly constant(const WittRing* R, const WittElement& c) { return WittPoly(R, {c}); }
  static WittPoly monomial(const WittRing* R, int deg, const WittElement& c) {
    std::vector<WittElement> v(static_cast<size_t>(deg) + 1, WittElement::zero(R));
    v.back() = c;
    return WittPoly(R, std::move(v));
  }

  const WittRing* ring() const { return R_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  WittElement coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)]
                                                       : WittElement::zero(R_);
  }
  const std::vector<WittElement>& coeffs() const { return c_; }

  Polynomial reduce() const {
    std::vector<u32> v;
    v.reserve(c_.size());
    for (const auto& x : c_) v.push_back(x.reduce().packed());
    return Polynomial(R_->F, std::move(v));
  }

  bool operator==(const WittPoly& o) const { return R_ == o.R_ && c_ == o.c_; }
  bool operator!=(const WittPoly& o) const { return !(*this == o); }

  WittPoly operator+(const WittPoly& o) const {
    join(o);
    std::vector<WittElement> v(std::max(c_.size(), o.c_.size()), WittElement::zero(R_));
    for (size_t i = 0; i < v.size(); ++i)
      v[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    return WittPoly(R_, std::move(v));
  }
  WittPoly operator-(const WittPoly& o) const {
    join(o);
    std::vector<WittElement> v(std::max(c_.size(), o.c_.size()), WittElement::zero(R_));
    for (size_t i = 0; i < v.size(); ++i)
      v[i] = coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i));
    return WittPoly(R_, std::move(v));
  }
  WittPoly operator*(const WittPoly& o) const {
    join(o);
    if (is_zero() || o.is_zero()) return zero(R_);
    std::vector<WittElement> v(c_.size() + o.c_.size() - 1, WittElement::zero(R_));
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] = v[i + j] + c_[i] * o.c_[j];
    }
    return WittPoly(R_, std::move(v));
  }
  WittPoly pow(u64 e) const {
    WittPoly acc = one(R_), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  void join(const WittPoly& o) const {
    check_precondition(R_ == o.R_, "polynomials over different Witt rings");
  }
  const WittRing* R_;
  std::vector<WittElement> c_;
};

inline WittPoly operator*(const WittElement& s, const WittPoly& f) {
  return WittPoly::constant(f.ring(), s) * f;
}

// Coefficientwise Teichmuller lift; multiplicative on each coefficient.
inline WittPoly teich_lift(const WittRing* R, const Polynomial& f) {
  check_precondition(R->F->same(*f.field()), "lifting a polynomial from the wrong field");
  std::vector<WittElement> v;
  v.reserve(static_cast<size_t>(f.degree() + 1));
  for (int i = 0; i <= f.degree(); ++i)
    v.push_back(teichmuller(R, FieldElement(f.field(), f.coeff(i))));
  return WittPoly(R, std::move(v));
}

inline WittPoly div_exact_p(const WittPoly& f) {
  std::vector<WittElement> v;
  v.reserve(static_cast<size_t>(f.degree() + 1));
  for (int i = 0; i <= f.degree(); ++i) v.push_back(div_exact_p(f.coeff(i)));
  return WittPoly(f.ring(), std::move(v));
}

namespace detail {

// First `terms` coefficients of 1/E; E(0) must be a unit.
inline WittPoly witt_series_inverse(const WittPoly& E, int terms) {
  const WittRing* R = E.ring();
  if (terms <= 0) return WittPoly::zero(R);
  WittElement e0inv = E.coeff(0).inv();
  std::vector<WittElement> t;
  t.reserve(static_cast<size_t>(terms));
  t.push_back(e0inv);
  for (int m = 1; m < terms; ++m) {
    WittElement acc = WittElement::zero(R);
    for (int i = 1; i <= m; ++i) acc = acc + E.coeff(i) * t[static_cast<size_t>(m - i)];
    t.push_back(-(e0inv * acc));
  }
  return WittPoly(R, std::move(t));
}

// Gauss-Jordan over the Witt ring.  Needs a unit pivot in every column; the
// transposed Vandermonde systems solved here always have one because their
// determinant reduces to a product of differences of distinct residues.
inline std::vector<WittElement> solve_unit_system(std::vector<std::vector<WittElement>> A,
                                                  std::vector<WittElement> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n && piv < 0; ++r)
      if (A[static_cast<size_t>(r)][static_cast<size_t>(col)].is_unit()) piv = r;
    check_internal(piv >= 0, "no unit pivot in the correction system");
    std::swap(A[static_cast<size_t>(col)], A[static_cast<size_t>(piv)]);
    std::swap(b[static_cast<size_t>(col)], b[static_cast<size_t>(piv)]);
    WittElement inv = A[static_cast<size_t>(col)][static_cast<size_t>(col)].inv();
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      WittElement f = A[static_cast<size_t>(r)][static_cast<size_t>(col)] * inv;
      if (f.is_zero()) continue;
      for (int c = col; c < n; ++c)
        A[static_cast<size_t>(r)][static_cast<size_t>(c)] =
            A[static_cast<size_t>(r)][static_cast<size_t>(c)] -
            f * A[static_cast<size_t>(col)][static_cast<size_t>(c)];
      b[static_cast<size_t>(r)] = b[static_cast<size_t>(r)] - f * b[static_cast<size_t>(col)];
    }
  }
  std::vector<WittElement> x;
  x.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    x.push_back(b[static_cast<size_t>(i)] *
                A[static_cast<size_t>(i)][static_cast<size_t>(i)].inv());
  return x;
}

}  // namespace detail

struct Lemma212Decomposition {
  WittPoly Qhat;   // unramified part: (1 + X Qhat)^p
  WittElement U;   // Teichmuller unit in front of X^m
  WittPoly Rhat;   // tail of the X^m term: U X^m (1 + X Rhat)
  WittPoly Shat;   // p-divided remainder
  int m = 0;
};

// Splits F into (1 + X Qhat)^p + U X^m (1 + X Rhat) + p Shat.  The reduction
// fixes the pieces: p-th roots of the p-multiple exponents give 1 + x q, what
// is left sits in degrees >= m with unit x^m coefficient, and both lift
// coefficientwise through Teichmuller.  Shat absorbs the remainder, which must
// be divisible by p.
inline Lemma212Decomposition decompose_lemma212(const WittPoly& F, int m) {
  const WittRing* W = F.ring();
  check_precondition(W != nullptr, "polynomial needs a ring");
  const FieldSpec* K = W->F;
  const int p = K->p;
  check_precondition(m >= 1, "pole order m must be positive");

  Polynomial f = F.reduce();
  check_precondition(!f.is_zero() && f.coeff(0) == 1, "reduction must have constant term 1");
  for (int e = 1; e < m; ++e)
    if (e % p != 0)
      check_precondition(f.coeff(e) == 0,
                         "reduction derivative is not u x^{m-1}(1 + x r): stray coefficient at x^" +
                             std::to_string(e));
  check_precondition(m % p != 0, "the x^m coefficient cannot feed the derivative when p | m");
  const u32 cm = f.coeff(m);
  check_precondition(cm != 0, "the x^m coefficient of the reduction vanishes");

  std::vector<u32> gc;
  for (int j = 0; j * p <= f.degree(); ++j) gc.push_back(K->frobenius_inverse(f.coeff(j * p)));
  Polynomial g(K, std::move(gc));
  Polynomial h = f - g.pow(static_cast<u64>(p));
  check_internal(h.coeff(m) == cm, "residual misses the x^m coefficient");
  for (int e = 0; e < m; ++e) check_internal(h.coeff(e) == 0, "residual has support below x^m");

  std::vector<u32> rc;
  const u32 cminv = K->inv(cm);
  for (int e = m + 1; e <= h.degree(); ++e) rc.push_back(K->mul(h.coeff(e), cminv));

  Lemma212Decomposition dec;
  dec.m = m;
  std::vector<u32> qc(g.coeffs().begin() + 1, g.coeffs().end());
  dec.Qhat = teich_lift(W, Polynomial(K, std::move(qc)));
  dec.U = teichmuller(W, FieldElement(K, cm));
  dec.Rhat = teich_lift(W, Polynomial(K, std::move(rc)));

  WittPoly X = WittPoly::monomial(W, 1, WittElement::one(W));
  WittPoly G = WittPoly::one(W) + X * dec.Qhat;
  WittPoly main = G.pow(static_cast<u64>(p)) +
                  WittPoly::monomial(W, m, dec.U) * (WittPoly::one(W) + X * dec.Rhat);
  try {
    dec.Shat = div_exact_p(F - main);
  } catch (const PreconditionError&) {
    throw InternalCheckError("decomposition remainder is not divisible by p");
  }
  check_internal(main + WittElement::from_int(W, p) * dec.Shat == F,
                 "decomposition does not recompose to F");
  return dec;
}

struct RefinedShapeReport {
  const WittRing* ring = nullptr;
  int m = 0;
  std::vector<int> classes;      // as used, reduced into [1, p)
  bool classes_reduced = false;  // input had representatives outside [1, p)
  WittPoly F;
  Lemma212Decomposition dec;
  int required_valuation = 0;  // (m+1)/p
  int observed_valuation = -1;  // X-valuation of Shat mod p; -1 when Shat ≡ 0 mod p
};

// Lifts a pole/class datum through p-th roots: with Y_i the Teichmuller lifts
// of x_i^{1/p}, F = prod (1 - Y_i^p X)^{h_i} refines the plain decomposition:
// its p-part starts no lower than X^{(m+1)/p}.  A failure of that bound is an
// internal error, not a property of the input.
inline RefinedShapeReport refined_lift_shape(const FieldSpec* K, const std::vector<u32>& poles,
                                             const std::vector<int>& classes, int N) {
  check_precondition(N >= 3, "precision must be at least 3");
  check_precondition(poles.size() == classes.size() && !poles.empty(), "mismatched pole data");
  const int p = K->p;

  RefinedShapeReport rep;
  // Shifting a class by a multiple of p multiplies F by the p-th power of a
  // unit polynomial, which moves (1 + XQ)^p and pS but neither criterion.
  for (int h : classes) {
    int r = ((h % p) + p) % p;
    check_precondition(r != 0, "class divisible by p collapses its pole");
    rep.classes.push_back(r);
    rep.classes_reduced |= (r != h);
  }
  for (u32 x : poles) check_precondition(x < K->q, "pole outside the field");
  {
    std::vector<u32> sorted(poles);
    std::sort(sorted.begin(), sorted.end());
    check_precondition(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                       "poles must be pairwise distinct");
  }
  validate_datum(HurwitzDatum{p, rep.classes});

  rep.m = static_cast<int>(poles.size()) - 1;
  check_precondition((rep.m + 1) % p == 0, "pole count must be divisible by p");

  Polynomial fz = Polynomial::one(K);
  for (size_t i = 0; i < poles.size(); ++i)
    fz = fz * Polynomial(K, {K->neg(poles[i]), 1}).pow(static_cast<u64>(rep.classes[i]));
  DifferentialForm w = dlog(fz);
  check_precondition(poles_and_residues(w).size() == poles.size(), "datum collapses a pole");
  check_precondition(order_at_infinity(w) == rep.m - 1,
                     "datum has no single zero of order m-1 at infinity");
  check_internal(is_logarithmic(w), "dlog produced a non-logarithmic form");

  const WittRing* W = WittRing::get(p, K->k, N);
  rep.ring = W;
  WittPoly F = WittPoly::one(W);
  for (size_t i = 0; i < poles.size(); ++i) {
    WittElement Yi = teichmuller(W, FieldElement(K, K->frobenius_inverse(poles[i])));
    WittPoly factor = WittPoly::one(W) - WittPoly::monomial(W, 1, Yi.pow(static_cast<u64>(p)));
    F = F * factor.pow(static_cast<u64>(rep.classes[i]));
  }
  rep.F = F;
  rep.dec = decompose_lemma212(F, rep.m);
  rep.required_valuation = (rep.m + 1) / p;

  Polynomial s = rep.dec.Shat.reduce();
  if (!s.is_zero()) {
    int v = 0;
    while (s.coeff(v) == 0) ++v;
    rep.observed_valuation = v;
    if (v < rep.required_valuation)
      throw InternalCheckError("refined p-part starts at X^" + std::to_string(v) +
                               ", expected at least X^" + std::to_string(rep.required_valuation));
  }
  return rep;
}

struct LiftP2Report {
  const WittRing* ring = nullptr;
  int n = 0;
  Polynomial f1;                   // monic residue certificate, degree 2n
  std::vector<u32> residues;       // x_1..x_{2n}; the first n reduce the inputs
  std::vector<WittElement> lifts;  // X_1..X_n as given, then Teichmuller lifts
  std::vector<WittElement> eps;    // corrections; zero on the first n and the pinned last slot
  std::vector<WittElement> alpha;  // series coefficients alpha_1..alpha_{n-1} of -R/Q^2
  WittPoly Ftilde;                 // uncorrected product of (1 - X_i X)
  WittPoly Q, R;                   // Ftilde = Q^2 + U X^{2n-1} + 2R
  WittPoly F;                      // corrected product
};

// Extends the n given lifts to 2n through the characteristic-2 construction,
// then replaces the fresh lifts X_i by X_i + 2 eps_i so that the 2-part of
// F - Q^2 - U X^{2n-1} vanishes in degrees 1..n-1.  The eps solve a transposed
// Vandermonde system against the series -R/Q^2; with n-1 equations for n
// unknowns, the last eps is pinned to zero and the rest are determined.
inline LiftP2Report lift_p2(const std::vector<WittElement>& X, const WittElement& U) {
  check_precondition(!X.empty(), "need at least one lift point");
  const WittRing* W = X[0].ring();
  for (const auto& x : X) check_precondition(x.ring() == W, "lift points from different rings");
  check_precondition(U.ring() == W, "slope from a different ring");
  const FieldSpec* K = W->F;
  check_precondition(K->p == 2, "lifting construction requires characteristic 2");
  check_precondition(W->N >= 3, "precision must be at least 3");
  check_precondition(U.is_unit(), "slope must be a unit");
  const int n = static_cast<int>(X.size());

  LiftP2Report rep;
  rep.ring = W;
  rep.n = n;
  std::vector<u32> xs;
  for (const auto& x : X) xs.push_back(x.reduce().packed());
  {
    std::vector<u32> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    check_precondition(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                       "lift points collide mod 2");
  }
  const u32 u = U.reduce().packed();

  Polynomial q = detail::p2_half(K, xs, u);
  rep.f1 = q * q + Polynomial(K, {0, u});
  check_internal(rep.f1.derivative() == Polynomial::constant(K, u), "certificate derivative is not u");

  int total = 0;
  std::vector<u32> fresh;
  for (const auto& [root, mult] : roots_exhaustive(rep.f1)) {
    check_internal(mult == 1, "residue certificate is not separable");
    ++total;
    if (std::find(xs.begin(), xs.end(), root) == xs.end()) fresh.push_back(root);
  }
  if (total < 2 * n)
    throw NeedsLargerField("residue certificate does not split over " + K->label(),
                           splitting_degree(rep.f1, 64));
  check_internal(static_cast<int>(fresh.size()) == n, "expected n fresh certificate roots");
  std::sort(fresh.begin(), fresh.end());

  rep.residues = xs;
  rep.residues.insert(rep.residues.end(), fresh.begin(), fresh.end());
  rep.lifts = X;
  for (u32 r : fresh) rep.lifts.push_back(teichmuller(W, FieldElement(K, r)));

  WittPoly onep = WittPoly::one(W);
  rep.Ftilde = onep;
  for (const auto& Xi : rep.lifts) rep.Ftilde = rep.Ftilde * (onep - WittPoly::monomial(W, 1, Xi));

  // q is monic of degree n; its reversal has constant term 1.
  std::vector<u32> qrev;
  for (int j = 0; j <= n; ++j) qrev.push_back(q.coeff(n - j));
  rep.Q = teich_lift(W, Polynomial(K, std::move(qrev)));
  try {
    rep.R = div_exact_p(rep.Ftilde - rep.Q * rep.Q - WittPoly::monomial(W, 2 * n - 1, U));
  } catch (const PreconditionError&) {
    throw InternalCheckError("even part of the product does not match Q^2 mod 2");
  }
  check_internal(rep.R.coeff(0).is_zero(), "R must vanish at X = 0");

  rep.eps.assign(static_cast<size_t>(2 * n), WittElement::zero(W));
  if (n >= 2) {
    WittPoly series = rep.R * detail::witt_series_inverse(rep.Q * rep.Q, n - 1);
    for (int k = 1; k <= n - 1; ++k) rep.alpha.push_back(-series.coeff(k));

    std::vector<std::vector<WittElement>> M(
        static_cast<size_t>(n - 1),
        std::vector<WittElement>(static_cast<size_t>(n - 1), WittElement::zero(W)));
    std::vector<WittElement> b;
    for (int j = 0; j <= n - 2; ++j) {
      for (int i = 0; i <= n - 2; ++i)
        M[static_cast<size_t>(j)][static_cast<size_t>(i)] =
            rep.lifts[static_cast<size_t>(n + i)].pow(static_cast<u64>(j));
      b.push_back(-rep.alpha[static_cast<size_t>(j)]);
    }
    auto sol = detail::solve_unit_system(std::move(M), std::move(b));
    for (int i = 0; i <= n - 2; ++i) rep.eps[static_cast<size_t>(n + i)] = sol[static_cast<size_t>(i)];

    for (int j = 0; j <= n - 2; ++j) {
      WittElement acc = WittElement::zero(W);
      for (int i = n; i < 2 * n; ++i)
        acc = acc + rep.eps[static_cast<size_t>(i)] *
                        rep.lifts[static_cast<size_t>(i)].pow(static_cast<u64>(j));
      check_internal(acc == -rep.alpha[static_cast<size_t>(j)],
                     "correction system does not reproduce the series");
    }
  }

  WittElement two = WittElement::from_int(W, 2);
  rep.F = onep;
  for (int i = 0; i < 2 * n; ++i)
    rep.F = rep.F * (onep - WittPoly::monomial(W, 1, rep.lifts[static_cast<size_t>(i)] +
                                                         two * rep.eps[static_cast<size_t>(i)]));

  std::vector<u32> frev;
  for (int j = 0; j <= 2 * n; ++j) frev.push_back(rep.f1.coeff(2 * n - j));
  check_internal(rep.F.reduce() == Polynomial(K, std::move(frev)),
                 "corrected lift does not reduce to the reversed certificate");
  return rep;
}

// Substitutes X = pi^2 T, Y = -2Z + Q into Y^2 = F over W[pi]/(pi^{2n-1} + 2)
// and divides the equation by (-2)^2.  Good reduction means the residue
// equation is exactly z^2 - z - u t^{2n-1}; a 2-part surviving the division
// (or a wrong residue) returns false.
inline bool reduction_check_p2(const WittPoly& F, int n) {
  check_precondition(n >= 1, "n must be positive");
  const WittRing* W = F.ring();
  check_precondition(W != nullptr, "polynomial needs a ring");
  const FieldSpec* K = W->F;
  check_precondition(K->p == 2, "reduction check requires characteristic 2");
  check_precondition(W->N >= 3, "precision must be at least 3: the division by 4 costs two digits");

  // A residue at zero drops one linear factor mod 2, so degree 2n - 1 is legal.
  Polynomial f = F.reduce();
  check_precondition(f.coeff(0) == 1 && f.degree() <= 2 * n, "F is not of the lifted shape");
  std::vector<u32> qc;
  for (int j = 0; j <= n; ++j) qc.push_back(K->frobenius_inverse(f.coeff(2 * j)));
  Polynomial qhat(K, std::move(qc));
  Polynomial odd = f - qhat * qhat;
  const u32 u = odd.coeff(2 * n - 1);
  check_precondition(u != 0 && odd == Polynomial::monomial(K, 2 * n - 1, u),
                     "F is not of the lifted shape");

  WittPoly Q = teich_lift(W, qhat);
  const RamifiedRing* Ram = RamifiedRing::get(W, 2 * n - 1);
  RamifiedElement pi2 = RamifiedElement::pi(Ram) * RamifiedElement::pi(Ram);
  auto subst = [&](const WittPoly& P) {  // P(pi^2 T) by T-degree
    std::vector<RamifiedElement> out;
    out.reserve(static_cast<size_t>(P.degree() + 1));
    RamifiedElement pw = RamifiedElement::from_witt(Ram, WittElement::one(W));
    for (int k = 0; k <= P.degree(); ++k) {
      out.push_back(RamifiedElement::from_witt(Ram, P.coeff(k)) * pw);
      pw = pw * pi2;
    }
    return out;
  };
  std::vector<RamifiedElement> Fs = subst(F), Qs = subst(Q);

  // (-2Z + Q)^2 - F has Z-coefficients 4, -4Q(pi^2 T), Q(pi^2 T)^2 - F(pi^2 T).
  std::vector<RamifiedElement> c0(std::max(2 * Qs.size() - 1, Fs.size()),
                                  RamifiedElement::zero(Ram));
  for (size_t i = 0; i < Qs.size(); ++i)
    for (size_t j = 0; j < Qs.size(); ++j) c0[i + j] = c0[i + j] + Qs[i] * Qs[j];
  for (size_t k = 0; k < Fs.size(); ++k) c0[k] = c0[k] - Fs[k];
  std::vector<RamifiedElement> c1;
  RamifiedElement m4 = RamifiedElement::from_witt(Ram, WittElement::from_int(W, -4));
  for (const auto& qk : Qs) c1.push_back(m4 * qk);

  try {
    for (auto& x : c0) x = x.div_exact_2().div_exact_2();
    for (auto& x : c1) x = x.div_exact_2().div_exact_2();
  } catch (const PreconditionError&) {
    return false;
  }

  bool ok = true;
  for (size_t k = 0; k < c1.size(); ++k) {
    FieldElement r = c1[k].reduce();
    ok = ok && (k == 0 ? r.packed() == 1 : r.is_zero());
  }
  for (size_t k = 0; k < c0.size(); ++k) {
    FieldElement r = c0[k].reduce();
    ok = ok && (k == static_cast<size_t>(2 * n - 1) ? r.packed() == u : r.is_zero());
  }
  return ok;
}

}  // namespace logforms
