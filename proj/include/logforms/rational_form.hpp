#pragma once

#include <utility>
#include <vector>

#include "logforms/polynomial.hpp"

namespace logforms {

// (numerator/denominator) dz in the affine coordinate z.  Always stored
// reduced with monic denominator; the 1/z chart never materializes, orders at
// infinity are computed from degrees instead.
class DifferentialForm {
 public:
  DifferentialForm() : num_(nullptr), den_(nullptr) {}
  DifferentialForm(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    check_precondition(!den_.is_zero(), "form denominator is zero");
    check_precondition(num_.field()->same(*den_.field()), "form components over different FieldSpecs");
    reduce();
  }
  static DifferentialForm zero(const FieldSpec* F) {
    return DifferentialForm(Polynomial::zero(F), Polynomial::one(F));
  }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  const FieldSpec* field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }

  bool operator==(const DifferentialForm& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const DifferentialForm& o) const { return !(*this == o); }

  DifferentialForm operator+(const DifferentialForm& o) const {
    return DifferentialForm(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  DifferentialForm operator-(const DifferentialForm& o) const {
    return DifferentialForm(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  DifferentialForm times(u32 s) const { return DifferentialForm(num_.times(s), den_); }
  DifferentialForm times_poly(const Polynomial& h) const { return DifferentialForm(num_ * h, den_); }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Polynomial::one(den_.field());
      return;
    }
    Polynomial g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = div_exact(num_, g);
      den_ = div_exact(den_, g);
    }
    u32 lead = den_.lc();
    if (lead != 1) {
      u32 s = den_.field()->inv(lead);
      num_ = num_.times(s);
      den_ = den_.times(s);
    }
  }
  Polynomial num_, den_;
};

struct PoleDatum {
  FieldElement location;
  int order;
  FieldElement residue;
};

// Order of vanishing at infinity, measured through the substitution x = 1/z
// with dz = -dx/x^2; negative values are poles.
inline int order_at_infinity(const DifferentialForm& w) {
  check_precondition(!w.is_zero(), "order at infinity of the zero form");
  return w.denominator().degree() - w.numerator().degree() - 2;
}

namespace detail {
// First `terms` coefficients of 1/E for E with nonzero constant term.
inline std::vector<u32> series_inverse(const Polynomial& E, int terms) {
  const FieldSpec* F = E.field();
  check_internal(E.coeff(0) != 0, "series inversion at a zero constant term");
  std::vector<u32> t(static_cast<size_t>(terms), 0);
  u32 e0inv = F->inv(E.coeff(0));
  t[0] = e0inv;
  for (int n = 1; n < terms; ++n) {
    u32 acc = 0;
    for (int i = 1; i <= n; ++i) acc = F->add(acc, F->mul(E.coeff(i), t[static_cast<size_t>(n - i)]));
    t[static_cast<size_t>(n)] = F->neg(F->mul(e0inv, acc));
  }
  return t;
}
}  // namespace detail

// One PoleDatum per distinct finite pole.  Residue is the coefficient of
// (z - a)^{-1} in the local Laurent expansion; for simple poles this is
// N(a)/D'(a) and the two computations are checked against each other.
inline std::vector<PoleDatum> poles_and_residues(const DifferentialForm& w) {
  const FieldSpec* F = w.field();
  std::vector<PoleDatum> out;
  if (w.is_zero() || w.denominator().degree() == 0) return out;
  const Polynomial& N = w.numerator();
  const Polynomial& D = w.denominator();
  auto roots = roots_exhaustive(D);
  int covered = 0;
  for (auto [a, r] : roots) covered += r;
  if (covered != D.degree())
    throw NeedsLargerField("form denominator does not split over " + F->label());
  for (auto [a, r] : roots) {
    Polynomial Ns = N.shifted(a);
    Polynomial Ds = D.shifted(a);
    // Ds = z^r E with E(0) != 0
    std::vector<u32> ec(Ds.coeffs().begin() + r, Ds.coeffs().end());
    Polynomial E(F, std::move(ec));
    auto inv = detail::series_inverse(E, r);
    u32 res = 0;
    for (int i = 0; i < r; ++i)
      res = F->add(res, F->mul(Ns.coeff(i), inv[static_cast<size_t>(r - 1 - i)]));
    if (r == 1) {
      u32 direct = F->div(N.eval(a), D.derivative().eval(a));
      check_internal(direct == res, "simple-pole residue mismatch between series and N/D'");
      check_internal(res != 0, "simple pole with zero residue after reduction");
    }
    out.push_back(PoleDatum{FieldElement(F, a), r, FieldElement(F, res)});
  }
  return out;
}

// Cartier operator: with omega = Ntilde/D^p dz and Ntilde = sum_j z^j A_j(z^p),
// returns (coefficientwise p-th root of A_{p-1}) / D dz.
inline DifferentialForm cartier(const DifferentialForm& w) {
  const FieldSpec* F = w.field();
  if (w.is_zero()) return DifferentialForm::zero(F);
  const int p = F->p;
  Polynomial Nt = w.numerator() * w.denominator().pow(static_cast<u64>(p - 1));
  std::vector<u32> c;
  for (int e = p - 1; e <= Nt.degree(); e += p) c.push_back(F->frobenius_inverse(Nt.coeff(e)));
  return DifferentialForm(Polynomial(F, std::move(c)), w.denominator());
}

// Fixed points of Cartier are exactly the logarithmic forms.  On proper
// fractions with squarefree denominator the (p-1)-st derivative criterion
// (N D^{p-1})^{(p-1)} = -N^p must reach the same verdict; disagreement is an
// internal error, not a verdict.
inline bool is_logarithmic(const DifferentialForm& w) {
  bool fixed = (cartier(w) == w);
  const Polynomial& N = w.numerator();
  const Polynomial& D = w.denominator();
  if (!w.is_zero() && D.degree() > N.degree() && is_squarefree(D)) {
    const int p = w.field()->p;
    Polynomial lhs = N * D.pow(static_cast<u64>(p - 1));
    for (int i = 0; i < p - 1; ++i) lhs = lhs.derivative();
    bool deriv = (lhs == -N.pow(static_cast<u64>(p)));
    check_internal(deriv == fixed, "logarithmicity criteria disagree");
  }
  return fixed;
}

// sum_i h_i dz/(z - x_i) over the distinct roots x_i of f, i.e. dg/g for the
// formal product g = prod (z - x_i)^{h_i}.
inline DifferentialForm log_derivative(const Polynomial& f, const std::vector<int>& multiplicities) {
  const FieldSpec* F = f.field();
  check_precondition(f.degree() >= 1, "certificate polynomial must be nonconstant");
  check_precondition(is_squarefree(f), "certificate polynomial has repeated roots");
  auto roots = roots_exhaustive(f);
  if (static_cast<int>(roots.size()) != f.degree())
    throw NeedsLargerField("certificate polynomial does not split over " + F->label());
  check_precondition(roots.size() == multiplicities.size(),
                     "multiplicity count does not match root count");
  Polynomial num = Polynomial::zero(F);
  Polynomial den = Polynomial::one(F);
  for (const auto& [a, r] : roots) den = den * Polynomial(F, {F->neg(a), 1});
  for (size_t i = 0; i < roots.size(); ++i) {
    int h = multiplicities[i];
    check_precondition(h % F->p != 0, "pole multiplicity divisible by p");
    u32 hi = F->from_int(h);
    Polynomial cof = div_exact(den, Polynomial(F, {F->neg(roots[i].first), 1}));
    num = num + cof.times(hi);
  }
  return DifferentialForm(std::move(num), std::move(den));
}

// df/f for nonzero f, no splitting requirement.
inline DifferentialForm dlog(const Polynomial& f) {
  check_precondition(!f.is_zero(), "dlog of the zero polynomial");
  return DifferentialForm(f.derivative(), f);
}

// Pullback along z -> lam*z + mu: N(lam z + mu)/D(lam z + mu) * lam dz.
inline DifferentialForm substitute_affine(const DifferentialForm& w, u32 lam, u32 mu) {
  const FieldSpec* F = w.field();
  check_precondition(lam != 0, "affine substitution must be invertible");
  Polynomial arg(F, {mu, lam});
  return DifferentialForm(w.numerator().compose(arg).times(lam), w.denominator().compose(arg));
}

}  // namespace logforms
