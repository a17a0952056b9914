#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "logforms/field.hpp"

namespace logforms {

// Univariate polynomial over a fixed FieldSpec, packed coefficients low degree
// first, trailing zeros trimmed.  The zero polynomial has degree -1.
class Polynomial {
 public:
  Polynomial() : F_(nullptr) {}
  explicit Polynomial(const FieldSpec* F) : F_(F) {}
  Polynomial(const FieldSpec* F, std::vector<u32> coeffs) : F_(F), c_(std::move(coeffs)) {
    for (u32 x : c_) check_precondition(x < F->q, "coefficient out of range for field");
    trim();
  }

  static Polynomial zero(const FieldSpec* F) { return Polynomial(F); }
  static Polynomial constant(const FieldSpec* F, u32 c) { return Polynomial(F, {c}); }
  static Polynomial one(const FieldSpec* F) { return constant(F, 1); }
  static Polynomial x(const FieldSpec* F) { return Polynomial(F, {0, 1}); }
  static Polynomial monomial(const FieldSpec* F, int deg, u32 c = 1) {
    std::vector<u32> v(static_cast<size_t>(deg) + 1, 0);
    v.back() = c;
    return Polynomial(F, std::move(v));
  }
  static Polynomial from_roots(const FieldSpec* F, const std::vector<u32>& roots) {
    Polynomial f = one(F);
    for (u32 r : roots) f = f * Polynomial(F, {F->neg(r), 1});
    return f;
  }

  const FieldSpec* field() const { return F_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  u32 coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : 0;
  }
  u32 lc() const {
    check_precondition(!c_.empty(), "leading coefficient of zero polynomial");
    return c_.back();
  }
  const std::vector<u32>& coeffs() const { return c_; }

  Polynomial operator+(const Polynomial& o) const {
    const FieldSpec* F = join(o);
    std::vector<u32> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = F->add(coeff(static_cast<int>(i)), o.coeff(static_cast<int>(i)));
    return Polynomial(F, std::move(v));
  }
  Polynomial operator-(const Polynomial& o) const {
    const FieldSpec* F = join(o);
    std::vector<u32> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = F->sub(coeff(static_cast<int>(i)), o.coeff(static_cast<int>(i)));
    return Polynomial(F, std::move(v));
  }
  Polynomial operator-() const {
    std::vector<u32> v(c_);
    for (u32& x : v) x = F_->neg(x);
    return Polynomial(F_, std::move(v));
  }
  Polynomial operator*(const Polynomial& o) const {
    const FieldSpec* F = join(o);
    if (is_zero() || o.is_zero()) return zero(F);
    std::vector<u32> v(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (!c_[i]) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) {
        if (!o.c_[j]) continue;
        v[i + j] = F->add(v[i + j], F->mul(c_[i], o.c_[j]));
      }
    }
    return Polynomial(F, std::move(v));
  }
  Polynomial times(u32 s) const {
    std::vector<u32> v(c_);
    for (u32& x : v) x = F_->mul(x, s);
    return Polynomial(F_, std::move(v));
  }
  bool operator==(const Polynomial& o) const { return F_->same(*o.F_) && c_ == o.c_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial monic() const {
    check_precondition(!is_zero(), "cannot normalize zero polynomial");
    return times(F_->inv(lc()));
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return zero(F_);
    std::vector<u32> v(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i)
      v[i - 1] = F_->mul(c_[i], F_->from_int(static_cast<i64>(i)));
    return Polynomial(F_, std::move(v));
  }

  u32 eval(u32 a) const {
    u32 acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, a), c_[i]);
    return acc;
  }

  Polynomial compose(const Polynomial& inner) const {
    const FieldSpec* F = join(inner);
    Polynomial acc = zero(F);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * inner + constant(F, c_[i]);
    return acc;
  }

  // f(x + a)
  Polynomial shifted(u32 a) const { return compose(Polynomial(F_, {a, 1})); }

  Polynomial pow(u64 e) const {
    Polynomial r = one(F_), base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  std::string str(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = c_.size(); i-- > 0;) {
      if (!c_[i]) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || c_[i] != 1) s += std::to_string(c_[i]);
      if (i >= 1) s += var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  const FieldSpec* join(const Polynomial& o) const {
    check_precondition(F_ != nullptr && o.F_ != nullptr && F_->same(*o.F_),
                       "polynomials over different FieldSpecs");
    return F_;
  }
  const FieldSpec* F_;
  std::vector<u32> c_;
};

inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& f, const Polynomial& g) {
  const FieldSpec* F = f.field();
  check_precondition(F->same(*g.field()), "divmod over different FieldSpecs");
  check_precondition(!g.is_zero(), "division by zero polynomial");
  int dg = g.degree();
  if (f.degree() < dg) return {Polynomial::zero(F), f};
  std::vector<u32> r(f.coeffs());
  std::vector<u32> q(static_cast<size_t>(f.degree() - dg) + 1, 0);
  u32 lead_inv = F->inv(g.lc());
  for (int d = f.degree(); d >= dg; --d) {
    u32 c = r[static_cast<size_t>(d)];
    if (!c) continue;
    u32 factor = F->mul(c, lead_inv);
    q[static_cast<size_t>(d - dg)] = factor;
    for (int i = 0; i <= dg; ++i)
      r[static_cast<size_t>(d - dg + i)] =
          F->sub(r[static_cast<size_t>(d - dg + i)], F->mul(factor, g.coeff(i)));
  }
  return {Polynomial(F, std::move(q)), Polynomial(F, std::move(r))};
}

inline Polynomial operator%(const Polynomial& f, const Polynomial& g) { return divmod(f, g).second; }

inline Polynomial div_exact(const Polynomial& f, const Polynomial& g) {
  auto [q, r] = divmod(f, g);
  check_precondition(r.is_zero(), "exact division has nonzero remainder");
  return q;
}

inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.monic();
}

inline Polynomial pow_mod(const Polynomial& base, u64 e, const Polynomial& mod) {
  const FieldSpec* F = base.field();
  Polynomial r = Polynomial::one(F), b = base % mod;
  while (e) {
    if (e & 1) r = (r * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return r;
}

// Inverse image of coefficientwise Frobenius on p-th powers: for f supported
// on exponents divisible by p, returns g with g(x)^p = f(x).
inline Polynomial pth_root_coeffwise(const Polynomial& f) {
  const FieldSpec* F = f.field();
  const int p = F->p;
  std::vector<u32> v(static_cast<size_t>(f.degree() / p) + 1, 0);
  if (f.is_zero()) return Polynomial::zero(F);
  for (int i = 0; i <= f.degree(); ++i) {
    u32 c = f.coeff(i);
    if (!c) continue;
    check_precondition(i % p == 0, "polynomial is not a p-th power (exponent not divisible by p)");
    v[static_cast<size_t>(i / p)] = F->frobenius_inverse(c);
  }
  return Polynomial(F, std::move(v));
}

// Moore determinant det(Q_i^{p^{n-j}}) with rows (Q_i^{p^{n-1}}, ..., Q_i^p, Q_i).
// For n = 2 this is Q_1^p Q_2 - Q_1 Q_2^p.  Vanishes exactly when the Q_i are
// linearly dependent over F_p.
inline Polynomial moore_product(const std::vector<Polynomial>& Q) {
  check_precondition(!Q.empty() && Q.size() <= 6, "moore_product expects 1..6 polynomials");
  const size_t n = Q.size();
  const FieldSpec* F = Q[0].field();
  for (const auto& f : Q)
    check_precondition(F->same(*f.field()), "moore_product inputs over different FieldSpecs");
  // entry[i][j] = Q_i^{p^{n-1-j}}
  std::vector<std::vector<Polynomial>> entry(n, std::vector<Polynomial>(n, Polynomial::zero(F)));
  for (size_t i = 0; i < n; ++i) {
    Polynomial cur = Q[i];
    entry[i][n - 1] = cur;
    for (size_t j = n - 1; j-- > 0;) {
      cur = cur.pow(static_cast<u64>(F->p));
      entry[i][j] = cur;
    }
  }
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial det = Polynomial::zero(F);
  do {
    int inversions = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Polynomial term = Polynomial::one(F);
    for (size_t i = 0; i < n; ++i) term = term * entry[i][perm[i]];
    det = (inversions & 1) ? det - term : det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

inline std::vector<std::pair<u32, int>> roots_exhaustive(const Polynomial& f) {
  const FieldSpec* F = f.field();
  check_precondition(!f.is_zero(), "roots of the zero polynomial");
  check_precondition(F->q <= 500000, "field too large for exhaustive root scan");
  std::vector<std::pair<u32, int>> out;
  for (u64 a = 0; a < F->q; ++a) {
    if (f.eval(static_cast<u32>(a)) != 0) continue;
    // Multiplicity by repeated synthetic division.
    Polynomial g = f;
    int mult = 0;
    Polynomial lin(F, {F->neg(static_cast<u32>(a)), 1});
    while (true) {
      auto [q, r] = divmod(g, lin);
      if (!r.is_zero()) break;
      ++mult;
      g = q;
      if (g.is_zero()) break;
    }
    out.emplace_back(static_cast<u32>(a), mult);
  }
  return out;
}

// Product of the distinct irreducible factors, monic.  Handles inseparable
// layers by peeling p-th powers.
inline Polynomial radical(const Polynomial& f) {
  const FieldSpec* F = f.field();
  check_precondition(!f.is_zero(), "radical of zero polynomial");
  if (f.degree() == 0) return Polynomial::one(F);
  Polynomial fp = f.derivative();
  if (fp.is_zero()) return radical(pth_root_coeffwise(f));
  Polynomial g = gcd(f, fp);
  Polynomial w = div_exact(f.monic(), g);
  // Strip every w-factor out of g; what survives has multiplicity divisible by p.
  while (true) {
    Polynomial d = gcd(g, w);
    if (d.degree() <= 0) break;
    g = div_exact(g, d);
  }
  if (g.degree() <= 0) return w;
  return w * radical(g);
}

inline bool is_squarefree(const Polynomial& f) {
  if (f.is_zero()) return false;
  if (f.degree() == 0) return true;
  Polynomial fp = f.derivative();
  if (fp.is_zero()) return false;
  return gcd(f, fp).degree() == 0;
}

// Smallest j with all roots of f in F_{q^j}: iterate x -> x^q mod radical(f)
// until it returns to x.  Returns 0 if the bound is exceeded.
inline int splitting_degree(const Polynomial& f, int max_degree = 64) {
  Polynomial r = radical(f);
  if (r.degree() <= 0) return 1;
  const FieldSpec* F = f.field();
  Polynomial t = Polynomial::x(F) % r;
  Polynomial xmod = t;
  for (int j = 1; j <= max_degree; ++j) {
    t = pow_mod(t, F->q, r);
    if (t == xmod) return j;
  }
  return 0;
}

inline bool splits_over_base(const Polynomial& f) { return splitting_degree(f) == 1; }

inline Polynomial embed_poly(const Polynomial& f, const FieldSpec* dst) {
  const FieldSpec* src = f.field();
  if (src->same(*dst)) return Polynomial(dst, f.coeffs());
  std::vector<u32> v(f.coeffs().size());
  for (size_t i = 0; i < v.size(); ++i)
    v[i] = embed(FieldElement(src, f.coeffs()[i]), dst).packed();
  return Polynomial(dst, std::move(v));
}

inline Polynomial poly_frobenius(const Polynomial& f) {
  std::vector<u32> v(f.coeffs());
  for (u32& c : v) c = f.field()->frobenius(c);
  return Polynomial(f.field(), std::move(v));
}

// f(x^s): stretch every exponent by the factor s.
inline Polynomial inflate(const Polynomial& f, int s) {
  check_precondition(s >= 1, "inflation factor must be positive");
  if (f.degree() < 0) return f;
  std::vector<u32> v(static_cast<size_t>(f.degree()) * s + 1, 0);
  for (int i = 0; i <= f.degree(); ++i) v[static_cast<size_t>(i) * s] = f.coeff(i);
  return Polynomial(f.field(), std::move(v));
}

}  // namespace logforms
