#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "logforms/field.hpp"

namespace logforms {

// Truncated unramified Witt vectors: W(F_{p^k})/p^N realized as
// (Z/p^N)[y]/(M(y)) with M the monic integer lift of the residue field
// modulus.  Interned; pointer identity means same ring.
class WittRing {
 public:
  const FieldSpec* F;
  const int N;
  const u64 pN;
  const std::vector<u64> M;  // lifted modulus, degree k, monic

  static const WittRing* get(int p, int k, int N) {
    check_precondition(N >= 1, "precision must be positive");
    const FieldSpec* F = FieldSpec::get(p, k);
    u64 pn = 1;
    for (int i = 0; i < N; ++i) {
      check_precondition(pn <= (u64{1} << 31) / static_cast<u64>(p),
                         "precision too large (p^N must fit in 31 bits)");
      pn *= static_cast<u64>(p);
    }
    using Key = std::tuple<int, int, int>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<WittRing>>* registry =
        new std::map<Key, std::unique_ptr<WittRing>>();
    std::lock_guard<std::mutex> lock(mu);
    Key key{p, k, N};
    auto it = registry->find(key);
    if (it == registry->end())
      it = registry->emplace(key, std::unique_ptr<WittRing>(new WittRing(F, N, pn))).first;
    return it->second.get();
  }

  std::string label() const {
    return "W(" + F->label() + ")/" + std::to_string(F->p) + "^" + std::to_string(N);
  }

  u64 add(u64 a, u64 b) const { return (a + b) % pN; }
  u64 sub(u64 a, u64 b) const { return (a + pN - b % pN) % pN; }
  u64 mul(u64 a, u64 b) const { return (a * b) % pN; }
  u64 from_int(i64 c) const {
    i64 r = c % static_cast<i64>(pN);
    if (r < 0) r += static_cast<i64>(pN);
    return static_cast<u64>(r);
  }

 private:
  WittRing(const FieldSpec* F_, int N_, u64 pN_)
      : F(F_), N(N_), pN(pN_), M(lift_modulus(F_)) {}
  static std::vector<u64> lift_modulus(const FieldSpec* F) {
    return std::vector<u64>(F->modulus.begin(), F->modulus.end());
  }
};

class WittElement {
 public:
  WittElement() : R_(nullptr) {}
  WittElement(const WittRing* R, std::vector<u64> coords) : R_(R), c_(std::move(coords)) {
    check_precondition(R != nullptr && c_.size() == static_cast<size_t>(R->F->k),
                       "coordinate tuple has wrong length");
    for (u64& x : c_) x %= R->pN;
  }

  static WittElement zero(const WittRing* R) {
    return WittElement(R, std::vector<u64>(static_cast<size_t>(R->F->k), 0));
  }
  static WittElement one(const WittRing* R) { return from_int(R, 1); }
  static WittElement from_int(const WittRing* R, i64 c) {
    std::vector<u64> v(static_cast<size_t>(R->F->k), 0);
    v[0] = R->from_int(c);
    return WittElement(R, std::move(v));
  }
  // Digitwise lift of a residue; the canonical multiplicative lift is
  // teichmuller below.
  static WittElement lift(const WittRing* R, const FieldElement& x) {
    check_precondition(R->F->same(*x.field()), "residue from the wrong field");
    std::vector<u32> d = x.coeffs();
    return WittElement(R, std::vector<u64>(d.begin(), d.end()));
  }

  const WittRing* ring() const { return R_; }
  const std::vector<u64>& coords() const { return c_; }
  bool is_zero() const {
    for (u64 x : c_)
      if (x) return false;
    return true;
  }

  FieldElement reduce() const {
    const FieldSpec* F = R_->F;
    std::vector<u32> d(c_.size());
    for (size_t i = 0; i < c_.size(); ++i)
      d[i] = static_cast<u32>(c_[i] % static_cast<u64>(F->p));
    return FieldElement(F, F->pack(d.data()));
  }
  bool is_unit() const { return !reduce().is_zero(); }

  bool operator==(const WittElement& o) const { return R_ == o.R_ && c_ == o.c_; }
  bool operator!=(const WittElement& o) const { return !(*this == o); }

  WittElement operator+(const WittElement& o) const {
    std::vector<u64> v(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = join(o)->add(c_[i], o.c_[i]);
    return WittElement(R_, std::move(v));
  }
  WittElement operator-(const WittElement& o) const {
    std::vector<u64> v(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = join(o)->sub(c_[i], o.c_[i]);
    return WittElement(R_, std::move(v));
  }
  WittElement operator-() const { return zero(R_) - *this; }

  WittElement operator*(const WittElement& o) const {
    join(o);
    const int k = R_->F->k;
    std::vector<u64> conv(static_cast<size_t>(2 * k - 1), 0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        size_t t = static_cast<size_t>(i + j);
        conv[t] = R_->add(conv[t], R_->mul(c_[static_cast<size_t>(i)], o.c_[static_cast<size_t>(j)]));
      }
    for (int d = 2 * k - 2; d >= k; --d) {
      u64 top = conv[static_cast<size_t>(d)];
      if (!top) continue;
      conv[static_cast<size_t>(d)] = 0;
      for (int i = 0; i < k; ++i) {
        size_t t = static_cast<size_t>(d - k + i);
        conv[t] = R_->sub(conv[t], R_->mul(top, R_->M[static_cast<size_t>(i)]));
      }
    }
    conv.resize(static_cast<size_t>(k));
    return WittElement(R_, std::move(conv));
  }

  WittElement pow(u64 e) const {
    WittElement acc = one(R_), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  }

  // Newton lift of the residue-field inverse; each step doubles the correct
  // p-adic digits.
  WittElement inv() const {
    check_precondition(is_unit(), "inverting a non-unit in " + R_->label());
    WittElement x = lift(R_, reduce().inverse());
    WittElement two = from_int(R_, 2);
    for (int digits = 1; digits < R_->N; digits *= 2) x = x * (two - *this * x);
    check_internal(*this * x == one(R_), "Newton inversion failed to converge");
    return x;
  }

 private:
  const WittRing* join(const WittElement& o) const {
    check_precondition(R_ == o.R_, "Witt elements from different rings");
    return R_;
  }
  const WittRing* R_;
  std::vector<u64> c_;
};

// Fixed point of a -> a^{p^k} above x; gains one digit per iteration.
inline WittElement teichmuller(const WittRing* R, const FieldElement& x) {
  WittElement w = WittElement::lift(R, x);
  for (int i = 1; i < R->N; ++i) w = w.pow(R->F->q);
  check_internal(w.pow(R->F->q) == w, "Teichmuller iteration did not stabilize");
  check_internal(w.reduce() == x, "Teichmuller lift lost its residue");
  return w;
}

inline WittElement div_exact_p(const WittElement& a) {
  const WittRing* R = a.ring();
  const u64 p = static_cast<u64>(R->F->p);
  std::vector<u64> v(a.coords());
  for (u64& x : v) {
    check_precondition(x % p == 0, "element is not divisible by p");
    x /= p;
  }
  return WittElement(R, std::move(v));
}

// W(F_{2^k})/2^N with a ramified uniformizer adjoined: pi^e = -2, e odd.
// Representatives keep N 2-adic digits per coordinate; each exact division by
// 2 consumes one digit of trustworthy precision, so callers size N ahead.
class RamifiedRing {
 public:
  const WittRing* W;
  const int e;

  static const RamifiedRing* get(const WittRing* W, int e) {
    check_precondition(W->F->p == 2, "ramified extension is for p = 2 only");
    check_precondition(e >= 1 && e % 2 == 1, "ramification degree must be odd");
    using Key = std::pair<const WittRing*, int>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<RamifiedRing>>* registry =
        new std::map<Key, std::unique_ptr<RamifiedRing>>();
    std::lock_guard<std::mutex> lock(mu);
    Key key{W, e};
    auto it = registry->find(key);
    if (it == registry->end())
      it = registry->emplace(key, std::unique_ptr<RamifiedRing>(new RamifiedRing(W, e))).first;
    return it->second.get();
  }

 private:
  RamifiedRing(const WittRing* W_, int e_) : W(W_), e(e_) {}
};

class RamifiedElement {
 public:
  RamifiedElement() : R_(nullptr) {}
  RamifiedElement(const RamifiedRing* R, std::vector<WittElement> coords)
      : R_(R), c_(std::move(coords)) {
    check_precondition(R != nullptr && c_.size() == static_cast<size_t>(R->e),
                       "pi-coordinate tuple has wrong length");
  }

  static RamifiedElement zero(const RamifiedRing* R) {
    return RamifiedElement(R, std::vector<WittElement>(static_cast<size_t>(R->e),
                                                       WittElement::zero(R->W)));
  }
  static RamifiedElement from_witt(const RamifiedRing* R, const WittElement& a) {
    RamifiedElement out = zero(R);
    out.c_[0] = a;
    return out;
  }
  static RamifiedElement pi(const RamifiedRing* R) {
    RamifiedElement out = zero(R);
    if (R->e == 1)
      out.c_[0] = WittElement::from_int(R->W, -2);
    else
      out.c_[1] = WittElement::one(R->W);
    return out;
  }

  const RamifiedRing* ring() const { return R_; }
  const WittElement& coord(int i) const { return c_[static_cast<size_t>(i)]; }
  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }
  // Residue modulo the maximal ideal (pi, 2).
  FieldElement reduce() const { return c_[0].reduce(); }

  bool operator==(const RamifiedElement& o) const { return same(o) && c_ == o.c_; }
  bool operator!=(const RamifiedElement& o) const { return !(*this == o); }

  RamifiedElement operator+(const RamifiedElement& o) const {
    check_precondition(same(o), "ramified elements from different rings");
    std::vector<WittElement> v(c_);
    for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] + o.c_[i];
    return RamifiedElement(R_, std::move(v));
  }
  RamifiedElement operator-(const RamifiedElement& o) const {
    check_precondition(same(o), "ramified elements from different rings");
    std::vector<WittElement> v(c_);
    for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] - o.c_[i];
    return RamifiedElement(R_, std::move(v));
  }

  RamifiedElement operator*(const RamifiedElement& o) const {
    check_precondition(same(o), "ramified elements from different rings");
    const int e = R_->e;
    std::vector<WittElement> conv(static_cast<size_t>(2 * e - 1), WittElement::zero(R_->W));
    for (int i = 0; i < e; ++i)
      for (int j = 0; j < e; ++j)
        conv[static_cast<size_t>(i + j)] =
            conv[static_cast<size_t>(i + j)] + c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)];
    WittElement m2 = WittElement::from_int(R_->W, -2);
    for (int d = 2 * e - 2; d >= e; --d)
      conv[static_cast<size_t>(d - e)] =
          conv[static_cast<size_t>(d - e)] + m2 * conv[static_cast<size_t>(d)];
    conv.resize(static_cast<size_t>(e));
    return RamifiedElement(R_, std::move(conv));
  }

  RamifiedElement pow(u64 n) const {
    RamifiedElement acc = from_witt(R_, WittElement::one(R_->W)), base = *this;
    while (n) {
      if (n & 1) acc = acc * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return acc;
  }

  // x / pi: shifts pi-coordinates down; the constant coordinate must be
  // divisible by 2 and wraps to the top as coord / (-2).
  RamifiedElement div_exact_pi() const {
    std::vector<WittElement> v(c_.begin() + 1, c_.end());
    v.push_back(-div_exact_p(c_[0]));
    return RamifiedElement(R_, std::move(v));
  }

  RamifiedElement div_exact_2() const {
    std::vector<WittElement> v(c_);
    for (auto& x : v) x = div_exact_p(x);
    return RamifiedElement(R_, std::move(v));
  }

 private:
  bool same(const RamifiedElement& o) const { return R_ == o.R_; }
  const RamifiedRing* R_;
  std::vector<WittElement> c_;
};

}  // namespace logforms
