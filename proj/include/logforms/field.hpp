#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "logforms/errors.hpp"

namespace logforms {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

inline bool is_prime_u32(u32 n) {
  if (n < 2) return false;
  for (u32 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace detail {

// Coefficient-vector arithmetic over F_p used for modulus bookkeeping only.
// Vectors are low-degree-first and not necessarily normalized.
inline int fp_degree(const std::vector<u32>& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[static_cast<size_t>(i)] != 0) return i;
  return -1;
}

inline std::vector<u32> fp_mod(std::vector<u32> r, const std::vector<u32>& g, u32 p) {
  int dg = fp_degree(g);
  u32 lead_inv = 1;
  for (u32 c = 1; c < p; ++c)
    if (c * g[static_cast<size_t>(dg)] % p == 1) { lead_inv = c; break; }
  for (int dr = fp_degree(r); dr >= dg; dr = fp_degree(r)) {
    u32 factor = r[static_cast<size_t>(dr)] * lead_inv % p;
    for (int i = 0; i <= dg; ++i) {
      u32& c = r[static_cast<size_t>(dr - dg + i)];
      c = (c + p * p - factor * g[static_cast<size_t>(i)] % p) % p;
    }
  }
  return r;
}

inline bool fp_divides(const std::vector<u32>& g, const std::vector<u32>& f, u32 p) {
  return fp_degree(fp_mod(f, g, p)) < 0;
}

inline bool fp_is_irreducible(const std::vector<u32>& f, u32 p) {
  int d = fp_degree(f);
  if (d < 1) return false;
  // Trial division by every monic polynomial of degree 1..d/2.
  for (int dg = 1; 2 * dg <= d; ++dg) {
    u64 count = 1;
    for (int i = 0; i < dg; ++i) count *= p;
    std::vector<u32> g(static_cast<size_t>(dg) + 1, 0);
    g[static_cast<size_t>(dg)] = 1;
    for (u64 idx = 0; idx < count; ++idx) {
      u64 t = idx;
      for (int i = 0; i < dg; ++i) { g[static_cast<size_t>(i)] = static_cast<u32>(t % p); t /= p; }
      if (fp_divides(g, f, p)) return false;
    }
  }
  return true;
}

// First monic irreducible of degree k in base-p counter order of the
// non-leading coefficient tuple.  Fixed once so serialized elements stay
// portable across runs and machines.
inline std::vector<u32> fp_default_modulus(u32 p, int k) {
  std::vector<u32> f(static_cast<size_t>(k) + 1, 0);
  f[static_cast<size_t>(k)] = 1;
  u64 count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (u64 idx = 0; idx < count; ++idx) {
    u64 t = idx;
    for (int i = 0; i < k; ++i) { f[static_cast<size_t>(i)] = static_cast<u32>(t % p); t /= p; }
    if (fp_is_irreducible(f, p)) return f;
  }
  throw InternalCheckError("no irreducible modulus found (unreachable for k >= 1)");
}

}  // namespace detail

// F_{p^k} with a fixed monic irreducible modulus.  Elements are packed indices
// a = sum coeff_i * p^i with coeff_i the power-basis coordinates.  Specs are
// interned in a process-wide registry, so raw pointers stay valid and pointer
// identity usually coincides with content identity.
class FieldSpec {
 public:
  const int p;
  const int k;
  const u64 q;
  const std::vector<u32> modulus;  // k+1 coefficients, low degree first, monic

  static const FieldSpec* get(int p, int k);
  static const FieldSpec* with_modulus(int p, int k, const std::vector<u32>& modulus);

  bool same(const FieldSpec& o) const {
    return this == &o || (p == o.p && k == o.k && modulus == o.modulus);
  }

  std::string label() const {
    return "F_" + std::to_string(p) + (k > 1 ? "^" + std::to_string(k) : "");
  }

  u32 add(u32 a, u32 b) const {
    if (tables_) return add_t_[a * q + b];
    return add_slow(a, b);
  }
  u32 neg(u32 a) const {
    if (tables_) return neg_t_[a];
    u32 da[kMaxK];
    unpack(a, da);
    for (int i = 0; i < k; ++i) da[i] = da[i] ? static_cast<u32>(p) - da[i] : 0;
    return pack(da);
  }
  u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }
  u32 mul(u32 a, u32 b) const {
    if (tables_) return mul_t_[a * q + b];
    return mul_slow(a, b);
  }
  u32 inv(u32 a) const {
    check_precondition(a != 0, "division by zero in " + label());
    if (tables_) return inv_t_[a];
    return pow(a, q - 2);
  }
  u32 div(u32 a, u32 b) const { return mul(a, inv(b)); }
  u32 pow(u32 a, u64 e) const {
    u32 r = 1, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  u32 frobenius(u32 a) const {
    if (tables_) return frob_t_[a];
    return pow(a, static_cast<u64>(p));
  }
  u32 frobenius_inverse(u32 a) const {
    if (tables_) return frobinv_t_[a];
    u64 e = 1;
    for (int i = 0; i + 1 < k; ++i) e *= static_cast<u64>(p);
    return pow(a, e);
  }
  u32 from_int(i64 c) const {
    i64 r = c % p;
    if (r < 0) r += p;
    return static_cast<u32>(r);
  }
  // Class of the defining variable.  For k = 1 this is the residue -modulus[0].
  u32 generator() const {
    if (k >= 2) return static_cast<u32>(p);
    return neg(modulus[0]);
  }

  static constexpr int kMaxK = 16;
  void unpack(u32 a, u32* digits) const {
    for (int i = 0; i < k; ++i) { digits[i] = a % static_cast<u32>(p); a /= static_cast<u32>(p); }
  }
  u32 pack(const u32* digits) const {
    u32 a = 0;
    for (int i = k - 1; i >= 0; --i) a = a * static_cast<u32>(p) + digits[i];
    return a;
  }
  std::vector<u32> coeffs_of(u32 a) const {
    std::vector<u32> out(static_cast<size_t>(k));
    unpack(a, out.data());
    return out;
  }
  u32 element_from_coeffs(const std::vector<u32>& c) const {
    check_precondition(c.size() == static_cast<size_t>(k), "coefficient tuple has wrong length");
    for (u32 x : c) check_precondition(x < static_cast<u32>(p), "coefficient out of range [0,p)");
    return pack(c.data());
  }

  bool has_tables() const { return tables_; }
  // Raw tables for tight search loops; valid only when has_tables().
  const u32* raw_add() const { return add_t_.data(); }
  const u32* raw_mul() const { return mul_t_.data(); }
  const u32* raw_neg() const { return neg_t_.data(); }
  const u32* raw_inv() const { return inv_t_.data(); }
  const u32* raw_frob_inv() const { return frobinv_t_.data(); }

 private:
  FieldSpec(int p_, int k_, std::vector<u32> modulus_)
      : p(p_), k(k_), q(compute_q(p_, k_)), modulus(std::move(modulus_)), tables_(false) {
    check_precondition(p >= 2 && is_prime_u32(static_cast<u32>(p)), "p must be prime");
    check_precondition(k >= 1 && k <= kMaxK, "extension degree out of supported range");
    check_precondition(modulus.size() == static_cast<size_t>(k) + 1 && modulus.back() == 1,
                       "modulus must be monic of degree k");
    for (u32 c : modulus) check_precondition(c < static_cast<u32>(p), "modulus coefficient out of range");
    check_precondition(detail::fp_is_irreducible(modulus, static_cast<u32>(p)),
                       "modulus is reducible over F_" + std::to_string(p));
    // x^{k+i} mod modulus for i in [0, k-1), as coefficient rows.
    std::vector<u32> cur(modulus.begin(), modulus.end() - 1);  // x^k mod M = -tail
    for (auto& c : cur) c = c ? static_cast<u32>(p) - c : 0;
    red_rows_.push_back(cur);
    for (int i = 1; i + 1 < k; ++i) {
      std::vector<u32> nxt(static_cast<size_t>(k), 0);
      for (int j = 0; j + 1 < k; ++j) nxt[static_cast<size_t>(j) + 1] = cur[static_cast<size_t>(j)];
      u32 top = cur[static_cast<size_t>(k) - 1];
      if (top)
        for (int j = 0; j < k; ++j)
          nxt[static_cast<size_t>(j)] =
              (nxt[static_cast<size_t>(j)] + top * red_rows_[0][static_cast<size_t>(j)]) % static_cast<u32>(p);
      red_rows_.push_back(nxt);
      cur = nxt;
    }
    if (q <= kTableLimit) build_tables();
  }

  static u64 compute_q(int p, int k) {
    u64 q = 1;
    for (int i = 0; i < k; ++i) {
      q *= static_cast<u64>(p);
      check_precondition(q <= (1ull << 31), "field too large (q must fit in 31 bits)");
    }
    return q;
  }

  u32 add_slow(u32 a, u32 b) const {
    u32 da[kMaxK], db[kMaxK];
    unpack(a, da);
    unpack(b, db);
    for (int i = 0; i < k; ++i) da[i] = (da[i] + db[i]) % static_cast<u32>(p);
    return pack(da);
  }

  u32 mul_slow(u32 a, u32 b) const {
    u32 da[kMaxK], db[kMaxK];
    unpack(a, da);
    unpack(b, db);
    u64 conv[2 * kMaxK - 1] = {0};
    for (int i = 0; i < k; ++i) {
      if (!da[i]) continue;
      for (int j = 0; j < k; ++j) conv[i + j] += static_cast<u64>(da[i]) * db[j];
    }
    for (int e = 2 * k - 2; e >= k; --e) {
      u64 c = conv[e] % static_cast<u64>(p);
      if (!c) continue;
      const auto& row = red_rows_[static_cast<size_t>(e - k)];
      for (int j = 0; j < k; ++j) conv[j] += c * row[static_cast<size_t>(j)];
    }
    u32 out[kMaxK];
    for (int i = 0; i < k; ++i) out[i] = static_cast<u32>(conv[i] % static_cast<u64>(p));
    return pack(out);
  }

  static constexpr u64 kTableLimit = 1024;
  void build_tables() {
    const size_t n = static_cast<size_t>(q);
    add_t_.resize(n * n);
    mul_t_.resize(n * n);
    neg_t_.resize(n);
    inv_t_.assign(n, 0);
    frob_t_.resize(n);
    frobinv_t_.resize(n);
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = 0; b < n; ++b) {
        add_t_[a * n + b] = add_slow(static_cast<u32>(a), static_cast<u32>(b));
        mul_t_[a * n + b] = mul_slow(static_cast<u32>(a), static_cast<u32>(b));
      }
    }
    tables_ = true;  // enable table paths for the derived tables below
    for (size_t a = 0; a < n; ++a) {
      neg_t_[a] = [&] {
        u32 da[kMaxK];
        unpack(static_cast<u32>(a), da);
        for (int i = 0; i < k; ++i) da[i] = da[i] ? static_cast<u32>(p) - da[i] : 0;
        return pack(da);
      }();
    }
    for (size_t a = 1; a < n; ++a) inv_t_[a] = pow(static_cast<u32>(a), q - 2);
    u64 e_inv = 1;
    for (int i = 0; i + 1 < k; ++i) e_inv *= static_cast<u64>(p);
    for (size_t a = 0; a < n; ++a) {
      frob_t_[a] = pow(static_cast<u32>(a), static_cast<u64>(p));
      frobinv_t_[a] = pow(static_cast<u32>(a), e_inv);
    }
  }

  bool tables_;
  std::vector<u32> add_t_, mul_t_, neg_t_, inv_t_, frob_t_, frobinv_t_;
  std::vector<std::vector<u32>> red_rows_;
};

inline const FieldSpec* FieldSpec::with_modulus(int p, int k, const std::vector<u32>& modulus) {
  using Key = std::tuple<int, int, std::vector<u32>>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<FieldSpec>>* registry =
      new std::map<Key, std::unique_ptr<FieldSpec>>();
  std::lock_guard<std::mutex> lock(mu);
  Key key{p, k, modulus};
  auto it = registry->find(key);
  if (it == registry->end())
    it = registry->emplace(key, std::unique_ptr<FieldSpec>(new FieldSpec(p, k, modulus))).first;
  return it->second.get();
}

inline const FieldSpec* FieldSpec::get(int p, int k) {
  check_precondition(p >= 2 && is_prime_u32(static_cast<u32>(p)), "p must be prime");
  check_precondition(k >= 1 && k <= kMaxK, "extension degree out of supported range");
  return with_modulus(p, k, detail::fp_default_modulus(static_cast<u32>(p), k));
}

class FieldElement {
 public:
  FieldElement() : F_(nullptr), v_(0) {}
  FieldElement(const FieldSpec* F, u32 packed) : F_(F), v_(packed) {
    check_precondition(F != nullptr && packed < F->q, "packed field element out of range");
  }
  static FieldElement from_int(const FieldSpec* F, i64 c) { return FieldElement(F, F->from_int(c)); }

  const FieldSpec* field() const { return F_; }
  u32 packed() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool in_prime_field() const { return v_ < static_cast<u32>(F_->p); }
  std::vector<u32> coeffs() const { return F_->coeffs_of(v_); }

  FieldElement operator+(const FieldElement& o) const { return FieldElement(join(o), F_->add(v_, o.v_)); }
  FieldElement operator-(const FieldElement& o) const { return FieldElement(join(o), F_->sub(v_, o.v_)); }
  FieldElement operator*(const FieldElement& o) const { return FieldElement(join(o), F_->mul(v_, o.v_)); }
  FieldElement operator/(const FieldElement& o) const { return FieldElement(join(o), F_->div(v_, o.v_)); }
  FieldElement operator-() const { return FieldElement(F_, F_->neg(v_)); }
  bool operator==(const FieldElement& o) const { return F_->same(*o.F_) && v_ == o.v_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inverse() const { return FieldElement(F_, F_->inv(v_)); }
  FieldElement pow(u64 e) const { return FieldElement(F_, F_->pow(v_, e)); }
  FieldElement frobenius() const { return FieldElement(F_, F_->frobenius(v_)); }
  FieldElement frobenius_inverse() const { return FieldElement(F_, F_->frobenius_inverse(v_)); }

 private:
  const FieldSpec* join(const FieldElement& o) const {
    check_precondition(F_ != nullptr && o.F_ != nullptr && F_->same(*o.F_),
                       "field elements from different FieldSpecs");
    return F_;
  }
  const FieldSpec* F_;
  u32 v_;
};

// Image of src's power-basis generator inside dst, found by deterministic scan
// (first root of src.modulus in packed order).  Cached per spec pair.
inline u32 embedding_root(const FieldSpec* src, const FieldSpec* dst) {
  check_precondition(src->p == dst->p, "embedding requires equal characteristic");
  check_precondition(dst->k % src->k == 0,
                     "no embedding: " + src->label() + " into " + dst->label());
  static std::mutex mu;
  static std::map<std::pair<const FieldSpec*, const FieldSpec*>, u32>* cache =
      new std::map<std::pair<const FieldSpec*, const FieldSpec*>, u32>();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache->find({src, dst});
    if (it != cache->end()) return it->second;
  }
  check_precondition(dst->q <= (1ull << 22), "target field too large to scan for an embedding root");
  u32 root = 0;
  bool found = false;
  for (u64 cand = 0; cand < dst->q && !found; ++cand) {
    u32 acc = 0;
    for (int i = src->k; i >= 0; --i)
      acc = dst->add(dst->mul(acc, static_cast<u32>(cand)), src->modulus[static_cast<size_t>(i)]);
    if (acc == 0) { root = static_cast<u32>(cand); found = true; }
  }
  check_internal(found, "modulus has no root in the extension (impossible for k | k')");
  std::lock_guard<std::mutex> lock(mu);
  cache->emplace(std::make_pair(src, dst), root);
  return root;
}

inline FieldElement embed(const FieldElement& a, const FieldSpec* dst) {
  const FieldSpec* src = a.field();
  if (src->same(*dst)) return FieldElement(dst, a.packed());
  u32 r = embedding_root(src, dst);
  auto digits = a.coeffs();
  u32 acc = 0;
  for (int i = src->k - 1; i >= 0; --i)
    acc = dst->add(dst->mul(acc, r), digits[static_cast<size_t>(i)]);
  return FieldElement(dst, acc);
}

}  // namespace logforms
