#pragma once

#include <chrono>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "logforms/constructions.hpp"

namespace logforms {

enum class SearchVerdict { found, exhausted_none };

struct SearchResult {
  SearchVerdict verdict = SearchVerdict::exhausted_none;
  std::vector<std::vector<u32>> tuple_witnesses;                  // hurwitz mode
  std::vector<std::pair<Polynomial, Polynomial>> pair_witnesses;  // space mode
  u64 enumerated = 0;   // size of the coefficient range scanned
  u64 candidates = 0;   // entries that reached the solver
  u64 pruned = 0;       // rejected by the cheap congruence
  u64 near_misses = 0;  // differential condition held, revalidation failed
  double elapsed_seconds = 0;
};

struct SearchOptions {
  bool find_one = false;         // stop at the minimal-index witness
  bool normalize = true;         // lead RREF quotient + translation pin
  bool congruence_prune = true;  // (f')^{p-1} = 1 mod f before the full check
  int jobs = 1;
  u64 shard_size = u64{1} << 16;
  u64 first_shard = 0;                         // resume point
  std::function<void(u64)> on_shard_complete;  // checkpoint hook, called in order
};

inline constexpr u64 kLongRunCandidateThreshold = 2'000'000;

namespace detail {

inline void merge_results(SearchResult& into, SearchResult& from) {
  for (auto& w : from.tuple_witnesses) into.tuple_witnesses.push_back(std::move(w));
  for (auto& w : from.pair_witnesses) into.pair_witnesses.push_back(std::move(w));
  into.candidates += from.candidates;
  into.pruned += from.pruned;
  into.near_misses += from.near_misses;
}

// Scans [0, total) in fixed-size shards.  Shards are merged in index order, so
// results are independent of the job count; in find-one mode scanning stops
// after the wave containing the first witness and the counters reflect only
// the work actually done.
template <typename TestFn>
inline void run_sharded(u64 total, const SearchOptions& opt, SearchResult& out, TestFn&& test_one) {
  auto t0 = std::chrono::steady_clock::now();
  out.enumerated = total;
  const u64 shard = opt.shard_size ? opt.shard_size : 1;
  const u64 nshards = total ? (total + shard - 1) / shard : 0;
  const int jobs = opt.jobs > 1 ? opt.jobs : 1;

  struct Outcome {
    SearchResult partial;
    bool found = false;
    std::exception_ptr error;
  };
  bool stop = false;
  for (u64 wave = opt.first_shard; wave < nshards && !stop; wave += static_cast<u64>(jobs)) {
    const u64 wave_end = std::min(nshards, wave + static_cast<u64>(jobs));
    std::vector<Outcome> outcomes(static_cast<size_t>(wave_end - wave));
    auto run_shard = [&](u64 s, Outcome& o) {
      try {
        const u64 lo = s * shard, hi = std::min(total, lo + shard);
        for (u64 idx = lo; idx < hi; ++idx) {
          if (test_one(idx, o.partial)) {
            o.found = true;
            if (opt.find_one) return;
          }
        }
      } catch (...) {
        o.error = std::current_exception();
      }
    };
    if (wave_end - wave == 1) {
      run_shard(wave, outcomes[0]);
    } else {
      std::vector<std::thread> pool;
      for (u64 s = wave; s < wave_end; ++s)
        pool.emplace_back(run_shard, s, std::ref(outcomes[static_cast<size_t>(s - wave)]));
      for (auto& t : pool) t.join();
    }
    for (u64 s = wave; s < wave_end; ++s) {
      Outcome& o = outcomes[static_cast<size_t>(s - wave)];
      if (o.error) std::rethrow_exception(o.error);
      merge_results(out, o.partial);
      if (opt.on_shard_complete) opt.on_shard_complete(s);
      if (o.found && opt.find_one) { stop = true; break; }
    }
  }
  if (opt.find_one && out.tuple_witnesses.size() > 1) out.tuple_witnesses.resize(1);
  if (opt.find_one && out.pair_witnesses.size() > 1) out.pair_witnesses.resize(1);
  out.verdict = (out.tuple_witnesses.empty() && out.pair_witnesses.empty())
                    ? SearchVerdict::exhausted_none
                    : SearchVerdict::found;
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Reduced echelon bases of the 2-dimensional F_p-subspaces of F_q, as packed
// pairs; digit index = column, pivots ascending.  Deterministic order.
inline std::vector<std::pair<u32, u32>> rref_lead_pairs(const FieldSpec* F) {
  const int p = F->p, k = F->k;
  std::vector<std::pair<u32, u32>> out;
  std::vector<u32> r1(static_cast<size_t>(k)), r2(static_cast<size_t>(k));
  for (int c1 = 0; c1 < k; ++c1)
    for (int c2 = c1 + 1; c2 < k; ++c2) {
      std::vector<int> free_slots;  // (row, column) encoded as row*k + column
      for (int j = c1 + 1; j < k; ++j)
        if (j != c2) free_slots.push_back(j);
      int row1_free = static_cast<int>(free_slots.size());
      for (int j = c2 + 1; j < k; ++j) free_slots.push_back(k + j);
      u64 combos = ipow(static_cast<u64>(p), static_cast<int>(free_slots.size()));
      for (u64 it = 0; it < combos; ++it) {
        std::fill(r1.begin(), r1.end(), 0);
        std::fill(r2.begin(), r2.end(), 0);
        r1[static_cast<size_t>(c1)] = 1;
        r2[static_cast<size_t>(c2)] = 1;
        u64 t = it;
        for (size_t fi = 0; fi < free_slots.size(); ++fi) {
          u32 digit = static_cast<u32>(t % p);
          t /= p;
          int slot = free_slots[fi];
          if (static_cast<int>(fi) < row1_free)
            r1[static_cast<size_t>(slot)] = digit;
          else
            r2[static_cast<size_t>(slot - k)] = digit;
        }
        out.emplace_back(F->pack(r1.data()), F->pack(r2.data()));
      }
    }
  return out;
}

// All ordered F_p-independent nonzero pairs; used by the unnormalized
// cross-check mode.
inline std::vector<std::pair<u32, u32>> independent_lead_pairs(const FieldSpec* F) {
  std::vector<std::pair<u32, u32>> out;
  for (u32 u = 1; u < F->q; ++u)
    for (u32 v = 1; v < F->q; ++v) {
      u32 ratio = F->div(v, u);
      if (ratio >= static_cast<u32>(F->p)) out.emplace_back(u, v);
    }
  return out;
}

}  // namespace detail

// Exhausts tuples (x_0=0, x_1=1, x_2..x_m) over F_{p^k} against the power-sum
// system sum_i h_i x_i^l = 0 for 1 <= l <= m-1.  The two pins are justified by
// the system's invariance under z -> lam z + mu.
inline SearchResult hurwitz_search(int p, int k, const HurwitzDatum& datum,
                                   const SearchOptions& opt = {}) {
  validate_datum(datum);
  check_precondition(datum.p == p, "datum characteristic mismatch");
  const int m = static_cast<int>(datum.classes.size()) - 1;
  check_precondition(m >= 1, "datum needs at least two branch points");
  check_precondition(m % p != 0, "m must be prime to p");
  const FieldSpec* F = FieldSpec::get(p, k);
  const u64 q = F->q;

  SearchResult res;
  if (static_cast<u64>(m + 1) > q) {
    detail::run_sharded(0, opt, res, [](u64, SearchResult&) { return false; });
    return res;
  }

  std::vector<u32> hv;
  for (int h : datum.classes) hv.push_back(static_cast<u32>(h));

  u64 total = 1;
  for (int i = 0; i < m - 1; ++i) {
    check_precondition(total <= (u64{1} << 40) / q, "search range too large");
    total *= q;
  }

  auto test_one = [&](u64 idx, SearchResult& local) -> bool {
    std::vector<u32> xs(static_cast<size_t>(m + 1));
    xs[0] = 0;
    xs[1] = 1;
    u64 rem = idx;
    for (int i = 2; i <= m; ++i) {
      xs[static_cast<size_t>(i)] = static_cast<u32>(rem % q);
      rem /= q;
    }
    for (int i = 2; i <= m; ++i) {
      u32 xi = xs[static_cast<size_t>(i)];
      if (xi == 0 || xi == 1) return false;
      for (int j = 2; j < i; ++j)
        if (xs[static_cast<size_t>(j)] == xi) return false;
    }
    local.candidates++;

    std::vector<u32> pw(xs);
    for (int l = 1; l <= m - 1; ++l) {
      u32 s = 0;
      for (int i = 0; i <= m; ++i)
        s = F->add(s, F->mul(hv[static_cast<size_t>(i)], pw[static_cast<size_t>(i)]));
      if (s != 0) return false;
      if (l < m - 1)
        for (int i = 0; i <= m; ++i)
          pw[static_cast<size_t>(i)] = F->mul(pw[static_cast<size_t>(i)], xs[static_cast<size_t>(i)]);
    }

    // Independent route: the assembled form must vanish to order m-1 at
    // infinity, carry the datum as residues, and be Cartier-fixed.
    DifferentialForm w = DifferentialForm::zero(F);
    for (int i = 0; i <= m; ++i)
      w = w + DifferentialForm(Polynomial::constant(F, hv[static_cast<size_t>(i)]),
                               Polynomial(F, {F->neg(xs[static_cast<size_t>(i)]), 1}));
    check_internal(order_at_infinity(w) == m - 1, "witness form has the wrong order at infinity");
    check_internal(is_logarithmic(w), "witness form is not logarithmic");
    for (const PoleDatum& pd : poles_and_residues(w)) {
      int i = 0;
      while (xs[static_cast<size_t>(i)] != pd.location.packed()) ++i;
      check_internal(pd.residue.packed() == hv[static_cast<size_t>(i)],
                     "witness residue differs from its class");
    }
    local.tuple_witnesses.push_back(xs);
    return true;
  };
  detail::run_sharded(total, opt, res, test_one);
  return res;
}

// Enumerates (A, B) of exact degree lam = (m+1)/p over F_{p^k} and tests the
// differential condition; survivors are revalidated as spaces.  Leading pairs
// run over echelon bases of 2-dimensional F_p-subspaces (a GL_2(F_p) basis
// change moves any space's parameters to such a pair and preserves the
// condition), and when p does not divide lam a translation pins A's
// coefficient of z^{lam-1} to zero.
inline SearchResult space_search_dim2(int p, int k, int m, const SearchOptions& opt = {}) {
  check_precondition(m >= 1 && (m + 1) % p == 0, "m+1 must be divisible by p");
  const FieldSpec* F = FieldSpec::get(p, k);
  const u64 q = F->q;
  const int lam = (m + 1) / p;

  std::vector<std::pair<u32, u32>> leads =
      opt.normalize ? detail::rref_lead_pairs(F) : detail::independent_lead_pairs(F);
  const bool pin = opt.normalize && (lam % p != 0);
  const int free_a = lam - (pin ? 1 : 0);

  u64 inner = 1;
  for (int i = 0; i < free_a + lam; ++i) {
    check_precondition(inner <= (u64{1} << 40) / q, "search range too large");
    inner *= q;
  }
  u64 total = static_cast<u64>(leads.size()) * inner;

  auto test_one = [&](u64 idx, SearchResult& local) -> bool {
    const auto& [ulead, vlead] = leads[static_cast<size_t>(idx / inner)];
    u64 rem = idx % inner;
    std::vector<u32> ac(static_cast<size_t>(lam + 1), 0), bc(static_cast<size_t>(lam + 1), 0);
    ac[static_cast<size_t>(lam)] = ulead;
    bc[static_cast<size_t>(lam)] = vlead;
    for (int i = 0; i < free_a; ++i) {
      ac[static_cast<size_t>(i)] = static_cast<u32>(rem % q);
      rem /= q;
    }
    for (int i = 0; i < lam; ++i) {
      bc[static_cast<size_t>(i)] = static_cast<u32>(rem % q);
      rem /= q;
    }
    Polynomial A(F, std::move(ac)), B(F, std::move(bc));
    local.candidates++;

    Polynomial f = A.pow(static_cast<u64>(p)) - A * B.pow(static_cast<u64>(p - 1));
    if (opt.congruence_prune) {
      Polynomial fp = f.derivative();
      if (!(pow_mod(fp, static_cast<u64>(p - 1), f) == Polynomial::one(F))) {
        local.pruned++;
        return false;
      }
    }

    ABReport rep = forms_from_AB(A, B);
    if (!rep.condition_holds) return false;

    LogFormSpace S{F, m, 2, {rep.w1, rep.w2}};
    bool ok = false;
    try {
      ok = validate_space(S).valid;
    } catch (const NeedsLargerField&) {
      int j = splitting_degree(moore_product({A, B}), 128);
      check_internal(j >= 2 && F->k * j <= FieldSpec::kMaxK,
                     "witness revalidation needs an oversized field");
      const FieldSpec* G = FieldSpec::get(p, F->k * j);
      LogFormSpace SG{G, m, 2, {}};
      for (const DifferentialForm& w : S.basis)
        SG.basis.push_back(
            DifferentialForm(embed_poly(w.numerator(), G), embed_poly(w.denominator(), G)));
      ok = validate_space(SG).valid;
    }
    if (!ok) {
      local.near_misses++;
      return false;
    }
    local.pair_witnesses.emplace_back(A, B);
    return true;
  };
  SearchResult res;
  detail::run_sharded(total, opt, res, test_one);
  return res;
}

struct Theorem29Row {
  int m_plus_1 = 0;
  int k = 0;
  bool skipped = false;
  SearchVerdict verdict = SearchVerdict::exhausted_none;
  u64 candidates = 0;
  u64 witnesses = 0;
};

struct Theorem29Report {
  int p = 0;
  std::vector<Theorem29Row> rows;
  std::string warning;  // set for characteristics beyond desk scale
  std::string caveat;
};

// Runs the dimension-2 search for m+1 in {p, 2p, 3p} over k = 1..k_max.
// Candidate ranges above the long-run threshold are skipped unless long_run
// is set, so the default stays desk-scale.
inline Theorem29Report theorem29_verify(int p, int k_max, bool long_run = false,
                                        const SearchOptions& base = {}) {
  check_precondition(p >= 3 && is_prime_u32(static_cast<u32>(p)),
                     "verification covers odd characteristics only");
  check_precondition(k_max >= 1, "k_max must be positive");
  Theorem29Report rep;
  rep.p = p;
  if (p != 3 && p != 5)
    rep.warning = "characteristic beyond the desk-scale cases; expect large candidate ranges";
  rep.caveat = "exhausted_none certifies nonexistence only over the searched finite fields";

  for (int mult = 1; mult <= 3; ++mult) {
    const int m = mult * p - 1;
    const int lam = mult;
    for (int k = 1; k <= k_max; ++k) {
      const FieldSpec* F = FieldSpec::get(p, k);
      u64 leads = static_cast<u64>(detail::rref_lead_pairs(F).size());
      const int pinned_free = 2 * lam - ((lam % p != 0) ? 1 : 0);
      u64 inner = 1;
      bool overflow = false;
      for (int i = 0; i < pinned_free; ++i) {
        if (inner > (u64{1} << 40) / F->q) { overflow = true; break; }
        inner *= F->q;
      }
      u64 estimate = overflow ? ~u64{0} : leads * inner;

      Theorem29Row row;
      row.m_plus_1 = m + 1;
      row.k = k;
      if (estimate > kLongRunCandidateThreshold && !long_run) {
        row.skipped = true;
        row.candidates = estimate;
        rep.rows.push_back(row);
        continue;
      }
      SearchResult r = space_search_dim2(p, k, m, base);
      row.verdict = r.verdict;
      row.candidates = r.candidates;
      row.witnesses = r.pair_witnesses.size();
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace logforms
