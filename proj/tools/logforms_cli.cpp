#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logforms/bivariate.hpp"
#include "logforms/serialization.hpp"

using namespace logforms;

namespace {

// One JSON record per line; the first record echoes the mathematical
// parameters so a run can be reproduced without the original command line.
// Execution knobs (--jobs, --out, checkpoints) never appear in the output.
struct Emitter {
  std::ostream* out = &std::cout;
  std::ofstream file;

  void open(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    check_precondition(file.good(), "cannot open output file " + path);
    out = &file;
  }
  void record(const json& j) { *out << j.dump() << "\n"; }
};

json read_json_input(const std::string& path) {
  std::string text;
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    check_precondition(in.good(), "cannot open input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json j = json::parse(text, nullptr, false);
  check_precondition(!j.is_discarded(), "input is not valid JSON");
  return j;
}

json combination_json(const CombinationReport& c) {
  json out{{"coeffs", c.coeffs}, {"poles", c.poles}, {"ok", c.ok}};
  if (!c.failure.empty()) out["failure"] = c.failure;
  return out;
}

json diagnostics_json(const SpaceDiagnostics& d) {
  json combos = json::array();
  for (const auto& c : d.combinations) combos.push_back(combination_json(c));
  json out{{"valid", d.valid},
           {"total_poles", d.total_poles},
           {"common_poles", d.common_poles},
           {"numerator_leads", d.numerator_leads},
           {"combinations", std::move(combos)}};
  if (!d.valid) out["failure"] = d.failure;
  return out;
}

// Mirrors the candidate estimate used by the theorem sweep so the same
// long-run gate protects direct searches.
u64 estimate_space2_candidates(const FieldSpec* F, int m) {
  const int lam = (m + 1) / F->p;
  u64 leads = static_cast<u64>(detail::rref_lead_pairs(F).size());
  const int pinned_free = 2 * lam - ((lam % F->p != 0) ? 1 : 0);
  u64 inner = 1;
  for (int i = 0; i < pinned_free; ++i) {
    if (inner > (u64{1} << 40) / F->q) return ~u64{0};
    inner *= F->q;
  }
  return leads * inner;
}

SearchOptions search_options_from(int jobs, bool find_one, const std::string& checkpoint,
                                  u64* resumed_from) {
  SearchOptions opt;
  opt.jobs = jobs;
  opt.find_one = find_one;
  if (!checkpoint.empty()) {
    std::ifstream in(checkpoint);
    u64 last = 0;
    if (in.good() && (in >> last)) {
      opt.first_shard = last + 1;
      if (resumed_from) *resumed_from = opt.first_shard;
    }
    std::string path = checkpoint;
    opt.on_shard_complete = [path](u64 shard) {
      std::ofstream out(path, std::ios::trunc);
      out << shard << "\n";
    };
  }
  return opt;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  ~Timer() {
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "[time] %.3fs\n", s);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logarithmic differential forms on P^1: spaces, searches, and lifts"};
  app.require_subcommand(1);
  app.fallthrough();  // --out may trail a subcommand

  std::string out_path;
  app.add_option("--out", out_path, "output file (default stdout)")->capture_default_str();

  // ---- verify-space ----------------------------------------------------
  auto* vs = app.add_subcommand("verify-space", "validate a serialized space record");
  std::string vs_in;
  vs->add_option("--in", vs_in, "space record (JSON file, - for stdin)");
  vs->callback([&] {
    Timer t;
    json input = read_json_input(vs_in);
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "verify-space"}, {"params", json{{"input", input}}}});
    SpaceDiagnostics diag = validate_space(space_from_json(input));
    em.record(diagnostics_json(diag));
  });

  // ---- construct -------------------------------------------------------
  auto* con = app.add_subcommand("construct", "build a space from certificates");
  con->require_subcommand(1);

  auto* cp2 = con->add_subcommand("p2", "characteristic-2 pair of slope certificates");
  int cp2_p = 2, cp2_k = 1, cp2_n = 0;
  std::vector<u32> cp2_x;
  u32 cp2_u = 0, cp2_v = 0;
  bool cp2_ext = false;
  cp2->add_option("--p", cp2_p, "characteristic (must be 2)");
  cp2->add_option("--k", cp2_k, "field degree")->required();
  cp2->add_option("--n", cp2_n, "number of base points (checked against --x)");
  cp2->add_option("--x", cp2_x, "base points, packed")->required()->delimiter(',');
  cp2->add_option("--u", cp2_u, "first slope, packed")->required();
  cp2->add_option("--v", cp2_v, "second slope, packed")->required();
  cp2->add_flag("--allow-extension", cp2_ext, "move to the splitting field if needed");
  cp2->callback([&] {
    Timer t;
    check_precondition(cp2_p == 2, "construction requires characteristic 2");
    check_precondition(cp2_n == 0 || cp2_n == static_cast<int>(cp2_x.size()),
                       "--n disagrees with the number of base points");
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "construct p2"},
                   {"params", json{{"p", cp2_p},
                                   {"k", cp2_k},
                                   {"x", cp2_x},
                                   {"u", cp2_u},
                                   {"v", cp2_v},
                                   {"allow_extension", cp2_ext}}}});
    LogFormSpace S = construct_p2(FieldSpec::get(2, cp2_k), cp2_x, cp2_u, cp2_v, cp2_ext);
    em.record(to_json(S));
  });

  auto* cma = con->add_subcommand("matignon", "independent-tuple construction");
  int cma_p = 0, cma_k = 1;
  std::vector<u32> cma_a;
  cma->add_option("--p", cma_p, "characteristic")->required();
  cma->add_option("--k", cma_k, "field degree")->required();
  cma->add_option("--a", cma_a, "F_p-independent tuple, packed")->required()->delimiter(',');
  cma->callback([&] {
    Timer t;
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "construct matignon"},
                   {"params", json{{"p", cma_p}, {"k", cma_k}, {"a", cma_a}}}});
    LogFormSpace S = matignon_space(FieldSpec::get(cma_p, cma_k), cma_a);
    em.record(to_json(S));
  });

  // ---- pullback ----------------------------------------------------------
  auto* pb = app.add_subcommand("pullback", "pull a space back along t -> alpha t + P(t^p)");
  std::string pb_in;
  u32 pb_alpha = 0;
  std::vector<u32> pb_P;
  pb->add_option("--in", pb_in, "space record (JSON file, - for stdin)");
  pb->add_option("--alpha", pb_alpha, "linear coefficient, packed")->required();
  pb->add_option("--P", pb_P, "coefficients of P (in s = t^p), packed")->delimiter(',');
  pb->callback([&] {
    Timer t;
    json input = read_json_input(pb_in);
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "pullback"},
                   {"params", json{{"alpha", pb_alpha}, {"P", pb_P}, {"input", input}}}});
    LogFormSpace S = space_from_json(input);
    LogFormSpace out = pullback_etale(S, pb_alpha, Polynomial(S.F, pb_P));
    em.record(to_json(out));
  });

  // ---- hurwitz -----------------------------------------------------------
  auto* hw = app.add_subcommand("hurwitz", "residue-class data: search, extract, substitute");
  hw->require_subcommand(1);

  auto* hws = hw->add_subcommand("search", "find pole tuples realizing a datum");
  int hws_p = 0, hws_k = 1, hws_jobs = 1;
  std::vector<int> hws_classes;
  bool hws_find_one = false, hws_verify_none = false;
  std::string hws_checkpoint;
  hws->add_option("--p", hws_p, "characteristic")->required();
  hws->add_option("--k", hws_k, "field degree")->required();
  hws->add_option("--classes", hws_classes, "residue classes in [1, p)")
      ->required()
      ->delimiter(',');
  hws->add_flag("--find-one", hws_find_one, "stop at the first witness");
  hws->add_flag("--verify-none", hws_verify_none, "full scan (default; excludes --find-one)");
  hws->add_option("--jobs", hws_jobs, "worker threads for sharded scans");
  hws->add_option("--checkpoint", hws_checkpoint, "shard checkpoint file for resumable runs");
  hws->callback([&] {
    Timer t;
    check_precondition(!(hws_find_one && hws_verify_none),
                       "--find-one and --verify-none are mutually exclusive");
    u64 resumed = 0;
    SearchOptions opt = search_options_from(hws_jobs, hws_find_one, hws_checkpoint, &resumed);
    Emitter em;
    em.open(out_path);
    json params{{"p", hws_p}, {"k", hws_k}, {"classes", hws_classes},
                {"find_one", hws_find_one}};
    if (resumed) params["first_shard"] = resumed;
    em.record(json{{"command", "hurwitz search"}, {"params", std::move(params)}});
    SearchResult r = hurwitz_search(hws_p, hws_k, HurwitzDatum{hws_p, hws_classes}, opt);
    em.record(to_json(r));
  });

  auto* hwf = hw->add_subcommand("from-form", "read the residue datum off a form");
  std::string hwf_in;
  int hwf_p = 0, hwf_k = 1;
  hwf->add_option("--in", hwf_in, "form record (JSON file, - for stdin)");
  hwf->add_option("--p", hwf_p, "characteristic")->required();
  hwf->add_option("--k", hwf_k, "field degree")->required();
  hwf->callback([&] {
    Timer t;
    json input = read_json_input(hwf_in);
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "hurwitz from-form"},
                   {"params", json{{"p", hwf_p}, {"k", hwf_k}, {"input", input}}}});
    DifferentialForm w = form_from_json(input, FieldSpec::get(hwf_p, hwf_k));
    em.record(to_json(hurwitz_from_form(w)));
  });

  auto* hwu = hw->add_subcommand("substitute", "push a datum through t -> Q(t)");
  int hwu_p = 0, hwu_k = 1;
  std::vector<u32> hwu_xs, hwu_Q;
  std::vector<int> hwu_hs;
  hwu->add_option("--p", hwu_p, "characteristic")->required();
  hwu->add_option("--k", hwu_k, "field degree")->required();
  hwu->add_option("--xs", hwu_xs, "branch points, packed")->required()->delimiter(',');
  hwu->add_option("--hs", hwu_hs, "classes at the branch points")->required()->delimiter(',');
  hwu->add_option("--Q", hwu_Q, "substitution coefficients, packed, low degree first")
      ->required()
      ->delimiter(',');
  hwu->callback([&] {
    Timer t;
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "hurwitz substitute"},
                   {"params",
                    json{{"p", hwu_p}, {"k", hwu_k}, {"xs", hwu_xs}, {"hs", hwu_hs},
                         {"Q", hwu_Q}}}});
    const FieldSpec* F = FieldSpec::get(hwu_p, hwu_k);
    auto [w, d] = hurwitz_substitution(hwu_xs, hwu_hs, Polynomial(F, hwu_Q));
    em.record(json{{"form", to_json(w)}, {"datum", to_json(d)}});
  });

  // ---- search space2 -------------------------------------------------------
  auto* se = app.add_subcommand("search", "exhaustive space searches");
  se->require_subcommand(1);
  auto* se2 = se->add_subcommand("space2", "two-dimensional spaces with m+1 poles");
  int se2_p = 0, se2_k = 1, se2_m1 = 0, se2_jobs = 1;
  bool se2_find_one = false, se2_verify_none = false, se2_long = false;
  std::string se2_checkpoint;
  se2->add_option("--p", se2_p, "characteristic")->required();
  se2->add_option("--k", se2_k, "field degree")->required();
  se2->add_option("--m-plus-1", se2_m1, "pole count of every nonzero combination")->required();
  se2->add_flag("--find-one", se2_find_one, "stop at the first witness");
  se2->add_flag("--verify-none", se2_verify_none, "full scan (default; excludes --find-one)");
  se2->add_flag("--long-run", se2_long, "run candidate ranges beyond the desk-scale gate");
  se2->add_option("--jobs", se2_jobs, "worker threads for sharded scans");
  se2->add_option("--checkpoint", se2_checkpoint, "shard checkpoint file for resumable runs");
  se2->callback([&] {
    Timer t;
    check_precondition(!(se2_find_one && se2_verify_none),
                       "--find-one and --verify-none are mutually exclusive");
    const FieldSpec* F = FieldSpec::get(se2_p, se2_k);
    check_precondition(se2_m1 >= 2 && se2_m1 % se2_p == 0,
                       "m+1 must be a positive multiple of p for a two-dimensional space");
    u64 estimate = estimate_space2_candidates(F, se2_m1 - 1);
    check_precondition(se2_long || estimate <= kLongRunCandidateThreshold,
                       "candidate range " + std::to_string(estimate) +
                           " exceeds the desk-scale gate; pass --long-run");
    u64 resumed = 0;
    SearchOptions opt = search_options_from(se2_jobs, se2_find_one, se2_checkpoint, &resumed);
    Emitter em;
    em.open(out_path);
    json params{{"p", se2_p}, {"k", se2_k}, {"m_plus_1", se2_m1}, {"find_one", se2_find_one}};
    if (resumed) params["first_shard"] = resumed;
    em.record(json{{"command", "search space2"}, {"params", std::move(params)}});
    SearchResult r = space_search_dim2(se2_p, se2_k, se2_m1 - 1, opt);
    em.record(to_json(r));
  });

  // ---- verify theorem29 ----------------------------------------------------
  auto* ve = app.add_subcommand("verify", "desk verifications of the classification");
  ve->require_subcommand(1);
  auto* ve29 = ve->add_subcommand("theorem29", "m+1 in {p, 2p, 3p} over k = 1..kmax");
  int ve29_p = 0, ve29_kmax = 1, ve29_jobs = 1;
  bool ve29_long = false;
  ve29->add_option("--p", ve29_p, "characteristic")->required();
  ve29->add_option("--kmax", ve29_kmax, "largest field degree to sweep")->required();
  ve29->add_flag("--long-run", ve29_long, "run candidate ranges beyond the desk-scale gate");
  ve29->add_option("--jobs", ve29_jobs, "worker threads for sharded scans");
  ve29->callback([&] {
    Timer t;
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "verify theorem29"},
                   {"params",
                    json{{"p", ve29_p}, {"kmax", ve29_kmax}, {"long_run", ve29_long}}}});
    SearchOptions base;
    base.jobs = ve29_jobs;
    em.record(to_json(theorem29_verify(ve29_p, ve29_kmax, ve29_long, base)));
  });

  // ---- check lemma210 -------------------------------------------------------
  auto* ch = app.add_subcommand("check", "polynomial identities");
  ch->require_subcommand(1);
  auto* ch210 = ch->add_subcommand("lemma210", "X^{p-1} coefficient identity in F_p[a]");
  int ch_p = 0, ch_n = 0;
  ch210->add_option("--p", ch_p, "characteristic")->required();
  ch210->add_option("--n", ch_n, "divisor of p - 1")->required();
  ch210->callback([&] {
    Timer t;
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "check lemma210"},
                   {"params", json{{"p", ch_p}, {"n", ch_n}}}});
    Lemma210Report rep = lemma210_verify(ch_p, ch_n);
    em.record(json{{"equal", rep.equal},
                   {"exponent", rep.exponent},
                   {"q", rep.q},
                   {"extracted", to_json(rep.extracted)},
                   {"closed_form", to_json(rep.closed_form)}});
  });

  // ---- lift -----------------------------------------------------------------
  auto* li = app.add_subcommand("lift", "Witt-vector lifting constructions");
  li->require_subcommand(1);

  auto* lp2 = li->add_subcommand("p2", "extend and correct characteristic-2 lifts");
  int lp2_k = 1, lp2_N = 6;
  std::vector<u32> lp2_x, lp2_dx;
  u32 lp2_u = 0;
  lp2->add_option("--k", lp2_k, "residue field degree")->required();
  lp2->add_option("--N", lp2_N, "Witt precision (digits mod 2^N)");
  lp2->add_option("--x", lp2_x, "residues of the given lifts, packed")
      ->required()
      ->delimiter(',');
  lp2->add_option("--dx", lp2_dx,
                  "perturbations: lift i is teich(x_i) + 2 teich(dx_i) (default 0)")
      ->delimiter(',');
  lp2->add_option("--u", lp2_u, "slope residue, packed")->required();
  lp2->callback([&] {
    Timer t;
    check_precondition(lp2_dx.empty() || lp2_dx.size() == lp2_x.size(),
                       "--dx must match --x in length");
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "lift p2"},
                   {"params",
                    json{{"p", 2}, {"k", lp2_k}, {"N", lp2_N}, {"x", lp2_x}, {"dx", lp2_dx},
                         {"u", lp2_u}}}});
    const FieldSpec* K = FieldSpec::get(2, lp2_k);
    const WittRing* W = WittRing::get(2, lp2_k, lp2_N);
    std::vector<WittElement> X;
    for (size_t i = 0; i < lp2_x.size(); ++i) {
      WittElement e = teichmuller(W, FieldElement(K, lp2_x[i]));
      if (i < lp2_dx.size() && lp2_dx[i] != 0)
        e = e + WittElement::from_int(W, 2) * teichmuller(W, FieldElement(K, lp2_dx[i]));
      X.push_back(std::move(e));
    }
    LiftP2Report rep = lift_p2(X, teichmuller(W, FieldElement(K, lp2_u)));
    json out = to_json(rep);
    out["reduction_check"] = reduction_check_p2(rep.F, rep.n);
    out["uncorrected_check"] = reduction_check_p2(rep.Ftilde, rep.n);
    em.record(std::move(out));
  });

  auto* lsh = li->add_subcommand("shape", "decompose the canonical lift of a datum");
  int lsh_p = 0, lsh_k = 1, lsh_N = 5;
  std::vector<u32> lsh_poles;
  std::vector<int> lsh_classes;
  lsh->add_option("--p", lsh_p, "characteristic")->required();
  lsh->add_option("--k", lsh_k, "field degree")->required();
  lsh->add_option("--N", lsh_N, "Witt precision");
  lsh->add_option("--poles", lsh_poles, "pole locations, packed")->required()->delimiter(',');
  lsh->add_option("--classes", lsh_classes, "residue classes at the poles")
      ->required()
      ->delimiter(',');
  lsh->callback([&] {
    Timer t;
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "lift shape"},
                   {"params",
                    json{{"p", lsh_p}, {"k", lsh_k}, {"N", lsh_N}, {"poles", lsh_poles},
                         {"classes", lsh_classes}}}});
    RefinedShapeReport rep =
        refined_lift_shape(FieldSpec::get(lsh_p, lsh_k), lsh_poles, lsh_classes, lsh_N);
    em.record(to_json(rep));
  });

  // ---- cartier ------------------------------------------------------------
  auto* ca = app.add_subcommand("cartier", "apply the Cartier operator to a form");
  std::string ca_in;
  int ca_p = 0, ca_k = 1;
  ca->add_option("--in", ca_in, "form record (JSON file, - for stdin)");
  ca->add_option("--p", ca_p, "characteristic")->required();
  ca->add_option("--k", ca_k, "field degree")->required();
  ca->callback([&] {
    Timer t;
    json input = read_json_input(ca_in);
    Emitter em;
    em.open(out_path);
    em.record(json{{"command", "cartier"},
                   {"params", json{{"p", ca_p}, {"k", ca_k}, {"input", input}}}});
    DifferentialForm w = form_from_json(input, FieldSpec::get(ca_p, ca_k));
    DifferentialForm cw = cartier(w);
    em.record(json{{"cartier", to_json(cw)},
                   {"fixed", cw.numerator() == w.numerator() &&
                                 cw.denominator() == w.denominator()},
                   {"logarithmic", is_logarithmic(w)}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (const auto* nf = dynamic_cast<const NeedsLargerField*>(&e); nf && nf->suggested_factor)
      std::cerr << "hint: retry over an extension of degree " << nf->suggested_factor << "\n";
    return 1;
  } catch (const InternalCheckError& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
