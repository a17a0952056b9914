#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "logforms/log_space.hpp"
#include "logforms/witt_lift.hpp"

using namespace logforms;

namespace {

WittElement teich_of(const WittRing* W, u32 packed) {
  return teichmuller(W, FieldElement(W->F, packed));
}

// Re-extracts Q and U from the reduction of F and returns the halved bracket
// (F - Q^2 - U X^{2n-1}) / 2.  Good reduction needs its coefficients at
// degrees 1..n-1 to be even.
WittPoly halved_bracket(const WittPoly& F, int n) {
  const WittRing* W = F.ring();
  const FieldSpec* K = W->F;
  Polynomial f = F.reduce();
  std::vector<u32> qc;
  for (int j = 0; j <= n; ++j) qc.push_back(K->frobenius_inverse(f.coeff(2 * j)));
  Polynomial qhat(K, std::move(qc));
  u32 u = (f - qhat * qhat).coeff(2 * n - 1);
  REQUIRE(u != 0);
  return div_exact_p(F - teich_lift(W, qhat) * teich_lift(W, qhat) -
                     WittPoly::monomial(W, 2 * n - 1, teich_of(W, u)));
}

}  // namespace

TEST_CASE("witt polynomial arithmetic commutes with reduction") {
  const WittRing* W = WittRing::get(2, 2, 5);
  WittPoly a = WittPoly::one(W) + WittPoly::monomial(W, 1, teich_of(W, 2)) +
               WittPoly::monomial(W, 3, WittElement::from_int(W, 7));
  WittPoly b = WittPoly::one(W) - WittPoly::monomial(W, 2, teich_of(W, 3));
  CHECK((a * b).reduce() == a.reduce() * b.reduce());
  CHECK((a + b).reduce() == a.reduce() + b.reduce());
  CHECK(a.pow(3).reduce() == a.reduce().pow(3));

  WittPoly inv = detail::witt_series_inverse(a, 6);
  WittPoly prod = a * inv;
  CHECK(prod.coeff(0) == WittElement::one(W));
  for (int k = 1; k < 6; ++k) CHECK(prod.coeff(k).is_zero());
  CHECK(detail::witt_series_inverse(a, 0).is_zero());
}

TEST_CASE("two-point product decomposes exactly") {
  const WittRing* W = WittRing::get(2, 2, 6);
  WittElement X1 = teich_of(W, 2), X2 = teich_of(W, 3);
  WittPoly one = WittPoly::one(W);
  WittPoly F = (one - WittPoly::monomial(W, 1, X1)) * (one - WittPoly::monomial(W, 1, X2));

  Lemma212Decomposition dec = decompose_lemma212(F, 1);
  CHECK(dec.m == 1);
  CHECK(dec.Qhat.degree() == 0);
  WittElement a = dec.Qhat.coeff(0);
  CHECK(a * a == X1 * X2);  // Teichmuller square root of the constant term
  CHECK(dec.U == WittElement::one(W));
  CHECK(dec.Rhat.is_zero());

  WittPoly G = one + WittPoly::monomial(W, 1, WittElement::one(W)) * dec.Qhat;
  WittPoly main = G.pow(2) + WittPoly::monomial(W, dec.m, dec.U) *
                                 (one + WittPoly::monomial(W, 1, WittElement::one(W)) * dec.Rhat);
  CHECK(main + WittElement::from_int(W, 2) * dec.Shat == F);

  CHECK_THROWS_AS(decompose_lemma212(F, 2), PreconditionError);  // p | m
  CHECK_THROWS_AS(decompose_lemma212(F, 3), PreconditionError);  // stray x^1 coefficient
  CHECK_THROWS_AS(decompose_lemma212(F + one, 1), PreconditionError);
}

TEST_CASE("refined shape holds on the degree-nine witness") {
  const FieldSpec* K = FieldSpec::get(3, 2);
  Polynomial A(K, {2, 0, 1}), B(K, {3, 0, 3});
  auto ab = forms_from_AB(A, B);
  REQUIRE(ab.logarithmic);

  std::vector<u32> poles;
  std::vector<int> classes;
  for (const auto& pd : poles_and_residues(ab.w1)) {
    poles.push_back(pd.location.packed());
    classes.push_back(static_cast<int>(pd.residue.packed()));
  }
  CHECK(poles == std::vector<u32>{3, 4, 5, 6, 7, 8});
  CHECK(classes == std::vector<int>{1, 1, 1, 2, 2, 2});

  RefinedShapeReport rep = refined_lift_shape(K, poles, classes, 5);
  CHECK(rep.m == 5);
  CHECK(rep.required_valuation == 2);
  CHECK(rep.observed_valuation == 4);
  CHECK(rep.F.degree() == 9);
  CHECK_FALSE(rep.classes_reduced);
  CHECK(rep.dec.Shat.reduce().degree() == 8);
}

TEST_CASE("translated datum keeps the refined shape with a pole at zero") {
  const FieldSpec* K = FieldSpec::get(3, 2);
  // the witness datum shifted by -t: one pole lands at zero and its factor
  // (1 - x_i X) degenerates to 1, dropping the product degree
  std::vector<u32> poles{0, 1, 2, 3, 4, 5};
  std::vector<int> classes{1, 1, 1, 2, 2, 2};
  RefinedShapeReport rep = refined_lift_shape(K, poles, classes, 5);
  CHECK(rep.m == 5);
  CHECK(rep.required_valuation == 2);
  CHECK(rep.observed_valuation == 4);
  CHECK(rep.F.degree() == 8);
}

TEST_CASE("refined shape at the smallest prime datum") {
  const FieldSpec* K = FieldSpec::get(3, 1);
  RefinedShapeReport rep = refined_lift_shape(K, {0, 1, 2}, {1, 1, 1}, 4);
  CHECK(rep.m == 2);
  CHECK(rep.required_valuation == 1);
  // F = (1 - X)(1 + X) recomposes with no p-part at all
  CHECK(rep.observed_valuation == -1);
  CHECK(rep.dec.Shat.reduce().is_zero());
}

TEST_CASE("class representatives normalize into the residue window") {
  const FieldSpec* K = FieldSpec::get(3, 2);
  std::vector<u32> poles{3, 4, 5, 6, 7, 8};
  RefinedShapeReport canon = refined_lift_shape(K, poles, {1, 1, 1, 2, 2, 2}, 5);
  RefinedShapeReport rep = refined_lift_shape(K, poles, {-2, 1, 4, -1, 2, 5}, 5);
  CHECK(rep.classes_reduced);
  CHECK(rep.classes == std::vector<int>{1, 1, 1, 2, 2, 2});
  CHECK(rep.F == canon.F);
  CHECK(rep.observed_valuation == canon.observed_valuation);
}

TEST_CASE("refined shape rejects malformed data") {
  const FieldSpec* K9 = FieldSpec::get(3, 2);
  std::vector<u32> poles{3, 4, 5, 6, 7, 8};
  std::vector<int> classes{1, 1, 1, 2, 2, 2};

  CHECK_THROWS_WITH(refined_lift_shape(K9, {1, 2}, {1, 2}, 5),
                    "pole count must be divisible by p");
  CHECK_THROWS_WITH(refined_lift_shape(K9, poles, {3, 1, 1, 2, 2, 2}, 5),
                    "class divisible by p collapses its pole");
  CHECK_THROWS_AS(refined_lift_shape(K9, {3, 3, 5, 6, 7, 8}, classes, 5), PreconditionError);
  CHECK_THROWS_AS(refined_lift_shape(K9, {3, 4, 5, 6, 7, 9}, classes, 5), PreconditionError);
  CHECK_THROWS_AS(refined_lift_shape(K9, poles, classes, 2), PreconditionError);
  // class sum is divisible by p but the form picks up extra zeros at infinity
  CHECK_THROWS_WITH(refined_lift_shape(K9, poles, {1, 2, 1, 2, 1, 2}, 5),
                    "datum has no single zero of order m-1 at infinity");
}

TEST_CASE("characteristic-two lift at a single point") {
  const WittRing* W = WittRing::get(2, 2, 6);
  LiftP2Report rep = lift_p2({WittElement::one(W)}, teich_of(W, 2));
  CHECK(rep.n == 1);
  CHECK(rep.residues == std::vector<u32>{1, 3});
  CHECK(rep.alpha.empty());
  for (const auto& e : rep.eps) CHECK(e.is_zero());
  CHECK(rep.F == rep.Ftilde);
  CHECK(rep.F.reduce() == Polynomial(W->F, {1, 2, 3}));
  CHECK(reduction_check_p2(rep.F, 1));
}

TEST_CASE("corrected lift passes the reduction criterion where the raw product fails") {
  const WittRing* W = WittRing::get(2, 2, 6);
  // X_1 lifts the zero residue away from its Teichmuller representative
  WittElement X1 = WittElement::from_int(W, 2);
  LiftP2Report rep = lift_p2({X1, WittElement::one(W)}, WittElement::one(W));

  CHECK(rep.residues == std::vector<u32>{0, 1, 2, 3});
  REQUIRE(rep.alpha.size() == 1);
  CHECK(rep.alpha[0].coords()[0] % 2 == 1);  // odd: the correction must act
  CHECK(rep.eps[0].is_zero());
  CHECK(rep.eps[1].is_zero());
  CHECK(rep.eps[2] == -rep.alpha[0]);
  CHECK(rep.eps[2].coords() == std::vector<u64>{31, 0});
  CHECK(rep.eps[3].is_zero());  // pinned slot

  CHECK(rep.F.reduce() == Polynomial(W->F, {1, 0, 0, 1}));  // degree 2n-1: zero residue
  CHECK(reduction_check_p2(rep.F, 2));
  CHECK_FALSE(reduction_check_p2(rep.Ftilde, 2));
  CHECK_FALSE(rep.R.coeff(1).reduce().is_zero());
  CHECK(halved_bracket(rep.F, 2).coeff(1).reduce().is_zero());
}

TEST_CASE("three-point lift over the sixteen-element field") {
  const WittRing* W = WittRing::get(2, 4, 6);
  std::vector<WittElement> X{WittElement::from_int(W, 2), WittElement::one(W), teich_of(W, 2)};
  LiftP2Report rep = lift_p2(X, teich_of(W, 6));

  CHECK(rep.residues == std::vector<u32>{0, 1, 2, 5, 9, 15});
  REQUIRE(rep.alpha.size() == 2);
  CHECK(rep.eps[5].is_zero());
  for (int j = 0; j <= 1; ++j) {
    WittElement acc = WittElement::zero(W);
    for (int i = 3; i < 6; ++i) acc = acc + rep.eps[i] * rep.lifts[i].pow(static_cast<u64>(j));
    CHECK(acc == -rep.alpha[static_cast<size_t>(j)]);
  }

  CHECK(rep.F.reduce() == Polynomial(W->F, {1, 0, 4, 0, 3, 6}));
  CHECK(reduction_check_p2(rep.F, 3));
  CHECK_FALSE(reduction_check_p2(rep.Ftilde, 3));
  WittPoly corrected = halved_bracket(rep.F, 3);
  CHECK(corrected.coeff(1).reduce().is_zero());
  CHECK(corrected.coeff(2).reduce().is_zero());
}

TEST_CASE("teichmuller products need no correction") {
  const WittRing* W = WittRing::get(2, 4, 6);
  LiftP2Report rep = lift_p2({teich_of(W, 1), teich_of(W, 2)}, teich_of(W, 2));
  for (const auto& e : rep.eps) CHECK(e.reduce().is_zero());  // corrections all even
  CHECK(reduction_check_p2(rep.Ftilde, 2));
  CHECK(reduction_check_p2(rep.F, 2));
}

TEST_CASE("certificate that does not split names the extension degree") {
  const WittRing* W = WittRing::get(2, 2, 6);
  try {
    lift_p2({teich_of(W, 1), teich_of(W, 2)}, teich_of(W, 2));
    FAIL("expected the splitting failure");
  } catch (const NeedsLargerField& e) {
    CHECK(e.suggested_factor == 2);
    CHECK(std::string(e.what()).find("does not split") != std::string::npos);
  }
}

TEST_CASE("lift rejects bad inputs") {
  const WittRing* W = WittRing::get(2, 2, 6);
  WittElement one = WittElement::one(W);
  CHECK_THROWS_WITH(lift_p2({one, one + WittElement::from_int(W, 2)}, teich_of(W, 2)),
                    "lift points collide mod 2");
  CHECK_THROWS_WITH(lift_p2({one}, WittElement::from_int(W, 2)), "slope must be a unit");
  CHECK_THROWS_AS(lift_p2({}, one), PreconditionError);
  CHECK_THROWS_AS(lift_p2({one}, WittElement::one(WittRing::get(2, 2, 5))), PreconditionError);
  CHECK_THROWS_AS(lift_p2({WittElement::one(WittRing::get(3, 2, 5))},
                          WittElement::one(WittRing::get(3, 2, 5))),
                  PreconditionError);
  CHECK_THROWS_AS(lift_p2({WittElement::one(WittRing::get(2, 2, 2))},
                          WittElement::one(WittRing::get(2, 2, 2))),
                  PreconditionError);
}

TEST_CASE("reduction check validates the lifted shape") {
  const WittRing* W = WittRing::get(2, 2, 6);
  WittPoly one = WittPoly::one(W);
  WittPoly X = WittPoly::monomial(W, 1, WittElement::one(W));

  // 1 + X reads as a valid degenerate lift: residues {0, 1}, u = 1
  CHECK(reduction_check_p2(one + X, 1));

  CHECK_THROWS_AS(reduction_check_p2(one + X, 0), PreconditionError);
  CHECK_THROWS_AS(reduction_check_p2(one + one + X, 1), PreconditionError);
  CHECK_THROWS_AS(reduction_check_p2((one + X).pow(3), 1), PreconditionError);
  CHECK_THROWS_WITH(reduction_check_p2((one + X).pow(2), 1), "F is not of the lifted shape");
  CHECK_THROWS_WITH(reduction_check_p2(WittPoly::one(WittRing::get(2, 2, 2)), 1),
                    "precision must be at least 3: the division by 4 costs two digits");
}

TEST_CASE("unit pivots are required in the correction solve") {
  const WittRing* W = WittRing::get(2, 2, 6);
  std::vector<std::vector<WittElement>> M{{WittElement::from_int(W, 2)}};
  CHECK_THROWS_AS(detail::solve_unit_system(M, {WittElement::one(W)}), InternalCheckError);

  std::vector<std::vector<WittElement>> A{{WittElement::one(W), WittElement::one(W)},
                                          {teich_of(W, 2), teich_of(W, 3)}};
  std::vector<WittElement> b{teich_of(W, 2), WittElement::one(W)};
  auto sol = detail::solve_unit_system(A, b);
  for (int r = 0; r < 2; ++r) {
    WittElement acc = WittElement::zero(W);
    for (int c = 0; c < 2; ++c) acc = acc + A[r][c] * sol[c];
    CHECK(acc == b[r]);
  }
}
