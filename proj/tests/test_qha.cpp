#include <doctest.h>

#include "qha/double.hpp"
#include "qha/workbench.hpp"

using namespace qha;

namespace {

Tensor el(const QhaPresentation& H, const char* label) { return H.e(H.index_of(label)); }

Tensor p(const QhaPresentation& H, int sign) {
  return (H.unit + el(H, "g").scaled(Scalar(sign))).scaled(Scalar(Rational(1, 2)));
}

bool all_pass(const VerificationReport& r) {
  for (const auto& row : r.rows)
    if (!row.pass) {
      MESSAGE("failing row " << row.name);
      return false;
    }
  return !r.rows.empty();
}

}  // namespace

TEST_CASE("catalog presentations load and pass every axiom row") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    const QhaPresentation H = catalog_build(name);
    CHECK(all_pass(verify_axioms(H)));
    CHECK(counit_of(H, H.alpha) == Scalar(1));
    CHECK(counit_of(H, H.beta) == Scalar(1));
  }
  CHECK(catalog_build("H2").dim == 2);
  CHECK(catalog_build("H8+").dim == 8);
  CHECK(catalog_build("H8+").field == Field::QI);
  CHECK(catalog_build("kZ2-hopf").phi == catalog_build("kZ2-hopf").unit_power(3));
  CHECK_THROWS_AS(catalog_build("H3"), UnknownCatalogName);
}

TEST_CASE("the double of H2 passes every axiom row") {
  AlgebraContext ctx(catalog_build("H2"));
  const QuantumDouble D = build_double(ctx, false);
  CHECK(D.pres.dim == 4);
  CHECK(all_pass(verify_axioms(D.pres)));
}

TEST_CASE("trivial reassociator with alpha = g violates q6") {
  QhaPresentation raw = catalog_raw("H2");
  raw.phi = raw.unit_power(3);
  raw.phi_inv = raw.unit_power(3);
  try {
    load_and_validate(raw);
    FAIL("expected AxiomViolation");
  } catch (const AxiomViolation& e) {
    CHECK(e.check() == "q6");
    CHECK_FALSE(e.witness().is_zero());
  }
}

TEST_CASE("alpha and beta are rescaled when eps(alpha)eps(beta) = 1") {
  QhaPresentation raw = catalog_raw("H8-");
  const QhaPresentation want = catalog_build("H8-");
  raw.alpha = raw.alpha.scaled(Scalar(3));
  raw.beta = raw.beta.scaled(Scalar(Rational(1, 3)));
  const QhaPresentation H = load_and_validate(raw);
  CHECK(H.alpha == want.alpha);
  CHECK(H.beta == want.beta);
  raw.beta = raw.beta.scaled(Scalar(2));
  try {
    load_and_validate(raw);
    FAIL("expected BadCounitNormalization");
  } catch (const Error& e) {
    CHECK(e.kind() == "BadCounitNormalization");
  }
}

TEST_CASE("corrupted reassociator inverse is rejected") {
  QhaPresentation raw = catalog_raw("H2");
  raw.phi_inv = raw.unit_power(3);
  try {
    load_and_validate(raw);
    FAIL("expected NonInvertiblePhi");
  } catch (const Error& e) {
    CHECK(e.kind() == "NonInvertiblePhi");
  }
}

TEST_CASE("counit and antipode invariants") {
  for (const auto& name : catalog_names()) {
    const QhaPresentation H = catalog_build(name);
    for (int i = 0; i < H.dim; ++i) CHECK(counit_of(H, H.antipode.apply(H.e(i))) == H.counit.coords[i]);
    CHECK(counit_of(H, H.alpha) * counit_of(H, H.beta) == Scalar(1));
    CHECK(contract(H.counit, H.phi, 0) == H.unit_power(2));
    CHECK(contract(H.counit, H.phi, 2) == H.unit_power(2));
    CHECK(H.antipode.apply(H.unit) == H.unit);
  }
}

TEST_CASE("variants") {
  const QhaPresentation H2 = catalog_build("H2");
  const QhaPresentation c = variant(H2, Variant::Cop);
  CHECK(c.phi == H2.phi_inv.permute({2, 1, 0}));
  CHECK(c.alpha == el(H2, "g"));
  CHECK(all_pass(verify_axioms(c)));
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    const QhaPresentation H = catalog_build(name);
    for (Variant v : {Variant::Op, Variant::Cop, Variant::OpCop}) {
      const QhaPresentation w = variant(H, v);
      CHECK(all_pass(verify_axioms(w)));
      CHECK(variant(w, v) == H);
    }
  }
  const QhaPresentation k = catalog_build("kZ2-hopf");
  const QhaPresentation kop = variant(k, Variant::Op);
  CHECK(kop.mult.mul(kop.e(1), kop.e(1)) == k.mult.mul(k.e(1), k.e(1)));
  CHECK(kop.antipode == k.antipode);
}

TEST_CASE("antipode inverse") {
  const QhaPresentation H2 = catalog_build("H2");
  CHECK(antipode_inverse(H2) == LinearOperator::identity(2));
  for (int sign : {1, -1}) {
    const QhaPresentation H = catalog_build(sign > 0 ? "H8+" : "H8-");
    const LinearOperator Si = antipode_inverse(H);
    CHECK(Si.compose(H.antipode) == LinearOperator::identity(8));
    CHECK(H.antipode.compose(Si) == LinearOperator::identity(8));
    // S⁻¹(x) = −(p₊ ∓ i p₋)x and S⁻¹(x²) = ∓ i x²
    const Scalar mi = sign > 0 ? -Scalar::i() : Scalar::i();
    const Tensor want_x = H.mul(p(H, 1) + p(H, -1).scaled(mi), el(H, "x")).scaled(Scalar(-1));
    CHECK(Si.apply(el(H, "x")) == want_x);
    CHECK(Si.apply(el(H, "x^2")) == el(H, "x^2").scaled(mi));
  }
}

TEST_CASE("iterated coproducts") {
  const QhaPresentation H2 = catalog_build("H2");
  CHECK(iterated_coproduct(H2, el(H2, "g"), "((.,.),.)") == Tensor::pure(2, {1, 1, 1}));
  CHECK_THROWS(iterated_coproduct(H2, el(H2, "g"), "((.,.)"));
  CHECK_THROWS(iterated_coproduct(H2, el(H2, "g"), "(.;.)"));
  for (int sign : {1, -1}) {
    const QhaPresentation H = catalog_build(sign > 0 ? "H8+" : "H8-");
    const Tensor x = el(H, "x"), one = H.unit, g = el(H, "g");
    const Scalar si = sign > 0 ? Scalar::i() : -Scalar::i();
    auto delta = [&](const Tensor& t) { return coproduct_of(H, t); };
    // Δ(x) = x⊗(p₊ ± ip₋) + 1⊗p₊x + g⊗p₋x
    const Tensor tw = p(H, 1) + p(H, -1).scaled(si);
    CHECK(delta(x) == tensor_product(x, tw) + tensor_product(one, H.mul(p(H, 1), x)) +
                          tensor_product(g, H.mul(p(H, -1), x)));
    // (Id⊗Δ)Δ(x), substituted by hand
    const Tensor want = tensor_product(x, delta(tw)) + tensor_product(one, delta(H.mul(p(H, 1), x))) +
                        tensor_product(g, delta(H.mul(p(H, -1), x)));
    CHECK(iterated_coproduct(H, x, "(.,(.,.))") == want);
    // q1: the two plans differ by conjugation with Φ
    for (int i = 0; i < 8; ++i) {
      const Tensor a = iterated_coproduct(H, H.e(i), "(.,(.,.))");
      const Tensor b = iterated_coproduct(H, H.e(i), "((.,.),.)");
      CHECK(mult_pointwise(H.mult, a, H.phi) == mult_pointwise(H.mult, H.phi, b));
    }
  }
}

TEST_CASE("dual actions") {
  const QhaPresentation H2 = catalog_build("H2");
  const Functional Pg = Functional::dual_basis(2, 1);
  CHECK(hit(H2, el(H2, "g"), Pg) == Functional::dual_basis(2, 0));
  CHECK(hit(H2, H2.unit, Pg) == Pg);
  CHECK(hit(H2, Pg, H2.unit) == Pg);
  const QhaPresentation H = catalog_build("H8+");
  const Functional P = Functional::dual_basis(8, H.index_of("gx^3"));
  // (x⇀P)(h) = P(hx), (P↼x)(h) = P(xh); xgx² = −gx³
  CHECK(hit(H, el(H, "x"), P) == Functional::dual_basis(8, H.index_of("gx^2")));
  CHECK(hit(H, P, el(H, "x")) == Functional::dual_basis(8, H.index_of("gx^2")).scaled(Scalar(-1)));
  // ε⇀h = h = h↼ε
  for (int i = 0; i < 8; ++i) {
    CHECK(coact_left(H, H.counit, H.e(i)) == H.e(i));
    CHECK(coact_right(H, H.e(i), H.counit) == H.e(i));
  }
  // P_1⇀g = P_1(g₂)g₁ = 0 in H2 and P_g⇀g = g
  CHECK(coact_left(H2, Functional::dual_basis(2, 0), el(H2, "g")).is_zero());
  CHECK(coact_left(H2, Pg, el(H2, "g")) == el(H2, "g"));
}

TEST_CASE("algebra generators") {
  CHECK(algebra_generators(catalog_build("H8+")) == std::vector<int>{1, 2});
  CHECK(algebra_generators(catalog_build("H2")) == std::vector<int>{1});
}

TEST_CASE("report rows") {
  VerificationReport r;
  r.add_equal("s", "same", Tensor::pure(2, {1}), Tensor::pure(2, {1}));
  r.add_equal("s", "differs", Tensor::pure(2, {1}), Tensor::pure(2, {0}));
  r.add_bool("s", "flag", false, "note");
  CHECK(r.failures() == 2);
  CHECK_FALSE(r.all_pass());
  REQUIRE(r.find("differs"));
  CHECK(r.find("differs")->witness.has_value());
  CHECK(r.find("same")->pass);
  CHECK_FALSE(r.find("same")->witness.has_value());
}
