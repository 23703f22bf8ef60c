#include <doctest.h>

#include <algorithm>
#include <set>

#include "qha/intcoint.hpp"
#include "qha/workbench.hpp"

using namespace qha;

namespace {

Tensor el(const QhaPresentation& H, const char* label) { return H.e(H.index_of(label)); }

void require_all_pass(const VerificationReport& r) {
  REQUIRE_FALSE(r.rows.empty());
  for (const auto& row : r.rows) {
    CAPTURE(row.name);
    CAPTURE(row.note);
    CHECK(row.pass);
  }
}

}  // namespace

TEST_CASE("Hopf baseline canonical elements are trivial") {
  AlgebraContext ctx(catalog_build("kZ2-hopf"));
  const CanonicalElements& c = ctx.canonical();
  const Tensor one2 = ctx.H().unit_power(2);
  for (const Tensor* t : {&c.gamma, &c.delta, &c.f, &c.f_inv, &c.p_R, &c.q_R, &c.p_L, &c.q_L, &c.U, &c.V})
    CHECK(*t == one2);
}

TEST_CASE("H8 twist equals p_R") {
  for (const char* name : {"H8+", "H8-"}) {
    AlgebraContext ctx(catalog_build(name));
    const QhaPresentation& H = ctx.H();
    const Tensor one = H.unit, g = el(H, "g");
    const Tensor want = (tensor_product(one, one) + tensor_product(one, g) + tensor_product(g, one) -
                         tensor_product(g, g))
                            .scaled(Scalar(Rational(1, 2)));
    const CanonicalElements& c = ctx.canonical();
    CHECK(c.f == want);
    CHECK(c.f_inv == want);
    CHECK(c.p_R == want);
  }
}

TEST_CASE("twist invariants") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    const QhaPresentation& H = ctx.H();
    const CanonicalElements& c = ctx.canonical();
    CHECK(mult_pointwise(H.mult, c.f, c.f_inv) == H.unit_power(2));
    CHECK(mult_pointwise(H.mult, c.f_inv, c.f) == H.unit_power(2));
    CHECK(contract(H.counit, c.f, 0) == H.unit);
    CHECK(contract(H.counit, c.f, 1) == H.unit);
    // f·Δ(α) = γ and Δ(β)·f⁻¹ = δ
    CHECK(mult_pointwise(H.mult, c.f, coproduct_of(H, H.alpha)) == c.gamma);
    CHECK(mult_pointwise(H.mult, coproduct_of(H, H.beta), c.f_inv) == c.delta);
    // f·Δ(S(h))·f⁻¹ = (S⊗S)(Δ^cop(h))
    for (int i = 0; i < H.dim; ++i) {
      const Tensor lhs = mult_pointwise(
          H.mult, mult_pointwise(H.mult, c.f, coproduct_of(H, H.antipode.apply(H.e(i)))), c.f_inv);
      const Tensor rhs = apply_on_leg(H.antipode, apply_on_leg(H.antipode, coproduct_of(H, H.e(i)).flip(), 0), 1);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("cop canonical elements transport from H") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    const LinearOperator& Si = ctx.S_inv();
    const CanonicalElements& c = ctx.canonical();
    const CanonicalElements& cc = ctx.cop().canonical();
    CHECK(cc.f == apply_on_leg(Si, apply_on_leg(Si, c.f, 0), 1));
    CHECK(cc.gamma == apply_on_leg(Si, apply_on_leg(Si, c.gamma, 0), 1));
    CHECK(cc.p_R == c.p_L.flip());
  }
}

TEST_CASE("registry covers the named identities") {
  const auto names = identity_names();
  CHECK(names.size() >= 35);
  const std::set<std::string> have(names.begin(), names.end());
  CHECK(have.size() == names.size());
  for (const char* n :
       {"qr1",        "qr1a",      "ql1",        "ql1a",          "pqra",      "pqr",     "pql",
        "pqla",       "pr1",       "qr2",        "pl1",           "ql2",       "f2",      "fu1",
        "fv1",        "qqlv",      "pplu",       "formtplfversusqg", "fpformula", "qqt",   "peq",
        "qlqr",       "tplvspr",   "fdeltaDrinf", "foressleftintqd", "foressleftintqd2", "foressleftintqd3",
        "rint3",      "rint4",     "rint5",      "app2",          "app2a",     "app2b",   "app3b",
        "inchileftcoint", "normdefmodelem", "fvfformunim", "s4equivversion", "ca", "gamma", "delta"})
    CHECK_MESSAGE(have.count(n), n);
}

TEST_CASE("every identity holds on every catalog algebra") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    require_all_pass(identity_suite(ctx));
    require_all_pass(canonical_properties(ctx));
  }
}

TEST_CASE("check_identity") {
  AlgebraContext h2(catalog_build("H2"));
  CHECK(check_identity(h2, "pqr").pass);
  AlgebraContext h8(catalog_build("H8+"));
  CHECK(check_identity(h8, "rint4").pass);
  const QhaPresentation& H = h8.H();
  CHECK(h8.integrals().right == H.mul(H.unit - el(H, "g"), el(H, "x^3")));
  CHECK_THROWS_AS(check_identity(h8, "no-such-identity"), UnknownIdentity);
}

TEST_CASE("parallel identity evaluation matches sequential") {
  AlgebraContext a(catalog_build("H8-"));
  AlgebraContext b(catalog_build("H8-"));
  const VerificationReport seq = identity_suite(a, "canonical", 1);
  const VerificationReport par = identity_suite(b, "canonical", 4);
  REQUIRE(seq.rows.size() == par.rows.size());
  for (std::size_t i = 0; i < seq.rows.size(); ++i) {
    CHECK(seq.rows[i].name == par.rows[i].name);
    CHECK(seq.rows[i].pass == par.rows[i].pass);
  }
}

TEST_CASE("pair identities sample large algebras unless exhaustive") {
  AlgebraContext small(catalog_build("H8+"));
  const ReportRow r = check_identity(small, "normdefmodelem");
  CHECK(r.pass);
  CHECK(r.note.find("all 64") != std::string::npos);
}
