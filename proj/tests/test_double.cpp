#include <doctest.h>

#include <random>

#include "qha/double.hpp"
#include "qha/workbench.hpp"

using namespace qha;

namespace {

void require_all_pass(const VerificationReport& r) {
  REQUIRE_FALSE(r.rows.empty());
  for (const auto& row : r.rows) {
    CAPTURE(row.suite);
    CAPTURE(row.name);
    CAPTURE(row.note);
    CHECK(row.pass);
  }
}

bool same_line(const Functional& a, const Functional& b) { return !a.is_zero() && !a.ratio_to(b).is_zero(); }

}  // namespace

TEST_CASE("D(H2) structure") {
  AlgebraContext ctx(catalog_build("H2"));
  DoubleContext dc(ctx);
  const QuantumDouble& D = dc.D();
  const QhaPresentation& H = ctx.H();
  CHECK(D.pres.dim == 4);
  require_all_pass(dc.axioms());
  // unit law (ε⋈1)(φ⋈h) = φ⋈h
  for (int k = 0; k < 4; ++k) CHECK(D.pres.mul(D.pres.unit, D.pres.e(k)) == D.pres.e(k));
  CHECK(D.pres.unit == D.embed(H.unit));
  // i_D is multiplicative and Φ_D = i_D^{⊗3}(Φ)
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(D.pres.mul(D.embed(H.e(a)), D.embed(H.e(b))) == D.embed(H.mul(H.e(a), H.e(b))));
  Tensor phiD(3, 4);
  KeyCodec kc(3, 2);
  for (const auto& [k, c] : H.phi.terms()) {
    auto idx = kc.unpack(k);
    phiD = phiD + tensor_product(tensor_product(D.embed(H.e(idx[0])), D.embed(H.e(idx[1]))), D.embed(H.e(idx[2])))
                      .scaled(c);
  }
  CHECK(phiD == D.pres.phi);
  // associativity over all 64 basis triples
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        CHECK(D.pres.mul(D.pres.mul(D.pres.e(a), D.pres.e(b)), D.pres.e(c)) ==
              D.pres.mul(D.pres.e(a), D.pres.mul(D.pres.e(b), D.pres.e(c))));
}

TEST_CASE("closed-form S_D inverse") {
  for (const char* name : {"H2", "kZ2-hopf"}) {
    AlgebraContext ctx(catalog_build(name));
    DoubleContext dc(ctx);
    const LinearOperator closed = double_antipode_inverse(ctx, dc.D());
    CHECK(closed == antipode_inverse(dc.D().pres));
    for (int h = 0; h < ctx.dim(); ++h)
      CHECK(closed.apply(dc.D().embed(ctx.H().e(h))) == dc.D().embed(ctx.S_inv().apply(ctx.H().e(h))));
  }
  AlgebraContext k(catalog_build("kZ2-hopf"));
  DoubleContext dk(k);
  CHECK(double_antipode_inverse(k, dk.D()) == dk.D().pres.antipode);
}

TEST_CASE("D(H2) integral, cointegrals and modular element") {
  AlgebraContext ctx(catalog_build("H2"));
  DoubleContext dc(ctx);
  const QuantumDouble& D = dc.D();
  const QhaPresentation& H = ctx.H();
  const Tensor T = double_integral(ctx, D);
  // β = 1, so 𝕋 = P_g ⋈ (1+g)
  CHECK(T == D.smash(Functional::dual_basis(2, 1), H.unit + H.e(1)));
  CHECK(!dc.d().integrals().left.ratio_to(T).is_zero());
  CHECK(dc.d().integrals().mu == D.pres.counit);
  CHECK(same_line(double_left_cointegral(ctx, D), cointegral_space(dc.d(), Side::Left)));
  CHECK(same_line(double_right_cointegral(ctx, D), cointegral_space(dc.d(), Side::Right)));
  const DoubleModular gD = double_modular(ctx, D);
  CHECK(gD.first == D.pres.unit);
  CHECK(gD.second == D.pres.unit);
  const SemisimplicityVerdict v = semisimplicity(ctx, D);
  CHECK(v.eps_r == Scalar(2));
  CHECK(v.lambda_alpha_beta == Scalar(1));
  CHECK(v.H_semisimple);
  CHECK(v.D_semisimple);
}

TEST_CASE("Hopf baseline double: Γ = r⋈λ and g_D = 1") {
  AlgebraContext ctx(catalog_build("kZ2-hopf"));
  DoubleContext dc(ctx);
  const CointegralData& C = ctx.cointegrals();
  CHECK(double_left_cointegral(ctx, dc.D()) == dc.D().pairing(ctx.integrals().right, C.lam));
  CHECK(double_modular(ctx, dc.D()).first == dc.D().pres.unit);
  CHECK(semisimplicity(ctx, dc.D()).D_semisimple);
}

TEST_CASE("double suites") {
  for (const char* name : {"H2", "kZ2-hopf"}) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    DoubleContext dc(ctx);
    require_all_pass(double_suite(dc));
  }
}

TEST_CASE("D(H8+) double suite" * doctest::timeout(600)) {
  AlgebraContext ctx(catalog_build("H8+"));
  DoubleContext dc(ctx);
  CHECK(dc.D().pres.dim == 64);
  require_all_pass(dc.axioms());
  require_all_pass(double_suite(dc));
  const SemisimplicityVerdict v = semisimplicity(ctx, dc.D());
  CHECK(v.eps_r == Scalar(0));
  CHECK_FALSE(v.H_semisimple);
  CHECK_FALSE(v.D_semisimple);
  // associativity on random triples
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, 63);
  const QhaPresentation& P = dc.D().pres;
  for (int s = 0; s < 200; ++s) {
    const int a = pick(rng), b = pick(rng), c = pick(rng);
    CHECK(P.mul(P.mul(P.e(a), P.e(b)), P.e(c)) == P.mul(P.e(a), P.mul(P.e(b), P.e(c))));
  }
}
