#include <doctest.h>

#include "qha/intcoint.hpp"
#include "qha/workbench.hpp"

using namespace qha;

namespace {

Tensor el(const QhaPresentation& H, const char* label) { return H.e(H.index_of(label)); }
Functional P(const QhaPresentation& H, const char* label) { return Functional::dual_basis(H.dim, H.index_of(label)); }

bool same_line(const Tensor& a, const Tensor& b) { return !a.is_zero() && !a.ratio_to(b).is_zero(); }
bool same_line(const Functional& a, const Functional& b) { return !a.is_zero() && !a.ratio_to(b).is_zero(); }

void require_all_pass(const VerificationReport& r) {
  REQUIRE_FALSE(r.rows.empty());
  for (const auto& row : r.rows) {
    CAPTURE(row.name);
    CAPTURE(row.note);
    CHECK(row.pass);
  }
}

// Dense-matrix nullspace oracle, independent of integral_space.
std::vector<std::vector<Scalar>> integral_oracle(const QhaPresentation& H, bool left) {
  const int n = H.dim;
  Matrix rows;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) {
      std::vector<Scalar> row(n);
      for (int j = 0; j < n; ++j) {
        const Tensor prod = left ? H.mul(H.e(h), H.e(j)) : H.mul(H.e(j), H.e(h));
        row[j] = prod.coeff(Key(k)) - (j == k ? H.counit.coords[h] : Scalar());
      }
      rows.push_back(row);
    }
  return kernel_basis(rows, n);
}

}  // namespace

TEST_CASE("integral lines") {
  const QhaPresentation H2 = catalog_build("H2");
  const Tensor one_g = H2.unit + el(H2, "g");
  CHECK(same_line(integral_space(H2, Side::Left), one_g));
  CHECK(same_line(integral_space(H2, Side::Right), one_g));
  for (const char* name : {"H8+", "H8-"}) {
    const QhaPresentation H = catalog_build(name);
    const Tensor x3 = el(H, "x^3");
    CHECK(same_line(integral_space(H, Side::Left), H.mul(H.unit + el(H, "g"), x3)));
    CHECK(same_line(integral_space(H, Side::Right), H.mul(H.unit - el(H, "g"), x3)));
    const Functional mu = modular_function(H, integral_space(H, Side::Left));
    CHECK(mu(H.unit) == Scalar(1));
    CHECK(mu(el(H, "g")) == Scalar(-1));
    CHECK(mu(el(H, "x")) == Scalar(0));
  }
  AlgebraContext h2(H2);
  CHECK(h2.integrals().mu == H2.counit);
}

TEST_CASE("integral solver agrees with the dense oracle") {
  for (const auto& name : catalog_names()) {
    const QhaPresentation H = catalog_build(name);
    for (bool left : {true, false}) {
      auto ker = integral_oracle(H, left);
      REQUIRE(ker.size() == 1);
      CHECK(same_line(integral_space(H, left ? Side::Left : Side::Right), Tensor::from_dense(ker[0])));
    }
  }
}

TEST_CASE("cointegral lines") {
  AlgebraContext h2(catalog_build("H2"));
  CHECK(same_line(cointegral_space(h2, Side::Left), P(h2.H(), "g")));
  CHECK(same_line(cointegral_space(h2, Side::Right), P(h2.H(), "g")));
  for (int sign : {1, -1}) {
    AlgebraContext ctx(catalog_build(sign > 0 ? "H8+" : "H8-"));
    const QhaPresentation& H = ctx.H();
    const Scalar w = omega(sign);
    CHECK(same_line(cointegral_space(ctx, Side::Left), P(H, "x^3")));
    const Functional R = P(H, "x^3").scaled(w) + P(H, "gx^3").scaled(w.conj());
    CHECK(same_line(cointegral_space(ctx, Side::Right), R));
    CHECK(ctx.cointegrals().Lam == R);
  }
  AlgebraContext k(catalog_build("kZ2-hopf"));
  CHECK(same_line(cointegral_space(k, Side::Left), P(k.H(), "1")));
}

TEST_CASE("normalized pairs") {
  AlgebraContext h2(catalog_build("H2"));
  CHECK(h2.cointegrals().lam == P(h2.H(), "g"));
  CHECK(h2.integrals().left == h2.H().unit + el(h2.H(), "g"));
  AlgebraContext h8(catalog_build("H8+"));
  CHECK(h8.cointegrals().lam(h8.integrals().left) == Scalar(1));
  CHECK(same_line(h8.cointegrals().lam, P(h8.H(), "x^3")));
  AlgebraContext k(catalog_build("kZ2-hopf"));
  CHECK(k.cointegrals().lam(k.integrals().left) == Scalar(1));
}

TEST_CASE("modular data") {
  AlgebraContext h2(catalog_build("H2"));
  CHECK(h2.cointegrals().g == h2.H().unit);
  CHECK(h2.cointegrals().u == h2.H().unit);
  CHECK(h2.cointegrals().v == h2.H().unit);
  for (int sign : {1, -1}) {
    AlgebraContext ctx(catalog_build(sign > 0 ? "H8+" : "H8-"));
    const QhaPresentation& H = ctx.H();
    const Scalar w = omega(sign);
    const CointegralData& C = ctx.cointegrals();
    CHECK(C.g == H.unit.scaled(w) + el(H, "g").scaled(w.conj()));
    CHECK(C.g_inv == H.unit.scaled(w.conj()) + el(H, "g").scaled(w));
    CHECK(C.u == H.unit);
    CHECK(compose(C.lam, ctx.S_inv()) == hit(H, C.Lam, C.u));
    CHECK(compose(C.lam, H.antipode) == hit(H, C.Lam, C.v));
  }
  AlgebraContext k(catalog_build("kZ2-hopf"));
  CHECK(k.cointegrals().g == k.H().unit);
  CHECK(k.cointegrals().u == k.H().unit);
}

TEST_CASE("S squared on integrals") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    const QhaPresentation& H = ctx.H();
    const IntegralData& I = ctx.integrals();
    const Functional& mui = I.mu_inv;
    const Scalar c = (mui(ctx.cointegrals().g) * I.mu(H.beta)).inverse();
    const Tensor S2t = H.antipode.apply(H.antipode.apply(I.left));
    const Tensor S2r = H.antipode.apply(H.antipode.apply(I.right));
    CHECK(S2t == I.left.scaled(c));
    CHECK(S2r == I.right.scaled(c));
  }
}

TEST_CASE("semisimplicity surrogate and unimodularity") {
  AlgebraContext h2(catalog_build("H2")), h8(catalog_build("H8+")), k(catalog_build("kZ2-hopf"));
  CHECK(is_unimodular(h2));
  CHECK(is_unimodular(k));
  CHECK_FALSE(is_unimodular(h8));
  CHECK(left_equals_right(h2));
  CHECK_FALSE(left_equals_right(h8));
}

TEST_CASE("Frobenius systems") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    for (FrobeniusKind kind : {FrobeniusKind::Left, FrobeniusKind::Cop, FrobeniusKind::Op}) {
      const FrobeniusSystem F = frobenius_system(ctx, kind);
      require_all_pass(frobenius_checks(ctx, F, "frobenius"));
    }
    // χ(h) = μ(h₁)S²(h₂)
    const FrobeniusSystem F = frobenius_system(ctx, FrobeniusKind::Left);
    const QhaPresentation& H = ctx.H();
    for (int i = 0; i < H.dim; ++i) {
      const Tensor want = H.antipode.apply(H.antipode.apply(coact_right(H, H.e(i), ctx.integrals().mu)));
      CHECK(F.chi.apply(H.e(i)) == want);
    }
  }
  AlgebraContext k(catalog_build("kZ2-hopf"));
  CHECK(frobenius_system(k, FrobeniusKind::Left).chi == LinearOperator::identity(2));
}

TEST_CASE("a functional passing condition (ii) spans the solver line") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    const ReportRow* row = nullptr;
    const VerificationReport rep = characterization_suite(ctx);
    row = rep.find("condition_ii_solution_is_L");
    REQUIRE(row);
    CHECK(row->pass);
  }
}

TEST_CASE("full integral suites") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    AlgebraContext ctx(catalog_build(name));
    require_all_pass(integrals_suite(ctx));
  }
}

TEST_CASE("S^4 is the identity on H2 and the baseline") {
  for (const char* name : {"H2", "kZ2-hopf"}) {
    const QhaPresentation H = catalog_build(name);
    const LinearOperator S2 = H.antipode.compose(H.antipode);
    CHECK(S2.compose(S2) == LinearOperator::identity(H.dim));
  }
}
