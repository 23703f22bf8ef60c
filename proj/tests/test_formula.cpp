#include <doctest.h>

#include "qha/double.hpp"
#include "qha/workbench.hpp"

using namespace qha;

namespace {

Bindings base(const QhaPresentation& H) {
  Bindings b;
  b.set("X", H.phi).set("x", H.phi_inv).set("alpha", H.alpha).set("beta", H.beta);
  b.set_op("S", H.antipode).set_fn("eps", H.counit);
  return b;
}

Tensor rebuild(const Bindings::PureSum& s, int rank, int dim) {
  Tensor out(rank, dim);
  for (const auto& legs : s.terms) {
    Tensor t = legs[0];
    for (std::size_t l = 1; l < legs.size(); ++l) t = tensor_product(t, legs[l]);
    out = out + t;
  }
  return out;
}

}  // namespace

TEST_CASE("symbols and components") {
  const QhaPresentation H = catalog_build("H8+");
  Bindings b = base(H);
  CHECK(evaluate(H.view(), "X1 | X2 | X3", b) == H.phi);
  CHECK(evaluate(H.view(), "X1 x1 | X2 x2 | X3 x3", b) == H.unit_power(3));
  CHECK(evaluate(H.view(), "X2 | X1 | X3", b) == H.phi.permute({1, 0, 2}));
  CHECK(evaluate(H.view(), "1", b) == H.unit);
  CHECK(evaluate(H.view(), "1 | alpha", b) == tensor_product(H.unit, H.alpha));
}

TEST_CASE("plain repeated elements are independent") {
  const QhaPresentation H = catalog_build("H8-");
  Bindings b = base(H);
  const Tensor x = H.e(H.index_of("x"));
  b.set("h", x);
  CHECK(evaluate(H.view(), "h h", b) == H.e(H.index_of("x^2")));
  CHECK(evaluate(H.view(), "h | h", b) == tensor_product(x, x));
}

TEST_CASE("Sweedler paths") {
  const QhaPresentation H = catalog_build("H8+");
  Bindings b = base(H);
  for (int i = 0; i < H.dim; ++i) {
    b.set("h", H.e(i));
    CHECK(evaluate(H.view(), "h_1 | h_2", b) == coproduct_of(H, H.e(i)));
    CHECK(evaluate(H.view(), "h_(1,1) | h_(1,2) | h_2", b) == iterate_coproduct(H.coproduct, H.e(i), "((.,.),.)"));
    CHECK(evaluate(H.view(), "h_1 | h_(2,1) | h_(2,2)", b) == iterate_coproduct(H.coproduct, H.e(i), "(.,(.,.))"));
    // h₂h₁ summed over the coproduct table
    const Tensor d = coproduct_of(H, H.e(i));
    const KeyCodec kc(2, H.dim);
    Tensor want(1, H.dim);
    for (const auto& [k, c] : d.terms()) want = want + H.mul(H.e(kc.index(k, 1)), H.e(kc.index(k, 0))).scaled(c);
    CHECK(evaluate(H.view(), "h_2 h_1", b) == want);
  }
}

TEST_CASE("operators and functionals") {
  const QhaPresentation H = catalog_build("H2");
  Bindings b = base(H);
  CHECK(evaluate(H.view(), "X1 beta S(X2) alpha X3", b) == H.unit);
  CHECK(evaluate(H.view(), "S(x1) alpha x2 beta S(x3)", b) == H.unit);
  CHECK(evaluate_scalar(H.view(), "eps(alpha)", b) == Scalar(1));
  CHECK(evaluate_scalar(H.view(), "eps(X1) eps(X2) eps(X3)", b) == Scalar(1));
  CHECK_THROWS_AS(evaluate_scalar(H.view(), "alpha", b), FormulaError);
}

TEST_CASE("malformed formulas") {
  const QhaPresentation H = catalog_build("H2");
  Bindings b = base(H);
  b.set("h", H.e(1));
  for (const char* f : {"X1 X1 | X2 | X3", "X1 | X2", "Q1", "X", "h_3", "h_(1", "h_1", "S(h", "T(h)", "X4 | X2 | X3 | X1",
                        "h_1 | h_1 | h_2", "h_1 | h_(1,1) | h_(1,2)", "h )"})
    CHECK_THROWS_AS(evaluate(H.view(), f, b), FormulaError);
}

TEST_CASE("pure decomposition rebuilds the tensor with no more terms than entries") {
  const QhaPresentation H2 = catalog_build("H2");
  AlgebraContext ctx(H2);
  DoubleContext dc(ctx);
  const QhaPresentation& D = dc.D().pres;
  for (const Tensor* t : {&H2.phi, &D.phi, &D.phi_inv}) {
    const auto s = pure_decomposition(*t);
    CHECK(rebuild(s, t->rank(), t->dim()) == *t);
    CHECK(s.terms.size() <= t->nnz());
  }
  // Φ = 1⊗1⊗1 − 2p⊗p⊗p embeds into D(H2) with 64 entries.
  CHECK(D.phi.nnz() == 64);
  CHECK(pure_decomposition(D.phi).terms.size() <= 3);
  const Tensor d = apply_on_leg(D.coproduct, D.phi, 0);
  CHECK(rebuild(pure_decomposition(d), 4, D.dim) == d);
  const Tensor r1 = Tensor::pure(3, {0, 1, 2}, Scalar(5));
  CHECK(pure_decomposition(r1).terms.size() == 1);
  CHECK(pure_decomposition(Tensor(2, 3)).terms.empty());
}
