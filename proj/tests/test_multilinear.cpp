#include <doctest.h>

#include "qha/workbench.hpp"

using namespace qha;

namespace {

Tensor vec(int n, std::initializer_list<std::pair<int, Scalar>> c) {
  TensorBuilder b(1, n);
  for (const auto& [i, s] : c) b.add(Key(i), s);
  return b.build();
}

Tensor p_minus() { return vec(2, {{0, Scalar(Rational(1, 2))}, {1, Scalar(Rational(-1, 2))}}); }

}  // namespace

TEST_CASE("key packing is big-endian in leg order") {
  KeyCodec kc(3, 4);
  CHECK(kc.pack({1, 2, 3}) == Key(1 * 16 + 2 * 4 + 3));
  CHECK(kc.unpack(Key(27)) == std::vector<int>{1, 2, 3});
  CHECK(kc.index(Key(27), 1) == 2);
  CHECK(kc.size() == Key(64));
}

TEST_CASE("tensor_product") {
  const Tensor one_g = vec(2, {{0, 1}, {1, 1}});
  const Tensor t = tensor_product(one_g, one_g);
  CHECK(t.nnz() == 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(t.at({i, j}) == Scalar(1));
  CHECK(tensor_product(one_g, Tensor(1, 2)).is_zero());

  const QhaPresentation H = catalog_build("H2");
  const Tensor ppp = tensor_product(tensor_product(p_minus(), p_minus()), p_minus());
  CHECK(H.unit_power(3) - ppp.scaled(Scalar(2)) == H.phi);
  CHECK_THROWS_AS(tensor_product(one_g, vec(3, {{0, 1}})), DimMismatch);
}

TEST_CASE("no stored zeros") {
  const Tensor a = vec(3, {{0, 1}, {2, 5}});
  const Tensor z = a - a;
  CHECK(z.is_zero());
  CHECK(z.nnz() == 0);
  CHECK((a + vec(3, {{2, -5}})).nnz() == 1);
}

TEST_CASE("mult_pointwise") {
  const QhaPresentation H2 = catalog_build("H2");
  CHECK(mult_pointwise(H2.mult, H2.phi, H2.phi_inv) == H2.unit_power(3));
  for (const char* name : {"H8+", "H8-"}) {
    const QhaPresentation H = catalog_build(name);
    CHECK(mult_pointwise(H.mult, H.phi, H.phi) == H.unit_power(3));
    CHECK(H.phi_inv == H.phi);
    CHECK(mult_pointwise(H.mult, H.unit_power(3), H.phi) == H.phi);
  }
  CHECK_THROWS_AS(mult_pointwise(H2.mult, H2.phi, H2.unit_power(2)), RankMismatch);
}

TEST_CASE("apply_on_leg") {
  const QhaPresentation H8 = catalog_build("H8+");
  const int g = H8.index_of("g"), x = H8.index_of("x");
  const Tensor gx = Tensor::pure(8, {g, x});
  CHECK(apply_on_leg(H8.antipode, gx, 0) == gx);
  CHECK(apply_on_leg(LinearOperator::identity(8), gx, 1) == gx);
  const QhaPresentation H2 = catalog_build("H2");
  CHECK(apply_on_leg(H2.coproduct, H2.e(1), 0) == Tensor::pure(2, {1, 1}));
  CHECK_THROWS_AS(apply_on_leg(H8.antipode, gx, 2), LegOutOfRange);
}

TEST_CASE("contract") {
  for (const char* name : {"H2", "H8+"}) {
    const QhaPresentation H = catalog_build(name);
    for (int h = 0; h < H.dim; ++h) {
      const Tensor d = coproduct_of(H, H.e(h));
      CHECK(contract(H.counit, d, 0) == H.e(h));
      CHECK(contract(H.counit, d, 1) == H.e(h));
    }
    CHECK(contract(H.counit, H.phi, 1) == H.unit_power(2));
    CHECK(contract(H.counit, H.phi, 0) == H.unit_power(2));
    CHECK(contract(H.counit, H.phi, 2) == H.unit_power(2));
  }
  const QhaPresentation H8 = catalog_build("H8-");
  const int g = H8.index_of("g"), x = H8.index_of("x");
  CHECK(contract(Functional::dual_basis(8, g), Tensor::pure(8, {g, x}), 0) == H8.e(x));
  CHECK_THROWS_AS(contract(H8.counit, H8.e(0), 1), LegOutOfRange);
}

TEST_CASE("bilinearity probe: f(a ⊗ b contracted on leg 0) = f(a)·b") {
  const Tensor a = vec(4, {{0, 2}, {3, Scalar::parse("1/3+1*i")}});
  const Tensor b = vec(4, {{1, -1}, {2, 7}});
  Functional f(std::vector<Scalar>{Scalar(1), Scalar(5), Scalar::parse("-1/2"), Scalar::i()});
  CHECK(contract(f, tensor_product(a, b), 0) == b.scaled(f(a)));
  CHECK(contract_full(f, a) == f(a));
}

TEST_CASE("kernel_basis") {
  Matrix id3(3, std::vector<Scalar>(3));
  for (int i = 0; i < 3; ++i) id3[i][i] = Scalar(1);
  CHECK(kernel_basis(id3, 3).empty());
  CHECK(kernel_basis(Matrix{std::vector<Scalar>(2)}, 2).size() == 2);

  Matrix m = {{Scalar(1), Scalar(2), Scalar(3)}, {Scalar(2), Scalar(4), Scalar(6)}, {Scalar(0), Scalar(1), Scalar::i()}};
  auto ker = kernel_basis(m, 3);
  REQUIRE(ker.size() == 1);
  for (const auto& row : m) {
    Scalar s;
    for (int j = 0; j < 3; ++j) s += row[j] * ker[0][j];
    CHECK(s.is_zero());
  }
  CHECK(ker[0][0] == Scalar(1));
  CHECK(matrix_rank(m, 3) == 2);
}

TEST_CASE("kernel_basis: left integral system of H8") {
  for (const char* name : {"H8+", "H8-"}) {
    const QhaPresentation H = catalog_build(name);
    Matrix rows;
    for (int h = 0; h < 8; ++h) {
      Matrix lm = H.mult.left_mul(H.e(h)).matrix();
      for (int r = 0; r < 8; ++r) {
        lm[r][r] -= H.counit.coords[h];
        rows.push_back(lm[r]);
      }
    }
    auto ker = kernel_basis(rows, 8);
    REQUIRE(ker.size() == 1);
    const Tensor t = Tensor::from_dense(ker[0]);
    const Tensor want = H.mul(H.unit + H.e(H.index_of("g")), H.e(H.index_of("x^3")));
    CHECK_FALSE(t.ratio_to(want).is_zero());
  }
}

TEST_CASE("invert_matrix") {
  Matrix a = {{Scalar(2), Scalar(1)}, {Scalar(1), Scalar(1)}}, inv;
  REQUIRE(invert_matrix(a, inv));
  CHECK(inv == Matrix{{Scalar(1), Scalar(-1)}, {Scalar(-1), Scalar(2)}});
  Matrix sing = {{Scalar(1), Scalar(2)}, {Scalar(2), Scalar(4)}};
  CHECK_FALSE(invert_matrix(sing, inv));
}

TEST_CASE("permute") {
  const Tensor t = Tensor::pure(3, {0, 1, 2}, Scalar(4));
  CHECK(t.permute({2, 0, 1}) == Tensor::pure(3, {2, 0, 1}, Scalar(4)));
  CHECK(Tensor::pure(3, {0, 1}).flip() == Tensor::pure(3, {1, 0}));
}

TEST_CASE("rendering drops unit coefficients and folds signs") {
  const std::vector<std::string> labels = {"1", "g"};
  CHECK((Tensor::basis(2, 0) + Tensor::basis(2, 1)).str(labels) == "1 + g");
  CHECK((Tensor::basis(2, 0) - Tensor::basis(2, 1).scaled(Scalar::parse("3/2"))).str(labels) == "1 - 3/2*g");
  CHECK(Tensor::basis(2, 1).scaled(Scalar(-1)).str(labels) == "-g");
  CHECK(Tensor::pure(2, {0, 1}, Scalar::i()).str(labels) == "(0+1*i)*1⊗g");
  CHECK(Tensor::pure(2, {1}, Scalar::parse("1-1*i")).str(labels) == "(1-1*i)*g");
  CHECK(Tensor(1, 2).str(labels) == "0");
  CHECK(Functional(std::vector<Scalar>{Scalar(1), Scalar(-2)}).str(labels) == "P_1 - 2*P_g");
}
