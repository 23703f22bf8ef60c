#include <doctest.h>

#include <random>

#include "qha/canonical.hpp"
#include "qha/workbench.hpp"

using namespace qha;

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long long small() { return std::uniform_int_distribution<long long>(-20, 20)(rng); }

  Rational rational() {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: return Rational(small());
      case 1: return Rational(small(), std::uniform_int_distribution<long long>(1, 30)(rng));
      case 2: {
        // near the 64-bit boundary, exercising the promoted representation
        const long long big = std::uniform_int_distribution<long long>(1LL << 60, (1LL << 62))(rng);
        return Rational(small() < 0 ? -big : big, std::uniform_int_distribution<long long>(1, 1LL << 40)(rng));
      }
      default: return Rational(0);
    }
  }

  Scalar scalar() { return Scalar(rational(), std::uniform_int_distribution<int>(0, 2)(rng) ? rational() : Rational(0)); }

  Tensor element(int n, int rank) {
    KeyCodec kc(rank, n);
    Key total = 1;
    for (int r = 0; r < rank; ++r) total *= Key(n);
    TensorBuilder b(rank, n);
    const int terms = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int t = 0; t < terms; ++t) b.add(std::uniform_int_distribution<Key>(0, total - 1)(rng), Scalar(small(), 0));
    return b.build();
  }
};

}  // namespace

TEST_CASE("field axioms on 10^4 random Gaussian rationals") {
  Gen g(11);
  int samples = 0;
  for (; samples < 10000; ++samples) {
    const Scalar a = g.scalar(), b = g.scalar(), c = g.scalar();
    CAPTURE(a.str());
    CAPTURE(b.str());
    CAPTURE(c.str());
    REQUIRE(a + b == b + a);
    REQUIRE(a * b == b * a);
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE(a + Scalar() == a);
    REQUIRE(a * Scalar(1) == a);
    REQUIRE(a - a == Scalar());
    REQUIRE((a - b) + b == a);
    REQUIRE((a * b).conj() == a.conj() * b.conj());
    if (!a.is_zero()) {
      REQUIRE(a * a.inverse() == Scalar(1));
      REQUIRE((b / a) * a == b);
    }
    REQUIRE(Scalar::parse(a.str()) == a);
  }
  CHECK(samples >= 10000);
}

TEST_CASE("legwise multiplication is associative on random rank-2 tensors") {
  Gen g(5);
  for (const char* name : {"H8+", "H8-"}) {
    const QhaPresentation H = catalog_build(name);
    for (int s = 0; s < 200; ++s) {
      const Tensor a = g.element(H.dim, 2), b = g.element(H.dim, 2), c = g.element(H.dim, 2);
      CHECK(mult_pointwise(H.mult, mult_pointwise(H.mult, a, b), c) ==
            mult_pointwise(H.mult, a, mult_pointwise(H.mult, b, c)));
      CHECK(mult_pointwise(H.mult, a, b, 3) == mult_pointwise(H.mult, b, a));
    }
  }
}

TEST_CASE("coproduct is multiplicative and counital on random elements") {
  Gen g(17);
  for (const auto& name : catalog_names()) {
    const QhaPresentation H = catalog_build(name);
    for (int s = 0; s < 100; ++s) {
      const Tensor a = g.element(H.dim, 1), b = g.element(H.dim, 1);
      CHECK(coproduct_of(H, H.mul(a, b)) == mult_pointwise(H.mult, coproduct_of(H, a), coproduct_of(H, b)));
      CHECK(contract(H.counit, coproduct_of(H, a), 0) == a);
      CHECK(counit_of(H, H.mul(a, b)) == counit_of(H, a) * counit_of(H, b));
    }
  }
}

TEST_CASE("kernel vectors annihilate every row and rank plus nullity is the width") {
  Gen g(3);
  for (int s = 0; s < 300; ++s) {
    const int rows = std::uniform_int_distribution<int>(1, 7)(g.rng);
    const int cols = std::uniform_int_distribution<int>(1, 7)(g.rng);
    Matrix m(static_cast<std::size_t>(rows), std::vector<Scalar>(static_cast<std::size_t>(cols)));
    for (auto& r : m)
      for (auto& x : r)
        if (std::uniform_int_distribution<int>(0, 2)(g.rng)) x = g.scalar();
    if (rows > 1 && s % 3 == 0)
      for (int j = 0; j < cols; ++j) m[1][std::size_t(j)] = m[0][std::size_t(j)] * Scalar(2);
    const auto ker = kernel_basis(m, cols);
    CHECK(int(ker.size()) + matrix_rank(m, cols) == cols);
    for (const auto& v : ker)
      for (const auto& r : m) {
        Scalar dot;
        for (int j = 0; j < cols; ++j) dot += r[std::size_t(j)] * v[std::size_t(j)];
        CHECK(dot.is_zero());
      }
  }
}

TEST_CASE("evaluated Sweedler formulas match direct computation on random elements") {
  Gen g(23);
  AlgebraContext ctx(catalog_build("H8-"));
  const QhaPresentation& H = ctx.H();
  for (int s = 0; s < 50; ++s) {
    const Tensor h = g.element(H.dim, 1);
    Bindings b = ctx.bindings();
    b.set("h", h);
    CHECK(ctx.eval("h_1 | h_2", b) == coproduct_of(H, h));
    // S(h₁)αh₂ = ε(h)α
    CHECK(ctx.eval("S(h_1) alpha h_2", b) == H.alpha.scaled(counit_of(H, h)));
    CHECK(ctx.eval("h_1 beta S(h_2)", b) == H.beta.scaled(counit_of(H, h)));
  }
}
