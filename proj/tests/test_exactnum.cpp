#include <doctest.h>

#include <climits>

#include "qha/exactnum.hpp"

using namespace qha;

namespace {

// (a+bi)(c+di) = (ac−bd) + (ad+bc)i, computed on the parts alone.
Scalar complex_mul(const Scalar& x, const Scalar& y) {
  return Scalar(x.re() * y.re() - x.im() * y.im(), x.re() * y.im() + x.im() * y.re());
}

Scalar omega_plus() { return Scalar(Rational(1, 2), Rational(1, 2)); }
Scalar omega_minus() { return Scalar(Rational(1, 2), Rational(-1, 2)); }

}  // namespace

TEST_CASE("arith matches the direct complex product") {
  const Scalar w = omega_plus(), wb = omega_minus();
  CHECK(arith(ArithOp::Mul, w, wb) == complex_mul(w, wb));
  CHECK(arith(ArithOp::Mul, w, wb) == Scalar(Rational(1, 2)));
  CHECK(arith(ArithOp::Add, Scalar(Rational(1, 2)), Scalar(Rational(1, 2))) == Scalar(1));
  CHECK(arith(ArithOp::Mul, Scalar::i(), Scalar::i()) == Scalar(-1));
  CHECK(arith(ArithOp::Sub, w, wb) == Scalar::i());
}

TEST_CASE("field tags join") {
  CHECK(arith(ArithOp::Add, Scalar(1), Scalar(2)).field() == Field::Q);
  CHECK(arith(ArithOp::Add, Scalar(1), Scalar::i()).field() == Field::QI);
  CHECK(join(Field::Q, Field::QI) == Field::QI);
}

TEST_CASE("invert") {
  CHECK(invert(Scalar(2)) == Scalar(Rational(1, 2)));
  CHECK(invert(Scalar::i()) == -Scalar::i());
  // conj/|ω|² with |ω|² = 1/2
  CHECK(invert(omega_plus()) == Scalar(Rational(1), Rational(-1)));
  CHECK(invert(omega_minus()) == Scalar(Rational(1), Rational(1)));
  CHECK(omega_plus() * invert(omega_plus()) == Scalar(1));
  CHECK_THROWS_AS(invert(Scalar()), DivisionByZero);
  CHECK_THROWS_AS(Rational(0).inverse(), DivisionByZero);
}

TEST_CASE("parse and render") {
  CHECK(Scalar::parse("1/2+1/2*i") == omega_plus());
  CHECK(Scalar::parse("0").is_zero());
  CHECK(Scalar::parse("-3/4") == Scalar(Rational(-3, 4)));
  CHECK(Scalar::parse("2/4").str() == "1/2");
  CHECK(Scalar::parse("-6/4+0*i").str() == "-3/2");
  CHECK(omega_minus().str() == "1/2-1/2*i");
  CHECK(Scalar::i().str() == "0+1*i");
  for (const char* s : {"0", "-7", "5/3", "1/2+1/2*i", "-1/3-4*i", "0+1*i"}) CHECK(Scalar::parse(s).str() == s);
}

TEST_CASE("parse errors carry byte offsets") {
  auto offset_of = [](const char* s) -> long {
    try {
      Scalar::parse(s);
    } catch (const ParseError& e) {
      return long(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("") == 0);
  CHECK(offset_of("x") == 0);
  CHECK(offset_of("1/") == 2);
  CHECK(offset_of("1/0") == 2);
  CHECK(offset_of("1+2") == 3);
  CHECK(offset_of("1+2*i ") == 5);
  CHECK(offset_of("1*2") == 1);
}

TEST_CASE("canonical form: reduced, positive denominator") {
  Rational r(6, -4);
  CHECK(r.num_str() == "-3");
  CHECK(r.den_str() == "2");
  CHECK(Rational(0, -5).str() == "0");
  CHECK(Rational(0, -5).den_str() == "1");
}

TEST_CASE("overflow promotes to arbitrary precision") {
  const Rational big(LLONG_MAX);
  const Rational sq = big * big;
  CHECK_FALSE(sq.is_small());
  CHECK(sq.to_mpq() == mpq_class(mpz_class(std::to_string(LLONG_MAX)) * mpz_class(std::to_string(LLONG_MAX))));
  const Rational back = sq / big;
  CHECK(back == big);
  CHECK(back.is_small());
  const Rational frac = Rational(1, LLONG_MAX) + Rational(1, LLONG_MAX - 1);
  const mpz_class m(std::to_string(LLONG_MAX)), m1(std::to_string(LLONG_MAX - 1));
  mpq_class want = mpq_class(mpz_class(1), m) + mpq_class(mpz_class(1), m1);
  want.canonicalize();
  CHECK(frac.to_mpq() == want);
  CHECK(Rational(LLONG_MIN) == -(-Rational(LLONG_MIN)));
  CHECK((-Rational(LLONG_MIN)).to_mpq() == -mpq_class(mpz_class(std::to_string(LLONG_MIN))));
}

TEST_CASE("equality is canonical rendering equality") {
  const Scalar a = Scalar::parse("4/6-2/8*i");
  const Scalar b = Scalar(Rational(2, 3), Rational(-1, 4));
  CHECK(a == b);
  CHECK(a.str() == b.str());
  CHECK(a != Scalar(Rational(2, 3)));
}
