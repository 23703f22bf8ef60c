#include "qha/exactnum.hpp"

#include <limits>
#include <numeric>

namespace qha {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

uint64_t uabs(int64_t v) { return v < 0 ? uint64_t(0) - uint64_t(v) : uint64_t(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 v) { return v > i128(kMin) && v <= i128(kMax); }

mpz_class mpz_from(i128 v) {
  bool neg = v < 0;
  u128 m = neg ? u128(0) - u128(v) : u128(v);
  uint64_t words[2] = {uint64_t(m), uint64_t(m >> 64)};
  mpz_class z;
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(uint64_t), 0, 0, words);
  if (neg) z = -z;
  return z;
}

bool mpz_fits_i64(const mpz_class& z) {
  // signed long is 64-bit on the supported platforms
  static_assert(sizeof(long) == 8);
  return mpz_fits_slong_p(z.get_mpz_t()) && z != mpz_class(kMin);
}

}  // namespace

Rational::Rational(long long n) : num_(n), den_(1) {
  if (n == kMin) *this = from_mpq(mpq_class(mpz_from(i128(n))));
}

Rational::Rational(long long n, long long d) {
  if (d == 0) throw DivisionByZero();
  i128 N = n, D = d;
  if (D < 0) {
    N = -N;
    D = -D;
  }
  u128 g = gcd128(N < 0 ? u128(-N) : u128(N), u128(D));
  if (g > 1) {
    N /= i128(g);
    D /= i128(g);
  }
  *this = make128(N, D);
}

Rational Rational::make128(i128 n, i128 d) {
  Rational r;
  if (fits(n) && fits(d)) {
    r.num_ = int64_t(n);
    r.den_ = int64_t(d);
    return r;
  }
  mpq_class q(mpz_from(n), mpz_from(d));
  return from_canonical(std::move(q));
}

Rational Rational::from_canonical(mpq_class q) {
  Rational r;
  if (mpz_fits_i64(q.get_num()) && mpz_fits_i64(q.get_den())) {
    r.num_ = q.get_num().get_si();
    r.den_ = q.get_den().get_si();
    return r;
  }
  r.num_ = 0;
  r.den_ = 1;
  r.big_ = std::make_shared<const mpq_class>(std::move(q));
  return r;
}

Rational Rational::from_mpq(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  return from_canonical(std::move(c));
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q;
  mpq_set_si(q.get_mpq_t(), num_, static_cast<unsigned long>(den_));
  return q;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

std::string Rational::num_str() const { return big_ ? big_->get_num().get_str() : std::to_string(num_); }
std::string Rational::den_str() const { return big_ ? big_->get_den().get_str() : std::to_string(den_); }

std::string Rational::str() const {
  if (is_integer()) return num_str();
  return num_str() + "/" + den_str();
}

Rational Rational::operator-() const {
  if (big_) return from_canonical(-*big_);
  Rational r;
  r.num_ = -num_;  // num_ != INT64_MIN by invariant
  r.den_ = den_;
  return r;
}

Rational Rational::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (big_) return from_canonical(1 / *big_);
  Rational r;
  r.num_ = num_ < 0 ? -den_ : den_;
  r.den_ = num_ < 0 ? -num_ : num_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.big_ || b.big_) return Rational::from_canonical(a.to_mpq() + b.to_mpq());
  if (a.den_ == 1 && b.den_ == 1) return Rational::make128(i128(a.num_) + b.num_, 1);
  uint64_t g = std::gcd(uint64_t(a.den_), uint64_t(b.den_));
  if (g == 1) {
    i128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    i128 d = i128(a.den_) * b.den_;
    return Rational::make128(n, d);
  }
  int64_t ad = a.den_ / int64_t(g), bd = b.den_ / int64_t(g);
  i128 t = i128(a.num_) * bd + i128(b.num_) * ad;
  if (t == 0) return Rational();
  u128 g2 = gcd128(t < 0 ? u128(-t) : u128(t), u128(g));
  return Rational::make128(t / i128(g2), i128(ad) * (b.den_ / int64_t(g2)));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return Rational();
  if (a.big_ || b.big_) return Rational::from_canonical(a.to_mpq() * b.to_mpq());
  uint64_t g1 = std::gcd(uabs(a.num_), uint64_t(b.den_));
  uint64_t g2 = std::gcd(uabs(b.num_), uint64_t(a.den_));
  i128 n = i128(a.num_ / int64_t(g1)) * (b.num_ / int64_t(g2));
  i128 d = i128(a.den_ / int64_t(g2)) * (b.den_ / int64_t(g1));
  return Rational::make128(n, d);
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms never mix representations for equal values
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  return a.to_mpq() < b.to_mpq();
}

std::string field_name(Field f) { return f == Field::Q ? "Q" : "Q(i)"; }

Field field_from_name(std::string_view s) {
  if (s == "Q") return Field::Q;
  if (s == "Q(i)") return Field::QI;
  throw Error("SchemaError", "unknown field '" + std::string(s) + "'");
}

Scalar::Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)), field_(Field::QI) {}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.re_ = -re_;
  r.im_ = -im_;
  return r;
}

Scalar Scalar::conj() const {
  Scalar r = *this;
  r.im_ = -im_;
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (im_.is_zero()) {
    Scalar r = *this;
    r.re_ = re_.inverse();
    return r;
  }
  Rational norm = re_ * re_ + im_ * im_;
  Rational inv = norm.inverse();
  Scalar r(re_ * inv, -(im_ * inv));
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar r;
  r.re_ = a.re_ + b.re_;
  r.im_ = a.im_ + b.im_;
  r.field_ = join(a.field_, b.field_);
  return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar r;
  r.re_ = a.re_ - b.re_;
  r.im_ = a.im_ - b.im_;
  r.field_ = join(a.field_, b.field_);
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  r.field_ = join(a.field_, b.field_);
  if (a.im_.is_zero() && b.im_.is_zero()) {
    r.re_ = a.re_ * b.re_;
    return r;
  }
  r.re_ = a.re_ * b.re_ - a.im_ * b.im_;
  r.im_ = a.re_ * b.im_ + a.im_ * b.re_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& b) {
  re_ += b.re_;
  if (!b.im_.is_zero()) im_ += b.im_;
  field_ = join(field_, b.field_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& b) {
  re_ -= b.re_;
  if (!b.im_.is_zero()) im_ -= b.im_;
  field_ = join(field_, b.field_);
  return *this;
}

std::string Scalar::str() const {
  if (im_.is_zero()) return re_.str();
  std::string s = re_.str();
  s += im_.sign() > 0 ? "+" : "-";
  s += im_.abs().str();
  s += "*i";
  return s;
}

namespace {

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;
  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

Rational parse_rational(Cursor& c) {
  bool neg = false;
  if (c.peek() == '+' || c.peek() == '-') {
    neg = c.peek() == '-';
    ++c.pos;
  }
  std::size_t ds = c.pos;
  while (is_digit(c.peek())) ++c.pos;
  if (c.pos == ds) throw ParseError(c.pos, "expected digit");
  mpz_class num(std::string(c.s.substr(ds, c.pos - ds)));
  mpz_class den(1);
  if (c.peek() == '/') {
    ++c.pos;
    std::size_t dd = c.pos;
    while (is_digit(c.peek())) ++c.pos;
    if (c.pos == dd) throw ParseError(c.pos, "expected denominator digit");
    den = mpz_class(std::string(c.s.substr(dd, c.pos - dd)));
    if (den == 0) throw ParseError(dd, "zero denominator");
  }
  if (neg) num = -num;
  return Rational::from_mpq(mpq_class(num, den));
}

}  // namespace

Scalar Scalar::parse(std::string_view text) {
  Cursor c{text};
  if (text.empty()) throw ParseError(0, "empty scalar");
  Rational re = parse_rational(c);
  if (c.done()) return Scalar(re);
  char op = c.peek();
  if (op != '+' && op != '-') throw ParseError(c.pos, "unexpected character");
  ++c.pos;
  Rational im = parse_rational(c);
  if (c.s.substr(c.pos, 2) != "*i") throw ParseError(c.pos, "expected '*i'");
  c.pos += 2;
  if (!c.done()) throw ParseError(c.pos, "trailing characters");
  if (op == '-') im = -im;
  return Scalar(re, im);
}

Scalar arith(ArithOp op, const Scalar& a, const Scalar& b) {
  switch (op) {
    case ArithOp::Add:
      return a + b;
    case ArithOp::Sub:
      return a - b;
    case ArithOp::Mul:
      return a * b;
  }
  return {};
}

}  // namespace qha
