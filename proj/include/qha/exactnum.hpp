// Exact scalars: rationals and Gaussian rationals Q(i).
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qha {

/// Base class of every error raised by the library. `kind()` is a stable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("DivisionByZero", "inverse of zero") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& msg)
      : Error("ParseError", msg + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Reduced fraction. Small values live in two int64 words; anything that
/// overflows is promoted to an immutable shared mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(long long n);  // NOLINT(google-explicit-constructor)
  Rational(long long n, long long d);
  static Rational from_mpq(const mpq_class& q);

  mpq_class to_mpq() const;
  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_small() const { return !big_; }
  int sign() const;
  bool is_integer() const;

  /// Numerator/denominator as decimal strings (canonical form).
  std::string num_str() const;
  std::string den_str() const;
  std::string str() const;

  Rational operator-() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational inverse() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }

 private:
  static Rational make128(__int128 n, __int128 d);  // n/d already reduced, d > 0
  static Rational from_canonical(mpq_class q);

  int64_t num_ = 0;
  int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

enum class Field { Q, QI };

inline Field join(Field a, Field b) { return (a == Field::QI || b == Field::QI) ? Field::QI : Field::Q; }
std::string field_name(Field f);           // "Q" or "Q(i)"
Field field_from_name(std::string_view s);  // throws Error("SchemaError") on unknown names

/// re + im*i. The tag records the smallest field the value was declared in;
/// equality compares values only.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long long n) : re_(n) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational re, Rational im);

  static Scalar i() { return Scalar(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  Field field() const { return field_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_one() const { return re_.is_one() && im_.is_zero(); }

  Scalar operator-() const;
  Scalar conj() const;
  Scalar inverse() const;  // throws DivisionByZero

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar& operator+=(const Scalar& b);
  Scalar& operator-=(const Scalar& b);
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  /// Canonical text: "n", "n/d", or "re+im*i" / "re-|im|*i".
  std::string str() const;
  static Scalar parse(std::string_view text);

 private:
  Rational re_, im_;
  Field field_ = Field::Q;
};

enum class ArithOp { Add, Sub, Mul };
Scalar arith(ArithOp op, const Scalar& a, const Scalar& b);
inline Scalar invert(const Scalar& a) { return a.inverse(); }

}  // namespace qha
