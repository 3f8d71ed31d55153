#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "semitoric/error.hpp"

namespace semitoric {

/// Exact rational scalar. Always stored in lowest terms with positive
/// denominator, so equality is plain representation equality.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int n) : q_(n) {}
  Rational(long n) : q_(static_cast<long>(n)) {}
  Rational(long long n);
  Rational(long long n, long long d);
  explicit Rational(const mpz_class& n) : q_(n) {}
  Rational(const mpz_class& n, const mpz_class& d);
  explicit Rational(const mpq_class& q);

  /// Exact conversion; every finite double is a dyadic rational.
  static Rational from_double_exact(double x);
  /// Parses "p/q" or "p" (optionally signed). Throws parse_error.
  static Rational from_string(std::string_view s);

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }
  std::string str() const;

  mpz_class floor() const;
  mpz_class ceil() const;
  Rational abs() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class q_;  // canonical
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Simplest rational (smallest denominator, then smallest numerator) in
/// [x - tol, x + tol], found by a Stern-Brocot walk. Returns false when no
/// candidate with denominator <= max_den exists in the window.
bool snap_to_rational(double x, double tol, long max_den, Rational* out);

/// Rational with the value +inf, -inf, or finite. Infinities only support the
/// operations the polygon algebra needs: comparisons and finiteness queries.
class ExtendedRational {
 public:
  ExtendedRational() : kind_(Kind::finite) {}
  ExtendedRational(Rational r) : kind_(Kind::finite), value_(std::move(r)) {}
  ExtendedRational(int n) : ExtendedRational(Rational(n)) {}
  static ExtendedRational pos_inf();
  static ExtendedRational neg_inf();
  static ExtendedRational from_string(std::string_view s);

  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  /// Finite value; throws invalid_input on infinities.
  const Rational& finite() const;
  double to_double() const;
  std::string str() const;

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
  friend bool operator!=(const ExtendedRational& a, const ExtendedRational& b) { return !(a == b); }
  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b);
  friend bool operator<=(const ExtendedRational& a, const ExtendedRational& b);
  friend bool operator>(const ExtendedRational& a, const ExtendedRational& b) { return b < a; }
  friend bool operator>=(const ExtendedRational& a, const ExtendedRational& b) { return b <= a; }

 private:
  enum class Kind { finite, pos_inf, neg_inf };
  Kind kind_;
  Rational value_;
};

/// Point of the integral-affine plane; x is the abscissa of the proper
/// circle-action momentum, y the second coordinate.
struct Point2 {
  Rational x;
  Rational y;

  friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point2& a, const Point2& b) { return !(a == b); }
  friend bool operator<(const Point2& a, const Point2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

}  // namespace semitoric
