#include "semitoric/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace semitoric {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_input: return "invalid_input";
    case Errc::parse_error: return "parse_error";
    case Errc::not_convex: return "not_convex";
    case Errc::empty_interior: return "empty_interior";
    case Errc::out_of_domain: return "out_of_domain";
    case Errc::unbounded_slice: return "unbounded_slice";
    case Errc::unbounded_area: return "unbounded_area";
    case Errc::not_a_vertex: return "not_a_vertex";
    case Errc::too_many_cuts: return "too_many_cuts";
    case Errc::uncanonicalizable: return "uncanonicalizable";
    case Errc::weight_extraction_failed: return "weight_extraction_failed";
    case Errc::unbounded_truncation: return "unbounded_truncation";
    case Errc::invalid_point: return "invalid_point";
    case Errc::not_critical: return "not_critical";
    case Errc::empty_level_set: return "empty_level_set";
    case Errc::out_of_range: return "out_of_range";
    case Errc::fit_failure: return "fit_failure";
    case Errc::validation_failure: return "validation_failure";
    case Errc::usage_error: return "usage_error";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

Rational::Rational(long long n) : q_(mpz_class(std::to_string(n))) {}

Rational::Rational(long long n, long long d) {
  if (d == 0) fail(Errc::invalid_input, "rational with zero denominator");
  Rational num(n), den(d);
  q_ = num.q_ / den.q_;
}

Rational::Rational(const mpz_class& n, const mpz_class& d) {
  if (d == 0) fail(Errc::invalid_input, "rational with zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) {
  if (q_.get_den() == 0) fail(Errc::invalid_input, "rational with zero denominator");
  q_.canonicalize();
}

Rational Rational::from_double_exact(double x) {
  if (!std::isfinite(x)) fail(Errc::invalid_input, "non-finite double");
  Rational r;
  r.q_ = mpq_class(x);
  return r;
}

Rational Rational::from_string(std::string_view s) {
  auto bad = [&] { fail(Errc::parse_error, "invalid rational \"" + std::string(s) + "\""); };
  if (s.empty()) bad();
  std::string text(s);
  auto slash = text.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!is_int(text)) bad();
    return Rational(mpz_class(text));
  }
  std::string num = text.substr(0, slash), den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) bad();
  mpz_class d(den);
  if (d == 0) bad();
  return Rational(mpz_class(num), d);
}

std::string Rational::str() const {
  std::ostringstream os;
  os << q_.get_num();
  if (q_.get_den() != 1) os << '/' << q_.get_den();
  return os.str();
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

mpz_class Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Rational Rational::abs() const {
  Rational r = *this;
  if (r.sign() < 0) r = -r;
  return r;
}

Rational Rational::operator-() const {
  Rational r;
  r.q_ = -q_;
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(Errc::invalid_input, "division by zero");
  q_ /= o.q_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }

bool snap_to_rational(double x, double tol, long max_den, Rational* out) {
  if (!(tol >= 0) || !std::isfinite(x)) return false;
  Rational lo = Rational::from_double_exact(x - tol);
  Rational hi = Rational::from_double_exact(x + tol);
  // Integer hit first: smallest denominator wins outright.
  mpz_class fl = hi.floor();
  if (Rational(fl) >= lo) {
    // Pick the integer of least magnitude in [lo, hi].
    mpz_class cl = lo.ceil();
    mpz_class pick;
    if (cl <= 0 && fl >= 0) pick = 0;
    else if (cl > 0) pick = cl;
    else pick = fl;
    *out = Rational(pick);
    return true;
  }
  // Stern-Brocot walk on the fractional window.
  mpz_class base = lo.floor();
  Rational flo = lo - Rational(base), fhi = hi - Rational(base);  // 0 < flo <= fhi < 1
  mpz_class pl = 0, ql = 1, pr = 1, qr = 1;
  for (int iter = 0; iter < 10000; ++iter) {
    mpz_class pm = pl + pr, qm = ql + qr;
    if (qm > max_den) return false;
    Rational med(pm, qm);
    if (med < flo) {
      pl = pm; ql = qm;
    } else if (med > fhi) {
      pr = pm; qr = qm;
    } else {
      *out = Rational(base) + med;
      return true;
    }
  }
  return false;
}

ExtendedRational ExtendedRational::pos_inf() {
  ExtendedRational e;
  e.kind_ = Kind::pos_inf;
  return e;
}

ExtendedRational ExtendedRational::neg_inf() {
  ExtendedRational e;
  e.kind_ = Kind::neg_inf;
  return e;
}

ExtendedRational ExtendedRational::from_string(std::string_view s) {
  if (s == "inf" || s == "+inf") return pos_inf();
  if (s == "-inf") return neg_inf();
  return ExtendedRational(Rational::from_string(s));
}

const Rational& ExtendedRational::finite() const {
  if (!is_finite()) fail(Errc::invalid_input, "expected finite value");
  return value_;
}

double ExtendedRational::to_double() const {
  if (is_pos_inf()) return std::numeric_limits<double>::infinity();
  if (is_neg_inf()) return -std::numeric_limits<double>::infinity();
  return value_.to_double();
}

std::string ExtendedRational::str() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return value_.str();
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != ExtendedRational::Kind::finite) return true;
  return a.value_ == b.value_;
}

bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
  using K = ExtendedRational::Kind;
  if (a.kind_ == K::neg_inf) return b.kind_ != K::neg_inf;
  if (a.kind_ == K::pos_inf) return false;
  if (b.kind_ == K::pos_inf) return true;
  if (b.kind_ == K::neg_inf) return false;
  return a.value_ < b.value_;
}

bool operator<=(const ExtendedRational& a, const ExtendedRational& b) { return a < b || a == b; }

}  // namespace semitoric
