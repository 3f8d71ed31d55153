#include "semitoric/affine.hpp"

#include <cstdlib>

namespace semitoric {

UnimodularMatrix UnimodularMatrix::checked(std::int64_t a, std::int64_t b, std::int64_t c,
                                           std::int64_t d) {
  UnimodularMatrix m{a, b, c, d};
  if (m.det() != 1 && m.det() != -1)
    fail(Errc::invalid_input, "matrix is not unimodular");
  return m;
}

UnimodularMatrix UnimodularMatrix::inverse() const {
  std::int64_t s = det();  // +-1
  return {s * d, -s * b, -s * c, s * a};
}

UnimodularMatrix operator*(const UnimodularMatrix& m, const UnimodularMatrix& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

IntegralAffineMap IntegralAffineMap::inverse() const {
  UnimodularMatrix li = linear.inverse();
  Rational ix = -(Rational(li.a) * tx + Rational(li.b) * ty);
  Rational iy = -(Rational(li.c) * tx + Rational(li.d) * ty);
  return {li, ix, iy};
}

IntegralAffineMap operator*(const IntegralAffineMap& f, const IntegralAffineMap& g) {
  Point2 t = apply_affine(f, {g.tx, g.ty});
  return {f.linear * g.linear, t.x, t.y};
}

Point2 apply_affine(const IntegralAffineMap& map, const Point2& p) {
  const UnimodularMatrix& m = map.linear;
  return {Rational(m.a) * p.x + Rational(m.b) * p.y + map.tx,
          Rational(m.c) * p.x + Rational(m.d) * p.y + map.ty};
}

Point2 apply_vertical_shear(const VerticalShear& t, const Point2& p) {
  if (p.x <= t.line_x) return p;
  return {p.x, p.y + Rational(t.exponent) * (p.x - t.line_x)};
}

Point2 apply_multi_shear(std::span<const VerticalShear> shears, const Point2& p) {
  Point2 q = p;
  for (const VerticalShear& t : shears) q = apply_vertical_shear(t, q);
  return q;
}

Point2 apply_multi_shear(const std::vector<VerticalShear>& shears, const Point2& p) {
  return apply_multi_shear(std::span<const VerticalShear>(shears), p);
}

TElement compose_t(const TElement& a, const TElement& b) {
  return {a.shear_k + b.shear_k, a.offset + b.offset};
}

Point2 apply_t(const TElement& t, const Point2& p) {
  return {p.x, p.y + Rational(t.shear_k) * p.x + t.offset};
}

IntVec2 primitive_direction(const Rational& dx, const Rational& dy) {
  if (dx.is_zero() && dy.is_zero())
    fail(Errc::invalid_input, "zero direction has no primitive vector");
  // Clear denominators, then divide by the gcd.
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), dx.den().get_mpz_t(), dy.den().get_mpz_t());
  mpz_class ix = dx.num() * (l / dx.den());
  mpz_class iy = dy.num() * (l / dy.den());
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), ix.get_mpz_t(), iy.get_mpz_t());
  ix /= g;
  iy /= g;
  if (!ix.fits_slong_p() || !iy.fits_slong_p())
    fail(Errc::invalid_input, "primitive direction overflows");
  return {ix.get_si(), iy.get_si()};
}

}  // namespace semitoric
