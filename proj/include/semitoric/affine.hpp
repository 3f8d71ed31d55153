#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semitoric/rational.hpp"

namespace semitoric {

/// Element of GL(2,Z): integer 2x2 matrix with determinant +-1.
struct UnimodularMatrix {
  std::int64_t a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

  static UnimodularMatrix identity() { return {}; }
  /// The monodromy shear [[1, 0], [k, 1]] around a focus-focus value whose
  /// fibre holds k critical points.
  static UnimodularMatrix monodromy_power(std::int64_t k) { return {1, 0, k, 1}; }
  static UnimodularMatrix checked(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  std::int64_t det() const { return a * d - b * c; }
  UnimodularMatrix inverse() const;

  friend UnimodularMatrix operator*(const UnimodularMatrix& m, const UnimodularMatrix& n);
  friend bool operator==(const UnimodularMatrix& m, const UnimodularMatrix& n) {
    return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
  }
};

/// Element of Aff(2,Z) = GL(2,Z) x R^2 acting by p -> linear * p + translation.
struct IntegralAffineMap {
  UnimodularMatrix linear;
  Rational tx, ty;

  static IntegralAffineMap identity() { return {}; }
  IntegralAffineMap inverse() const;

  friend IntegralAffineMap operator*(const IntegralAffineMap& f, const IntegralAffineMap& g);
  friend bool operator==(const IntegralAffineMap& f, const IntegralAffineMap& g) {
    return f.linear == g.linear && f.tx == g.tx && f.ty == g.ty;
  }
};

Point2 apply_affine(const IntegralAffineMap& map, const Point2& p);

/// Piecewise transform t^n_L: identity on the half-plane left of the vertical
/// line x = line_x, the shear T^n anchored on that line to the right of it.
struct VerticalShear {
  Rational line_x;
  std::int64_t exponent = 0;
};

Point2 apply_vertical_shear(const VerticalShear& t, const Point2& p);

/// Composition of the given shears. The actions commute, so the list order
/// does not matter.
Point2 apply_multi_shear(std::span<const VerticalShear> shears, const Point2& p);
Point2 apply_multi_shear(const std::vector<VerticalShear>& shears, const Point2& p);

/// Element of the subgroup of Aff(2,Z) preserving every oriented vertical
/// line: (x, y) -> (x, y + k x + c).
struct TElement {
  std::int64_t shear_k = 0;
  Rational offset;

  static TElement identity() { return {}; }
  TElement inverse() const { return {-shear_k, -offset}; }

  friend bool operator==(const TElement& a, const TElement& b) {
    return a.shear_k == b.shear_k && a.offset == b.offset;
  }
};

/// Group law: acting with the result equals acting with b, then with a.
TElement compose_t(const TElement& a, const TElement& b);
Point2 apply_t(const TElement& t, const Point2& p);

/// Primitive integer direction of a rational vector (dx, dy) != 0, preserving
/// orientation.
struct IntVec2 {
  std::int64_t x = 0, y = 0;
  friend bool operator==(const IntVec2&, const IntVec2&) = default;
};
IntVec2 primitive_direction(const Rational& dx, const Rational& dy);

}  // namespace semitoric
