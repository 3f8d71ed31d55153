#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "semitoric/piecewise_linear.hpp"

namespace semitoric {

/// Convex rational polygon, possibly unbounded in the x-direction,
/// represented by its bottom (convex) and top (concave) boundary graphs over
/// a common x-interval. Vertical edges occur only at a finite xmin/xmax.
class Polygon {
 public:
  /// Validates convexity (not_convex) and bottom <= top (empty_interior).
  static Polygon make(PiecewiseLinear bottom, PiecewiseLinear top);

  const ExtendedRational& xmin() const { return bottom_.xmin(); }
  const ExtendedRational& xmax() const { return bottom_.xmax(); }
  const PiecewiseLinear& bottom() const { return bottom_; }
  const PiecewiseLinear& top() const { return top_; }
  bool bounded() const { return xmin().is_finite() && xmax().is_finite(); }

  /// (bottom(x), top(x)); the vertical slice is their difference.
  std::pair<Rational, Rational> vertical_slice(const Rational& x) const;

  struct Truncation {
    Rational lo, hi;
  };

  /// Lebesgue length of {x in [lo, hi] : bottom(x) <= y <= top(x)}.
  /// A truncation is required when the polygon is unbounded.
  Rational horizontal_slice(const Rational& y,
                            const std::optional<Truncation>& trunc = {}) const;
  Rational area(const std::optional<Truncation>& trunc = {}) const;

  /// Boundary vertices with multiplicity one, ordered by x then y.
  std::vector<Point2> vertices() const;

  /// Primitive directions of the two boundary edges leaving a vertex,
  /// following the counterclockwise orientation: the outgoing edge first,
  /// then the reversed incoming edge. The first components are the isotropy
  /// weights of the circle action at the corresponding fixed point.
  struct CornerWeights {
    std::int64_t a, b;
    bool unimodular;
    IntVec2 edge_out, edge_in_rev;
  };
  CornerWeights corner_weights(const Point2& v) const;

  Polygon truncated(const ExtendedRational& a, const ExtendedRational& b) const;
  Polygon t_sheared(const TElement& t) const;

  friend bool operator==(const Polygon& p, const Polygon& q) {
    return p.bottom_ == q.bottom_ && p.top_ == q.top_;
  }
  friend bool operator!=(const Polygon& p, const Polygon& q) { return !(p == q); }

 private:
  Polygon(PiecewiseLinear bottom, PiecewiseLinear top)
      : bottom_(std::move(bottom)), top_(std::move(top)) {}

  PiecewiseLinear bottom_, top_;
};

}  // namespace semitoric
