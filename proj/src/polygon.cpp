#include "semitoric/polygon.hpp"

#include <algorithm>

namespace semitoric {

Polygon Polygon::make(PiecewiseLinear bottom, PiecewiseLinear top) {
  if (bottom.xmin() != top.xmin() || bottom.xmax() != top.xmax())
    fail(Errc::invalid_input, "bottom/top domains differ");
  if (!bottom.slopes_nondecreasing())
    fail(Errc::not_convex, "bottom boundary is not convex");
  if (!top.slopes_nonincreasing())
    fail(Errc::not_convex, "top boundary is not concave");
  PiecewiseLinear diff = top - bottom;
  for (std::size_t i = 0; i < diff.breakpoints().size(); ++i)
    if (diff.values()[i].sign() < 0)
      fail(Errc::empty_interior,
           "top below bottom at x=" + diff.breakpoints()[i].str());
  // diff is concave; on unbounded rays it must not decrease towards infinity.
  if (diff.left_slope() && diff.left_slope()->sign() > 0)
    fail(Errc::empty_interior, "top meets bottom at finite x towards -inf");
  if (diff.right_slope() && diff.right_slope()->sign() < 0)
    fail(Errc::empty_interior, "top meets bottom at finite x towards +inf");
  return Polygon(std::move(bottom), std::move(top));
}

std::pair<Rational, Rational> Polygon::vertical_slice(const Rational& x) const {
  return {bottom_.value(x), top_.value(x)};
}

namespace {

struct Interval {
  Rational lo, hi;
  bool empty = false;
};

// {x in [g0, g1] : chain(x) <= y} for the linear chain piece with endpoint
// values c0, c1 (flip for >= y).
Interval sublevel_interval(const Rational& g0, const Rational& g1, const Rational& c0,
                           const Rational& c1, const Rational& y, bool below) {
  Rational v0 = below ? c0 : -c0;
  Rational v1 = below ? c1 : -c1;
  Rational w = below ? y : -y;
  Interval full{g0, g1};
  if (v0 == v1) {
    if (v0 <= w) return full;
    return {g0, g1, true};
  }
  Rational xc = g0 + (w - v0) * (g1 - g0) / (v1 - v0);
  if (v1 > v0) {  // rising
    if (w < v0) return {g0, g1, true};
    if (w >= v1) return full;
    return {g0, xc};
  }
  if (w < v1) return {g0, g1, true};
  if (w >= v0) return full;
  return {xc, g1};
}

}  // namespace

Rational Polygon::horizontal_slice(const Rational& y,
                                   const std::optional<Truncation>& trunc) const {
  ExtendedRational lo = xmin(), hi = xmax();
  if (trunc) {
    if (lo < ExtendedRational(trunc->lo)) lo = trunc->lo;
    if (ExtendedRational(trunc->hi) < hi) hi = trunc->hi;
    if (hi < lo) fail(Errc::out_of_domain, "truncation outside polygon domain");
  } else if (!bounded()) {
    fail(Errc::unbounded_slice, "horizontal slice of an unbounded polygon needs a truncation");
  }
  std::vector<Rational> grid{lo.finite()};
  for (const Rational& x : bottom_.breakpoints())
    if (lo.finite() < x && x < hi.finite()) grid.push_back(x);
  for (const Rational& x : top_.breakpoints())
    if (lo.finite() < x && x < hi.finite()) grid.push_back(x);
  grid.push_back(hi.finite());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Rational total(0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Rational& g0 = grid[i - 1];
    const Rational& g1 = grid[i];
    Interval below = sublevel_interval(g0, g1, bottom_.value(g0), bottom_.value(g1), y, true);
    if (below.empty) continue;
    Interval above = sublevel_interval(g0, g1, top_.value(g0), top_.value(g1), y, false);
    if (above.empty) continue;
    Rational a = max(below.lo, above.lo);
    Rational b = min(below.hi, above.hi);
    if (a < b) total += b - a;
  }
  return total;
}

Rational Polygon::area(const std::optional<Truncation>& trunc) const {
  ExtendedRational lo = xmin(), hi = xmax();
  if (trunc) {
    if (lo < ExtendedRational(trunc->lo)) lo = trunc->lo;
    if (ExtendedRational(trunc->hi) < hi) hi = trunc->hi;
    if (hi < lo) fail(Errc::out_of_domain, "truncation outside polygon domain");
  } else if (!bounded()) {
    fail(Errc::unbounded_area, "area of an unbounded polygon needs a truncation");
  }
  PiecewiseLinear diff = top_ - bottom_;
  return diff.integral(lo.finite(), hi.finite());
}

std::vector<Point2> Polygon::vertices() const {
  std::vector<Point2> vs;
  auto chain_vertices = [&](const PiecewiseLinear& f) {
    const auto& bx = f.breakpoints();
    std::vector<Rational> slopes = f.segment_slopes();
    for (std::size_t i = 0; i < bx.size(); ++i) {
      bool endpoint = (i == 0 && f.xmin().is_finite()) ||
                      (i + 1 == bx.size() && f.xmax().is_finite());
      bool kink = false;
      if (!endpoint) {
        Rational before = i == 0 ? *f.left_slope() : slopes[i - 1];
        Rational after = i + 1 == bx.size() ? *f.right_slope() : slopes[i];
        kink = before != after;
      }
      if (endpoint || kink) vs.push_back({bx[i], f.values()[i]});
    }
  };
  chain_vertices(bottom_);
  chain_vertices(top_);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

Polygon::CornerWeights Polygon::corner_weights(const Point2& v) const {
  std::vector<Point2> vs = vertices();
  if (std::find(vs.begin(), vs.end(), v) == vs.end())
    fail(Errc::not_a_vertex, "(" + v.x.str() + ", " + v.y.str() + ") is not a vertex");

  bool at_xmin = xmin().is_finite() && v.x == xmin().finite();
  bool at_xmax = xmax().is_finite() && v.x == xmax().finite();
  if (at_xmin && at_xmax)
    fail(Errc::not_a_vertex, "degenerate zero-width polygon has no corner sectors");

  Rational bx = bottom_.value(v.x), tx = top_.value(v.x);
  IntVec2 out, in_rev;
  if (at_xmin) {
    if (bx == tx) {  // corner
      out = primitive_direction(1, bottom_.slope_right(v.x));
      in_rev = primitive_direction(1, top_.slope_right(v.x));
    } else if (v.y == bx) {  // wall below, bottom end
      out = primitive_direction(1, bottom_.slope_right(v.x));
      in_rev = {0, 1};
    } else {  // wall below, top end
      out = {0, -1};
      in_rev = primitive_direction(1, top_.slope_right(v.x));
    }
  } else if (at_xmax) {
    if (bx == tx) {
      out = primitive_direction(-1, -top_.slope_left(v.x));
      in_rev = primitive_direction(-1, -bottom_.slope_left(v.x));
    } else if (v.y == bx) {
      out = {0, 1};
      in_rev = primitive_direction(-1, -bottom_.slope_left(v.x));
    } else {
      out = primitive_direction(-1, -top_.slope_left(v.x));
      in_rev = {0, -1};
    }
  } else if (v.y == bx) {
    out = primitive_direction(1, bottom_.slope_right(v.x));
    in_rev = primitive_direction(-1, -bottom_.slope_left(v.x));
  } else {
    out = primitive_direction(-1, -top_.slope_left(v.x));
    in_rev = primitive_direction(1, top_.slope_right(v.x));
  }
  std::int64_t det = out.x * in_rev.y - out.y * in_rev.x;
  return {out.x, in_rev.x, det == 1 || det == -1, out, in_rev};
}

Polygon Polygon::truncated(const ExtendedRational& a, const ExtendedRational& b) const {
  return Polygon(bottom_.restricted(a, b), top_.restricted(a, b));
}

Polygon Polygon::t_sheared(const TElement& t) const {
  return Polygon(bottom_.t_sheared(t), top_.t_sheared(t));
}

}  // namespace semitoric
