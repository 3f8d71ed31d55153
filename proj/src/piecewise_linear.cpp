#include "semitoric/piecewise_linear.hpp"

#include <algorithm>

namespace semitoric {

PiecewiseLinear PiecewiseLinear::make(ExtendedRational xmin, ExtendedRational xmax,
                                      std::vector<Rational> breakpoints,
                                      std::vector<Rational> values,
                                      std::optional<Rational> left_slope,
                                      std::optional<Rational> right_slope) {
  if (breakpoints.empty()) fail(Errc::invalid_input, "piecewise-linear needs a breakpoint");
  if (breakpoints.size() != values.size())
    fail(Errc::invalid_input, "breakpoints/values size mismatch");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i - 1] < breakpoints[i]))
      fail(Errc::invalid_input, "breakpoints not strictly increasing");
  if (xmax < xmin) fail(Errc::invalid_input, "empty domain");
  if (xmin.is_finite()) {
    if (left_slope) fail(Errc::invalid_input, "left slope on a bounded side");
    if (breakpoints.front() != xmin.finite())
      fail(Errc::invalid_input, "first breakpoint must equal finite xmin");
  } else if (!left_slope) {
    fail(Errc::invalid_input, "unbounded left side needs a slope");
  }
  if (xmax.is_finite()) {
    if (right_slope) fail(Errc::invalid_input, "right slope on a bounded side");
    if (breakpoints.back() != xmax.finite())
      fail(Errc::invalid_input, "last breakpoint must equal finite xmax");
  } else if (!right_slope) {
    fail(Errc::invalid_input, "unbounded right side needs a slope");
  }

  PiecewiseLinear f;
  f.xmin_ = std::move(xmin);
  f.xmax_ = std::move(xmax);
  f.x_ = std::move(breakpoints);
  f.v_ = std::move(values);
  f.left_slope_ = std::move(left_slope);
  f.right_slope_ = std::move(right_slope);
  return f;
}

PiecewiseLinear PiecewiseLinear::constant(const ExtendedRational& xmin,
                                          const ExtendedRational& xmax, const Rational& value) {
  Rational anchor = xmin.is_finite() ? xmin.finite() : (xmax.is_finite() ? xmax.finite() : Rational(0));
  std::optional<Rational> ls, rs;
  if (!xmin.is_finite()) ls = Rational(0);
  if (!xmax.is_finite()) rs = Rational(0);
  std::vector<Rational> bps{anchor}, vals{value};
  if (xmin.is_finite() && xmax.is_finite() && xmin != xmax) {
    bps.push_back(xmax.finite());
    vals.push_back(value);
  }
  return make(xmin, xmax, std::move(bps), std::move(vals), ls, rs);
}

bool PiecewiseLinear::contains(const Rational& x) const {
  if (xmin_.is_finite() && x < xmin_.finite()) return false;
  if (xmax_.is_finite() && x > xmax_.finite()) return false;
  return true;
}

Rational PiecewiseLinear::value(const Rational& x) const {
  if (!contains(x)) fail(Errc::out_of_domain, "evaluation outside domain at x=" + x.str());
  if (x < x_.front()) return v_.front() + *left_slope_ * (x - x_.front());
  if (x > x_.back()) return v_.back() + *right_slope_ * (x - x_.back());
  auto it = std::lower_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (*it == x) return v_[i];
  // x is strictly between x_[i-1] and x_[i]
  const Rational& x0 = x_[i - 1];
  const Rational& x1 = x_[i];
  return v_[i - 1] + (v_[i] - v_[i - 1]) / (x1 - x0) * (x - x0);
}

Rational PiecewiseLinear::slope_right(const Rational& x) const {
  if (!contains(x) || (xmax_.is_finite() && x == xmax_.finite()))
    fail(Errc::out_of_domain, "no segment right of x=" + x.str());
  if (x >= x_.back()) return *right_slope_;
  if (x < x_.front()) return *left_slope_;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());  // first bp > x
  return (v_[i] - v_[i - 1]) / (x_[i] - x_[i - 1]);
}

Rational PiecewiseLinear::slope_left(const Rational& x) const {
  if (!contains(x) || (xmin_.is_finite() && x == xmin_.finite()))
    fail(Errc::out_of_domain, "no segment left of x=" + x.str());
  if (x <= x_.front()) return *left_slope_;
  if (x > x_.back()) return *right_slope_;
  auto it = std::lower_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());  // first bp >= x
  return (v_[i] - v_[i - 1]) / (x_[i] - x_[i - 1]);
}

std::vector<Rational> PiecewiseLinear::segment_slopes() const {
  std::vector<Rational> s;
  s.reserve(x_.size() - 1);
  for (std::size_t i = 1; i < x_.size(); ++i)
    s.push_back((v_[i] - v_[i - 1]) / (x_[i] - x_[i - 1]));
  return s;
}

std::vector<Rational> PiecewiseLinear::slope_sequence() const {
  std::vector<Rational> s;
  if (left_slope_) s.push_back(*left_slope_);
  for (const Rational& m : segment_slopes()) s.push_back(m);
  if (right_slope_) s.push_back(*right_slope_);
  return s;
}

bool PiecewiseLinear::slopes_nondecreasing() const {
  std::vector<Rational> s = slope_sequence();
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] < s[i - 1]) return false;
  return true;
}

bool PiecewiseLinear::slopes_nonincreasing() const {
  std::vector<Rational> s = slope_sequence();
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] > s[i - 1]) return false;
  return true;
}

PiecewiseLinear PiecewiseLinear::canonicalized() const {
  std::vector<Rational> bx, bv;
  std::vector<Rational> slopes = segment_slopes();
  auto slope_before = [&](std::size_t i) { return i == 0 ? *left_slope_ : slopes[i - 1]; };
  auto slope_after = [&](std::size_t i) {
    return i + 1 == x_.size() ? *right_slope_ : slopes[i];
  };
  for (std::size_t i = 0; i < x_.size(); ++i) {
    bool keep;
    if ((i == 0 && xmin_.is_finite()) || (i + 1 == x_.size() && xmax_.is_finite()))
      keep = true;  // domain markers
    else
      keep = slope_before(i) != slope_after(i);
    if (keep) {
      bx.push_back(x_[i]);
      bv.push_back(v_[i]);
    }
  }
  if (bx.empty()) {
    // Globally affine on a doubly unbounded domain: anchor at x = 0.
    Rational anchor(0);
    bx.push_back(anchor);
    bv.push_back(value(anchor));
  }
  PiecewiseLinear f;
  f.xmin_ = xmin_;
  f.xmax_ = xmax_;
  f.x_ = std::move(bx);
  f.v_ = std::move(bv);
  f.left_slope_ = left_slope_;
  f.right_slope_ = right_slope_;
  return f;
}

PiecewiseLinear PiecewiseLinear::with_breakpoint(const Rational& x) const {
  if (!contains(x)) fail(Errc::out_of_domain, "breakpoint outside domain");
  if (std::binary_search(x_.begin(), x_.end(), x)) return *this;
  PiecewiseLinear f = *this;
  auto it = std::lower_bound(f.x_.begin(), f.x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - f.x_.begin());
  f.x_.insert(f.x_.begin() + i, x);
  f.v_.insert(f.v_.begin() + i, value(x));
  return f;
}

PiecewiseLinear PiecewiseLinear::restricted(const ExtendedRational& a,
                                            const ExtendedRational& b) const {
  ExtendedRational lo = xmin_ < a ? a : xmin_;
  ExtendedRational hi = b < xmax_ ? b : xmax_;
  if (hi < lo) fail(Errc::out_of_domain, "restriction to an empty interval");
  PiecewiseLinear f = *this;
  if (lo.is_finite()) f = f.with_breakpoint(lo.finite());
  if (hi.is_finite()) f = f.with_breakpoint(hi.finite());
  std::vector<Rational> bx, bv;
  for (std::size_t i = 0; i < f.x_.size(); ++i) {
    if (lo.is_finite() && f.x_[i] < lo.finite()) continue;
    if (hi.is_finite() && hi.finite() < f.x_[i]) continue;
    bx.push_back(f.x_[i]);
    bv.push_back(f.v_[i]);
  }
  PiecewiseLinear r;
  r.xmin_ = lo;
  r.xmax_ = hi;
  r.x_ = std::move(bx);
  r.v_ = std::move(bv);
  if (!lo.is_finite()) r.left_slope_ = left_slope_;
  if (!hi.is_finite()) r.right_slope_ = right_slope_;
  return r;
}

PiecewiseLinear PiecewiseLinear::negated() const {
  PiecewiseLinear f = *this;
  for (Rational& v : f.v_) v = -v;
  if (f.left_slope_) f.left_slope_ = -*f.left_slope_;
  if (f.right_slope_) f.right_slope_ = -*f.right_slope_;
  return f;
}

PiecewiseLinear PiecewiseLinear::t_sheared(const TElement& t) const {
  PiecewiseLinear f = *this;
  Rational k(t.shear_k);
  for (std::size_t i = 0; i < f.x_.size(); ++i) f.v_[i] += k * f.x_[i] + t.offset;
  if (f.left_slope_) f.left_slope_ = *f.left_slope_ + k;
  if (f.right_slope_) f.right_slope_ = *f.right_slope_ + k;
  return f;
}

PiecewiseLinear PiecewiseLinear::vertical_sheared(const VerticalShear& s) const {
  if (s.exponent == 0) return *this;
  if (xmax_.is_finite() && xmax_.finite() <= s.line_x) return *this;
  Rational n(s.exponent);
  PiecewiseLinear f = *this;
  if (contains(s.line_x)) f = f.with_breakpoint(s.line_x);
  for (std::size_t i = 0; i < f.x_.size(); ++i)
    if (f.x_[i] > s.line_x) f.v_[i] += n * (f.x_[i] - s.line_x);
  if (f.left_slope_ && f.x_.front() > s.line_x) f.left_slope_ = *f.left_slope_ + n;
  if (f.right_slope_) f.right_slope_ = *f.right_slope_ + n;
  return f;
}

Rational PiecewiseLinear::integral(const Rational& a, const Rational& b) const {
  if (b < a) fail(Errc::invalid_input, "reversed integration bounds");
  if (!contains(a) || !contains(b)) fail(Errc::out_of_domain, "integration outside domain");
  std::vector<Rational> grid{a};
  for (const Rational& x : x_)
    if (a < x && x < b) grid.push_back(x);
  grid.push_back(b);
  Rational total(0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    Rational w = grid[i] - grid[i - 1];
    total += (value(grid[i - 1]) + value(grid[i])) * w / Rational(2);
  }
  return total;
}

namespace {

std::vector<Rational> merged_breakpoints(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  std::vector<Rational> m;
  m.reserve(f.breakpoints().size() + g.breakpoints().size());
  std::merge(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
             g.breakpoints().end(), std::back_inserter(m));
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

}  // namespace

PiecewiseLinear operator+(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  if (f.xmin_ != g.xmin_ || f.xmax_ != g.xmax_)
    fail(Errc::invalid_input, "domain mismatch in piecewise-linear sum");
  std::vector<Rational> bx = merged_breakpoints(f, g), bv;
  bv.reserve(bx.size());
  for (const Rational& x : bx) bv.push_back(f.value(x) + g.value(x));
  std::optional<Rational> ls, rs;
  if (f.left_slope_) ls = *f.left_slope_ + *g.left_slope_;
  if (f.right_slope_) rs = *f.right_slope_ + *g.right_slope_;
  return PiecewiseLinear::make(f.xmin_, f.xmax_, std::move(bx), std::move(bv), ls, rs);
}

PiecewiseLinear operator-(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  return f + g.negated();
}

bool operator==(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  if (f.xmin_ != g.xmin_ || f.xmax_ != g.xmax_) return false;
  PiecewiseLinear cf = f.canonicalized(), cg = g.canonicalized();
  return cf.x_ == cg.x_ && cf.v_ == cg.v_ && cf.left_slope_ == cg.left_slope_ &&
         cf.right_slope_ == cg.right_slope_;
}

}  // namespace semitoric
