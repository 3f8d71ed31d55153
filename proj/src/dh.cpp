#include "semitoric/dh.hpp"

#include <algorithm>

namespace semitoric {

DHFunction rho_J(const SemitoricPolygon& sp) {
  PiecewiseLinear density = sp.polygon().top() - sp.polygon().bottom();
  for (const Cut& c : sp.cuts())
    if (density.contains(c.node.x)) density = density.with_breakpoint(c.node.x);
  return {DHAxis::J, density.canonicalized()};
}

namespace {

struct BoundaryContribution {
  Rational e;          // corner contribution, 0 at a pure cut artifact
  bool vertex = false;
};

// Elliptic contribution of the top or bottom boundary at an interior
// abscissa. The incoming right-hand edge is pulled back through the
// monodromy shear of the cuts ending there (signed multiplicity), so a kink
// produced by the cut alone yields no contribution.
BoundaryContribution boundary_corner(const PiecewiseLinear& chain, const Rational& x,
                                     std::int64_t signed_k, bool top) {
  Rational s_left = chain.slope_left(x);
  Rational s_right = chain.slope_right(x);
  if (s_left == s_right && signed_k == 0) return {Rational(0), false};
  IntVec2 out, in_rev;
  if (top) {
    out = primitive_direction(-1, -s_left);
    in_rev = primitive_direction(1, s_right);
  } else {
    out = primitive_direction(1, s_right);
    in_rev = primitive_direction(-1, -s_left);
  }
  // Express the right-side germ in the chart extended from the left.
  IntVec2& right_edge = top ? in_rev : out;
  right_edge.y += signed_k * right_edge.x;
  if (out.x == -in_rev.x && out.y == -in_rev.y) return {Rational(0), false};
  std::int64_t det = out.x * in_rev.y - out.y * in_rev.x;
  if (det != 1 && det != -1)
    fail(Errc::weight_extraction_failed,
         std::string(top ? "top" : "bottom") + " corner at x=" + x.str() +
             " is not unimodular off the cut lines");
  std::int64_t ab = out.x * in_rev.x;
  return {Rational(-1) / Rational(ab), true};
}

}  // namespace

std::vector<JumpRecord> jumps(const SemitoricPolygon& sp) {
  const Polygon& poly = sp.polygon();
  std::vector<Rational> xs;
  auto collect_kinks = [&](const PiecewiseLinear& chain) {
    std::vector<Rational> slopes = chain.segment_slopes();
    const auto& bx = chain.breakpoints();
    for (std::size_t i = 0; i < bx.size(); ++i) {
      bool interior = ExtendedRational(bx[i]) > poly.xmin() &&
                      ExtendedRational(bx[i]) < poly.xmax();
      if (!interior) continue;
      Rational before = i == 0 ? *chain.left_slope() : slopes[i - 1];
      Rational after = i + 1 == bx.size() ? *chain.right_slope() : slopes[i];
      if (before != after) xs.push_back(bx[i]);
    }
  };
  collect_kinks(poly.bottom());
  collect_kinks(poly.top());
  for (const Cut& c : sp.cuts()) xs.push_back(c.node.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<JumpRecord> records;
  for (const Rational& x : xs) {
    if (!(ExtendedRational(x) > poly.xmin()) || !(ExtendedRational(x) < poly.xmax())) continue;
    std::int64_t k_up = cut_multiplicity_at(sp.cuts(), x, +1);
    std::int64_t k_down = cut_multiplicity_at(sp.cuts(), x, -1);
    Rational measured = (poly.top().slope_right(x) - poly.top().slope_left(x)) -
                        (poly.bottom().slope_right(x) - poly.bottom().slope_left(x));
    BoundaryContribution top = boundary_corner(poly.top(), x, k_up, true);
    BoundaryContribution bottom = boundary_corner(poly.bottom(), x, -k_down, false);
    JumpRecord rec;
    rec.x = x;
    rec.measured = measured;
    rec.k_sum = k_up + k_down;
    rec.e_plus = top.e;
    rec.e_minus = bottom.e;
    rec.predicted = Rational(-rec.k_sum) - rec.e_plus - rec.e_minus;
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

struct CellTerm {
  Rational lo, hi;    // support interval, lo <= hi
  Rational a0, a1;    // value a0 + a1 * y on the support
};

void add_term(std::vector<CellTerm>& terms, const Rational& p, const Rational& q,
              const Rational& a0, const Rational& a1) {
  if (p == q) return;  // point intervals contribute nothing
  if (p < q) terms.push_back({p, q, a0, a1});
  else terms.push_back({q, p, a0, a1});
}

}  // namespace

DHFunction rho_K(const SemitoricPolygon& sp, const Rational& a, const Rational& b) {
  if (b < a) fail(Errc::invalid_input, "reversed truncation interval");
  const Polygon& poly = sp.polygon();
  ExtendedRational lo(a), hi(b);
  if (lo < poly.xmin()) lo = poly.xmin();
  if (poly.xmax() < hi) hi = poly.xmax();
  if (!lo.is_finite() || !hi.is_finite())
    fail(Errc::unbounded_truncation, "rho_K needs a bounded truncation");
  if (hi < lo) fail(Errc::out_of_domain, "truncation outside polygon domain");

  std::vector<Rational> grid{lo.finite()};
  auto add_interior = [&](const Rational& x) {
    if (lo.finite() < x && x < hi.finite()) grid.push_back(x);
  };
  for (const Rational& x : poly.bottom().breakpoints()) add_interior(x);
  for (const Rational& x : poly.top().breakpoints()) add_interior(x);
  for (const Cut& c : sp.cuts()) add_interior(c.node.x);
  grid.push_back(hi.finite());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Cell-sum: over each cell the density splits into the bottom-edge sweep,
  // the full-width plateau, and the top-edge sweep. The plateau term is
  // signed by the direction in which the cell interior is traversed.
  std::vector<CellTerm> terms;
  Rational y_min, y_max;
  bool have_range = false;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Rational& x0 = grid[i - 1];
    const Rational& x1 = grid[i];
    Rational h = x1 - x0;
    Rational ym = poly.bottom().value(x0), yM = poly.bottom().value(x1);
    Rational zm = poly.top().value(x0), zM = poly.top().value(x1);
    Rational cell_lo = min(ym, yM), cell_hi = max(zm, zM);
    if (!have_range) {
      y_min = cell_lo;
      y_max = cell_hi;
      have_range = true;
    } else {
      y_min = min(y_min, cell_lo);
      y_max = max(y_max, cell_hi);
    }
    Rational alpha_bot = (yM - ym) / h;
    Rational alpha_top = (zM - zm) / h;
    if (!alpha_bot.is_zero()) {
      Rational inv = Rational(1) / alpha_bot.abs();
      add_term(terms, ym, yM, -inv * ym, inv);  // (y - ym) / |alpha|
    }
    if (yM != zm) {
      Rational plateau = zm > yM ? h : -h;
      add_term(terms, yM, zm, plateau, Rational(0));
    }
    if (!alpha_top.is_zero()) {
      Rational inv = Rational(1) / alpha_top.abs();
      add_term(terms, zm, zM, inv * zM, -inv);  // (zM - y) / |alpha|
    }
  }

  if (terms.empty()) {
    Rational at = have_range ? y_min : Rational(0);
    PiecewiseLinear zero = PiecewiseLinear::make(ExtendedRational(at), ExtendedRational(at),
                                                 {at}, {Rational(0)});
    return {DHAxis::K, zero};
  }

  std::vector<Rational> ys;
  for (const CellTerm& t : terms) {
    ys.push_back(t.lo);
    ys.push_back(t.hi);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // Per-segment slope and midpoint value, then breakpoint values by
  // continuity. The terms are only defined almost everywhere (their closed
  // supports overlap at endpoints), so midpoints are the faithful samples.
  std::size_t n = ys.size();
  std::vector<Rational> seg_value(n - 1, Rational(0)), seg_slope(n - 1, Rational(0));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    Rational mid = (ys[j] + ys[j + 1]) / Rational(2);
    for (const CellTerm& t : terms) {
      if (t.lo < mid && mid < t.hi) {
        seg_value[j] += t.a0 + t.a1 * mid;
        seg_slope[j] += t.a1;
      }
    }
  }
  std::vector<Rational> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational from_left, from_right;
    bool has_left = j > 0, has_right = j + 1 < n;
    if (has_left) {
      Rational mid = (ys[j - 1] + ys[j]) / Rational(2);
      from_left = seg_value[j - 1] + seg_slope[j - 1] * (ys[j] - mid);
    }
    if (has_right) {
      Rational mid = (ys[j] + ys[j + 1]) / Rational(2);
      from_right = seg_value[j] + seg_slope[j] * (ys[j] - mid);
    }
    if (has_left && has_right && from_left != from_right)
      fail(Errc::internal, "rho_K cell sum is discontinuous at y=" + ys[j].str());
    values[j] = has_left ? from_left : from_right;
  }
  PiecewiseLinear density = PiecewiseLinear::make(ExtendedRational(ys.front()),
                                                  ExtendedRational(ys.back()), ys, values)
                                .canonicalized();
  return {DHAxis::K, density};
}

Rational rho_K_oracle(const SemitoricPolygon& sp, const Rational& a, const Rational& b,
                      const Rational& y) {
  if (b < a) fail(Errc::invalid_input, "reversed truncation interval");
  return sp.polygon().horizontal_slice(y, Polygon::Truncation{a, b});
}

CompactnessReport compactness_report(const SemitoricPolygon& sp) {
  const Polygon& poly = sp.polygon();
  CompactnessReport r;
  r.j_bounded_below = poly.xmin().is_finite();
  r.j_bounded_above = poly.xmax().is_finite();
  r.focus_fibre_count = static_cast<std::int64_t>(sp.cut_count());
  r.total_multiplicity = sp.cuts().total_multiplicity();
  r.has_rank_zero_value = r.focus_fibre_count > 0 || !poly.vertices().empty();

  bool degenerate_width = poly.xmin().is_finite() && poly.xmax().is_finite() &&
                          poly.xmin() == poly.xmax();
  PiecewiseLinear rho = rho_J(sp).density;
  if (r.j_bounded_below && !degenerate_width) {
    r.rho_slope_at_min = rho.slope_right(poly.xmin().finite());
    auto [blo, bhi] = poly.vertical_slice(poly.xmin().finite());
    r.unique_minimum = blo == bhi;
  }
  if (r.j_bounded_above && !degenerate_width) {
    r.rho_slope_at_max = rho.slope_left(poly.xmax().finite());
    auto [blo, bhi] = poly.vertical_slice(poly.xmax().finite());
    r.unique_maximum = blo == bhi;
  }

  if (r.has_rank_zero_value) {
    r.semibounded_fires = true;
    r.reasons.push_back("rank-zero critical value present: J is bounded below or above");
  }
  Rational k_total(r.total_multiplicity);
  if (r.rho_slope_at_min && k_total > *r.rho_slope_at_min) {
    r.multiplicity_bound_fires = true;
    r.reasons.push_back("total focus-focus multiplicity " + k_total.str() +
                        " exceeds rho_J'(J_min+0) = " + r.rho_slope_at_min->str() +
                        ": the manifold is compact");
  }
  if (r.rho_slope_at_max && k_total > -*r.rho_slope_at_max) {
    r.multiplicity_bound_fires = true;
    r.reasons.push_back("total focus-focus multiplicity " + k_total.str() +
                        " exceeds -rho_J'(J_max-0) = " + (-*r.rho_slope_at_max).str() +
                        ": the manifold is compact");
  }
  if ((r.unique_minimum || r.unique_maximum) && r.focus_fibre_count >= 2) {
    r.unique_extremum_fires = true;
    r.reasons.push_back(std::string("unique ") +
                        (r.unique_minimum ? "minimum" : "maximum") +
                        " of J with at least two focus-focus fibres: the manifold is compact");
  }
  r.forced_compact = r.multiplicity_bound_fires || r.unique_extremum_fires;
  if (r.reasons.empty()) r.reasons.push_back("no compactness criterion applies");
  return r;
}

}  // namespace semitoric
