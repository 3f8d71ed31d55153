#include "semitoric/semitoric_polygon.hpp"

#include <algorithm>
#include <map>

namespace semitoric {

CutSystem CutSystem::make(std::vector<Cut> cuts) {
  for (const Cut& c : cuts) {
    if (c.multiplicity < 1) fail(Errc::invalid_input, "cut multiplicity must be positive");
    if (c.sign != 1 && c.sign != -1) fail(Errc::invalid_input, "cut sign must be +1 or -1");
  }
  std::sort(cuts.begin(), cuts.end(),
            [](const Cut& a, const Cut& b) { return a.node < b.node; });
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i].node == cuts[i - 1].node)
      fail(Errc::invalid_input, "cut nodes must be pairwise distinct");
  CutSystem cs;
  cs.cuts_ = std::move(cuts);
  return cs;
}

std::int64_t CutSystem::total_multiplicity() const {
  std::int64_t k = 0;
  for (const Cut& c : cuts_) k += c.multiplicity;
  return k;
}

std::int64_t cut_multiplicity_at(const CutSystem& cuts, const Rational& x, int sign) {
  std::int64_t k = 0;
  for (const Cut& c : cuts)
    if (c.sign == sign && c.node.x == x) k += c.multiplicity;
  return k;
}

SemitoricPolygon::SemitoricPolygon(Polygon polygon, CutSystem cuts)
    : polygon_(std::move(polygon)), cuts_(std::move(cuts)) {}

namespace {

// Aggregated shear exponents per vertical line for a sign choice.
std::vector<VerticalShear> flip_shears(const CutSystem& cuts, const std::vector<int>& bits) {
  std::map<Rational, std::int64_t> per_line;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!bits[i]) continue;
    per_line[cuts[i].node.x] += cuts[i].sign * cuts[i].multiplicity;
  }
  std::vector<VerticalShear> shears;
  for (const auto& [x, n] : per_line)
    if (n != 0) shears.push_back({x, n});
  return shears;
}

PiecewiseLinear multi_sheared(PiecewiseLinear f, const std::vector<VerticalShear>& shears) {
  for (const VerticalShear& s : shears) f = f.vertical_sheared(s);
  return f;
}

}  // namespace

bool SemitoricPolygon::is_free_action() const {
  for (std::size_t i = 1; i < cuts_.size(); ++i)
    if (cuts_[i].node.x == cuts_[i - 1].node.x) return false;
  return true;
}

SemitoricPolygon SemitoricPolygon::flip(const std::vector<int>& bits) const {
  if (bits.size() != cuts_.size())
    fail(Errc::invalid_input, "flip bit-vector length differs from the number of cuts");
  std::vector<VerticalShear> shears = flip_shears(cuts_, bits);
  Polygon sheared = [&] {
    try {
      return Polygon::make(multi_sheared(polygon_.bottom(), shears).canonicalized(),
                           multi_sheared(polygon_.top(), shears).canonicalized());
    } catch (const Error& e) {
      fail(Errc::invalid_input, std::string("flip produced an invalid polygon: ") + e.what());
    }
  }();
  std::vector<Cut> new_cuts;
  new_cuts.reserve(cuts_.size());
  for (std::size_t i = 0; i < cuts_.size(); ++i) {
    Cut c = cuts_[i];
    c.node = apply_multi_shear(shears, c.node);
    if (bits[i]) c.sign = -c.sign;
    new_cuts.push_back(c);
  }
  return SemitoricPolygon(std::move(sheared), CutSystem::make(std::move(new_cuts)));
}

SemitoricPolygon SemitoricPolygon::t_act(const TElement& g) const {
  Polygon p = polygon_.t_sheared(g);
  std::vector<Cut> new_cuts;
  new_cuts.reserve(cuts_.size());
  for (const Cut& c : cuts_) {
    Cut nc = c;
    nc.node = apply_t(g, c.node);
    new_cuts.push_back(nc);
  }
  return SemitoricPolygon(std::move(p), CutSystem::make(std::move(new_cuts)));
}

SemitoricPolygon SemitoricPolygon::canonical_form() const {
  const PiecewiseLinear& bottom = polygon_.bottom();
  bool left = polygon_.xmin().is_finite();
  bool right = polygon_.xmax().is_finite();
  if (!left && !right)
    fail(Errc::uncanonicalizable, "polygon is unbounded on both sides");
  Rational anchor = left ? polygon_.xmin().finite() : polygon_.xmax().finite();

  std::int64_t k = 0;
  if (polygon_.xmin() != polygon_.xmax()) {
    Rational slope = left ? bottom.slope_right(anchor) : bottom.slope_left(anchor);
    // Unique integer shear putting the anchored bottom slope into [0, 1).
    mpz_class f = slope.floor();
    if (!f.fits_slong_p()) fail(Errc::invalid_input, "bottom slope out of range");
    k = -f.get_si();
  }
  Rational new_value = bottom.value(anchor) + Rational(k) * anchor;
  TElement g{k, -new_value};
  return t_act(g);
}

bool SemitoricPolygon::same_class(const SemitoricPolygon& other) const {
  if (polygon_ != other.polygon_) return false;
  if (cuts_.size() != other.cuts_.size()) return false;
  for (std::size_t i = 0; i < cuts_.size(); ++i)
    if (cuts_[i].node != other.cuts_[i].node ||
        cuts_[i].multiplicity != other.cuts_[i].multiplicity)
      return false;
  return true;
}

std::vector<OrbitElement> SemitoricPolygon::orbit(std::size_t max_cuts) const {
  if (cuts_.size() > max_cuts)
    fail(Errc::too_many_cuts, "orbit enumeration over " + std::to_string(cuts_.size()) +
                                  " cuts exceeds the bound");
  std::size_t m = cuts_.size();
  std::vector<OrbitElement> elements;
  elements.reserve(std::size_t(1) << m);
  for (std::size_t u = 0; u < (std::size_t(1) << m); ++u) {
    std::vector<int> bits(m);
    for (std::size_t i = 0; i < m; ++i) bits[i] = int((u >> i) & 1);
    SemitoricPolygon flipped = flip(bits).canonical_form();
    std::optional<std::size_t> dup;
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (elements[j].sp.same_class(flipped)) {
        dup = j;
        break;
      }
    }
    elements.push_back(OrbitElement{std::move(bits), std::move(flipped), dup});
  }
  return elements;
}

ValidationReport SemitoricPolygon::validate(std::size_t orbit_bound) const {
  ValidationReport report;
  auto issue = [&](const std::string& code, const std::string& message) {
    report.issues.push_back({code, message});
  };

  // Nodes strictly inside; the vertical cut segment then lies inside too.
  for (const Cut& c : cuts_) {
    bool inside = true;
    if (!(ExtendedRational(c.node.x) > polygon_.xmin()) ||
        !(ExtendedRational(c.node.x) < polygon_.xmax()))
      inside = false;
    else {
      auto [lo, hi] = polygon_.vertical_slice(c.node.x);
      if (!(lo < c.node.y) || !(c.node.y < hi)) inside = false;
    }
    if (!inside)
      issue("node_outside", "cut node (" + c.node.x.str() + ", " + c.node.y.str() +
                                ") is not strictly inside the polygon");
  }

  // Slope-change condition where a cut line meets the boundary: the boundary
  // must kink at least as hard as the monodromy shear.
  {
    std::vector<Rational> xs;
    for (const Cut& c : cuts_) xs.push_back(c.node.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (const Rational& x : xs) {
      if (!(ExtendedRational(x) > polygon_.xmin()) || !(ExtendedRational(x) < polygon_.xmax()))
        continue;  // reported above
      std::int64_t k_up = cut_multiplicity_at(cuts_, x, +1);
      std::int64_t k_down = cut_multiplicity_at(cuts_, x, -1);
      if (k_up > 0) {
        Rational change = polygon_.top().slope_right(x) - polygon_.top().slope_left(x);
        if (change > Rational(-k_up))
          issue("cut_slope_condition",
                "top boundary at x=" + x.str() + " changes slope by " + change.str() +
                    " > -" + std::to_string(k_up));
      }
      if (k_down > 0) {
        Rational change = polygon_.bottom().slope_right(x) - polygon_.bottom().slope_left(x);
        if (change < Rational(k_down))
          issue("cut_slope_condition",
                "bottom boundary at x=" + x.str() + " changes slope by " + change.str() +
                    " < " + std::to_string(k_down));
      }
    }
  }

  // Corners away from cut lines must be unimodular. The boundary points hit
  // by a cut are shear artifacts, not elliptic corners, and are exempt.
  for (const Point2& v : polygon_.vertices()) {
    bool on_top = v.y == polygon_.top().value(v.x);
    bool on_bottom = v.y == polygon_.bottom().value(v.x);
    bool exempt = (on_top && cut_multiplicity_at(cuts_, v.x, +1) > 0) ||
                  (on_bottom && cut_multiplicity_at(cuts_, v.x, -1) > 0);
    if (exempt) continue;
    Polygon::CornerWeights w = polygon_.corner_weights(v);
    if (!w.unimodular)
      issue("corner_not_unimodular",
            "vertex (" + v.x.str() + ", " + v.y.str() + ") has non-unimodular edges");
  }

  // Convexity of the whole flip orbit: this is the polygon condition for
  // every sign choice simultaneously.
  if (cuts_.size() > orbit_bound) {
    issue("orbit_unchecked", "too many cuts for the brute-force orbit convexity check");
  } else {
    std::size_t m = cuts_.size();
    for (std::size_t u = 1; u < (std::size_t(1) << m); ++u) {
      std::vector<int> bits(m);
      for (std::size_t i = 0; i < m; ++i) bits[i] = int((u >> i) & 1);
      std::vector<VerticalShear> shears = flip_shears(cuts_, bits);
      try {
        Polygon::make(multi_sheared(polygon_.bottom(), shears),
                      multi_sheared(polygon_.top(), shears));
      } catch (const Error& e) {
        std::string u_str;
        for (int b : bits) u_str += char('0' + b);
        issue("orbit_not_convex",
              "sign flip u=" + u_str + " breaks convexity: " + e.what());
      }
    }
  }
  return report;
}

}  // namespace semitoric
