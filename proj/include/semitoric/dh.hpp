#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semitoric/semitoric_polygon.hpp"

namespace semitoric {

enum class DHAxis { J, K };

/// Exact piecewise-linear Duistermaat-Heckman density. The density vanishes
/// outside its domain; value_or_zero evaluates with that convention.
struct DHFunction {
  DHAxis axis = DHAxis::J;
  PiecewiseLinear density;

  Rational value_or_zero(const Rational& x) const {
    return density.contains(x) ? density.value(x) : Rational(0);
  }
};

/// Density of the pushforward of Liouville measure by the circle-action
/// momentum: the vertical slice length of the polygon, so invariant under
/// flips and vertical-line-preserving transformations.
DHFunction rho_J(const SemitoricPolygon& sp);

/// One record per interior discontinuity of the derivative of rho_J.
/// measured is the slope change read off the polygon; predicted is
/// -k_sum - e_plus - e_minus from the cut multiplicities and the isotropy
/// weights of elliptic vertices at the same abscissa.
struct JumpRecord {
  Rational x;
  Rational measured;
  Rational predicted;
  std::int64_t k_sum = 0;
  Rational e_plus;
  Rational e_minus;
};
std::vector<JumpRecord> jumps(const SemitoricPolygon& sp);

/// Density of the pushforward by the second action coordinate on the
/// truncated polygon, evaluated through the per-cell sum over the boundary
/// corner data (not through horizontal slices; see rho_K_oracle for those).
DHFunction rho_K(const SemitoricPolygon& sp, const Rational& a, const Rational& b);

/// Horizontal-slice length of the truncated polygon at height y; must agree
/// with rho_K exactly.
Rational rho_K_oracle(const SemitoricPolygon& sp, const Rational& a, const Rational& b,
                      const Rational& y);

struct CompactnessReport {
  bool j_bounded_below = false;
  bool j_bounded_above = false;
  bool has_rank_zero_value = false;
  bool unique_minimum = false;
  bool unique_maximum = false;
  std::int64_t focus_fibre_count = 0;
  std::int64_t total_multiplicity = 0;
  std::optional<Rational> rho_slope_at_min;
  std::optional<Rational> rho_slope_at_max;
  bool semibounded_fires = false;       // a rank-zero value forces J one-sided bounded
  bool multiplicity_bound_fires = false; // total multiplicity exceeds the end slope
  bool unique_extremum_fires = false;    // corner extremum with at least two cut fibres
  bool forced_compact = false;
  std::vector<std::string> reasons;
};

/// Applies the boundedness/compactness criteria to the polygon data and
/// reports exactly the conclusions that fire.
CompactnessReport compactness_report(const SemitoricPolygon& sp);

}  // namespace semitoric
