#pragma once

#include <random>
#include <string>
#include <vector>

#include "semitoric/semitoric_polygon.hpp"

namespace semitoric::fixtures {

struct Named {
  std::string name;
  SemitoricPolygon sp;
};

// Boundary chain through the given (x, value) pairs.
PiecewiseLinear chain(ExtendedRational xmin, ExtendedRational xmax,
                      std::vector<std::pair<Rational, Rational>> pts,
                      std::optional<Rational> left_slope = {},
                      std::optional<Rational> right_slope = {});

Polygon unit_square();
Polygon hirzebruch_trapezoid();  // bottom 0 on [0,2], top {1 on [0,1], 2-x}

SemitoricPolygon p_plus();             // spin-oscillator polygon, cut upward, unbounded
SemitoricPolygon p_minus();            // its flip, cut downward
SemitoricPolygon p_plus_truncated();   // restricted to [-1, 3]

/// The full library of valid semitoric polygons used by the property suites;
/// at least 20 entries, including shared-abscissa cuts, multiplicities > 1,
/// unbounded sides, and non-integer slopes.
std::vector<Named> library();

/// Random valid semitoric polygon: integer-slope top with unit drops at
/// elliptic vertices and exact monodromy drops at the cuts, randomly sheared,
/// shifted, and sign-flipped.
SemitoricPolygon random_semitoric(std::mt19937& rng);

}  // namespace semitoric::fixtures
