#pragma once

#include <optional>
#include <vector>

#include "semitoric/affine.hpp"
#include "semitoric/rational.hpp"

namespace semitoric {

/// Continuous piecewise-linear function over an interval with extended-
/// rational endpoints. Finite endpoints coincide with the first/last
/// breakpoint; an unbounded side instead carries the slope of the final ray.
class PiecewiseLinear {
 public:
  static PiecewiseLinear make(ExtendedRational xmin, ExtendedRational xmax,
                              std::vector<Rational> breakpoints, std::vector<Rational> values,
                              std::optional<Rational> left_slope = {},
                              std::optional<Rational> right_slope = {});
  static PiecewiseLinear constant(const ExtendedRational& xmin, const ExtendedRational& xmax,
                                  const Rational& value);

  const ExtendedRational& xmin() const { return xmin_; }
  const ExtendedRational& xmax() const { return xmax_; }
  const std::vector<Rational>& breakpoints() const { return x_; }
  const std::vector<Rational>& values() const { return v_; }
  const std::optional<Rational>& left_slope() const { return left_slope_; }
  const std::optional<Rational>& right_slope() const { return right_slope_; }

  bool contains(const Rational& x) const;

  Rational value(const Rational& x) const;
  /// Slope of the segment immediately right (resp. left) of x. Fails at a
  /// bounded end where no such segment exists.
  Rational slope_right(const Rational& x) const;
  Rational slope_left(const Rational& x) const;
  /// Slopes between consecutive breakpoints (size() - 1 entries).
  std::vector<Rational> segment_slopes() const;
  /// Full slope sequence including unbounded-end slopes.
  std::vector<Rational> slope_sequence() const;

  bool slopes_nondecreasing() const;  // convex
  bool slopes_nonincreasing() const;  // concave

  /// Drops interior breakpoints with no slope change. The result compares
  /// equal across all representations of the same function.
  PiecewiseLinear canonicalized() const;
  PiecewiseLinear with_breakpoint(const Rational& x) const;
  PiecewiseLinear restricted(const ExtendedRational& a, const ExtendedRational& b) const;

  PiecewiseLinear negated() const;
  /// Applies (x, y) -> (x, y + k x + c) to the graph.
  PiecewiseLinear t_sheared(const TElement& t) const;
  /// Applies t^n_L to the graph, inserting a breakpoint on the line.
  PiecewiseLinear vertical_sheared(const VerticalShear& s) const;

  Rational integral(const Rational& a, const Rational& b) const;

  friend PiecewiseLinear operator+(const PiecewiseLinear& f, const PiecewiseLinear& g);
  friend PiecewiseLinear operator-(const PiecewiseLinear& f, const PiecewiseLinear& g);

  /// Function equality (representation-independent).
  friend bool operator==(const PiecewiseLinear& f, const PiecewiseLinear& g);
  friend bool operator!=(const PiecewiseLinear& f, const PiecewiseLinear& g) { return !(f == g); }

 private:
  PiecewiseLinear() = default;

  ExtendedRational xmin_, xmax_;
  std::vector<Rational> x_;
  std::vector<Rational> v_;
  std::optional<Rational> left_slope_, right_slope_;
};

}  // namespace semitoric
