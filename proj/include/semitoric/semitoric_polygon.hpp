#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semitoric/polygon.hpp"

namespace semitoric {

/// Vertical branch cut attached to a focus-focus value. The node is the
/// image of the critical value in polygon coordinates, multiplicity is the
/// number of critical points in its fibre, sign is the cut direction
/// (+1 upward, -1 downward).
struct Cut {
  Point2 node;
  std::int64_t multiplicity = 1;
  int sign = +1;

  friend bool operator==(const Cut&, const Cut&) = default;
};

/// Cuts sorted by (node.x, node.y) with pairwise distinct nodes.
class CutSystem {
 public:
  CutSystem() = default;
  static CutSystem make(std::vector<Cut> cuts);

  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }
  const Cut& operator[](std::size_t i) const { return cuts_[i]; }
  auto begin() const { return cuts_.begin(); }
  auto end() const { return cuts_.end(); }
  std::int64_t total_multiplicity() const;

  friend bool operator==(const CutSystem&, const CutSystem&) = default;

 private:
  std::vector<Cut> cuts_;
};

struct ValidationIssue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

struct OrbitElement;

/// Convex rational polygon decorated with a cut system. Validity in the
/// sense of validate() means every sign choice of the cuts yields a convex
/// polygon and the boundary data is compatible with the cut multiplicities.
class SemitoricPolygon {
 public:
  SemitoricPolygon(Polygon polygon, CutSystem cuts);

  const Polygon& polygon() const { return polygon_; }
  const CutSystem& cuts() const { return cuts_; }
  std::size_t cut_count() const { return cuts_.size(); }

  ValidationReport validate(std::size_t orbit_bound = 16) const;

  /// Cut-flip action of (Z/2Z)^{m_f}: applies the multi-shear with exponent
  /// bits[i] * sign_i * k_i on the vertical line through node i and flips the
  /// chosen cut signs. bits.size() must equal cut_count().
  SemitoricPolygon flip(const std::vector<int>& bits) const;

  /// All 2^{m_f} flips, canonicalized; duplicates are retained and flagged.
  std::vector<OrbitElement> orbit(std::size_t max_cuts = 16) const;

  /// True iff the flip action is free: the node abscissae are pairwise
  /// distinct.
  bool is_free_action() const;

  SemitoricPolygon t_act(const TElement& g) const;

  /// The representative modulo the vertical-line-preserving subgroup with
  /// value 0 and first bottom slope in [0, 1) at the finite end (left end
  /// preferred, right end when xmin is infinite).
  SemitoricPolygon canonical_form() const;

  /// Equality of all exact data, including cut signs.
  friend bool operator==(const SemitoricPolygon& a, const SemitoricPolygon& b) {
    return a.polygon_ == b.polygon_ && a.cuts_ == b.cuts_;
  }
  friend bool operator!=(const SemitoricPolygon& a, const SemitoricPolygon& b) {
    return !(a == b);
  }
  /// Equality of the underlying polygon and node data, ignoring cut signs;
  /// this is the notion under which non-free orbits have duplicates.
  bool same_class(const SemitoricPolygon& other) const;

 private:
  Polygon polygon_;
  CutSystem cuts_;
};

struct OrbitElement {
  std::vector<int> bits;
  SemitoricPolygon sp;
  std::optional<std::size_t> duplicate_of;  // earlier index with the same polygon class
};

/// Sum of multiplicities of cuts at abscissa x pointing up (sign = +1) or
/// down (sign = -1).
std::int64_t cut_multiplicity_at(const CutSystem& cuts, const Rational& x, int sign);

}  // namespace semitoric
