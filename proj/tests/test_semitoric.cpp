#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "semitoric/semitoric_polygon.hpp"

using namespace semitoric;
namespace fx = semitoric::fixtures;

namespace {
Rational q(long long n, long long d = 1) { return Rational(n, d); }

bool has_issue(const ValidationReport& r, const std::string& code) {
  for (const ValidationIssue& i : r.issues)
    if (i.code == code) return true;
  return false;
}
}  // namespace

TEST_CASE("cut system structural validation") {
  CHECK_THROWS_AS(CutSystem::make({Cut{{q(0), q(0)}, 0, +1}}), Error);
  CHECK_THROWS_AS(CutSystem::make({Cut{{q(0), q(0)}, 1, 2}}), Error);
  CHECK_THROWS_AS(
      CutSystem::make({Cut{{q(0), q(0)}, 1, +1}, Cut{{q(0), q(0)}, 2, -1}}), Error);
  // sorted by (x, y)
  CutSystem cs = CutSystem::make({Cut{{q(2), q(0)}, 1, +1}, Cut{{q(1), q(0)}, 1, +1}});
  CHECK(cs[0].node.x == q(1));
}

TEST_CASE("the fixture library is valid") {
  auto lib = fx::library();
  CHECK(lib.size() >= 20);
  for (const auto& [name, sp] : lib) {
    CAPTURE(name);
    ValidationReport r = sp.validate();
    for (const ValidationIssue& i : r.issues) CAPTURE(i.message);
    CHECK(r.ok());
  }
}

TEST_CASE("validation rejects corrupted cut data") {
  // fake cut in the unit square: the flipped bottom gets slopes 0 then -1
  SemitoricPolygon fake(fx::unit_square(),
                        CutSystem::make({Cut{{q(1, 2), q(1, 2)}, 1, +1}}));
  ValidationReport r = fake.validate();
  CHECK_FALSE(r.ok());
  CHECK(has_issue(r, "orbit_not_convex"));
  CHECK(has_issue(r, "cut_slope_condition"));

  SemitoricPolygon outside(fx::unit_square(), CutSystem::make({Cut{{q(2), q(0)}, 1, +1}}));
  CHECK(has_issue(outside.validate(), "node_outside"));

  SemitoricPolygon on_boundary(fx::unit_square(),
                               CutSystem::make({Cut{{q(1, 2), q(1)}, 1, +1}}));
  CHECK(has_issue(on_boundary.validate(), "node_outside"));
}

TEST_CASE("flip matches the spin-oscillator mirror pair") {
  SemitoricPolygon pm = fx::p_minus();
  SemitoricPolygon flipped = pm.flip({1});
  CHECK(flipped == fx::p_plus());
  CHECK(fx::p_plus().flip({1}) == pm);

  SemitoricPolygon unchanged = fx::p_plus().flip({0});
  CHECK(unchanged == fx::p_plus());

  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    std::vector<int> all_ones(sp.cut_count(), 1);
    CHECK(sp.flip(all_ones).flip(all_ones) == sp);  // involution, exactly
  }
  CHECK_THROWS_AS(fx::p_plus().flip({1, 0}), Error);
}

TEST_CASE("flip satisfies the xor composition law") {
  std::mt19937 rng(23);
  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    std::size_t m = sp.cut_count();
    std::uniform_int_distribution<int> bit(0, 1);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<int> u(m), v(m), w(m);
      for (std::size_t i = 0; i < m; ++i) {
        u[i] = bit(rng);
        v[i] = bit(rng);
        w[i] = u[i] ^ v[i];
      }
      CHECK(sp.flip(u).flip(v) == sp.flip(w));
    }
  }
}

TEST_CASE("orbit enumeration") {
  auto orbit = fx::p_plus_truncated().orbit();
  REQUIRE(orbit.size() == 2);
  CHECK_FALSE(orbit[0].duplicate_of.has_value());
  CHECK_FALSE(orbit[1].duplicate_of.has_value());
  CHECK(orbit[0].sp != orbit[1].sp);

  // toric: a single element
  SemitoricPolygon square(fx::unit_square(), CutSystem{});
  auto sq_orbit = square.orbit();
  REQUIRE(sq_orbit.size() == 1);
  CHECK(sq_orbit[0].sp == square.canonical_form());

  // shared abscissa: 4 elements with duplicates (the action is not free)
  const auto lib = fx::library();
  for (const auto& [name, sp] : lib) {
    if (name != "two-cuts-same-x") continue;
    auto orb = sp.orbit();
    REQUIRE(orb.size() == 4);
    // flipping either one of the two coincident cuts gives the same class
    REQUIRE(orb[2].duplicate_of.has_value());
    CHECK(*orb[2].duplicate_of == 1);
    CHECK_FALSE(orb[1].duplicate_of.has_value());
    CHECK_FALSE(orb[3].duplicate_of.has_value());
    CHECK_FALSE(sp.is_free_action());
  }
  CHECK_THROWS_AS(fx::p_plus().orbit(0), Error);
}

TEST_CASE("freeness iff distinct abscissae") {
  CHECK(fx::p_plus().is_free_action());
  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    bool distinct = true;
    for (std::size_t i = 1; i < sp.cut_count(); ++i)
      if (sp.cuts()[i].node.x == sp.cuts()[i - 1].node.x) distinct = false;
    CHECK(sp.is_free_action() == distinct);
  }
}

TEST_CASE("orbit duplicates appear exactly when the action is not free") {
  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    if (sp.cut_count() > 4) continue;
    bool any_dup = false;
    for (const auto& e : sp.orbit())
      if (e.duplicate_of) any_dup = true;
    CHECK(any_dup == !sp.is_free_action());
  }
}

TEST_CASE("vertical-line-preserving action on polygons") {
  SemitoricPolygon square(fx::unit_square(), CutSystem{});
  SemitoricPolygon sheared = square.t_act({1, q(0)});
  CHECK(sheared.polygon().bottom().value(q(1)) == q(1));
  CHECK(sheared.polygon().top().value(q(1)) == q(2));
  std::vector<Point2> expect{{q(0), q(0)}, {q(0), q(1)}, {q(1), q(1)}, {q(1), q(2)}};
  CHECK(sheared.polygon().vertices() == expect);

  SemitoricPolygon up = fx::p_plus().t_act({0, q(3)});
  CHECK(up.polygon().bottom().value(q(0)) == q(3));
  CHECK(up.cuts()[0].node == Point2{q(1), q(4)});

  TElement g{2, q(-5, 3)};
  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    CHECK(sp.t_act(g).t_act(g.inverse()) == sp);
  }
}

TEST_CASE("canonical form") {
  CHECK(fx::p_plus().canonical_form() == fx::p_plus());
  CHECK(fx::p_plus().t_act({1, q(5)}).canonical_form() == fx::p_plus());
  SemitoricPolygon trap(fx::hirzebruch_trapezoid(), CutSystem{});
  CHECK(trap.t_act({0, q(7)}).canonical_form() == trap);

  std::mt19937 rng(5);
  std::uniform_int_distribution<int> kd(-3, 3), cd(-9, 9);
  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    SemitoricPolygon canon = sp.canonical_form();
    CHECK(canon.canonical_form() == canon);  // idempotent
    for (int trial = 0; trial < 4; ++trial) {
      TElement g{kd(rng), q(cd(rng), 4)};
      CHECK(sp.t_act(g).canonical_form() == canon);
    }
  }

  ExtendedRational pinf = ExtendedRational::pos_inf(), ninf = ExtendedRational::neg_inf();
  Polygon strip = Polygon::make(
      PiecewiseLinear::constant(ninf, pinf, q(0)),
      PiecewiseLinear::constant(ninf, pinf, q(1)));
  SemitoricPolygon strip_sp(strip, CutSystem{});
  CHECK_THROWS_AS(strip_sp.canonical_form(), Error);
}

TEST_CASE("canonical form anchors the right end when xmin is infinite") {
  const auto lib = fx::library();
  for (const auto& [name, sp] : lib) {
    if (name != "left-unbounded") continue;
    SemitoricPolygon canon = sp.t_act({2, q(7, 3)}).canonical_form();
    CHECK(canon == sp);  // fixture is already canonical at its right end
  }
}

TEST_CASE("cut nodes are fixed by their own flip shear") {
  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    for (std::size_t i = 0; i < sp.cut_count(); ++i) {
      std::vector<int> u(sp.cut_count(), 0);
      u[i] = 1;
      SemitoricPolygon f = sp.flip(u);
      // nodes sharing the abscissa of cut i do not move
      for (std::size_t j = 0; j < sp.cut_count(); ++j)
        if (sp.cuts()[j].node.x == sp.cuts()[i].node.x)
          CHECK(f.cuts()[j].node == sp.cuts()[j].node);
    }
  }
}

TEST_CASE("vertical slices are invariant across the orbit") {
  for (const auto& [name, sp] : fx::library()) {
    CAPTURE(name);
    if (sp.cut_count() > 3) continue;
    PiecewiseLinear len = sp.polygon().top() - sp.polygon().bottom();
    for (const auto& e : sp.orbit()) {
      PiecewiseLinear flen = e.sp.polygon().top() - e.sp.polygon().bottom();
      CHECK(flen == len);
    }
  }
}

TEST_CASE("randomly generated polygons satisfy the group laws") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    SemitoricPolygon sp = fx::random_semitoric(rng);
    CAPTURE(trial);
    REQUIRE(sp.validate().ok());
    std::size_t m = sp.cut_count();
    std::vector<int> u(m), v(m), w(m);
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = bit(rng);
      v[i] = bit(rng);
      w[i] = u[i] ^ v[i];
    }
    CHECK(sp.flip(u).flip(v) == sp.flip(w));
    CHECK(sp.flip(u).flip(u) == sp);
    CHECK(sp.flip(u).validate().ok());
    CHECK(sp.t_act({1, Rational(1, 3)}).canonical_form() == sp.canonical_form());
  }
}
