#include "fixtures.hpp"

namespace semitoric::fixtures {

namespace {

Rational q(long long n, long long d = 1) { return Rational(n, d); }

SemitoricPolygon sp(Polygon p, std::vector<Cut> cuts) {
  return SemitoricPolygon(std::move(p), CutSystem::make(std::move(cuts)));
}

Cut cut(Rational x, Rational y, std::int64_t k, int sign) { return Cut{{x, y}, k, sign}; }

}  // namespace

PiecewiseLinear chain(ExtendedRational xmin, ExtendedRational xmax,
                      std::vector<std::pair<Rational, Rational>> pts,
                      std::optional<Rational> left_slope, std::optional<Rational> right_slope) {
  std::vector<Rational> bx, bv;
  for (auto& [x, v] : pts) {
    bx.push_back(x);
    bv.push_back(v);
  }
  return PiecewiseLinear::make(std::move(xmin), std::move(xmax), std::move(bx), std::move(bv),
                               std::move(left_slope), std::move(right_slope));
}

Polygon unit_square() {
  return Polygon::make(chain(0, 1, {{0, 0}, {1, 0}}), chain(0, 1, {{0, 1}, {1, 1}}));
}

Polygon hirzebruch_trapezoid() {
  return Polygon::make(chain(0, 2, {{0, 0}, {2, 0}}),
                       chain(0, 2, {{0, 1}, {1, 1}, {2, 0}}));
}

SemitoricPolygon p_plus() {
  ExtendedRational inf = ExtendedRational::pos_inf();
  Polygon p = Polygon::make(chain(-1, inf, {{-1, 0}}, {}, q(0)),
                            chain(-1, inf, {{-1, 0}, {1, 2}}, {}, q(0)));
  return sp(std::move(p), {cut(1, 1, 1, +1)});
}

SemitoricPolygon p_minus() {
  ExtendedRational inf = ExtendedRational::pos_inf();
  Polygon p = Polygon::make(chain(-1, inf, {{-1, 0}, {1, 0}}, {}, q(1)),
                            chain(-1, inf, {{-1, 0}}, {}, q(1)));
  return sp(std::move(p), {cut(1, 1, 1, -1)});
}

SemitoricPolygon p_plus_truncated() {
  Polygon p = Polygon::make(chain(-1, 3, {{-1, 0}, {3, 0}}),
                            chain(-1, 3, {{-1, 0}, {1, 2}, {3, 2}}));
  return sp(std::move(p), {cut(1, 1, 1, +1)});
}

std::vector<Named> library() {
  ExtendedRational inf = ExtendedRational::pos_inf();
  ExtendedRational ninf = ExtendedRational::neg_inf();
  std::vector<Named> lib;
  auto add = [&](std::string name, SemitoricPolygon s) {
    lib.push_back({std::move(name), std::move(s)});
  };

  add("unit-square", sp(unit_square(), {}));
  add("trapezoid", sp(hirzebruch_trapezoid(), {}));
  add("p-plus", p_plus());
  add("p-minus", p_minus());
  add("p-plus-truncated", p_plus_truncated());

  add("tent-up", sp(Polygon::make(chain(0, 4, {{0, 0}, {4, 0}}),
                                  chain(0, 4, {{0, 0}, {2, 2}, {4, 0}})),
                    {cut(2, 1, 1, +1)}));
  add("tent-down", sp(Polygon::make(chain(0, 4, {{0, 0}, {2, -2}, {4, 0}}),
                                    chain(0, 4, {{0, 0}, {4, 0}})),
                      {cut(2, -1, 1, -1)}));
  add("tent-k3", sp(Polygon::make(chain(0, 4, {{0, 0}, {4, 0}}),
                                  chain(0, 4, {{0, 1}, {2, 9}, {4, 9}})),
                    {cut(2, 2, 3, +1)}));
  add("two-cuts", sp(Polygon::make(chain(0, 6, {{0, 0}, {6, 0}}),
                                   chain(0, 6, {{0, 0}, {2, 2}, {4, 2}, {6, 0}})),
                     {cut(2, 1, 1, +1), cut(4, 1, 1, +1)}));
  add("two-cuts-same-x",
      sp(Polygon::make(chain(0, 4, {{0, 0}, {4, 0}}),
                       chain(0, 4, {{0, 1}, {2, 5}, {4, 5}})),
         {cut(2, 1, 1, +1), cut(2, 2, 1, +1)}));
  add("mixed-same-x",
      sp(Polygon::make(chain(0, 4, {{0, 0}, {2, -2}, {4, 0}}),
                       chain(0, 4, {{0, 1}, {2, 3}, {4, 1}})),
         {cut(2, 2, 1, +1), cut(2, -1, 1, -1)}));
  add("wall-two-cuts-unbounded",
      sp(Polygon::make(chain(-1, inf, {{-1, 0}}, {}, q(0)),
                       chain(-1, inf, {{-1, 1}, {1, 5}, {3, 7}}, {}, q(0))),
         {cut(1, 2, 1, +1), cut(3, 3, 1, +1)}));
  add("left-unbounded",
      sp(Polygon::make(chain(ninf, 1, {{1, 0}}, q(0), {}),
                       chain(ninf, 1, {{-1, 2}, {1, 0}}, q(0), {})),
         {cut(-1, 1, 1, +1)}));
  add("sheared-square", sp(unit_square().t_sheared({2, q(0)}), {}));
  add("sheared-tent",
      sp(Polygon::make(chain(0, 4, {{0, 0}, {4, 0}}),
                       chain(0, 4, {{0, 0}, {2, 2}, {4, 0}}))
             .t_sheared({1, q(1, 3)}),
         {cut(2, q(1) + q(2) + q(1, 3), 1, +1)}));
  add("pentagon", sp(Polygon::make(chain(0, 3, {{0, 0}, {2, 0}, {3, 1}}),
                                   chain(0, 3, {{0, 1}, {1, 2}, {3, 2}})),
                     {}));
  add("pentagon-cut", sp(Polygon::make(chain(0, 3, {{0, 0}, {2, 0}, {3, 1}}),
                                       chain(0, 3, {{0, 1}, {1, 2}, {3, 2}})),
                         {cut(1, q(3, 2), 1, +1)}));
  add("wide-k3-k2",
      sp(Polygon::make(chain(0, 8, {{0, 0}, {8, 0}}),
                       chain(0, 8, {{0, 1}, {2, 7}, {5, 7}, {8, 1}})),
         {cut(2, 3, 3, +1), cut(5, 3, 2, +1)}));
  add("four-cuts",
      sp(Polygon::make(chain(0, 10, {{0, 0}, {10, 0}}),
                       chain(0, 10, {{0, 1}, {2, 5}, {4, 7}, {6, 7}, {8, 5}, {10, 1}})),
         {cut(2, 2, 1, +1), cut(4, 3, 1, +1), cut(6, 3, 1, +1), cut(8, 2, 1, +1)}));
  add("tall-thin",
      sp(Polygon::make(chain(0, q(1, 2), {{0, 0}, {q(1, 2), 0}}),
                       chain(0, q(1, 2), {{0, 4}, {q(1, 4), 5}, {q(1, 2), q(23, 4)}})),
         {cut(q(1, 4), 2, 1, +1)}));
  add("rational-slopes",
      sp(Polygon::make(chain(0, 4, {{0, 0}, {2, -1}, {4, -1}}),
                       chain(0, 4, {{0, 0}, {3, 0}, {4, -1}})),
         {cut(3, q(-1, 2), 1, +1)}));
  add("cut-and-corner",
      sp(Polygon::make(chain(0, 4, {{0, 0}, {4, 0}}),
                       chain(0, 4, {{0, 1}, {2, 5}, {4, 5}})),
         {cut(2, 3, 1, +1)}));
  add("lens-two-cuts",
      sp(Polygon::make(chain(0, 6, {{0, 0}, {6, 0}}),
                       chain(0, 6, {{0, 0}, {2, 2}, {4, 2}, {6, 0}})),
         {cut(2, q(1, 2), 1, +1), cut(4, q(3, 2), 1, +1)}));
  return lib;
}

}  // namespace semitoric::fixtures

namespace semitoric::fixtures {

SemitoricPolygon random_semitoric(std::mt19937& rng) {
  std::uniform_int_distribution<int> width(4, 9), slope0(1, 3), kdist(1, 2);
  std::uniform_int_distribution<int> event(0, 2), shear(-2, 2), offset_num(-9, 9);
  for (int attempt = 0; attempt < 64; ++attempt) {
    int w = width(rng);
    // walls on both sides, bottom flat at 0, top starting at height 1
    std::vector<std::pair<Rational, Rational>> top{{Rational(0), Rational(1)}};
    std::vector<Cut> cuts;
    Rational value(1);
    long long slope = slope0(rng);
    bool ok = true;
    for (int x = 1; x < w; ++x) {
      value += Rational(slope);
      if (value <= Rational(0)) {
        ok = false;
        break;
      }
      int ev = event(rng);
      if (ev == 0) {
        top.push_back({Rational(x), value});
        slope -= 1;  // elliptic vertex: unit drop keeps the corner unimodular
      } else if (ev == 1) {
        int k = kdist(rng);
        top.push_back({Rational(x), value});
        cuts.push_back(Cut{{Rational(x), value / Rational(2)}, k, +1});
        slope -= k;  // pure monodromy kink
      }
      if (cuts.size() >= 4) break;
    }
    if (!ok) continue;
    Rational final_v = top.back().second + Rational(slope) * (Rational(w) - top.back().first);
    if (final_v <= Rational(0)) continue;
    top.push_back({Rational(w), final_v});

    Polygon poly = Polygon::make(chain(0, w, {{Rational(0), Rational(0)}, {Rational(w), Rational(0)}}),
                                 chain(0, w, std::move(top)));
    SemitoricPolygon sp(std::move(poly), CutSystem::make(std::move(cuts)));
    // random group elements keep validity but vary the representative
    sp = sp.t_act({shear(rng), Rational(offset_num(rng), 4)});
    std::vector<int> bits(sp.cut_count());
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& b : bits) b = bit(rng);
    sp = sp.flip(bits);
    if (sp.validate().ok()) return sp;
    fail(Errc::internal, "random fixture construction produced invalid data");
  }
  fail(Errc::internal, "random fixture generation failed");
}

}  // namespace semitoric::fixtures
