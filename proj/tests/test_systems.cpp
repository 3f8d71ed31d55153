#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "fixtures.hpp"
#include "semitoric/systems.hpp"

using namespace semitoric;
namespace fx = semitoric::fixtures;

namespace {

QuadratureOptions fast_opts() {
  QuadratureOptions o;
  o.grid = 200;
  return o;
}

double spin_a_eigen(double t) { return std::sqrt(5 * t * t - 4 * t + 1); }    // imaginary part
double spin_b_eigen_sq(double t) { return -3 * t * t + 4 * t - 1; }

}  // namespace

TEST_CASE("moment evaluation at the spin-oscillator fixed points") {
  for (double t : {0.0, 0.3, 0.5, 1.0}) {
    SystemModel m = SystemModel::spin_oscillator(t);
    Moment a = eval_moment(m, {{0, 0, -1}, {0, 0, 0}});
    CHECK(a.j == doctest::Approx(-1).epsilon(1e-14));
    CHECK(a.h == doctest::Approx(1 - 2 * t).epsilon(1e-14));
    Moment b = eval_moment(m, {{0, 0, 1}, {0, 0, 0}});
    CHECK(b.j == doctest::Approx(1).epsilon(1e-14));
    CHECK(b.h == doctest::Approx(-1 + 2 * t).epsilon(1e-14));
  }
  // t = 1/2: H reduces to the coupling term u x + v y
  SystemModel m = SystemModel::spin_oscillator(0.5);
  PhasePoint p{{0.6, 0.0, 0.8}, {0.5, -0.25, 0}};
  Moment mm = eval_moment(m, p);
  CHECK(mm.h == doctest::Approx(0.5 * (0.5 * 0.6)).epsilon(1e-12));
  CHECK_THROWS_AS(eval_moment(m, {{0.6, 0, 0.9}, {0, 0, 0}}), Error);
}

TEST_CASE("rank-zero points with vanishing gradients") {
  SystemModel spin = SystemModel::spin_oscillator(0.4);
  std::vector<PhasePoint> pts = critical_points_rank0(spin);
  REQUIRE(pts.size() == 2);
  for (const PhasePoint& p : pts) CHECK(rank0_gradient_norm(spin, p) < 1e-10);

  SystemModel coupled = SystemModel::coupled_angular_momenta(0.5, 1.0, 2.0);
  std::vector<PhasePoint> cpts = critical_points_rank0(coupled);
  REQUIRE(cpts.size() == 4);
  for (const PhasePoint& p : cpts) CHECK(rank0_gradient_norm(coupled, p) < 1e-10);
}

TEST_CASE("chart hessians match finite differences of the embedded H") {
  const double step = 1e-4;
  auto fd_check = [&](const SystemModel& m, const PhasePoint& base) {
    auto h = chart_hessian(m, base);
    auto eval = [&](double a, double b, double c, double d) {
      return eval_moment(m, chart_point(m, base, a, b, c, d)).h;
    };
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double w[4] = {0, 0, 0, 0};
        auto at = [&](double di, double dj) {
          double v[4] = {w[0], w[1], w[2], w[3]};
          v[i] += di;
          v[j] += dj;
          return eval(v[0], v[1], v[2], v[3]);
        };
        double fd;
        if (i == j) {
          fd = (at(step, 0) - 2 * at(0, 0) + at(-step, 0)) / (step * step);
        } else {
          fd = (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) /
               (4 * step * step);
        }
        CAPTURE(i);
        CAPTURE(j);
        CHECK(h[i][j] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
      }
    }
  };
  for (const PhasePoint& p : critical_points_rank0(SystemModel::spin_oscillator(0.3)))
    fd_check(SystemModel::spin_oscillator(0.3), p);
  SystemModel coupled = SystemModel::coupled_angular_momenta(0.7, 1.0, 2.0);
  for (const PhasePoint& p : critical_points_rank0(coupled)) fd_check(coupled, p);
}

TEST_CASE("spectra match the closed forms across the parameter range") {
  for (double t : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.9, 1.0, 1.2}) {
    CAPTURE(t);
    SystemModel m = SystemModel::spin_oscillator(t);
    std::vector<PhasePoint> pts = critical_points_rank0(m);
    const PhasePoint& a = pts[0].first[2] < 0 ? pts[0] : pts[1];
    const PhasePoint& b = pts[0].first[2] < 0 ? pts[1] : pts[0];

    SingularityClass ca = classify_singularity(m, a);
    CHECK(ca.type == SingularityType::EllipticElliptic);
    double ea = spin_a_eigen(t);
    for (const auto& ev : ca.eigenvalues) {
      CHECK(std::abs(ev.real()) < 1e-8);
      CHECK(std::abs(std::abs(ev.imag()) - ea) < 1e-8);
    }

    SingularityClass cb = classify_singularity(m, b);
    double s = spin_b_eigen_sq(t);
    if (std::abs(s) < 1e-14) {
      CHECK(cb.type == SingularityType::Degenerate);
    } else if (s > 0) {
      CHECK(cb.type == SingularityType::FocusFocus);
      for (const auto& ev : cb.eigenvalues) {
        CHECK(std::abs(ev.imag()) < 1e-8);
        CHECK(std::abs(std::abs(ev.real()) - std::sqrt(s)) < 1e-8);
      }
    } else {
      CHECK(cb.type == SingularityType::EllipticElliptic);
      for (const auto& ev : cb.eigenvalues)
        CHECK(std::abs(std::abs(ev.imag()) - std::sqrt(-s)) < 1e-8);
    }
  }
  CHECK_THROWS_AS(
      classify_singularity(SystemModel::spin_oscillator(0.5), {{0.6, 0, 0.8}, {0, 0, 0}}),
      Error);
}

TEST_CASE("focus interval of the spin-oscillator is (1/3, 1)") {
  std::vector<double> grid;
  for (int i = 0; i <= 24; ++i) grid.push_back(1.2 * i / 24);
  auto intervals = focus_interval(SystemModel::spin_oscillator(0), grid, 1e-9);
  REQUIRE(intervals.size() == 1);
  CHECK(std::abs(intervals[0].t_lo - 1.0 / 3.0) < 1e-9);
  CHECK(std::abs(intervals[0].t_hi - 1.0) < 1e-9);

  std::vector<double> low{0.0, 0.1, 0.2, 0.3};
  CHECK(focus_interval(SystemModel::spin_oscillator(0), low).empty());
}

TEST_CASE("image boundary") {
  SystemModel m0 = SystemModel::spin_oscillator(0.0);
  BoundarySample s = image_boundary_at(m0, 0.0);
  CHECK(s.h_minus == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
  CHECK(s.h_plus == doctest::Approx(2.0).epsilon(1e-10));

  SystemModel mh = SystemModel::spin_oscillator(0.5);
  for (double x : {-0.5, 0.0, 0.7, 1.3, 2.0}) {
    BoundarySample b = image_boundary_at(mh, x);
    CHECK(std::abs(b.h_plus + b.h_minus) < 1e-6);
  }
  for (double t : {0.2, 0.5}) {
    BoundarySample b = image_boundary_at(SystemModel::spin_oscillator(t), -1.0);
    CHECK(b.h_plus == doctest::Approx(1 - 2 * t).epsilon(1e-9).scale(1.0));
    CHECK(b.h_minus == doctest::Approx(1 - 2 * t).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS_AS(image_boundary_at(mh, -1.5), Error);
  CHECK_THROWS_AS(image_boundary_at(SystemModel::coupled_angular_momenta(0.5, 1, 2), 3.5),
                  Error);
}

TEST_CASE("image boundary varies continuously") {
  for (double t : {0.3, 0.7}) {
    SystemModel m = SystemModel::spin_oscillator(t);
    double prev_lo = 0, prev_hi = 0;
    bool first = true;
    for (int i = 0; i <= 160; ++i) {
      double x = -0.99 + 3.0 * i / 160;
      BoundarySample b = image_boundary_at(m, x);
      if (!first) {
        CHECK(std::abs(b.h_plus - prev_hi) < 0.25);
        CHECK(std::abs(b.h_minus - prev_lo) < 0.25);
      }
      prev_lo = b.h_minus;
      prev_hi = b.h_plus;
      first = false;
    }
  }
}

TEST_CASE("cumulative volume matches the closed form") {
  SystemModel m = SystemModel::spin_oscillator(0.5);
  QuadratureOptions opts = fast_opts();
  for (double x : {-0.5, 0.0, 0.5, 0.9}) {
    double v = cumulative_volume(m, x, opts);
    double expect = 0.5 * (x + 1) * (x + 1);
    CHECK(std::abs(v - expect) < 1e-3);
  }
  // t-independence of J: the same volumes at t = 0.2
  SystemModel m2 = SystemModel::spin_oscillator(0.2);
  for (double x : {0.0, 0.5})
    CHECK(std::abs(cumulative_volume(m2, x, opts) - 0.5 * (x + 1) * (x + 1)) < 1e-3);
}

TEST_CASE("developing map anchors the bottom to zero") {
  SystemModel m = SystemModel::spin_oscillator(0.5);
  QuadratureOptions opts = fast_opts();
  for (double x : {-0.3, 0.5, 1.0, 1.7}) {
    BoundarySample bs = image_boundary_at(m, x);
    CHECK(std::abs(developing_map(m, x, bs.h_minus, opts)) < 5e-3);
  }
  CHECK(std::abs(developing_map(m, 1.0, 0.0, opts) - 1.0) < 1e-2);
  for (double x : {-0.5, 0.0, 0.5}) {
    BoundarySample bs = image_boundary_at(m, x);
    CHECK(std::abs(developing_map(m, x, bs.h_plus, opts) - (x + 1)) < 1e-2);
  }
  CHECK_THROWS_AS(developing_map(m, -1.0, 0.0, opts), Error);
  CHECK_THROWS_AS(developing_map(m, 0.5, 9.0, opts), Error);
}

TEST_CASE("central differences agree with the level-set oracle") {
  QuadratureOptions opts = fast_opts();
  SystemModel spin = SystemModel::spin_oscillator(0.35);
  for (double x : {-0.2, 0.8, 1.4}) {
    BoundarySample bs = image_boundary_at(spin, x);
    for (double f : {0.25, 0.5, 0.8}) {
      double h = bs.h_minus + f * (bs.h_plus - bs.h_minus);
      double a = developing_map(spin, x, h, opts);
      double b = developing_map_direct(spin, x, h, opts);
      CHECK(std::abs(a - b) < 5e-3);
    }
  }
  SystemModel coupled = SystemModel::coupled_angular_momenta(0.5, 1.0, 2.0);
  for (double x : {-1.7, 0.3, 1.9}) {
    BoundarySample bs = image_boundary_at(coupled, x);
    double h = 0.5 * (bs.h_minus + bs.h_plus);
    CHECK(std::abs(developing_map(coupled, x, h, opts) -
                   developing_map_direct(coupled, x, h, opts)) < 5e-3);
  }
}

TEST_CASE("parallel and serial quadrature agree bitwise") {
  QuadratureOptions par = fast_opts(), ser = fast_opts();
  par.parallel = true;
  ser.parallel = false;
  SystemModel spin = SystemModel::spin_oscillator(0.45);
  SystemModel coupled = SystemModel::coupled_angular_momenta(0.6, 1.0, 2.0);
  for (double x : {-0.4, 0.6, 1.2}) {
    double a = sublevel_volume(spin, x, 0.3, par);
    double b = sublevel_volume(spin, x, 0.3, ser);
    CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
    double c = sublevel_volume(coupled, x, -0.1, par);
    double d = sublevel_volume(coupled, x, -0.1, ser);
    CHECK(std::memcmp(&c, &d, sizeof(double)) == 0);
  }
#ifdef _OPENMP
  omp_set_num_threads(3);
  double three = sublevel_volume(spin, 0.6, 0.3, par);
  omp_set_num_threads(1);
  double one = sublevel_volume(spin, 0.6, 0.3, par);
  CHECK(std::memcmp(&three, &one, sizeof(double)) == 0);
#endif
}

TEST_CASE("polygonize reconstructs the spin-oscillator polygon") {
  SystemModel m = SystemModel::spin_oscillator(0.5);
  QuadratureOptions opts = fast_opts();
  std::vector<double> grid;
  for (int i = 0; i <= 24; ++i) grid.push_back(-1.0 + 4.0 * i / 24);
  PolygonizeResult res = polygonize(m, grid, 1e-2, opts);
  CHECK(res.sp == fx::p_plus_truncated());
  CHECK(res.diag.max_cell_residual < 1e-2);
  CHECK(res.diag.all_edges_snapped);

  // toric regime: same outline with no node, carried by the bottom kink
  SystemModel m0 = SystemModel::spin_oscillator(0.0);
  PolygonizeResult res0 = polygonize(m0, grid, 1e-2, opts);
  CHECK(res0.sp.cut_count() == 0);
  Polygon expected = Polygon::make(
      fx::chain(-1, 3, {{-1, 0}, {1, 0}, {3, 2}}),
      fx::chain(-1, 3, {{-1, 0}, {3, 4}}));
  CHECK(res0.sp.polygon() == expected);

  CHECK_THROWS_AS(polygonize(m, std::vector<double>{}, 1e-2, opts), Error);
  CHECK_THROWS_AS(polygonize(SystemModel::spin_oscillator(1.0 / 3.0), grid, 1e-2, opts),
                  Error);
}

TEST_CASE("rho_J of the reconstruction is parameter independent") {
  QuadratureOptions opts = fast_opts();
  std::vector<double> grid;
  for (int i = 0; i <= 24; ++i) grid.push_back(-1.0 + 4.0 * i / 24);
  PolygonizeResult a = polygonize(SystemModel::spin_oscillator(0.5), grid, 1e-2, opts);
  PolygonizeResult b = polygonize(SystemModel::spin_oscillator(0.0), grid, 1e-2, opts);
  PiecewiseLinear ra = a.sp.polygon().top() - a.sp.polygon().bottom();
  PiecewiseLinear rb = b.sp.polygon().top() - b.sp.polygon().bottom();
  CHECK(ra == rb);

  SystemModel m1 = SystemModel::coupled_angular_momenta(0.45, 1.0, 2.0);
  SystemModel m2 = SystemModel::coupled_angular_momenta(0.6, 1.0, 2.0);
  std::vector<double> cgrid;
  for (int i = 0; i <= 24; ++i) cgrid.push_back(-3.0 + 6.0 * i / 24);
  PolygonizeResult c1 = polygonize(m1, cgrid, 1e-2, opts);
  PolygonizeResult c2 = polygonize(m2, cgrid, 1e-2, opts);
  PiecewiseLinear r1 = c1.sp.polygon().top() - c1.sp.polygon().bottom();
  PiecewiseLinear r2 = c2.sp.polygon().top() - c2.sp.polygon().bottom();
  CHECK(r1 == r2);  // exact after snapping, well within twice the tolerance
}
