#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "semitoric/semitoric_polygon.hpp"

namespace semitoric {

enum class ModelKind { SpinOscillator, CoupledAngularMomenta };

struct QuadratureOptions {
  int grid = 400;          // tensor resolution per transverse coordinate
  double fd_step = 1e-3;   // central-difference step for the developing map
  bool parallel = true;    // OpenMP rows; results are identical either way
  std::uint64_t seed = 0;  // reserved for stochastic kernels; the shipped kernels are deterministic
};

/// Parameterized Hamiltonian pair (J, H_t): the coupled spin-oscillator on
/// S^2 x R^2, or the coupled angular momenta on S^2 x S^2 with radii
/// |S| = radius_s, |N| = radius_n.
struct SystemModel {
  ModelKind kind = ModelKind::SpinOscillator;
  double t = 0.5;
  double radius_s = 1.0;
  double radius_n = 1.0;

  static SystemModel spin_oscillator(double t) { return {ModelKind::SpinOscillator, t, 1.0, 1.0}; }
  static SystemModel coupled_angular_momenta(double t, double radius_s, double radius_n);

  SystemModel with_t(double new_t) const {
    SystemModel m = *this;
    m.t = new_t;
    return m;
  }

  double j_min() const;
  double j_max() const;  // +inf for the spin-oscillator
  bool j_bounded_above() const { return kind == ModelKind::CoupledAngularMomenta; }
};

/// Phase-space point: first is the S^2 factor embedded in R^3 (scaled by its
/// radius), second is (u, v, 0) on the plane or the second sphere.
struct PhasePoint {
  std::array<double, 3> first{};
  std::array<double, 3> second{};
};

struct Moment {
  double j, h;
};

/// Momentum evaluation; rejects points off the sphere constraints.
Moment eval_moment(const SystemModel& model, const PhasePoint& p);

/// Rank-zero critical points of (J, H): fixed points of the circle action
/// with dH = 0, refined so the chart gradient norm is below 1e-10.
std::vector<PhasePoint> critical_points_rank0(const SystemModel& model);
double rank0_gradient_norm(const SystemModel& model, const PhasePoint& p);

enum class SingularityType { EllipticElliptic, FocusFocus, Degenerate };

struct SingularityClass {
  SingularityType type = SingularityType::Degenerate;
  std::vector<std::complex<double>> eigenvalues;  // sorted by (re, im)
};

/// Spectrum of the linearized Hamiltonian (symplectic-form-inverse times the
/// Hessian of H in local canonical coordinates) at a rank-zero point.
SingularityClass classify_singularity(const SystemModel& model, const PhasePoint& p);

const char* singularity_name(SingularityType t);

/// Local canonical chart at a rank-zero point; exposed for tests.
PhasePoint chart_point(const SystemModel& model, const PhasePoint& base, double q, double p,
                       double u, double v);
std::array<std::array<double, 4>, 4> chart_hessian(const SystemModel& model,
                                                   const PhasePoint& base);

struct FocusInterval {
  double t_lo, t_hi;
};

/// Maximal parameter intervals on which some rank-zero point is focus-focus,
/// located by a grid scan and boundary bisection to the given tolerance.
std::vector<FocusInterval> focus_interval(const SystemModel& prototype,
                                          std::span<const double> t_grid, double tol = 1e-9);

struct BoundarySample {
  double x, h_minus, h_plus;
};

/// Extremes of H on the level set J = x.
BoundarySample image_boundary_at(const SystemModel& model, double x);
std::vector<BoundarySample> image_boundary(const SystemModel& model, std::span<const double> xs);

/// Liouville volume of {J <= x, H <= h} divided by (2 pi)^2. Pass h = +inf
/// for the plain cumulative volume of {J <= x}.
double sublevel_volume(const SystemModel& model, double x, double h,
                       const QuadratureOptions& opts);
double cumulative_volume(const SystemModel& model, double x, const QuadratureOptions& opts);

/// Second action coordinate: d/dx of sublevel_volume at fixed h, by central
/// differences. Anchored so the bottom boundary maps to 0.
double developing_map(const SystemModel& model, double x, double h,
                      const QuadratureOptions& opts);
/// Same derivative through the reduced level-set integral; an independent
/// cross-check of the central-difference route.
double developing_map_direct(const SystemModel& model, double x, double h,
                             const QuadratureOptions& opts);

struct PolygonizeDiagnostics {
  std::vector<double> cell_bounds;
  std::vector<double> bottom_values;  // glued float chain at the cell bounds, before snapping
  std::vector<double> top_values;
  std::vector<std::array<double, 2>> node_estimates;  // (x, y) before snapping
  double max_cell_residual = 0.0;
  bool all_edges_snapped = true;
};

struct PolygonizeResult {
  SemitoricPolygon sp;
  PolygonizeDiagnostics diag;
};

/// Numeric reconstruction of the generalized moment polygon with all cuts
/// upward: samples the developing map along the image boundary, glues the
/// per-cell charts at elliptic vertex abscissae, fits piecewise-linear
/// chains, and snaps slopes and anchors to small-denominator rationals.
PolygonizeResult polygonize(const SystemModel& model, std::span<const double> x_grid, double tol,
                            const QuadratureOptions& opts);

}  // namespace semitoric
