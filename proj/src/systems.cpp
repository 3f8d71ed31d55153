#include "semitoric/systems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "semitoric/parallel.hpp"

namespace semitoric {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double sq(double x) { return x * x; }

}  // namespace

SystemModel SystemModel::coupled_angular_momenta(double t, double radius_s, double radius_n) {
  if (!(radius_s > 0) || !(radius_n > 0)) fail(Errc::invalid_input, "radii must be positive");
  return {ModelKind::CoupledAngularMomenta, t, radius_s, radius_n};
}

double SystemModel::j_min() const {
  return kind == ModelKind::SpinOscillator ? -1.0 : -(radius_s + radius_n);
}

double SystemModel::j_max() const {
  return kind == ModelKind::SpinOscillator ? std::numeric_limits<double>::infinity()
                                           : radius_s + radius_n;
}

Moment eval_moment(const SystemModel& model, const PhasePoint& p) {
  const auto& a = p.first;
  const auto& b = p.second;
  if (model.kind == ModelKind::SpinOscillator) {
    if (std::abs(sq(a[0]) + sq(a[1]) + sq(a[2]) - 1.0) > 1e-8 || std::abs(b[2]) > 1e-8)
      fail(Errc::invalid_point, "point violates the S^2 x R^2 constraints");
    double n = 0.5 * (sq(b[0]) + sq(b[1]));
    double k = b[0] * a[0] + b[1] * a[1];
    double j = n + a[2];
    double h = (1.0 - 2.0 * model.t) * (n - a[2]) + model.t * k;
    return {j, h};
  }
  double r1 = model.radius_s, r2 = model.radius_n;
  if (std::abs(sq(a[0]) + sq(a[1]) + sq(a[2]) - sq(r1)) > 1e-8 * std::max(1.0, sq(r1)) ||
      std::abs(sq(b[0]) + sq(b[1]) + sq(b[2]) - sq(r2)) > 1e-8 * std::max(1.0, sq(r2)))
    fail(Errc::invalid_point, "point violates the S^2 x S^2 constraints");
  double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  double j = a[2] + b[2];
  double h = (1.0 - model.t) / r1 * a[2] + model.t / (r1 * r2) * dot;
  return {j, h};
}

// ---------------------------------------------------------------------------
// Local canonical charts at the rank-zero candidates
// ---------------------------------------------------------------------------

namespace {

// Sphere of radius R linearized at the pole sigma*R. (q, p) is canonical for
// the area form normalized so the z-flow is 2pi-periodic.
std::array<double, 3> sphere_chart(double R, int sigma, double q, double p) {
  double r2 = sq(q) + sq(p);
  double c = std::sqrt(std::max(0.0, R - 0.25 * r2));
  return {q * c, -sigma * p * c, sigma * (R - 0.5 * r2)};
}

int pole_sign(double z) { return z >= 0 ? +1 : -1; }

}  // namespace

PhasePoint chart_point(const SystemModel& model, const PhasePoint& base, double q, double p,
                       double u, double v) {
  PhasePoint out;
  if (model.kind == ModelKind::SpinOscillator) {
    out.first = sphere_chart(1.0, pole_sign(base.first[2]), q, p);
    out.second = {u, v, 0.0};
  } else {
    out.first = sphere_chart(model.radius_s, pole_sign(base.first[2]), q, p);
    out.second = sphere_chart(model.radius_n, pole_sign(base.second[2]), u, v);
  }
  return out;
}

std::array<std::array<double, 4>, 4> chart_hessian(const SystemModel& model,
                                                   const PhasePoint& base) {
  std::array<std::array<double, 4>, 4> h{};
  double t = model.t;
  if (model.kind == ModelKind::SpinOscillator) {
    int sigma = pole_sign(base.first[2]);
    double a = 1.0 - 2.0 * t;
    // H = (1-2t)(N - z) + t(u x + v y) in the chart at the pole sigma,
    // where z = sigma (1 - r^2/2), x ~ q, y ~ -sigma p.
    h[0][0] = sigma * a;
    h[1][1] = sigma * a;
    h[2][2] = a;
    h[3][3] = a;
    h[0][2] = h[2][0] = t;
    h[1][3] = h[3][1] = -sigma * t;
    return h;
  }
  int s1 = pole_sign(base.first[2]);
  int s2 = pole_sign(base.second[2]);
  double r1 = model.radius_s, r2 = model.radius_n;
  double beta = (1.0 - t) / r1;
  double gamma = t / (r1 * r2);
  double rho = std::sqrt(r1 * r2);
  double A = -s1 * beta - s1 * s2 * gamma * r2;
  double B = -s1 * s2 * gamma * r1;
  double C = gamma * rho;
  double D = s1 * s2 * gamma * rho;
  h[0][0] = h[1][1] = A;
  h[2][2] = h[3][3] = B;
  h[0][2] = h[2][0] = C;
  h[1][3] = h[3][1] = D;
  return h;
}

// ---------------------------------------------------------------------------
// Rank-zero critical points and their classification
// ---------------------------------------------------------------------------

namespace {

double chart_h(const SystemModel& model, const PhasePoint& base, const std::array<double, 4>& w) {
  return eval_moment(model, chart_point(model, base, w[0], w[1], w[2], w[3])).h;
}

double chart_j(const SystemModel& model, const PhasePoint& base, const std::array<double, 4>& w) {
  return eval_moment(model, chart_point(model, base, w[0], w[1], w[2], w[3])).j;
}

std::array<double, 4> fd_gradient(const SystemModel& model, const PhasePoint& base,
                                  const std::array<double, 4>& w, bool of_h) {
  std::array<double, 4> g{};
  const double step = 1e-6;
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> wp = w, wm = w;
    wp[i] += step;
    wm[i] -= step;
    double fp = of_h ? chart_h(model, base, wp) : chart_j(model, base, wp);
    double fm = of_h ? chart_h(model, base, wm) : chart_j(model, base, wm);
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

double norm4(const std::array<double, 4>& g) {
  return std::sqrt(sq(g[0]) + sq(g[1]) + sq(g[2]) + sq(g[3]));
}

std::vector<PhasePoint> rank0_candidates(const SystemModel& model) {
  std::vector<PhasePoint> pts;
  if (model.kind == ModelKind::SpinOscillator) {
    pts.push_back({{0, 0, -1}, {0, 0, 0}});
    pts.push_back({{0, 0, 1}, {0, 0, 0}});
  } else {
    for (int s1 : {-1, +1})
      for (int s2 : {-1, +1})
        pts.push_back({{0, 0, s1 * model.radius_s}, {0, 0, s2 * model.radius_n}});
  }
  return pts;
}

const PhasePoint* match_rank0(const std::vector<PhasePoint>& pts, const PhasePoint& p) {
  for (const PhasePoint& q : pts) {
    double d = 0;
    for (int i = 0; i < 3; ++i) {
      d = std::max(d, std::abs(q.first[i] - p.first[i]));
      d = std::max(d, std::abs(q.second[i] - p.second[i]));
    }
    if (d < 1e-6) return &q;
  }
  return nullptr;
}

}  // namespace

std::vector<PhasePoint> critical_points_rank0(const SystemModel& model) {
  std::vector<PhasePoint> out;
  for (const PhasePoint& cand : rank0_candidates(model)) {
    std::array<double, 4> w{0, 0, 0, 0};
    // Newton refinement of dH = 0 in the chart; the candidates are already
    // critical so this converges immediately away from degenerate t.
    for (int iter = 0; iter < 8; ++iter) {
      std::array<double, 4> g = fd_gradient(model, cand, w, true);
      if (norm4(g) < 1e-12) break;
      auto hess = chart_hessian(model, cand);
      Eigen::Matrix4d hm;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) hm(i, j) = hess[i][j];
      Eigen::Vector4d gv(g[0], g[1], g[2], g[3]);
      if (std::abs(hm.determinant()) < 1e-12) break;
      Eigen::Vector4d step = hm.fullPivLu().solve(gv);
      for (int i = 0; i < 4; ++i) w[i] -= step(i);
    }
    if (norm4(fd_gradient(model, cand, w, true)) >= 1e-10) continue;  // dH != 0
    out.push_back(chart_point(model, cand, w[0], w[1], w[2], w[3]));
  }
  return out;
}

double rank0_gradient_norm(const SystemModel& model, const PhasePoint& p) {
  std::vector<PhasePoint> pts = rank0_candidates(model);
  const PhasePoint* base = match_rank0(pts, p);
  if (!base) fail(Errc::not_critical, "point is not a rank-zero critical point");
  std::array<double, 4> w{0, 0, 0, 0};
  double gh = norm4(fd_gradient(model, *base, w, true));
  double gj = norm4(fd_gradient(model, *base, w, false));
  return std::sqrt(sq(gh) + sq(gj));
}

const char* singularity_name(SingularityType t) {
  switch (t) {
    case SingularityType::EllipticElliptic: return "elliptic-elliptic";
    case SingularityType::FocusFocus: return "focus-focus";
    case SingularityType::Degenerate: return "degenerate";
  }
  return "unknown";
}

SingularityClass classify_singularity(const SystemModel& model, const PhasePoint& p) {
  std::vector<PhasePoint> pts = rank0_candidates(model);
  const PhasePoint* base = match_rank0(pts, p);
  if (!base) fail(Errc::not_critical, "point is not a rank-zero critical point");

  auto hess = chart_hessian(model, *base);
  // Linearized Hamiltonian vector field for the canonical pairs (q,p), (u,v).
  Eigen::Matrix4d h, j4;
  for (int i = 0; i < 4; ++i)
    for (int jj = 0; jj < 4; ++jj) h(i, jj) = hess[i][jj];
  j4.setZero();
  j4(0, 1) = 1;
  j4(1, 0) = -1;
  j4(2, 3) = 1;
  j4(3, 2) = -1;
  Eigen::Matrix4d lin = j4 * h;
  // The linearization is a Hamiltonian matrix, so its characteristic
  // polynomial is even: l^4 + p l^2 + q. Solve the biquadratic in closed
  // form; iterative real Schur stalls on the rotation-like cases.
  double cp = -0.5 * (lin * lin).trace();
  double cq = lin.determinant();
  double disc_raw = cp * cp - 4.0 * cq;
  // Double roots (disc = 0) would amplify rounding through the square root.
  // The rounding floor is set by the matrix scale, not by the disc terms.
  double mn = lin.norm();
  double disc_scale = std::max(cp * cp + 4.0 * std::abs(cq), mn * mn * mn * mn);
  if (std::abs(disc_raw) < 1e-11 * disc_scale) disc_raw = 0.0;
  std::complex<double> root = std::sqrt(std::complex<double>(disc_raw, 0.0));
  std::complex<double> mu1 = 0.5 * (-cp + root), mu2 = 0.5 * (-cp - root);
  std::complex<double> l1 = std::sqrt(mu1), l2 = std::sqrt(mu2);

  SingularityClass cls;
  cls.eigenvalues = {l1, -l1, l2, -l2};
  std::sort(cls.eigenvalues.begin(), cls.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });

  const double tol = 1e-8;
  double min_abs = std::numeric_limits<double>::infinity(), max_abs = 0;
  for (const auto& ev : cls.eigenvalues) {
    min_abs = std::min(min_abs, std::abs(ev));
    max_abs = std::max(max_abs, std::abs(ev));
  }
  double scale = std::max(1.0, max_abs);
  bool all_real = true, all_imag = true, quadruple = false;
  for (const auto& ev : cls.eigenvalues) {
    if (std::abs(ev.imag()) > tol * scale) all_real = false;
    if (std::abs(ev.real()) > tol * scale) all_imag = false;
    if (std::abs(ev.imag()) > tol * scale && std::abs(ev.real()) > tol * scale) quadruple = true;
  }
  if (min_abs < tol)
    cls.type = SingularityType::Degenerate;
  else if (quadruple || (all_real && !all_imag))
    cls.type = SingularityType::FocusFocus;
  else if (all_imag)
    cls.type = SingularityType::EllipticElliptic;
  else
    cls.type = SingularityType::Degenerate;
  return cls;
}

std::vector<FocusInterval> focus_interval(const SystemModel& prototype,
                                          std::span<const double> t_grid, double tol) {
  std::vector<double> grid(t_grid.begin(), t_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) return {};

  auto has_ff = [&](double t) {
    SystemModel m = prototype.with_t(t);
    for (const PhasePoint& p : critical_points_rank0(m))
      if (classify_singularity(m, p).type == SingularityType::FocusFocus) return true;
    return false;
  };
  std::vector<char> ff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) ff[i] = has_ff(grid[i]) ? 1 : 0;

  auto bisect = [&](double t_out, double t_in) {
    // predicate false at t_out, true at t_in
    for (int iter = 0; iter < 200 && std::abs(t_in - t_out) > tol; ++iter) {
      double mid = 0.5 * (t_in + t_out);
      if (has_ff(mid)) t_in = mid;
      else t_out = mid;
    }
    return 0.5 * (t_in + t_out);
  };

  std::vector<FocusInterval> intervals;
  std::size_t i = 0;
  while (i < grid.size()) {
    if (!ff[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && ff[j + 1]) ++j;
    double lo = i == 0 ? grid.front() : bisect(grid[i - 1], grid[i]);
    double hi = j + 1 == grid.size() ? grid.back() : bisect(grid[j + 1], grid[j]);
    intervals.push_back({lo, hi});
    i = j + 1;
  }
  return intervals;
}

// ---------------------------------------------------------------------------
// Image boundary
// ---------------------------------------------------------------------------

namespace {

// Maximizes f on [lo, hi]: dense scan plus golden-section refinement.
double maximize_1d(double lo, double hi, const std::function<double(double)>& f) {
  if (hi <= lo) return f(lo);
  const int n = 1200;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    double v = f(x);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best_i - 1) / n;
  double b = lo + (hi - lo) * std::min(n, best_i + 1) / n;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 120 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return std::max({best, fc, fd});
}

struct FiberRange {
  double lo, hi;  // range of the transverse coordinate on the fiber
};

FiberRange fiber_range(const SystemModel& model, double x) {
  if (model.kind == ModelKind::SpinOscillator) {
    if (x < model.j_min() - 1e-12) fail(Errc::empty_level_set, "x below the minimum of J");
    return {-1.0, std::min(1.0, x)};
  }
  double r1 = model.radius_s, r2 = model.radius_n;
  double lo = std::max(-r1, x - r2), hi = std::min(r1, x + r2);
  if (hi < lo - 1e-12) fail(Errc::empty_level_set, "x outside the image of J");
  return {lo, std::max(lo, hi)};
}

// H on the fiber J = x as base(z) + amp(z) cos(angle), amp >= 0.
void fiber_profile(const SystemModel& model, double x, double z, double* base, double* amp) {
  if (model.kind == ModelKind::SpinOscillator) {
    double t = model.t;
    *base = (1.0 - 2.0 * t) * (x - 2.0 * z);
    *amp = std::abs(t) * std::sqrt(std::max(0.0, 2.0 * (x - z) * (1.0 - z * z)));
    return;
  }
  double t = model.t, r1 = model.radius_s, r2 = model.radius_n;
  double gamma = t / (r1 * r2);
  double nz = x - z;
  *base = (1.0 - t) / r1 * z + gamma * z * nz;
  *amp = std::abs(gamma) *
         std::sqrt(std::max(0.0, (sq(r1) - sq(z)) * (sq(r2) - sq(nz))));
}

}  // namespace

BoundarySample image_boundary_at(const SystemModel& model, double x) {
  FiberRange fr = fiber_range(model, x);
  double lo = fr.lo, hi = std::max(fr.lo, fr.hi);
  auto up = [&](double z) {
    double base, amp;
    fiber_profile(model, x, z, &base, &amp);
    return base + amp;
  };
  auto down = [&](double z) {
    double base, amp;
    fiber_profile(model, x, z, &base, &amp);
    return -(base - amp);
  };
  double h_plus = maximize_1d(lo, hi, up);
  double h_minus = -maximize_1d(lo, hi, down);
  return {x, h_minus, h_plus};
}

std::vector<BoundarySample> image_boundary(const SystemModel& model, std::span<const double> xs) {
  std::vector<BoundarySample> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(image_boundary_at(model, x));
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature kernels
// ---------------------------------------------------------------------------

namespace {

// dN-measure of {s in [0, smax] : a2 s^2 + b s + c <= 0}, where N = s^2 / 2.
double n_measure(double a2, double b, double c, double smax) {
  auto piece = [&](double s0, double s1) {
    s0 = std::max(s0, 0.0);
    s1 = std::min(s1, smax);
    return s1 > s0 ? 0.5 * (sq(s1) - sq(s0)) : 0.0;
  };
  const double tiny = 1e-14;
  if (std::abs(a2) < tiny) {
    if (std::abs(b) < tiny) return c <= 0 ? piece(0, smax) : 0.0;
    double r = -c / b;
    return b > 0 ? piece(0, r) : piece(r, smax);
  }
  double disc = sq(b) - 4.0 * a2 * c;
  if (disc <= 0) return a2 > 0 ? 0.0 : piece(0, smax);
  double sqd = std::sqrt(disc);
  double r1 = (-b - sqd) / (2.0 * a2), r2 = (-b + sqd) / (2.0 * a2);
  if (r1 > r2) std::swap(r1, r2);
  if (a2 > 0) return piece(r1, r2);
  return piece(0, r1) + piece(r2, smax);
}

// Measure of {angle in [0, 2pi) : c1 + amp cos(angle) <= h}.
double angle_measure(double amp, double c1, double h) {
  if (std::isinf(h)) return h > 0 ? kTwoPi : 0.0;
  double d = h - c1;
  if (std::abs(amp) < 1e-15) return d >= 0 ? kTwoPi : 0.0;
  double w = d / amp;
  if (amp > 0) {
    if (w >= 1.0) return kTwoPi;
    if (w <= -1.0) return 0.0;
    return kTwoPi - 2.0 * std::acos(w);
  }
  if (w <= -1.0) return kTwoPi;
  if (w >= 1.0) return 0.0;
  return 2.0 * std::acos(w);
}

double spin_sublevel(const SystemModel& model, double x, double h,
                     const QuadratureOptions& opts) {
  int n = opts.grid;
  double t = model.t;
  double dz = 2.0 / n;
  double dphi = kTwoPi / n;
  double a2 = 0.5 * (1.0 - 2.0 * t);
  bool full = std::isinf(h) && h > 0;
  double total = row_sum(n, opts.parallel, [&](int i) {
    double z = -1.0 + (i + 0.5) * dz;
    double nmax = x - z;
    if (nmax <= 0) return 0.0;
    if (full) return static_cast<double>(n) * nmax;
    double smax = std::sqrt(2.0 * nmax);
    double w = std::sqrt(std::max(0.0, 1.0 - sq(z)));
    double cc = -(1.0 - 2.0 * t) * z - h;
    double row = 0;
    for (int j = 0; j < n; ++j) {
      double phi = (j + 0.5) * dphi;
      row += n_measure(a2, t * w * std::cos(phi), cc, smax);
    }
    return row;
  });
  return total * dz * dphi / kTwoPi;
}

double coupled_sublevel(const SystemModel& model, double x, double h,
                        const QuadratureOptions& opts) {
  int n = opts.grid;
  double t = model.t, r1 = model.radius_s, r2 = model.radius_n;
  double beta = (1.0 - t) / r1;
  double gamma = t / (r1 * r2);
  double ds = 2.0 * r1 / n;
  double total = row_sum(n, opts.parallel, [&](int i) {
    double sz = -r1 + (i + 0.5) * ds;
    double cap = std::min(r2, x - sz);
    if (cap <= -r2) return 0.0;
    double dn = (cap + r2) / n;
    double row = 0;
    for (int j = 0; j < n; ++j) {
      double nz = -r2 + (j + 0.5) * dn;
      double c1 = beta * sz + gamma * sz * nz;
      double amp = gamma * std::sqrt(std::max(0.0, (sq(r1) - sq(sz)) * (sq(r2) - sq(nz))));
      row += angle_measure(amp, c1, h);
    }
    return row * dn;
  });
  return total * ds / kTwoPi;
}

}  // namespace

double sublevel_volume(const SystemModel& model, double x, double h,
                       const QuadratureOptions& opts) {
  if (opts.grid < 8) fail(Errc::invalid_input, "quadrature grid too small");
  return model.kind == ModelKind::SpinOscillator ? spin_sublevel(model, x, h, opts)
                                                 : coupled_sublevel(model, x, h, opts);
}

double cumulative_volume(const SystemModel& model, double x, const QuadratureOptions& opts) {
  return sublevel_volume(model, x, std::numeric_limits<double>::infinity(), opts);
}

double developing_map(const SystemModel& model, double x, double h,
                      const QuadratureOptions& opts) {
  double jmin = model.j_min();
  if (!(x > jmin)) fail(Errc::out_of_range, "x must be interior to the image of J");
  if (model.j_bounded_above() && !(x < model.j_max()))
    fail(Errc::out_of_range, "x must be interior to the image of J");
  BoundarySample bs = image_boundary_at(model, x);
  double pad = 1e-9 * std::max(1.0, std::abs(bs.h_plus) + std::abs(bs.h_minus));
  if (h < bs.h_minus - pad || h > bs.h_plus + pad)
    fail(Errc::out_of_range, "h outside [H-(x), H+(x)]");
  double delta = std::min(opts.fd_step, 0.45 * (x - jmin));
  if (model.j_bounded_above()) delta = std::min(delta, 0.45 * (model.j_max() - x));
  double vp = sublevel_volume(model, x + delta, h, opts);
  double vm = sublevel_volume(model, x - delta, h, opts);
  return (vp - vm) / (2.0 * delta);
}

double developing_map_direct(const SystemModel& model, double x, double h,
                             const QuadratureOptions& opts) {
  FiberRange fr = fiber_range(model, x);
  double lo = fr.lo, hi = std::max(fr.lo, fr.hi);
  if (hi <= lo) return 0.0;
  int n = opts.grid;
  double dz = (hi - lo) / n;
  double total = row_sum(n, opts.parallel, [&](int i) {
    double z = lo + (i + 0.5) * dz;
    double base, amp;
    fiber_profile(model, x, z, &base, &amp);
    return angle_measure(amp, base, h);
  });
  // For the spin-oscillator, dN = dz on the fiber J = x; for the coupled
  // model, dN_z = -dS_z up to orientation. Either way the reduced measure is
  // the transverse coordinate times the angle measure over 2 pi.
  return total * dz / kTwoPi;
}

// ---------------------------------------------------------------------------
// Polygonization
// ---------------------------------------------------------------------------

namespace {

struct LineFit {
  double slope = 0, intercept = 0, max_residual = 0;
};

LineFit fit_line(const std::vector<std::pair<double, double>>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double det = n * sxx - sx * sx;
  LineFit f;
  if (std::abs(det) < 1e-300) {
    f.slope = 0;
    f.intercept = n > 0 ? sy / n : 0;
  } else {
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
  }
  for (const auto& [x, y] : pts)
    f.max_residual = std::max(f.max_residual, std::abs(y - (f.slope * x + f.intercept)));
  return f;
}

// One-sided germ (value, slope) at x0 from a quadratic least-squares fit.
std::pair<double, double> quadratic_germ(const std::vector<std::pair<double, double>>& pts,
                                         double x0) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (const auto& [x, y] : pts) {
    double d = x - x0;
    Eigen::Vector3d row(1.0, d, d * d);
    m += row * row.transpose();
    rhs += row * y;
  }
  Eigen::Vector3d c = m.fullPivLu().solve(rhs);
  return {c(0), c(1)};
}

Rational snap_or_exact(double v, double tol, bool* snapped_ok) {
  Rational out;
  if (snap_to_rational(v, tol, 32, &out)) return out;
  *snapped_ok = false;
  // No small-denominator value nearby: keep the numeric value to 9 decimals.
  return Rational(std::llround(v * 1e9), 1000000000LL);
}

}  // namespace

PolygonizeResult polygonize(const SystemModel& model, std::span<const double> x_grid, double tol,
                            const QuadratureOptions& opts) {
  if (x_grid.empty()) fail(Errc::fit_failure, "empty sampling grid");
  if (!(tol > 0)) fail(Errc::invalid_input, "tolerance must be positive");
  std::vector<double> xs(x_grid.begin(), x_grid.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double jmin = model.j_min();
  double xlo = std::max(xs.front(), jmin);
  double xhi = xs.back();
  if (model.j_bounded_above()) xhi = std::min(xhi, model.j_max());
  if (!(xhi - xlo > 20.0 * opts.fd_step)) fail(Errc::fit_failure, "sampling grid too narrow");

  // Rank-zero structure: focus-focus fibres become nodes, interior elliptic
  // values mark the cell boundaries where charts need gluing.
  struct NodeInfo {
    double x, h;
    std::int64_t k;
  };
  std::vector<NodeInfo> nodes;
  std::vector<double> vertex_xs;
  {
    std::vector<Moment> ff;
    for (const PhasePoint& p : critical_points_rank0(model)) {
      SingularityClass cls = classify_singularity(model, p);
      Moment m = eval_moment(model, p);
      if (cls.type == SingularityType::Degenerate)
        fail(Errc::validation_failure,
             "degenerate rank-zero singularity; the system is not semi-toric at this t");
      if (cls.type == SingularityType::FocusFocus) {
        ff.push_back(m);
      } else if (m.j > xlo + 1e-9 && m.j < xhi - 1e-9) {
        vertex_xs.push_back(m.j);
      }
    }
    std::vector<char> used(ff.size(), 0);
    for (std::size_t i = 0; i < ff.size(); ++i) {
      if (used[i]) continue;
      std::int64_t k = 0;
      for (std::size_t j = i; j < ff.size(); ++j) {
        if (!used[j] && std::abs(ff[j].j - ff[i].j) < 1e-8 && std::abs(ff[j].h - ff[i].h) < 1e-8) {
          used[j] = 1;
          ++k;
        }
      }
      if (ff[i].j <= xlo + 1e-9 || ff[i].j >= xhi - 1e-9)
        fail(Errc::validation_failure, "sampling grid does not cover a focus-focus value");
      nodes.push_back({ff[i].j, ff[i].h, k});
    }
  }

  std::vector<double> bounds{xlo};
  {
    std::vector<double> interior;
    for (const NodeInfo& nd : nodes) interior.push_back(nd.x);
    for (double v : vertex_xs) interior.push_back(v);
    std::sort(interior.begin(), interior.end());
    for (double v : interior)
      if (bounds.empty() || v - bounds.back() > 1e-9) bounds.push_back(v);
    bounds.push_back(xhi);
  }
  std::size_t n_cells = bounds.size() - 1;

  auto is_node_x = [&](double x) {
    for (const NodeInfo& nd : nodes)
      if (std::abs(nd.x - x) < 1e-9) return true;
    return false;
  };
  auto is_vertex_x = [&](double x) {
    for (double v : vertex_xs)
      if (std::abs(v - x) < 1e-9) return true;
    return false;
  };

  // Chart gluing: corrected(x) = raw(x) + mu * x + c per cell, measured from
  // the one-sided germs of the developing map at a fixed interior height.
  std::vector<double> cell_mu(n_cells, 0.0), cell_c(n_cells, 0.0);
  for (std::size_t b = 1; b < n_cells; ++b) {
    double xb = bounds[b];
    cell_mu[b] = cell_mu[b - 1];
    cell_c[b] = cell_c[b - 1];
    if (is_node_x(xb) && !is_vertex_x(xb)) continue;  // charts glue smoothly below the node

    BoundarySample bs = image_boundary_at(model, xb);
    double htop = bs.h_plus;
    for (const NodeInfo& nd : nodes)
      if (std::abs(nd.x - xb) < 1e-9) htop = std::min(htop, nd.h);
    double hstar = 0.5 * (bs.h_minus + htop);

    auto germ = [&](double from, double to, int m) {
      std::vector<std::pair<double, double>> pts;
      for (int i = 0; i < m; ++i) {
        double x = from + (to - from) * i / (m - 1);
        pts.push_back({x, developing_map(model, x, hstar, opts)});
      }
      return quadratic_germ(pts, xb);
    };
    double wl = bounds[b] - bounds[b - 1], wr = bounds[b + 1] - bounds[b];
    double inset = std::max(6.0 * opts.fd_step, 0.01 * std::min(wl, wr));
    double wl_win = std::min(0.35 * wl, 0.8), wr_win = std::min(0.35 * wr, 0.8);
    auto [l0, ls] = germ(xb - inset - wl_win, xb - inset, 12);
    auto [r0, rs] = germ(xb + inset + wr_win, xb + inset, 12);
    // left side carries the previous correction
    l0 += cell_mu[b - 1] * xb + cell_c[b - 1];
    ls += cell_mu[b - 1];
    double dmu = ls - rs;
    double dc = l0 - r0;
    cell_mu[b] += dmu;
    cell_c[b] += dc - dmu * xb;
  }

  // Per-cell sampling and linear fits of both chains.
  PolygonizeDiagnostics diag;
  diag.cell_bounds = bounds;
  std::vector<LineFit> bottom_fit(n_cells), top_fit(n_cells);
  for (std::size_t ci = 0; ci < n_cells; ++ci) {
    double c0 = bounds[ci], c1 = bounds[ci + 1];
    double w = c1 - c0;
    double inset = std::max(6.0 * opts.fd_step, 0.02 * w);
    std::vector<double> sample_xs;
    for (double x : xs)
      if (x >= c0 + inset && x <= c1 - inset) sample_xs.push_back(x);
    if (sample_xs.size() < 5) {
      sample_xs.clear();
      for (int i = 0; i < 7; ++i)
        sample_xs.push_back(c0 + inset + (c1 - c0 - 2 * inset) * i / 6.0);
    }
    std::vector<std::pair<double, double>> bpts, tpts;
    for (double x : sample_xs) {
      BoundarySample bs = image_boundary_at(model, x);
      double corr = cell_mu[ci] * x + cell_c[ci];
      bpts.push_back({x, developing_map(model, x, bs.h_minus, opts) + corr});
      tpts.push_back({x, developing_map(model, x, bs.h_plus, opts) + corr});
    }
    bottom_fit[ci] = fit_line(bpts);
    top_fit[ci] = fit_line(tpts);
    diag.max_cell_residual = std::max(
        {diag.max_cell_residual, bottom_fit[ci].max_residual, top_fit[ci].max_residual});
    if (bottom_fit[ci].max_residual > tol || top_fit[ci].max_residual > tol)
      fail(Errc::fit_failure, "per-cell linear fit residual exceeds the tolerance in cell " +
                                  std::to_string(ci));
  }

  // Float chains at the cell bounds (pre-snap), averaging adjacent fits.
  auto chain_values = [&](const std::vector<LineFit>& fits) {
    std::vector<double> v(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      double acc = 0;
      int cnt = 0;
      if (i > 0) {
        acc += fits[i - 1].slope * bounds[i] + fits[i - 1].intercept;
        ++cnt;
      }
      if (i < n_cells) {
        acc += fits[i].slope * bounds[i] + fits[i].intercept;
        ++cnt;
      }
      v[i] = acc / cnt;
    }
    return v;
  };
  diag.bottom_values = chain_values(bottom_fit);
  diag.top_values = chain_values(top_fit);
  for (const NodeInfo& nd : nodes) {
    std::size_t b = 0;
    while (b < bounds.size() && std::abs(bounds[b] - nd.x) > 1e-9) ++b;
    double corr = cell_mu[std::min(b, n_cells - 1)] * nd.x + cell_c[std::min(b, n_cells - 1)];
    diag.node_estimates.push_back({nd.x, developing_map(model, nd.x, nd.h, opts) + corr});
  }

  // Snap to exact data: anchors and cell-bound abscissae with small
  // denominators, slopes per cell, then rebuild the chains exactly.
  double snap_tol = 5.0 * tol;
  bool ok = true;
  std::vector<Rational> rbounds;
  for (double bx : bounds) rbounds.push_back(snap_or_exact(bx, snap_tol, &ok));
  auto build_chain = [&](const std::vector<LineFit>& fits, const std::vector<double>& fvals) {
    std::vector<Rational> vals(rbounds.size());
    vals[0] = snap_or_exact(fvals[0], snap_tol, &ok);
    for (std::size_t i = 0; i < n_cells; ++i) {
      Rational slope = snap_or_exact(fits[i].slope, snap_tol, &ok);
      vals[i + 1] = vals[i] + slope * (rbounds[i + 1] - rbounds[i]);
    }
    return PiecewiseLinear::make(ExtendedRational(rbounds.front()),
                                 ExtendedRational(rbounds.back()), rbounds, vals)
        .canonicalized();
  };
  PiecewiseLinear bottom = build_chain(bottom_fit, diag.bottom_values);
  PiecewiseLinear top = build_chain(top_fit, diag.top_values);
  diag.all_edges_snapped = ok;

  Polygon poly = [&] {
    try {
      return Polygon::make(std::move(bottom), std::move(top));
    } catch (const Error& e) {
      fail(Errc::validation_failure,
           std::string("snapped chains do not bound a convex polygon: ") + e.what());
    }
  }();

  // Node abscissae are vertex data of the affine structure and snap like the
  // slopes; the ordinate is not rational in general, so it only snaps within
  // the estimator accuracy.
  double node_y_tol = std::max(tol / 5.0, 2.0 * opts.fd_step);
  std::vector<Cut> cuts;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    bool node_ok = true;
    Cut c;
    c.node.x = snap_or_exact(diag.node_estimates[i][0], snap_tol, &node_ok);
    c.node.y = snap_or_exact(diag.node_estimates[i][1], node_y_tol, &node_ok);
    c.multiplicity = nodes[i].k;
    c.sign = +1;
    if (!node_ok) diag.all_edges_snapped = false;
    cuts.push_back(c);
  }
  SemitoricPolygon sp(std::move(poly), CutSystem::make(std::move(cuts)));
  ValidationReport report = sp.validate();
  if (!report.ok())
    fail(Errc::validation_failure,
         "reconstructed polygon fails validation: " + report.issues.front().message);
  return {std::move(sp), std::move(diag)};
}

}  // namespace semitoric
