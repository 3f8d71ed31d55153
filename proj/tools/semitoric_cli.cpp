// Command-line front end: polygon I/O and group actions, Duistermaat-Heckman
// computations, and sampling/reconstruction for the two example systems.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "semitoric/dh.hpp"
#include "semitoric/json_io.hpp"
#include "semitoric/svg.hpp"
#include "semitoric/systems.hpp"

namespace st = semitoric;

namespace {

int exit_code_for(st::Errc code) {
  switch (code) {
    case st::Errc::usage_error:
      return 2;
    case st::Errc::fit_failure:
    case st::Errc::empty_level_set:
    case st::Errc::out_of_range:
    case st::Errc::internal:
      return 3;
    default:
      return 1;
  }
}

void print_error(st::Errc code, const std::string& message) {
  st::Json j;
  j["error"]["code"] = st::errc_name(code);
  j["error"]["message"] = message;
  std::cerr << st::dump_canonical(j);
}

st::SemitoricPolygon load_sp(const std::string& path) {
  return st::semitoric_from_json(st::load_json_file(path));
}

st::SemitoricPolygon load_valid_sp(const std::string& path) {
  st::SemitoricPolygon sp = load_sp(path);
  st::ValidationReport report = sp.validate();
  if (!report.ok())
    st::fail(st::Errc::validation_failure,
             "input polygon is invalid: " + report.issues.front().message);
  return sp;
}

std::vector<int> parse_bits(const std::string& s, std::size_t m) {
  if (s.size() != m)
    st::fail(st::Errc::usage_error, "--bits must have one character per cut (" +
                                        std::to_string(m) + " expected)");
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1') st::fail(st::Errc::usage_error, "--bits must be a 0/1 string");
    bits.push_back(c - '0');
  }
  return bits;
}

st::SystemModel make_model(const std::string& name, double t,
                           const std::vector<double>& radii) {
  if (name == "spin-oscillator") {
    if (!radii.empty())
      st::fail(st::Errc::usage_error, "--radii only applies to the coupled-sz model");
    return st::SystemModel::spin_oscillator(t);
  }
  if (name == "coupled-sz") {
    double rs = radii.size() > 0 ? radii[0] : 1.0;
    double rn = radii.size() > 1 ? radii[1] : 2.0;
    return st::SystemModel::coupled_angular_momenta(t, rs, rn);
  }
  st::fail(st::Errc::usage_error, "unknown model \"" + name + "\"");
}

void write_output(const std::string& text) { std::cout << text; }

void maybe_svg(const std::optional<std::string>& path, const std::string& svg) {
  if (path) st::write_text_file(*path, svg);
}

std::string csv_density(const st::DHFunction& f, int resolution) {
  std::string out = "x,rho\n";
  const st::PiecewiseLinear& d = f.density;
  double lo = d.breakpoints().front().to_double();
  double hi = d.breakpoints().back().to_double();
  double pad = std::max(1.0, 0.15 * (hi - lo));
  lo = d.xmin().is_finite() ? d.xmin().finite().to_double() : lo - pad;
  hi = d.xmax().is_finite() ? d.xmax().finite().to_double() : hi + pad;
  if (hi <= lo) hi = lo + 1.0;
  for (int i = 0; i <= resolution; ++i) {
    double x = lo + (hi - lo) * i / resolution;
    st::Rational rx = st::Rational::from_double_exact(x);
    double v = d.contains(rx) ? d.value(rx).to_double() : 0.0;
    out += st::format_double(x) + "," + st::format_double(v) + "\n";
  }
  // exact breakpoint table
  out += "# breakpoint,value,slope_right\n";
  st::PiecewiseLinear c = d.canonicalized();
  for (std::size_t i = 0; i < c.breakpoints().size(); ++i) {
    const st::Rational& x = c.breakpoints()[i];
    std::string slope = "-";
    if (i + 1 < c.breakpoints().size() || c.right_slope()) slope = c.slope_right(x).str();
    out += "# " + x.str() + "," + c.value(x).str() + "," + slope + "\n";
  }
  return out;
}

struct SystemArgs {
  std::string model = "spin-oscillator";
  double t = 0.5;
  std::vector<double> radii;
  int grid = 41;
  double tol = 1e-2;
  int quad_grid = 400;
  double fd_step = 1e-3;
  std::uint64_t seed = 0;
  double xmax = 3.0;
  bool xmax_set = false;
};

void add_system_flags(CLI::App* cmd, SystemArgs* args, bool with_tol) {
  cmd->add_option("--model", args->model, "spin-oscillator or coupled-sz")->required();
  cmd->add_option("--t", args->t, "coupling parameter");
  cmd->add_option("--radii", args->radii, "sphere radii |S| |N| (coupled-sz)")->expected(2);
  cmd->add_option("--grid", args->grid, "number of x samples");
  if (with_tol) cmd->add_option("--tol", args->tol, "fit/snap tolerance");
  cmd->add_option("--quad-grid", args->quad_grid, "quadrature resolution per axis");
  cmd->add_option("--fd-step", args->fd_step, "central-difference step");
  cmd->add_option("--seed", args->seed, "seed for stochastic kernels (reserved)");
  cmd->add_option("--xmax", args->xmax, "right end of the sampling window")
      ->each([args](const std::string&) { args->xmax_set = true; });
}

std::vector<double> sample_grid(const st::SystemModel& model, const SystemArgs& args) {
  double lo = model.j_min();
  double hi = args.xmax;
  if (model.j_bounded_above() && !args.xmax_set) hi = model.j_max();
  if (!(hi > lo)) st::fail(st::Errc::usage_error, "--xmax must exceed the minimum of J");
  int n = std::max(args.grid, 2);
  std::vector<double> xs;
  for (int i = 0; i <= n; ++i) xs.push_back(lo + (hi - lo) * i / n);
  return xs;
}

st::QuadratureOptions quad_options(const SystemArgs& args) {
  st::QuadratureOptions opts;
  opts.grid = args.quad_grid;
  opts.fd_step = args.fd_step;
  opts.seed = args.seed;
  return opts;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"semitoric moment polygons, Duistermaat-Heckman densities, and example systems"};
  app.require_subcommand(1);

  // ---- polygon ----
  CLI::App* polygon = app.add_subcommand("polygon", "exact polygon operations");
  polygon->require_subcommand(1);
  std::string in_path, bits_str;
  std::optional<std::string> svg_path;
  std::vector<double> trunc;

  CLI::App* p_validate = polygon->add_subcommand("validate", "validate a semitoric polygon");
  p_validate->add_option("file", in_path)->required();
  p_validate->add_option("--svg", svg_path, "write a drawing");

  CLI::App* p_canonical = polygon->add_subcommand("canonical", "canonical representative");
  p_canonical->add_option("file", in_path)->required();

  CLI::App* p_flip = polygon->add_subcommand("flip", "apply a cut sign flip");
  p_flip->add_option("--bits", bits_str, "0/1 string, one bit per cut in sorted order")
      ->required();
  p_flip->add_option("file", in_path)->required();

  CLI::App* p_orbit = polygon->add_subcommand("orbit", "full flip orbit");
  p_orbit->add_option("file", in_path)->required();

  CLI::App* p_area = polygon->add_subcommand("area", "polygon area");
  p_area->add_option("file", in_path)->required();
  p_area->add_option("--truncate", trunc, "truncation interval a b")->expected(2);

  // ---- dh ----
  CLI::App* dh = app.add_subcommand("dh", "Duistermaat-Heckman computations");
  dh->require_subcommand(1);
  std::optional<std::string> csv_path;
  int resolution = 200;

  CLI::App* d_rhoj = dh->add_subcommand("rho-j", "density of the circle-action momentum");
  d_rhoj->add_option("file", in_path)->required();
  d_rhoj->add_option("--csv", csv_path, "write sampled values");
  d_rhoj->add_option("--resolution", resolution, "number of CSV samples");
  d_rhoj->add_option("--svg", svg_path, "write a drawing");

  CLI::App* d_rhok = dh->add_subcommand("rho-k", "density of the second action coordinate");
  d_rhok->add_option("--truncate", trunc, "truncation interval a b")->expected(2)->required();
  d_rhok->add_option("file", in_path)->required();
  d_rhok->add_option("--csv", csv_path, "write sampled values");
  d_rhok->add_option("--resolution", resolution, "number of CSV samples");
  d_rhok->add_option("--svg", svg_path, "write a drawing");

  CLI::App* d_jumps = dh->add_subcommand("jumps", "derivative jumps: measured vs predicted");
  d_jumps->add_option("file", in_path)->required();

  CLI::App* d_compact = dh->add_subcommand("compactness", "boundedness/compactness predicates");
  d_compact->add_option("file", in_path)->required();

  // ---- system ----
  CLI::App* system = app.add_subcommand("system", "example integrable systems");
  system->require_subcommand(1);
  SystemArgs sys;
  bool with_f2 = false;
  double tmin = 0.0, tmax = 1.2;
  int tsteps = 49;
  std::optional<std::string> diag_path;

  CLI::App* s_sample = system->add_subcommand("sample", "image boundary samples");
  add_system_flags(s_sample, &sys, false);
  s_sample->add_flag("--f2", with_f2, "also sample the developing map along the top boundary");
  s_sample->add_option("--csv", csv_path, "write CSV here instead of stdout");

  CLI::App* s_classify = system->add_subcommand("classify", "rank-zero singularity classes");
  add_system_flags(s_classify, &sys, false);

  CLI::App* s_focus = system->add_subcommand("focus-interval", "focus-focus parameter ranges");
  add_system_flags(s_focus, &sys, false);
  s_focus->add_option("--t-min", tmin, "scan start");
  s_focus->add_option("--t-max", tmax, "scan end");
  s_focus->add_option("--t-steps", tsteps, "scan steps");
  s_focus->add_option("--csv", csv_path, "write the (t, classification) scan");

  CLI::App* s_polygonize = system->add_subcommand("polygonize", "reconstruct the moment polygon");
  add_system_flags(s_polygonize, &sys, true);
  s_polygonize->add_option("--diag", diag_path, "write fit diagnostics");
  s_polygonize->add_option("--svg", svg_path, "write a drawing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(st::Errc::usage_error, e.what());
    return 2;
  }

  try {
    if (p_validate->parsed()) {
      st::SemitoricPolygon sp = load_sp(in_path);
      st::ValidationReport report = sp.validate();
      write_output(st::dump_canonical(st::validation_report_to_json(report)));
      maybe_svg(svg_path, st::svg_polygon(sp));
      return report.ok() ? 0 : 1;
    }
    if (p_canonical->parsed()) {
      st::SemitoricPolygon sp = load_valid_sp(in_path);
      write_output(st::dump_canonical(st::semitoric_to_json(sp.canonical_form())));
      return 0;
    }
    if (p_flip->parsed()) {
      st::SemitoricPolygon sp = load_valid_sp(in_path);
      std::vector<int> bits = parse_bits(bits_str, sp.cut_count());
      write_output(st::dump_canonical(st::semitoric_to_json(sp.flip(bits))));
      return 0;
    }
    if (p_orbit->parsed()) {
      st::SemitoricPolygon sp = load_valid_sp(in_path);
      st::Json out;
      out["free_action"] = sp.is_free_action();
      st::Json elements = st::Json::array();
      for (const st::OrbitElement& e : sp.orbit()) {
        st::Json je;
        std::string bits;
        for (int b : e.bits) bits += char('0' + b);
        je["bits"] = bits;
        je["duplicate_of"] =
            e.duplicate_of ? st::Json(*e.duplicate_of) : st::Json(nullptr);
        je["polygon"] = st::semitoric_to_json(e.sp);
        elements.push_back(je);
      }
      out["elements"] = elements;
      write_output(st::dump_canonical(out));
      return 0;
    }
    if (p_area->parsed()) {
      st::SemitoricPolygon sp = load_sp(in_path);
      std::optional<st::Polygon::Truncation> tr;
      if (!trunc.empty())
        tr = st::Polygon::Truncation{st::Rational::from_double_exact(trunc[0]),
                                     st::Rational::from_double_exact(trunc[1])};
      st::Json out;
      out["area"] = sp.polygon().area(tr).str();
      write_output(st::dump_canonical(out));
      return 0;
    }
    if (d_rhoj->parsed() || d_rhok->parsed()) {
      st::SemitoricPolygon sp = load_valid_sp(in_path);
      st::DHFunction f =
          d_rhoj->parsed()
              ? st::rho_J(sp)
              : st::rho_K(sp, st::Rational::from_double_exact(trunc[0]),
                          st::Rational::from_double_exact(trunc[1]));
      write_output(st::dump_canonical(st::dh_to_json(f)));
      if (csv_path) st::write_text_file(*csv_path, csv_density(f, resolution));
      maybe_svg(svg_path, st::svg_density(f));
      return 0;
    }
    if (d_jumps->parsed()) {
      st::SemitoricPolygon sp = load_valid_sp(in_path);
      write_output(st::dump_canonical(st::jumps_to_json(st::jumps(sp))));
      return 0;
    }
    if (d_compact->parsed()) {
      st::SemitoricPolygon sp = load_valid_sp(in_path);
      write_output(st::dump_canonical(st::compactness_to_json(st::compactness_report(sp))));
      return 0;
    }
    if (s_sample->parsed()) {
      st::SystemModel model = make_model(sys.model, sys.t, sys.radii);
      st::QuadratureOptions opts = quad_options(sys);
      std::vector<double> xs = sample_grid(model, sys);
      std::string csv = with_f2 ? "x,h_minus,h_plus,f2_top\n" : "x,h_minus,h_plus\n";
      for (double x : xs) {
        // keep strictly inside the image so the developing map is defined
        double xi = std::min(std::max(x, model.j_min() + 2 * opts.fd_step),
                             model.j_bounded_above() ? model.j_max() - 2 * opts.fd_step
                                                     : x + 1.0);
        st::BoundarySample bs = st::image_boundary_at(model, xi);
        csv += st::format_double(bs.x) + "," + st::format_double(bs.h_minus) + "," +
               st::format_double(bs.h_plus);
        if (with_f2)
          csv += "," + st::format_double(st::developing_map(model, xi, bs.h_plus, opts));
        csv += "\n";
      }
      if (csv_path) st::write_text_file(*csv_path, csv);
      else write_output(csv);
      return 0;
    }
    if (s_classify->parsed()) {
      st::SystemModel model = make_model(sys.model, sys.t, sys.radii);
      st::Json out = st::Json::array();
      for (const st::PhasePoint& p : st::critical_points_rank0(model)) {
        st::SingularityClass cls = st::classify_singularity(model, p);
        st::Moment m = st::eval_moment(model, p);
        st::Json jp;
        jp["point"]["first"] = {st::round_double(p.first[0]), st::round_double(p.first[1]),
                                st::round_double(p.first[2])};
        jp["point"]["second"] = {st::round_double(p.second[0]), st::round_double(p.second[1]),
                                 st::round_double(p.second[2])};
        jp["j"] = st::round_double(m.j);
        jp["h"] = st::round_double(m.h);
        jp["class"] = st::singularity_name(cls.type);
        st::Json evs = st::Json::array();
        for (const auto& ev : cls.eigenvalues)
          evs.push_back({st::round_double(ev.real()), st::round_double(ev.imag())});
        jp["eigenvalues"] = evs;
        jp["gradient_norm"] = st::round_double(st::rank0_gradient_norm(model, p));
        out.push_back(jp);
      }
      write_output(st::dump_canonical(out));
      return 0;
    }
    if (s_focus->parsed()) {
      st::SystemModel model = make_model(sys.model, sys.t, sys.radii);
      std::vector<double> grid;
      int n = std::max(tsteps, 2);
      for (int i = 0; i <= n; ++i) grid.push_back(tmin + (tmax - tmin) * i / n);
      std::vector<st::FocusInterval> intervals = st::focus_interval(model, grid);
      st::Json out;
      st::Json arr = st::Json::array();
      for (const st::FocusInterval& iv : intervals)
        arr.push_back({st::round_double(iv.t_lo), st::round_double(iv.t_hi)});
      out["intervals"] = arr;
      write_output(st::dump_canonical(out));
      if (csv_path) {
        std::string csv = "t,point,classification\n";
        for (double t : grid) {
          st::SystemModel mt = model.with_t(t);
          std::vector<st::PhasePoint> pts = st::critical_points_rank0(mt);
          for (std::size_t i = 0; i < pts.size(); ++i)
            csv += st::format_double(t) + "," + std::to_string(i) + "," +
                   st::singularity_name(st::classify_singularity(mt, pts[i]).type) + "\n";
        }
        st::write_text_file(*csv_path, csv);
      }
      return 0;
    }
    if (s_polygonize->parsed()) {
      st::SystemModel model = make_model(sys.model, sys.t, sys.radii);
      st::QuadratureOptions opts = quad_options(sys);
      std::vector<double> xs = sample_grid(model, sys);
      st::PolygonizeResult result = st::polygonize(model, xs, sys.tol, opts);
      write_output(st::dump_canonical(st::semitoric_to_json(result.sp)));
      if (diag_path) {
        st::Json d;
        st::Json cb = st::Json::array(), bv = st::Json::array(), tv = st::Json::array(),
                 ne = st::Json::array();
        for (double v : result.diag.cell_bounds) cb.push_back(st::round_double(v));
        for (double v : result.diag.bottom_values) bv.push_back(st::round_double(v));
        for (double v : result.diag.top_values) tv.push_back(st::round_double(v));
        for (const auto& p : result.diag.node_estimates)
          ne.push_back({st::round_double(p[0]), st::round_double(p[1])});
        d["cell_bounds"] = cb;
        d["bottom_values"] = bv;
        d["top_values"] = tv;
        d["node_estimates"] = ne;
        d["max_cell_residual"] = st::round_double(result.diag.max_cell_residual);
        d["all_edges_snapped"] = result.diag.all_edges_snapped;
        st::write_text_file(*diag_path, st::dump_canonical(d));
      }
      maybe_svg(svg_path, st::svg_polygon(result.sp));
      return 0;
    }
  } catch (const st::Error& e) {
    print_error(e.code(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(st::Errc::internal, e.what());
    return 3;
  }
  print_error(st::Errc::usage_error, "no subcommand given");
  return 2;
}

int main(int argc, char** argv) { return run(argc, argv); }
