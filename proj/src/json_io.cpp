#include "semitoric/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace semitoric {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double round_double(double x) { return std::strtod(format_double(x).c_str(), nullptr) + 0.0; }

namespace {

Json rationals_to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const Rational& r : v) a.push_back(r.str());
  return a;
}

std::vector<Rational> rationals_from_json(const Json& a, const char* what) {
  if (!a.is_array()) fail(Errc::parse_error, std::string(what) + " must be an array");
  std::vector<Rational> v;
  for (const auto& e : a) {
    if (!e.is_string()) fail(Errc::parse_error, std::string(what) + " entries must be strings");
    v.push_back(Rational::from_string(e.get<std::string>()));
  }
  return v;
}

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) fail(Errc::parse_error, std::string("missing field \"") + name + "\"");
  return *it;
}

std::string string_field(const Json& j, const char* name) {
  const Json& f = field(j, name);
  if (!f.is_string()) fail(Errc::parse_error, std::string("field \"") + name + "\" must be a string");
  return f.get<std::string>();
}

}  // namespace

Json chain_to_json(const PiecewiseLinear& f) {
  PiecewiseLinear c = f.canonicalized();
  Json j;
  j["breakpoints"] = rationals_to_json(c.breakpoints());
  j["values"] = rationals_to_json(c.values());
  if (c.left_slope()) j["left_slope"] = c.left_slope()->str();
  if (c.right_slope()) j["right_slope"] = c.right_slope()->str();
  return j;
}

namespace {

PiecewiseLinear chain_from_json(const Json& j, const ExtendedRational& xmin,
                                const ExtendedRational& xmax) {
  std::vector<Rational> bps = rationals_from_json(field(j, "breakpoints"), "breakpoints");
  std::vector<Rational> vals = rationals_from_json(field(j, "values"), "values");
  std::optional<Rational> ls, rs;
  if (j.contains("left_slope")) ls = Rational::from_string(string_field(j, "left_slope"));
  if (j.contains("right_slope")) rs = Rational::from_string(string_field(j, "right_slope"));
  try {
    return PiecewiseLinear::make(xmin, xmax, std::move(bps), std::move(vals), ls, rs);
  } catch (const Error& e) {
    fail(Errc::parse_error, std::string("invalid boundary chain: ") + e.what());
  }
}

}  // namespace

Json polygon_to_json(const Polygon& p) {
  Json j;
  j["xmin"] = p.xmin().str();
  j["xmax"] = p.xmax().str();
  j["bottom"] = chain_to_json(p.bottom());
  j["top"] = chain_to_json(p.top());
  return j;
}

Polygon polygon_from_json(const Json& j) {
  ExtendedRational xmin = ExtendedRational::from_string(string_field(j, "xmin"));
  ExtendedRational xmax = ExtendedRational::from_string(string_field(j, "xmax"));
  PiecewiseLinear bottom = chain_from_json(field(j, "bottom"), xmin, xmax);
  PiecewiseLinear top = chain_from_json(field(j, "top"), xmin, xmax);
  return Polygon::make(std::move(bottom), std::move(top));
}

Json semitoric_to_json(const SemitoricPolygon& sp) {
  Json j = polygon_to_json(sp.polygon());
  Json cuts = Json::array();
  for (const Cut& c : sp.cuts()) {
    Json jc;
    jc["x"] = c.node.x.str();
    jc["y"] = c.node.y.str();
    jc["k"] = c.multiplicity;
    jc["eps"] = c.sign;
    cuts.push_back(jc);
  }
  j["cuts"] = cuts;
  return j;
}

SemitoricPolygon semitoric_from_json(const Json& j) {
  Polygon p = polygon_from_json(j);
  std::vector<Cut> cuts;
  if (j.contains("cuts")) {
    const Json& a = j["cuts"];
    if (!a.is_array()) fail(Errc::parse_error, "\"cuts\" must be an array");
    for (const auto& e : a) {
      Cut c;
      c.node.x = Rational::from_string(string_field(e, "x"));
      c.node.y = Rational::from_string(string_field(e, "y"));
      const Json& k = field(e, "k");
      const Json& eps = field(e, "eps");
      if (!k.is_number_integer() || !eps.is_number_integer())
        fail(Errc::parse_error, "cut fields \"k\" and \"eps\" must be integers");
      c.multiplicity = k.get<std::int64_t>();
      c.sign = eps.get<int>();
      cuts.push_back(c);
    }
  }
  try {
    return SemitoricPolygon(std::move(p), CutSystem::make(std::move(cuts)));
  } catch (const Error& e) {
    fail(Errc::parse_error, std::string("invalid cut system: ") + e.what());
  }
}

Json dh_to_json(const DHFunction& f) {
  PiecewiseLinear c = f.density.canonicalized();
  Json j;
  j["axis"] = f.axis == DHAxis::J ? "J" : "K";
  j["domain_min"] = c.xmin().str();
  j["domain_max"] = c.xmax().str();
  j["breakpoints"] = rationals_to_json(c.breakpoints());
  j["values"] = rationals_to_json(c.values());
  j["slopes"] = rationals_to_json(c.segment_slopes());
  if (c.left_slope()) j["left_slope"] = c.left_slope()->str();
  if (c.right_slope()) j["right_slope"] = c.right_slope()->str();
  return j;
}

Json validation_report_to_json(const ValidationReport& r) {
  Json j;
  j["valid"] = r.ok();
  Json issues = Json::array();
  for (const ValidationIssue& i : r.issues) {
    Json ji;
    ji["code"] = i.code;
    ji["message"] = i.message;
    issues.push_back(ji);
  }
  j["issues"] = issues;
  return j;
}

Json jumps_to_json(const std::vector<JumpRecord>& records) {
  Json a = Json::array();
  for (const JumpRecord& r : records) {
    Json j;
    j["x"] = r.x.str();
    j["measured"] = r.measured.str();
    j["predicted"] = r.predicted.str();
    j["k_sum"] = r.k_sum;
    j["e_plus"] = r.e_plus.str();
    j["e_minus"] = r.e_minus.str();
    a.push_back(j);
  }
  return a;
}

Json compactness_to_json(const CompactnessReport& r) {
  Json j;
  j["j_bounded_below"] = r.j_bounded_below;
  j["j_bounded_above"] = r.j_bounded_above;
  j["has_rank_zero_value"] = r.has_rank_zero_value;
  j["unique_minimum"] = r.unique_minimum;
  j["unique_maximum"] = r.unique_maximum;
  j["focus_fibre_count"] = r.focus_fibre_count;
  j["total_multiplicity"] = r.total_multiplicity;
  j["rho_slope_at_min"] = r.rho_slope_at_min ? Json(r.rho_slope_at_min->str()) : Json(nullptr);
  j["rho_slope_at_max"] = r.rho_slope_at_max ? Json(r.rho_slope_at_max->str()) : Json(nullptr);
  j["semibounded_fires"] = r.semibounded_fires;
  j["multiplicity_bound_fires"] = r.multiplicity_bound_fires;
  j["unique_extremum_fires"] = r.unique_extremum_fires;
  j["forced_compact"] = r.forced_compact;
  j["reasons"] = r.reasons;
  return j;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::parse_error, "malformed JSON");
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(Errc::parse_error, "cannot write \"" + path + "\"");
  out << text;
}

}  // namespace semitoric
