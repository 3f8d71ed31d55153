#pragma once

#include <string>

#include <json.hpp>

#include "semitoric/dh.hpp"
#include "semitoric/semitoric_polygon.hpp"

namespace semitoric {

using Json = nlohmann::ordered_json;

/// Round to 12 significant digits; the formatting used for every float the
/// tool prints.
std::string format_double(double x);
double round_double(double x);

Json chain_to_json(const PiecewiseLinear& f);
Json polygon_to_json(const Polygon& p);
Polygon polygon_from_json(const Json& j);

/// Semitoric polygons serialize as the polygon object plus a "cuts" array.
/// A missing or empty "cuts" field reads back as a cut-free polygon.
Json semitoric_to_json(const SemitoricPolygon& sp);
SemitoricPolygon semitoric_from_json(const Json& j);

Json dh_to_json(const DHFunction& f);
Json validation_report_to_json(const ValidationReport& r);
Json jumps_to_json(const std::vector<JumpRecord>& records);
Json compactness_to_json(const CompactnessReport& r);

/// Canonical byte form: canonicalized chains, fixed key order, two-space
/// indentation, trailing newline.
std::string dump_canonical(const Json& j);

Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace semitoric
