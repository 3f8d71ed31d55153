#pragma once

#include <string>

#include "semitoric/dh.hpp"
#include "semitoric/semitoric_polygon.hpp"

namespace semitoric {

/// Static drawing of the polygon with its cuts and nodes. Unbounded sides
/// are clipped a little past the last breakpoint.
std::string svg_polygon(const SemitoricPolygon& sp, int width = 480, int height = 360);

/// Static graph of a Duistermaat-Heckman density.
std::string svg_density(const DHFunction& f, int width = 480, int height = 300);

}  // namespace semitoric
