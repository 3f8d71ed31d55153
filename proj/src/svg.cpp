#include "semitoric/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "semitoric/json_io.hpp"

namespace semitoric {

namespace {

struct Frame {
  double x0, x1, y0, y1;  // data bounds
  int w, h;
  int margin = 30;

  double px(double x) const {
    return margin + (x - x0) / (x1 - x0) * (w - 2.0 * margin);
  }
  double py(double y) const {
    return h - margin - (y - y0) / (y1 - y0) * (h - 2.0 * margin);
  }
};

void polyline(std::ostringstream& os, const std::vector<std::pair<double, double>>& pts,
              const Frame& fr, const char* style) {
  os << "<polyline fill=\"none\" " << style << " points=\"";
  for (const auto& [x, y] : pts) os << format_double(fr.px(x)) << "," << format_double(fr.py(y)) << " ";
  os << "\"/>\n";
}

// Clip an unbounded chain for display: pad one unit or 15% past the last
// breakpoint.
std::pair<double, double> display_range(const PiecewiseLinear& f) {
  double lo = f.breakpoints().front().to_double();
  double hi = f.breakpoints().back().to_double();
  double pad = std::max(1.0, 0.15 * (hi - lo));
  if (f.xmin().is_finite()) lo = f.xmin().finite().to_double();
  else lo -= pad;
  if (f.xmax().is_finite()) hi = f.xmax().finite().to_double();
  else hi += pad;
  return {lo, hi};
}

std::vector<std::pair<double, double>> chain_points(const PiecewiseLinear& f, double lo,
                                                    double hi) {
  std::vector<std::pair<double, double>> pts;
  Rational rlo = Rational::from_double_exact(lo), rhi = Rational::from_double_exact(hi);
  pts.push_back({lo, f.value(rlo).to_double()});
  for (const Rational& x : f.breakpoints()) {
    double xd = x.to_double();
    if (xd > lo && xd < hi) pts.push_back({xd, f.value(x).to_double()});
  }
  pts.push_back({hi, f.value(rhi).to_double()});
  return pts;
}

}  // namespace

std::string svg_polygon(const SemitoricPolygon& sp, int width, int height) {
  const Polygon& p = sp.polygon();
  auto [lo, hi] = display_range(p.bottom());
  auto bottom = chain_points(p.bottom(), lo, hi);
  auto top = chain_points(p.top(), lo, hi);
  double ymin = bottom.front().second, ymax = top.front().second;
  for (const auto& [x, y] : bottom) ymin = std::min(ymin, y);
  for (const auto& [x, y] : top) ymax = std::max(ymax, y);
  double ypad = std::max(0.5, 0.1 * (ymax - ymin));
  Frame fr{lo, hi, ymin - ypad, ymax + ypad, width, height};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\">\n";
  // filled region
  os << "<polygon fill=\"#cfe3f7\" stroke=\"none\" points=\"";
  for (const auto& [x, y] : bottom) os << format_double(fr.px(x)) << "," << format_double(fr.py(y)) << " ";
  for (auto it = top.rbegin(); it != top.rend(); ++it)
    os << format_double(fr.px(it->first)) << "," << format_double(fr.py(it->second)) << " ";
  os << "\"/>\n";
  polyline(os, bottom, fr, "stroke=\"#1f4e79\" stroke-width=\"2\"");
  polyline(os, top, fr, "stroke=\"#1f4e79\" stroke-width=\"2\"");
  // walls at finite ends
  if (p.xmin().is_finite()) {
    double x = p.xmin().finite().to_double();
    os << "<line stroke=\"#1f4e79\" stroke-width=\"2\" x1=\"" << format_double(fr.px(x))
       << "\" y1=\"" << format_double(fr.py(bottom.front().second)) << "\" x2=\""
       << format_double(fr.px(x)) << "\" y2=\"" << format_double(fr.py(top.front().second))
       << "\"/>\n";
  }
  if (p.xmax().is_finite()) {
    double x = p.xmax().finite().to_double();
    os << "<line stroke=\"#1f4e79\" stroke-width=\"2\" x1=\"" << format_double(fr.px(x))
       << "\" y1=\"" << format_double(fr.py(bottom.back().second)) << "\" x2=\""
       << format_double(fr.px(x)) << "\" y2=\"" << format_double(fr.py(top.back().second))
       << "\"/>\n";
  }
  // cuts: dashed vertical segment from the node to the boundary it points at
  for (const Cut& c : sp.cuts()) {
    double x = c.node.x.to_double();
    double y = c.node.y.to_double();
    double yend = c.sign > 0 ? p.top().value(c.node.x).to_double()
                             : p.bottom().value(c.node.x).to_double();
    os << "<line stroke=\"#b02418\" stroke-width=\"1.5\" stroke-dasharray=\"5,4\" x1=\""
       << format_double(fr.px(x)) << "\" y1=\"" << format_double(fr.py(y)) << "\" x2=\""
       << format_double(fr.px(x)) << "\" y2=\"" << format_double(fr.py(yend)) << "\"/>\n";
    os << "<circle fill=\"#b02418\" cx=\"" << format_double(fr.px(x)) << "\" cy=\""
       << format_double(fr.py(y)) << "\" r=\"4\"/>\n";
    os << "<text font-size=\"11\" x=\"" << format_double(fr.px(x) + 6) << "\" y=\""
       << format_double(fr.py(y) - 6) << "\">k=" << c.multiplicity << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_density(const DHFunction& f, int width, int height) {
  auto [lo, hi] = display_range(f.density);
  auto pts = chain_points(f.density, lo, hi);
  double ymax = 0;
  for (const auto& [x, y] : pts) ymax = std::max(ymax, y);
  Frame fr{lo, hi, 0, ymax > 0 ? 1.1 * ymax : 1.0, width, height};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\">\n";
  os << "<line stroke=\"#888\" x1=\"" << format_double(fr.px(lo)) << "\" y1=\""
     << format_double(fr.py(0)) << "\" x2=\"" << format_double(fr.px(hi)) << "\" y2=\""
     << format_double(fr.py(0)) << "\"/>\n";
  polyline(os, pts, fr, "stroke=\"#1f4e79\" stroke-width=\"2\"");
  for (const Rational& x : f.density.breakpoints()) {
    double xd = x.to_double();
    os << "<circle fill=\"#1f4e79\" cx=\"" << format_double(fr.px(xd)) << "\" cy=\""
       << format_double(fr.py(f.density.value(x).to_double())) << "\" r=\"3\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace semitoric
