#include "nibbled/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "nibbled/errors.hpp"
#include "nibbled/geometry.hpp"

namespace nibbled {
namespace {

constexpr int kArcSamples = 64;
constexpr double kMarginFrac = 0.05;

std::string fmt(double x) {
  // Fixed six decimals; normalize the sign of zero so -0 never leaks out.
  if (x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

struct Box {
  double minx = std::numeric_limits<double>::infinity();
  double miny = std::numeric_limits<double>::infinity();
  double maxx = -std::numeric_limits<double>::infinity();
  double maxy = -std::numeric_limits<double>::infinity();

  void add(Vec2 p) {
    minx = std::min(minx, p.x);
    miny = std::min(miny, p.y);
    maxx = std::max(maxx, p.x);
    maxy = std::max(maxy, p.y);
  }
};

// Model coordinates have y up; the document flips them about the box top.
class Canvas {
 public:
  explicit Canvas(const Box& box) : box_(box) {
    const double w = box.maxx - box.minx, h = box.maxy - box.miny;
    margin_ = kMarginFrac * std::max(w, h);
    stroke_ = std::max(w, h) / 400.0;
  }

  std::string map_x(double x) const { return fmt(x - box_.minx + margin_); }
  std::string map_y(double y) const { return fmt(box_.maxy - y + margin_); }

  std::string points_of(const std::vector<Vec2>& pts) const {
    std::ostringstream os;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) os << ' ';
      os << map_x(pts[i].x) << ',' << map_y(pts[i].y);
    }
    return os.str();
  }

  void polyline(const std::vector<Vec2>& pts, const char* color) {
    body_ << "  <polyline points=\"" << points_of(pts) << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"" << fmt(stroke_) << "\"/>\n";
  }

  void polygon(const std::vector<Vec2>& pts, const char* fill, const char* color) {
    body_ << "  <polygon points=\"" << points_of(pts) << "\" fill=\"" << fill
          << "\" stroke=\"" << color << "\" stroke-width=\"" << fmt(stroke_) << "\"/>\n";
  }

  std::string finish() const {
    const double w = box_.maxx - box_.minx + 2.0 * margin_;
    const double h = box_.maxy - box_.miny + 2.0 * margin_;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(w) << ' '
       << fmt(h) << "\" width=\"640\">\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  Box box_;
  double margin_ = 0.0;
  double stroke_ = 0.0;
  std::ostringstream body_;
};

std::vector<Vec2> sample_arc(const ConicFamily& fam, const BoundaryArc& arc) {
  std::vector<Vec2> pts;
  pts.reserve(kArcSamples + 1);
  const int sx = quadrant_sx(arc.q), sy = quadrant_sy(arc.q);
  for (int i = 0; i <= kArcSamples; ++i) {
    const double u = arc.lo + (arc.hi - arc.lo) * i / kArcSamples;
    EllipticCoords ec;
    if (arc.is_tread) {
      ec.lambda1 = u;
      ec.lambda2 = arc.conic;
    } else {
      ec.lambda1 = arc.conic;
      ec.lambda2 = u;
    }
    pts.push_back(from_elliptic(fam, ec, sx, sy));
  }
  return pts;
}

constexpr const char* kBoundary = "#202020";
constexpr const char* kFill = "#e9eef4";
constexpr const char* kOverlay = "#c24d1a";

}  // namespace

std::string svg_table(const NibbledEllipse& table,
                      const std::vector<std::vector<Vec2>>& overlays) {
  std::vector<BoundaryArc> arcs = table.boundary_arcs();
  std::sort(arcs.begin(), arcs.end(), [](const BoundaryArc& a, const BoundaryArc& b) {
    if (a.q != b.q) return static_cast<int>(a.q) < static_cast<int>(b.q);
    if (a.is_tread != b.is_tread) return a.is_tread;
    return a.index < b.index;
  });

  std::vector<std::vector<Vec2>> paths;
  paths.reserve(arcs.size());
  Box box;
  for (const BoundaryArc& arc : arcs) {
    paths.push_back(sample_arc(table.family(), arc));
    for (Vec2 p : paths.back()) box.add(p);
  }
  for (const std::vector<Vec2>& ov : overlays)
    for (Vec2 p : ov) box.add(p);

  Canvas canvas(box);
  for (const std::vector<Vec2>& path : paths) canvas.polyline(path, kBoundary);
  for (const std::vector<Vec2>& ov : overlays) canvas.polyline(ov, kOverlay);
  return canvas.finish();
}

std::string svg_flat(const FlattenedSystem& sys,
                     const std::vector<std::vector<Vec2>>& overlays) {
  struct Placed {
    int label = 0;
    std::vector<Vec2> pts;
  };
  std::vector<Placed> placed;
  for (const FlatComponent& comp : sys.components) {
    for (const SymbolicPart& sp : comp.parts) {
      const BasicPolygon& bp = comp.polygon.part(sp.label);
      Placed pl;
      pl.label = sp.label;
      pl.pts = bp.vertices();
      const double off = sys.chart_offset(sp.q);
      for (Vec2& p : pl.pts) p.x += off;
      placed.push_back(std::move(pl));
    }
  }
  std::sort(placed.begin(), placed.end(),
            [](const Placed& a, const Placed& b) { return a.label < b.label; });

  Box box;
  for (const Placed& pl : placed)
    for (Vec2 p : pl.pts) box.add(p);
  for (const std::vector<Vec2>& ov : overlays)
    for (Vec2 p : ov) box.add(p);

  Canvas canvas(box);
  for (const Placed& pl : placed) canvas.polygon(pl.pts, kFill, kBoundary);
  for (const std::vector<Vec2>& ov : overlays) canvas.polyline(ov, kOverlay);
  return canvas.finish();
}

}  // namespace nibbled
