#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "nibbled/staircase.hpp"

namespace nibbled {

// One of the 4|I| unfolded copies: part m transformed by gamma, embedded in
// the plane with its long corner at the origin.
struct UnfoldedPolygon {
  int m = 0;
  Gamma gamma = Gamma::Id;
  StaircaseProfile profile;
  std::vector<Vec2> vertices;  // closed chain of 2k+2 corners

  int k() const { return profile.k(); }
};

// Side c of polygon poly, running from vertex c to vertex c+1 of the chain.
struct SideRef {
  int poly = -1;
  int chain = -1;

  bool operator==(const SideRef& o) const = default;
};

// Identified side pair; a point with coordinates z in polygon a.poly has
// coordinates z + delta in polygon b.poly.
struct Identification {
  SideRef a, b;
  Vec2 delta;
};

enum class CornerKind { Origin, TopLeft, Diagonal, Step, BottomRight };

struct CornerRef {
  int poly = -1;
  int vertex = -1;

  bool operator==(const CornerRef& o) const = default;
};

// Equivalence class of polygon corners under the side identifications.
struct SingularPoint {
  std::vector<CornerRef> corners;  // wedges in walk order
  CornerKind kind = CornerKind::Origin;
  double cone_angle = 0.0;
  bool is_singular = false;
};

class TranslationSurface {
 public:
  explicit TranslationSurface(const GeneralizedPolygon& gp);

  const std::vector<UnfoldedPolygon>& polygons() const { return polygons_; }
  const std::vector<Identification>& identifications() const { return idents_; }
  const std::vector<SingularPoint>& corner_classes() const { return classes_; }
  std::vector<const SingularPoint*> singularities() const;

  int genus() const { return genus_; }
  double area() const { return area_; }

  // Index of the polygon copy (m, gamma).
  int polygon_index(int m, Gamma g) const;

  SideClass side_class(SideRef s) const;
  std::pair<Vec2, Vec2> side_segment(SideRef s) const;
  int identification_of(SideRef s) const;  // index into identifications()
  int class_of(CornerRef c) const;         // index into corner_classes()

  // Transfers a point across the identification covering side s.
  std::pair<int, Vec2> cross(SideRef s, Vec2 z) const;

 private:
  std::vector<UnfoldedPolygon> polygons_;
  std::vector<Identification> idents_;
  std::vector<std::vector<int>> side_ident_;    // [poly][chain] -> ident index
  std::vector<std::vector<int>> corner_class_;  // [poly][vertex] -> class index
  std::vector<SingularPoint> classes_;
  std::vector<int> labels_;
  std::array<std::map<int, int>, 4> partner_of_;  // by RelationLetter
  int genus_ = 0;
  double area_ = 0.0;

  void build_polygons(const GeneralizedPolygon& gp);
  void build_identifications(const GeneralizedPolygon& gp);
  void classify_corners();
  void compute_genus();
};

inline TranslationSurface unfold(const GeneralizedPolygon& gp) {
  return TranslationSurface(gp);
}

// Crossing triple for the direction pi/4: an orbit passes from polygon
// `before` to polygon `after` through the identified side, and v is the
// chart displacement zeta_before - zeta_after.
struct CrossingDatum {
  int ident = -1;
  int before_poly = -1;
  int after_poly = -1;
  SideClass cls = SideClass::LongVertical;
  Vec2 v;
};

// Outgoing (B) or incoming (E) wedge of a singular class in direction pi/4;
// value is -zeta(corner) for B entries and +zeta(corner) for E entries.
struct WedgeDatum {
  int class_index = -1;
  CornerRef corner;
  Vec2 value;
};

struct DBETables {
  std::vector<CrossingDatum> D;
  std::vector<WedgeDatum> B;
  std::vector<WedgeDatum> E;
};

DBETables enumerate_DBE(const TranslationSurface& M);

// Piece of a curve inside one polygon chart.
struct CurveSegment {
  int poly = -1;
  Vec2 from, to;
};

// Crossing sum of the curve against the polygon partition: interior
// crossings contribute zeta_before - zeta_after, singular endpoints
// -zeta(start) and +zeta(end).  Equals the holonomy of the curve.
Vec2 pairing(const TranslationSurface& M, const std::vector<CurveSegment>& segments,
             bool closed);

}  // namespace nibbled
