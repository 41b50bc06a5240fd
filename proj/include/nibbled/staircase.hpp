#pragma once

#include <array>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "nibbled/geometry.hpp"

namespace nibbled {

// Staircase side lengths: 0 < x_1 < ... < x_k and y_1 > ... > y_k > 0.
struct StaircaseProfile {
  std::vector<double> xs;
  std::vector<double> ys;

  int k() const { return static_cast<int>(xs.size()); }
  double area() const;
};

StaircaseProfile validate_profile(std::vector<double> xs, std::vector<double> ys);

// The four-element reflection group: vertical flip negates x, horizontal
// flip negates y.
enum class Gamma { Id, V, H, VH };

Gamma compose(Gamma a, Gamma b);
inline bool has_v(Gamma g) { return g == Gamma::V || g == Gamma::VH; }
inline bool has_h(Gamma g) { return g == Gamma::H || g == Gamma::VH; }
inline Vec2 apply_gamma(Gamma g, Vec2 p) {
  return {has_v(g) ? -p.x : p.x, has_h(g) ? -p.y : p.y};
}
const char* gamma_name(Gamma g);

struct BasicPolygon {
  int label = 0;
  StaircaseProfile profile;
  Gamma gamma = Gamma::Id;

  double area() const { return profile.area(); }
  // Vertex chain (0,0),(0,y_1),(x_1,y_1),(x_1,y_2),...,(x_k,y_k),(x_k,0)
  // transformed by gamma.
  std::vector<Vec2> vertices() const;
};

BasicPolygon build_basic(StaircaseProfile profile, Gamma gamma, int label);

// Sides of a basic polygon by role.  Risers are indexed 1..k-1, treads
// 2..k; the other four classes are single sides.
enum class SideClass { LongVertical, ShortHorizontal, Riser, Tread, ShortVertical, LongHorizontal };

// Endpoints of a side in the polygon's own (gamma = id) coordinates.
std::pair<Vec2, Vec2> side_endpoints(const StaircaseProfile& p, SideClass cls, int index);

// The four gluing letters: capital letters glue the long sides, lower-case
// the short ones.
enum class RelationLetter { V, H, v, h };
const char* relation_name(RelationLetter r);

class GeneralizedPolygon {
 public:
  GeneralizedPolygon(std::vector<BasicPolygon> parts,
                     std::vector<std::tuple<RelationLetter, int, int>> relations);

  const std::vector<int>& labels() const { return labels_; }
  const BasicPolygon& part(int label) const;
  int partner(RelationLetter r, int label) const;
  bool is_self(RelationLetter r, int label) const { return partner(r, label) == label; }

  std::vector<std::vector<int>> components() const;
  double area() const;

 private:
  std::vector<int> labels_;
  std::map<int, BasicPolygon> parts_;
  std::array<std::map<int, int>, 4> partners_;
};

inline GeneralizedPolygon build_generalized(
    std::vector<BasicPolygon> parts,
    std::vector<std::tuple<RelationLetter, int, int>> relations) {
  return GeneralizedPolygon(std::move(parts), std::move(relations));
}

// The relabelling-invariant content: labels, reflections, step counts, and
// the four partner maps.
struct CombinatorialData {
  std::vector<int> labels;
  std::map<int, Gamma> gammas;
  std::map<int, int> ks;
  std::array<std::map<int, int>, 4> partners;

  bool operator==(const CombinatorialData& o) const = default;
};

CombinatorialData combinatorial_data(const GeneralizedPolygon& gp);

}  // namespace nibbled
