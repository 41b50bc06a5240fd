#pragma once

#include <array>
#include <vector>

#include "nibbled/geometry.hpp"

namespace nibbled {

// Sign pattern of (x, y) in the quadrant.
enum class Quadrant { PP, PM, MP, MM };

constexpr std::array<Quadrant, 4> kQuadrants = {Quadrant::PP, Quadrant::PM, Quadrant::MP,
                                                Quadrant::MM};

inline int quadrant_sx(Quadrant q) {
  return (q == Quadrant::PP || q == Quadrant::PM) ? 1 : -1;
}
inline int quadrant_sy(Quadrant q) {
  return (q == Quadrant::PP || q == Quadrant::MP) ? 1 : -1;
}
const char* quadrant_name(Quadrant q);

// One quadrant's staircase parameters:
//   a = alpha_0 > alpha_1 > ... > alpha_k = b > beta_k > ... > beta_1 >= beta_0 = 0.
struct ThetaSequence {
  std::vector<double> alphas;  // size k+1
  std::vector<double> betas;   // size k+1

  int k() const { return static_cast<int>(alphas.size()) - 1; }
};

ThetaSequence validate_theta(std::vector<double> alphas, std::vector<double> betas,
                             const ConicFamily& fam);

// Outermost tread parameters where the boundary meets the axes: top/bottom
// are the beta_1 of the upper/lower quadrants, right/left the beta_k of the
// x>0 / x<0 quadrants.
struct CausticMarks {
  double t = 0.0, b = 0.0, l = 0.0, r = 0.0;
};

// One conic arc of the boundary.  Treads run along an ellipse C_{beta_i}
// with lambda1 in [lo, hi]; risers along a hyperbola C_{alpha_i} with
// lambda2 in [lo, hi].
struct BoundaryArc {
  Quadrant q = Quadrant::PP;
  bool is_tread = true;
  int index = 0;       // 1..k for treads, 1..k-1 for risers
  double conic = 0.0;  // parameter of the carrying conic
  double lo = 0.0, hi = 0.0;
};

class NibbledEllipse {
 public:
  NibbledEllipse(const ConicFamily& fam, std::array<ThetaSequence, 4> quadrants);

  const ConicFamily& family() const { return family_; }
  const ThetaSequence& theta(Quadrant q) const {
    return quadrants_[static_cast<int>(q)];
  }
  const CausticMarks& marks() const { return marks_; }
  bool flipped_h() const { return flipped_h_; }
  bool flipped_v() const { return flipped_v_; }

  // Closed-region membership; the foci are always interior.
  bool contains(Vec2 p) const;

  std::vector<BoundaryArc> boundary_arcs() const;

  // Genuine staircase corners (the seam points on the axes are smooth).
  std::vector<Vec2> corners() const;

  // Diameter of the bounding box, used to scale time horizons.
  double diameter() const;

 private:
  ConicFamily family_;
  std::array<ThetaSequence, 4> quadrants_;
  CausticMarks marks_;
  bool flipped_h_ = false;
  bool flipped_v_ = false;
};

// Validates cross-quadrant compatibility, derives the caustic marks, and
// normalizes the table so that marks satisfy t <= b <= l <= r, flipping
// across an axis at most once each and recording the flips.
NibbledEllipse build_table(const ConicFamily& fam, const ThetaSequence& pp,
                           const ThetaSequence& pm, const ThetaSequence& mp,
                           const ThetaSequence& mm);

}  // namespace nibbled
