#pragma once

#include <vector>

#include "nibbled/quadrature.hpp"
#include "nibbled/staircase.hpp"
#include "nibbled/table.hpp"

namespace nibbled {

enum class CausticRegime { Elliptic, Hyperbolic };

// Partition of the caustic parameter range (beta^t, a) into open intervals
// on which the flattened polygon keeps one combinatorial shape.
struct ParameterPartition {
  std::vector<double> breakpoints;  // sorted; first = beta^t, contains b, last = a
  std::vector<Interval> intervals;

  // Index of the interval containing s; refuses breakpoints and the outside.
  int interval_of(double s) const;
};

ParameterPartition interval_partition(const NibbledEllipse& table);

// Signed sum of interval integrals plus a multiple of the invariant length;
// the length resolves to its bounded or tail representation by regime.
struct AffineTerm {
  double coeff = 0.0;
  Interval domain;
};

struct AffineCombination {
  std::vector<AffineTerm> terms;
  double ell_coeff = 0.0;

  Quad evaluate(const ConicFamily& fam, CausticRegime regime, double s, int k = 0) const;
};

// Chart image of a point of the caustic-s phase component.  Elliptic
// parameters give cylinder coordinates in [0, 4l) x [0, l); hyperbolic ones
// a planar domain [-l, l] x (-l, l).
Vec2 flatten_point(const NibbledEllipse& table, double s, Vec2 p);

// One quadrant's flattened part: its polygon label, step count, and the
// symbolic coordinates whose evaluation at s reproduces the numeric profile.
struct SymbolicPart {
  Quadrant q = Quadrant::PP;
  int label = 0;
  int l = 0;
  std::vector<AffineCombination> xs_sym;
  std::vector<AffineCombination> ys_sym;
};

struct FlatComponent {
  GeneralizedPolygon polygon;
  std::vector<SymbolicPart> parts;
};

struct FlattenedSystem {
  CausticRegime regime = CausticRegime::Elliptic;
  double s = 0.0;
  double ell = 0.0;
  int case_index = 0;  // 1..3 following the three parameter ranges
  int subcase = 0;     // 1..3 inside case 2, else 0
  std::vector<FlatComponent> components;

  // Horizontal placement of a part inside the elliptic cylinder chart:
  // upper-quadrant parts anchor at 0, lower ones at 2l (mod 4l).
  double chart_offset(Quadrant q) const;
};

// Builds the flattened generalized polygon for the parameter s, which must
// sit inside its partition interval with margin 1e-6.
FlattenedSystem build_flat_polygon(const NibbledEllipse& table, double s);

// The deduplicated coordinate families attached to a partition interval,
// used by the unique-ergodicity criterion.
struct XYFamilies {
  CausticRegime regime = CausticRegime::Elliptic;
  AffineCombination ell;
  std::vector<AffineCombination> xs;  // increasing values
  std::vector<AffineCombination> ys;  // decreasing values
};

XYFamilies xy_families(const NibbledEllipse& table, Interval J);

}  // namespace nibbled
