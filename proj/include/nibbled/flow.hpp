#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "nibbled/iet.hpp"
#include "nibbled/surface.hpp"

namespace nibbled {

// The straight-line flow in direction pi/4 (or its reverse 5pi/4) on an
// unfolded surface.  Trajectories are polygonal paths that jump charts
// through the side identifications.

struct TrajectoryCrossing {
  SideRef side;   // side of the polygon being left
  Vec2 entry;     // landing point in the next chart
  int ident = -1; // index into identifications()
  Vec2 delta;     // entry - exit
};

struct FlatTrajectory {
  std::vector<CurveSegment> segments;
  // crossings[i] joins segments[i] to segments[i+1]; shorter than segments-1
  // when the path was continued through a regular corner.
  std::vector<TrajectoryCrossing> crossings;
  double total_length = 0.0;
  bool passed_corner = false;
};

// Largest polygon bounding-box diagonal, the natural length scale of M.
double diameter(const TranslationSurface& M);

// Unit-speed straight flow from `start` inside polygon `poly`.  direction
// must be pi/4 or 5pi/4.  Throws HitSingularity if the path runs into a cone
// point before `length`, CornerAmbiguity if a regular-corner passage cannot
// be resolved.
FlatTrajectory trace(const TranslationSurface& M, int poly, Vec2 start,
                     double direction, double length);

// CSV dump (t,polygon,x,y) with one row per segment start plus the endpoint.
std::string trajectory_csv(const FlatTrajectory& t);

struct SaddleConnection {
  int from_class = -1; // indices into corner_classes()
  int to_class = -1;
  double length = 0.0;
  Vec2 holonomy;
};

// Traces every outgoing separatrix up to max_length and reports the ones
// that run into a cone point (within 1e-9 transversally).
std::vector<SaddleConnection> find_saddle_connections(const TranslationSurface& M,
                                                      double direction,
                                                      double max_length);

// Open horizontal segment [origin, origin + (width, 0)] inside one polygon.
struct Transversal {
  int host = 0;
  Vec2 origin;
  double width = 0.0;
};

// Maximal horizontal chord through the host polygon's centroid, shrunk by 1%
// per end and nudged vertically by an irrational fraction of the height so
// that no cut of the return map lands on a corner by accident.
Transversal make_transversal(const TranslationSurface& M, int host);

// First-return map of the pi/4 flow to a transversal, as an interval
// exchange plus the per-interval crossing statistics.
struct ReturnSystem {
  IETData iet;
  // per interval: identification index -> number of times the return orbit
  // crosses it
  std::vector<std::map<int, int>> crossing_counts;
  // per interval: (b_j - t_pi(j)) + i * (return path length)
  std::vector<std::complex<double>> displacements;
  // sampled closed return loop per interval, ready for pairing()
  std::vector<std::vector<CurveSegment>> loops;
};

ReturnSystem first_return_iet(const TranslationSurface& M, const Transversal& I,
                              double direction, int max_crossings);

// Axis-aligned rectangle inside one polygon chart.
struct BirkhoffBox {
  int poly = 0;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

struct BirkhoffResult {
  std::vector<double> fractions; // time fraction spent in each box
  double elapsed = 0.0;          // actual flow time averaged over
  bool hit_singularity = false;  // stopped early on a cone point
};

// Time averages of the box indicators along one orbit of flow time
// `horizon`.  A cone-point hit ends the orbit early and the averages are
// reported over the elapsed time.
BirkhoffResult birkhoff_averages(const TranslationSurface& M,
                                 const std::vector<BirkhoffBox>& boxes,
                                 int poly, Vec2 start, double direction,
                                 double horizon);

}  // namespace nibbled
