#pragma once

#include <vector>

#include "nibbled/table.hpp"

namespace nibbled {

struct BilliardState {
  Vec2 position;
  Vec2 direction;  // unit vector
};

struct TrajectorySegment {
  Vec2 start;
  Vec2 end;
  double s = 0.0;  // caustic parameter of the carrying line
};

enum class TrajectoryStatus { Alive, DiedAtCorner, TimeExhausted };

struct PhysicalTrajectory {
  std::vector<TrajectorySegment> segments;
  TrajectoryStatus status = TrajectoryStatus::Alive;
  double length = 0.0;
  int tangential_skips = 0;  // grazes treated as no collision
};

// Specular reflection of a direction in a unit normal.
Vec2 reflect_direction(Vec2 d, Vec2 unit_normal);

// Reflects a state sitting on the given boundary arc.  The incoming
// direction must point out of the table there; a position within the corner
// tolerance of a genuine table corner raises CornerHit.
BilliardState reflect(const NibbledEllipse& table, const BilliardState& state,
                      const BoundaryArc& arc);

// Unit-speed broken-line flow from the state until the horizon length is
// used up or the trajectory dies at a corner.
PhysicalTrajectory billiard_trace(const NibbledEllipse& table, BilliardState start,
                                  double horizon);

}  // namespace nibbled
