#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nibbled/errors.hpp"

namespace nibbled {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {c * x, c * y}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const;
  Vec2 normalized() const;
};

// Confocal family x^2/(a-t) + y^2/(b-t) = 1 with 0 < b < a.  Parameters
// t < b give ellipses, b < t < a hyperbolae; the common foci sit at
// (+-sqrt(a-b), 0).
struct ConicFamily {
  double a = 2.0;
  double b = 1.0;

  ConicFamily() = default;
  ConicFamily(double a_, double b_);

  double focal_distance() const;

  // Implicit value F_t(p) = x^2/(a-t) + y^2/(b-t); the conic is F = 1.
  double implicit(double t, Vec2 p) const;

  // Gradient of F_t, which points outward from the center on an ellipse and
  // serves as the boundary normal direction on every arc of the family.
  Vec2 gradient(double t, Vec2 p) const;
};

// Coordinates of a point as the pair of confocal parameters through it,
// ordered lambda1 >= b >= lambda2.
struct EllipticCoords {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

// Both confocal parameters through p.  Points on the focal segment endpoints
// themselves are rejected because the chart degenerates there.
EllipticCoords elliptic_coords(const ConicFamily& fam, Vec2 p);

// Inverse chart restricted to the closed quadrant sx*x >= 0, sy*y >= 0.
Vec2 from_elliptic(const ConicFamily& fam, EllipticCoords ec, int sx, int sy);

// Caustic parameter of the line through p with unit direction d, computed in
// the homogeneous form that stays finite for vertical directions.
double caustic_parameter(const ConicFamily& fam, Vec2 p, Vec2 d);

// Unit directions at p tangent to the conic with parameter s.  Zero, one, or
// two directions up to sign; each returned once with positive y (or positive
// x when horizontal).
std::vector<Vec2> tangent_directions(const ConicFamily& fam, Vec2 p, double s);

struct RayConicHit {
  double t = 0.0;   // parameter along the ray, p + t d
  Vec2 point;
  bool tangential = false;
};

// Intersections of the ray p + t d (t > t_min) with the conic of parameter
// lam, polished by one Newton step.  Tangential grazes (discriminant within
// tol of zero) are reported with the flag set so callers can skip them.
std::vector<RayConicHit> ray_conic_intersections(const ConicFamily& fam, double lam,
                                                 Vec2 p, Vec2 d, double t_min);

}  // namespace nibbled
