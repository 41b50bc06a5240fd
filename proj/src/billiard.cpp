#include "nibbled/billiard.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace nibbled {
namespace {

constexpr double kCornerTol = 1e-9;
constexpr double kExtentTol = 1e-9;
constexpr double kMinAdvance = 1e-9;
constexpr long kSegmentCap = 10'000'000;

bool on_arc(const NibbledEllipse& table, const BoundaryArc& arc, Vec2 p) {
  if (quadrant_sx(arc.q) * p.x < -kExtentTol) return false;
  if (quadrant_sy(arc.q) * p.y < -kExtentTol) return false;
  EllipticCoords ec;
  try {
    ec = elliptic_coords(table.family(), p);
  } catch (const Error&) {
    return false;  // focus cannot lie on the boundary
  }
  double run = arc.is_tread ? ec.lambda1 : ec.lambda2;
  return run >= arc.lo - kExtentTol && run <= arc.hi + kExtentTol;
}

Vec2 outward_normal(const NibbledEllipse& table, const BoundaryArc& arc, Vec2 p) {
  // The gradient of the carrying conic's implicit function points out of the
  // table on treads and risers alike.
  return table.family().gradient(arc.conic, p).normalized();
}

bool near_genuine_corner(const NibbledEllipse& table, Vec2 p) {
  for (const Vec2& c : table.corners())
    if ((p - c).norm() <= kCornerTol) return true;
  return false;
}

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  Vec2 point;
  const BoundaryArc* arc = nullptr;
};

}  // namespace

Vec2 reflect_direction(Vec2 d, Vec2 unit_normal) {
  double dn = d.dot(unit_normal);
  return d - unit_normal * (2.0 * dn);
}

BilliardState reflect(const NibbledEllipse& table, const BilliardState& state,
                      const BoundaryArc& arc) {
  if (near_genuine_corner(table, state.position))
    fail_domain(ErrorCode::CornerHit, "reflection point is a table corner");
  Vec2 n = outward_normal(table, arc, state.position);
  if (!(state.direction.dot(n) > 0.0))
    fail_domain(ErrorCode::DomainViolation, "direction does not point out of the table");
  return {state.position, reflect_direction(state.direction, n)};
}

PhysicalTrajectory billiard_trace(const NibbledEllipse& table, BilliardState start,
                                  double horizon) {
  if (!(horizon > 0.0)) fail_domain(ErrorCode::DomainViolation, "horizon must be positive");
  Vec2 d = start.direction.normalized();
  Vec2 p = start.position;

  PhysicalTrajectory out;
  auto arcs = table.boundary_arcs();
  double remaining = horizon;

  for (long step = 0; step < kSegmentCap; ++step) {
    double s = caustic_parameter(table.family(), p, d);

    Hit best;
    std::vector<double> graze_times;
    for (const auto& arc : arcs) {
      for (const auto& hit : ray_conic_intersections(table.family(), arc.conic, p, d,
                                                     kMinAdvance)) {
        if (!on_arc(table, arc, hit.point)) continue;
        if (hit.tangential) {
          graze_times.push_back(hit.t);
          continue;
        }
        Vec2 n = table.family().gradient(arc.conic, hit.point);
        if (!(d.dot(n) > 0.0)) continue;  // crossing from outside the table side
        if (hit.t < best.t) best = {hit.t, hit.point, &arc};
      }
    }
    if (!best.arc)
      fail_internal(ErrorCode::GeometryFailure, "no boundary intersection along the ray");
    for (double tg : graze_times)
      if (tg < best.t && tg < remaining) ++out.tangential_skips;

    if (best.t >= remaining) {
      Vec2 end = p + d * remaining;
      out.segments.push_back({p, end, s});
      out.length += remaining;
      out.status = TrajectoryStatus::TimeExhausted;
      return out;
    }

    out.segments.push_back({p, best.point, s});
    out.length += best.t;
    remaining -= best.t;

    if (near_genuine_corner(table, best.point)) {
      out.status = TrajectoryStatus::DiedAtCorner;
      return out;
    }

    Vec2 n = outward_normal(table, *best.arc, best.point);
    d = reflect_direction(d, n).normalized();
    p = best.point;
  }
  fail_internal(ErrorCode::GeometryFailure, "segment cap exceeded");
}

}  // namespace nibbled
