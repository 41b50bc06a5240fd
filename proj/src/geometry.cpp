#include "nibbled/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace nibbled {

double Vec2::norm() const { return std::hypot(x, y); }

Vec2 Vec2::normalized() const {
  double n = norm();
  if (n == 0.0) fail_domain(ErrorCode::DomainViolation, "cannot normalize zero vector");
  return {x / n, y / n};
}

ConicFamily::ConicFamily(double a_, double b_) : a(a_), b(b_) {
  if (!(0.0 < b && b < a))
    fail_domain(ErrorCode::DomainViolation, "conic family needs 0 < b < a");
}

double ConicFamily::focal_distance() const { return std::sqrt(a - b); }

double ConicFamily::implicit(double t, Vec2 p) const {
  return p.x * p.x / (a - t) + p.y * p.y / (b - t);
}

Vec2 ConicFamily::gradient(double t, Vec2 p) const {
  return {2.0 * p.x / (a - t), 2.0 * p.y / (b - t)};
}

EllipticCoords elliptic_coords(const ConicFamily& fam, Vec2 p) {
  double a = fam.a, b = fam.b;
  double c2 = a - b;
  double fx = std::sqrt(c2);
  if (std::abs(p.y) < 1e-13 && std::abs(std::abs(p.x) - fx) < 1e-13)
    fail_domain(ErrorCode::FocusSingularity, "elliptic coordinates degenerate at a focus");

  // lambda1, lambda2 are the roots of
  //   lambda^2 - lambda (a + b - x^2 - y^2) + (a b - b x^2 - a y^2) = 0.
  double x2 = p.x * p.x, y2 = p.y * p.y;
  double S = a + b - x2 - y2;
  double P = a * b - b * x2 - a * y2;
  double disc = S * S - 4.0 * P;
  if (disc < 0.0) disc = 0.0;
  double sq = std::sqrt(disc);
  double l1, l2;
  // Stable split: take the root of larger magnitude via the b2-4ac branch
  // that avoids cancellation, recover the other from the product.
  if (S >= 0.0) {
    l1 = 0.5 * (S + sq);
    l2 = (l1 != 0.0) ? P / l1 : 0.5 * (S - sq);
  } else {
    l2 = 0.5 * (S - sq);
    l1 = (l2 != 0.0) ? P / l2 : 0.5 * (S + sq);
  }
  if (l1 < l2) std::swap(l1, l2);
  // Clamp roundoff so the invariant lambda1 >= b >= lambda2 holds exactly
  // where the point is numerically on-axis.
  l1 = std::max(l1, b);
  l2 = std::min(l2, b);
  l1 = std::min(l1, a);
  return {l1, l2};
}

Vec2 from_elliptic(const ConicFamily& fam, EllipticCoords ec, int sx, int sy) {
  double a = fam.a, b = fam.b;
  double l1 = ec.lambda1, l2 = ec.lambda2;
  if (!(l2 <= b + 1e-12 && b <= l1 + 1e-12 && l1 <= a + 1e-12))
    fail_domain(ErrorCode::DomainViolation, "elliptic coordinates out of range");
  double x2 = (a - l1) * (a - l2) / (a - b);
  double y2 = (b - l1) * (b - l2) / (b - a);
  x2 = std::max(x2, 0.0);
  y2 = std::max(y2, 0.0);
  double x = (sx >= 0 ? 1.0 : -1.0) * std::sqrt(x2);
  double y = (sy >= 0 ? 1.0 : -1.0) * std::sqrt(y2);
  return {x, y};
}

double caustic_parameter(const ConicFamily& fam, Vec2 p, Vec2 d) {
  Vec2 u = d.normalized();
  double cross = u.y * p.x - u.x * p.y;
  return fam.a * u.y * u.y + fam.b * u.x * u.x - cross * cross;
}

std::vector<Vec2> tangent_directions(const ConicFamily& fam, Vec2 p, double s) {
  // Directions (1, t) through p tangent to C_s satisfy
  //   (a - s - x^2) t^2 + 2 x y t + (b - s - y^2) = 0,
  // with a vertical tangent exactly when the leading coefficient vanishes.
  double A = fam.a - s - p.x * p.x;
  double B = 2.0 * p.x * p.y;
  double C = fam.b - s - p.y * p.y;
  std::vector<Vec2> out;
  auto push = [&out](Vec2 v) {
    Vec2 u = v.normalized();
    if (u.y < 0.0 || (u.y == 0.0 && u.x < 0.0)) u = u * -1.0;
    out.push_back(u);
  };
  if (std::abs(A) < 1e-13) {
    push({0.0, 1.0});
    if (std::abs(B) > 1e-13) push({1.0, -C / B});
    return out;
  }
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return out;
  double sq = std::sqrt(disc);
  double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
  double t1 = q / A;
  push({1.0, t1});
  if (disc > 0.0) {
    double t2 = (q != 0.0) ? C / q : (-B - (B >= 0.0 ? -sq : sq)) / (2.0 * A);
    push({1.0, t2});
  }
  return out;
}

std::vector<RayConicHit> ray_conic_intersections(const ConicFamily& fam, double lam,
                                                 Vec2 p, Vec2 d, double t_min) {
  double ia = 1.0 / (fam.a - lam);
  double ib = 1.0 / (fam.b - lam);
  // g(t) = F(p + t d) - 1 is a quadratic in t.
  double A = d.x * d.x * ia + d.y * d.y * ib;
  double B = 2.0 * (p.x * d.x * ia + p.y * d.y * ib);
  double C = p.x * p.x * ia + p.y * p.y * ib - 1.0;

  std::vector<double> roots;
  bool tangential = false;
  if (std::abs(A) < 1e-14) {
    if (std::abs(B) > 1e-14) roots.push_back(-C / B);
  } else {
    double disc = B * B - 4.0 * A * C;
    if (std::abs(disc) < 1e-14) {
      tangential = true;
      roots.push_back(-B / (2.0 * A));
    } else if (disc > 0.0) {
      double sq = std::sqrt(disc);
      double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
      roots.push_back(q / A);
      roots.push_back(C / q);
    }
  }

  std::vector<RayConicHit> hits;
  for (double t : roots) {
    // One Newton polish of g(t) = 0 tightens the root after the quadratic
    // formula's roundoff.
    double g = (A * t + B) * t + C;
    double gp = 2.0 * A * t + B;
    if (std::abs(gp) > 1e-14) t -= g / gp;
    if (t <= t_min) continue;
    hits.push_back({t, p + d * t, tangential});
  }
  std::sort(hits.begin(), hits.end(),
            [](const RayConicHit& u, const RayConicHit& v) { return u.t < v.t; });
  return hits;
}

}  // namespace nibbled
