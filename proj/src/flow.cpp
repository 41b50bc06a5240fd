#include "nibbled/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

namespace nibbled {

namespace {

constexpr double kRootTwo = std::numbers::sqrt2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Vertex proximity at which a straight continuation is ambiguous and the
// corner has to be classified.
constexpr double kCornerTol = 1e-12;
// Lateral shift used to re-trace past a regular corner on both sides.
constexpr double kProbeOffset = 1e-12;
constexpr double kProbeAgree = 1e-10;
// Transversal proximity that counts as running into a cone point.
constexpr double kSingularHitTol = 1e-9;
// Cuts of a return map closer than this collide.
constexpr double kCutMergeTol = 1e-12;
constexpr double kMinCutGap = 1e-10;
constexpr double kHolonomyTol = 1e-10;
constexpr double kReturnTol = 1e-9;

int direction_sign(double direction) {
  const double quarter = std::numbers::pi / 4.0;
  if (std::abs(direction - quarter) < 1e-12) return 1;
  if (std::abs(direction - 5.0 * quarter) < 1e-12) return -1;
  fail_domain(ErrorCode::DomainViolation,
              "flow direction must be pi/4 or 5pi/4");
}

// Interior test in the part's own frame; negative margin expands the region.
bool inside_polygon(const UnfoldedPolygon& P, Vec2 z, double margin) {
  Vec2 w = apply_gamma(P.gamma, z);
  const auto& xs = P.profile.xs;
  const auto& ys = P.profile.ys;
  if (w.x < margin || w.x > xs.back() - margin || w.y < margin) return false;
  int i = 0;
  while (i + 1 < P.k() && w.x > xs[i]) ++i;
  return w.y <= ys[i] - margin;
}

struct StepEvent {
  enum class Kind { Crossing, Corner, Singular, Capped };
  Kind kind = Kind::Capped;
  int poly = -1;
  Vec2 from;
  double seg_u = 0.0;    // straight run inside the chart, in u units
  double consumed = 0.0; // budget drawn, >= seg_u through a corner passage
  Vec2 to;
  SideRef side;
  Vec2 entry, delta;
  int ident = -1;
  int corner_vertex = -1;
  int corner_class = -1;
};

// Walks one chart at a time.  Distances are measured by the horizontal
// advance u; arc length is u * sqrt(2).
class Tracer {
 public:
  Tracer(const TranslationSurface& M, int poly, Vec2 z, int sign)
      : M_(&M), poly_(poly), z_(z), sign_(sign) {}

  int poly() const { return poly_; }
  Vec2 position() const { return z_; }
  bool passed_corner() const { return passed_corner_; }

  StepEvent step(double u_cap);

 private:
  struct Hit {
    double u = kInf;
    int chain = -1;
    Vec2 point;
    int corner = -1;
  };

  std::optional<Hit> exit_hit(int p, Vec2 z, double corner_tol) const;
  Vec2 run_probe(int p, Vec2 z, double u_budget, int& out_poly) const;

  const TranslationSurface* M_;
  int poly_;
  Vec2 z_;
  int sign_;
  bool passed_corner_ = false;
};

std::optional<Tracer::Hit> Tracer::exit_hit(int p, Vec2 z,
                                            double corner_tol) const {
  const auto& verts = M_->polygons()[p].vertices;
  const int n = static_cast<int>(verts.size());
  const double u_min = 1e-13;
  std::optional<Hit> best;
  for (int c = 0; c < n; ++c) {
    Vec2 A = verts[c];
    Vec2 B = verts[(c + 1) % n];
    double u, at, lo, hi, ea, eb;
    Vec2 pt;
    if (A.x == B.x) {
      u = sign_ * (A.x - z.x);
      at = z.y + sign_ * u;
      lo = std::min(A.y, B.y);
      hi = std::max(A.y, B.y);
      ea = std::abs(at - A.y);
      eb = std::abs(at - B.y);
      pt = {A.x, at};
    } else {
      u = sign_ * (A.y - z.y);
      at = z.x + sign_ * u;
      lo = std::min(A.x, B.x);
      hi = std::max(A.x, B.x);
      ea = std::abs(at - A.x);
      eb = std::abs(at - B.x);
      pt = {at, A.y};
    }
    if (u <= u_min) continue;
    if (at < lo - corner_tol || at > hi + corner_tol) continue;
    if (best && u >= best->u) continue;
    Hit h{u, c, pt, -1};
    if (ea <= corner_tol)
      h.corner = c;
    else if (eb <= corner_tol)
      h.corner = (c + 1) % n;
    best = h;
  }
  return best;
}

// Continues a laterally shifted copy of the path for u_budget; used on both
// sides of a regular corner.  Any further corner contact aborts.
Vec2 Tracer::run_probe(int p, Vec2 z, double u_budget, int& out_poly) const {
  double left = u_budget;
  for (int guard = 0; guard < 16; ++guard) {
    auto h = exit_hit(p, z, kProbeOffset / 4.0);
    if (!h)
      fail_internal(ErrorCode::ConsistencyFailure,
                    "corner probe found no boundary ahead");
    if (h->corner >= 0)
      fail_domain(ErrorCode::CornerAmbiguity,
                  "corner passage meets a second corner");
    if (h->u >= left) {
      out_poly = p;
      return z + Vec2{sign_ * left, sign_ * left};
    }
    left -= h->u;
    auto [q, z2] = M_->cross({p, h->chain}, h->point);
    p = q;
    z = z2;
  }
  fail_internal(ErrorCode::ConsistencyFailure, "corner probe did not escape");
}

StepEvent Tracer::step(double u_cap) {
  StepEvent ev;
  ev.poly = poly_;
  ev.from = z_;
  auto hit = exit_hit(poly_, z_, kCornerTol);
  if (!hit)
    fail_internal(ErrorCode::ConsistencyFailure,
                  "trajectory found no boundary ahead");
  if (u_cap <= hit->u) {
    ev.kind = StepEvent::Kind::Capped;
    ev.seg_u = ev.consumed = u_cap;
    z_ = z_ + Vec2{sign_ * u_cap, sign_ * u_cap};
    ev.to = z_;
    return ev;
  }
  if (hit->corner >= 0) {
    Vec2 vertex = M_->polygons()[poly_].vertices[hit->corner];
    int cls = M_->class_of({poly_, hit->corner});
    ev.corner_vertex = hit->corner;
    ev.corner_class = cls;
    ev.to = vertex;
    if (M_->corner_classes()[cls].is_singular) {
      ev.kind = StepEvent::Kind::Singular;
      ev.seg_u = ev.consumed = hit->u;
      z_ = vertex;
      return ev;
    }
    // Regular corner: back off along the ray, re-trace both lateral shifts,
    // and continue from their midpoint if the two sides agree.
    double h_eff = std::min(8.0 * kProbeOffset, 0.5 * hit->u);
    if (h_eff < 4.0 * kProbeOffset)
      fail_domain(ErrorCode::CornerAmbiguity,
                  "corner too close to the chart entry to resolve");
    Vec2 back = z_ + Vec2{sign_ * (hit->u - h_eff), sign_ * (hit->u - h_eff)};
    Vec2 lat{kProbeOffset, -kProbeOffset};
    int qa = -1, qb = -1;
    Vec2 za = run_probe(poly_, back + lat, 2.0 * h_eff, qa);
    Vec2 zb = run_probe(poly_, back - lat, 2.0 * h_eff, qb);
    if (qa != qb || (za - zb).norm() > kProbeAgree)
      fail_domain(ErrorCode::CornerAmbiguity,
                  "the two sides of a corner passage disagree");
    ev.kind = StepEvent::Kind::Corner;
    ev.seg_u = hit->u;
    ev.consumed = hit->u + h_eff;
    poly_ = qa;
    z_ = (za + zb) * 0.5;
    passed_corner_ = true;
    return ev;
  }
  auto [q, z2] = M_->cross({poly_, hit->chain}, hit->point);
  ev.kind = StepEvent::Kind::Crossing;
  ev.seg_u = ev.consumed = hit->u;
  ev.to = hit->point;
  ev.side = {poly_, hit->chain};
  ev.entry = z2;
  ev.delta = z2 - hit->point;
  ev.ident = M_->identification_of(ev.side);
  poly_ = q;
  z_ = z2;
  return ev;
}

void check_start(const TranslationSurface& M, int poly, Vec2 start) {
  if (poly < 0 || poly >= static_cast<int>(M.polygons().size()))
    fail_domain(ErrorCode::DomainViolation, "polygon index out of range");
  if (!inside_polygon(M.polygons()[poly], start, kCornerTol))
    fail_domain(ErrorCode::DomainViolation,
                "start point must lie inside its polygon");
}

// Singular vertices grouped by polygon, for the transversal-proximity scan.
std::vector<std::vector<std::pair<int, int>>> singular_vertices(
    const TranslationSurface& M) {
  std::vector<std::vector<std::pair<int, int>>> out(M.polygons().size());
  const auto& classes = M.corner_classes();
  for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
    if (!classes[c].is_singular) continue;
    for (const CornerRef& ref : classes[c].corners)
      out[ref.poly].push_back({ref.vertex, c});
  }
  return out;
}

}  // namespace

double diameter(const TranslationSurface& M) {
  double best = 0.0;
  for (const auto& P : M.polygons())
    best = std::max(best, std::hypot(P.profile.xs.back(), P.profile.ys.front()));
  return best;
}

FlatTrajectory trace(const TranslationSurface& M, int poly, Vec2 start,
                     double direction, double length) {
  int sign = direction_sign(direction);
  check_start(M, poly, start);
  if (!(length > 0.0))
    fail_domain(ErrorCode::DomainViolation, "trace length must be positive");
  Tracer tr(M, poly, start, sign);
  FlatTrajectory out;
  double budget = length / kRootTwo;
  double done = 0.0;
  while (budget > 0.0) {
    StepEvent ev = tr.step(budget);
    out.segments.push_back({ev.poly, ev.from, ev.to});
    done += ev.consumed;
    budget -= ev.consumed;
    switch (ev.kind) {
      case StepEvent::Kind::Capped:
        budget = 0.0;
        break;
      case StepEvent::Kind::Crossing:
        out.crossings.push_back({ev.side, ev.entry, ev.ident, ev.delta});
        break;
      case StepEvent::Kind::Corner:
        out.passed_corner = true;
        break;
      case StepEvent::Kind::Singular:
        fail_domain(ErrorCode::HitSingularity,
                    "trajectory ran into a cone point at length " +
                        std::to_string(done * kRootTwo));
    }
  }
  out.total_length = done * kRootTwo;
  return out;
}

std::string trajectory_csv(const FlatTrajectory& t) {
  std::string out = "t,polygon,x,y\n";
  char line[128];
  double at = 0.0;
  for (const CurveSegment& s : t.segments) {
    std::snprintf(line, sizeof line, "%.12g,%d,%.12g,%.12g\n", at, s.poly,
                  s.from.x, s.from.y);
    out += line;
    at += (s.to - s.from).norm();
  }
  if (!t.segments.empty()) {
    const CurveSegment& s = t.segments.back();
    std::snprintf(line, sizeof line, "%.12g,%d,%.12g,%.12g\n", at, s.poly,
                  s.to.x, s.to.y);
    out += line;
  }
  return out;
}

std::vector<SaddleConnection> find_saddle_connections(const TranslationSurface& M,
                                                      double direction,
                                                      double max_length) {
  if (direction_sign(direction) != 1)
    fail_domain(ErrorCode::DomainViolation,
                "separatrices are enumerated along pi/4 only");
  if (!(max_length > 0.0))
    fail_domain(ErrorCode::DomainViolation, "search length must be positive");
  DBETables dbe = enumerate_DBE(M);
  auto sing = singular_vertices(M);
  const double h0 = 1e-6 * diameter(M);
  std::vector<SaddleConnection> out;
  for (const WedgeDatum& b : dbe.B) {
    Vec2 w = M.polygons()[b.corner.poly].vertices[b.corner.vertex];
    Tracer tr(M, b.corner.poly, w + Vec2{h0, h0}, 1);
    double u_done = h0;
    double budget = max_length / kRootTwo - h0;
    while (budget > 0.0) {
      StepEvent ev = tr.step(budget);
      bool ended = false;
      for (auto [v, cls] : sing[ev.poly]) {
        Vec2 d = M.polygons()[ev.poly].vertices[v] - ev.from;
        double perp = std::abs(d.x - d.y) / kRootTwo;
        double along = 0.5 * (d.x + d.y);
        if (perp <= kSingularHitTol && along > 1e-12 &&
            along <= ev.seg_u + kSingularHitTol) {
          double u_total = u_done + along;
          out.push_back({b.class_index, cls, u_total * kRootTwo,
                         Vec2{u_total, u_total}});
          ended = true;
          break;
        }
      }
      if (ended) break;
      u_done += ev.consumed;
      budget -= ev.consumed;
      if (ev.kind == StepEvent::Kind::Singular ||
          ev.kind == StepEvent::Kind::Capped)
        break;
    }
  }
  return out;
}

Transversal make_transversal(const TranslationSurface& M, int host) {
  if (host < 0 || host >= static_cast<int>(M.polygons().size()))
    fail_domain(ErrorCode::DomainViolation, "polygon index out of range");
  const UnfoldedPolygon& P = M.polygons()[host];
  const auto& xs = P.profile.xs;
  const auto& ys = P.profile.ys;
  double area = 0.0, mx = 0.0, my = 0.0, prev = 0.0;
  for (int i = 0; i < P.k(); ++i) {
    double A = (xs[i] - prev) * ys[i];
    area += A;
    mx += A * 0.5 * (prev + xs[i]);
    my += A * 0.5 * ys[i];
    prev = xs[i];
  }
  double yf = my / area + 0.01 * ys[0] * (std::sqrt(5.0) - 2.0);
  int j = 0;
  for (int i = 0; i < P.k(); ++i)
    if (ys[i] > yf) j = i;
  double X = xs[j];
  double margin = 0.01 * X;
  Vec2 a = apply_gamma(P.gamma, {margin, yf});
  Vec2 b = apply_gamma(P.gamma, {X - margin, yf});
  return {host, Vec2{std::min(a.x, b.x), a.y}, std::abs(b.x - a.x)};
}

namespace {

// One traced return: start offset, landing offset, u-length, and the chart
// path with its crossing statistics.
struct ReturnSample {
  double x0 = 0.0, x1 = 0.0;
  double u_total = 0.0;
  std::vector<CurveSegment> segs;
  std::map<int, int> counts;
  bool passed_corner = false;
  std::vector<CurveSegment> loop;
};

ReturnSample forward_return(const TranslationSurface& M, const Transversal& I,
                            double xoff, int max_crossings) {
  ReturnSample s;
  s.x0 = xoff;
  Tracer tr(M, I.host, {I.origin.x + xoff, I.origin.y}, 1);
  double u_done = 0.0;
  int ncross = 0;
  while (true) {
    StepEvent ev = tr.step(kInf);
    if (ev.poly == I.host) {
      double uy = I.origin.y - ev.from.y;
      if (uy > 1e-9 && uy <= ev.seg_u + kCutMergeTol) {
        double xh = ev.from.x + uy;
        if (xh >= I.origin.x - kCutMergeTol &&
            xh <= I.origin.x + I.width + kCutMergeTol) {
          s.segs.push_back({ev.poly, ev.from, {xh, I.origin.y}});
          s.u_total = u_done + uy;
          s.x1 = xh - I.origin.x;
          s.passed_corner = s.passed_corner || tr.passed_corner();
          return s;
        }
      }
    }
    if (ev.kind == StepEvent::Kind::Singular)
      fail_domain(ErrorCode::SeparatrixHitsCorner,
                  "return orbit runs into a cone point");
    s.segs.push_back({ev.poly, ev.from, ev.to});
    if (ev.kind == StepEvent::Kind::Crossing) ++s.counts[ev.ident];
    if (ev.kind != StepEvent::Kind::Capped && ++ncross > max_crossings)
      fail_domain(ErrorCode::NotGlobalTransversal,
                  "orbit exceeded the crossing budget without returning");
    u_done += ev.consumed;
  }
}

// First meeting point of the backward orbit from (p, z) with the
// transversal, as an offset along it.
double backward_to_transversal(const TranslationSurface& M, const Transversal& I,
                               int p, Vec2 z, int max_crossings, bool* onto) {
  Tracer tr(M, p, z, -1);
  int ncross = 0;
  while (true) {
    StepEvent ev = tr.step(kInf);
    if (ev.poly == I.host) {
      double uy = ev.from.y - I.origin.y;
      if (uy > 1e-9 && uy <= ev.seg_u + kCutMergeTol) {
        double xh = ev.from.x - uy;
        if (xh >= I.origin.x - kCutMergeTol &&
            xh <= I.origin.x + I.width + kCutMergeTol) {
          *onto = true;
          return xh - I.origin.x;
        }
      }
    }
    if (ev.kind == StepEvent::Kind::Singular)
      fail_domain(ErrorCode::SeparatrixHitsCorner,
                  "separatrix meets a cone point before the cross-section");
    if (++ncross > max_crossings) {
      *onto = false;
      return 0.0;
    }
  }
}

}  // namespace

ReturnSystem first_return_iet(const TranslationSurface& M, const Transversal& I,
                              double direction, int max_crossings) {
  if (direction_sign(direction) != 1)
    fail_domain(ErrorCode::DomainViolation,
                "return maps are taken along pi/4 only");
  if (max_crossings < 1)
    fail_domain(ErrorCode::DomainViolation, "crossing budget must be positive");
  if (I.host < 0 || I.host >= static_cast<int>(M.polygons().size()))
    fail_domain(ErrorCode::DomainViolation, "polygon index out of range");
  if (!(I.width > 0.0))
    fail_domain(ErrorCode::DomainViolation, "transversal width must be positive");
  const UnfoldedPolygon& host = M.polygons()[I.host];
  for (double f : {0.0, 0.5, 1.0})
    if (!inside_polygon(host, I.origin + Vec2{f * I.width, 0.0}, kCornerTol))
      fail_domain(ErrorCode::DomainViolation,
                  "transversal must lie inside its host polygon");

  // Cuts of the return map: first backward meeting points of the incoming
  // separatrices and of the two endpoint orbits.
  DBETables dbe = enumerate_DBE(M);
  const double h0 = 1e-6 * diameter(M);
  std::vector<double> cuts = {0.0, I.width};
  auto add_cut = [&](int p, Vec2 z) {
    bool onto = false;
    double x = backward_to_transversal(M, I, p, z, max_crossings, &onto);
    if (!onto)
      fail_domain(ErrorCode::NotGlobalTransversal,
                  "separatrix exceeded the crossing budget without meeting "
                  "the cross-section");
    cuts.push_back(x);
  };
  for (const WedgeDatum& e : dbe.E) {
    Vec2 w = M.polygons()[e.corner.poly].vertices[e.corner.vertex];
    add_cut(e.corner.poly, w - Vec2{h0, h0});
  }
  add_cut(I.host, I.origin);
  add_cut(I.host, I.origin + Vec2{I.width, 0.0});

  std::sort(cuts.begin(), cuts.end());
  std::vector<double> uniq;
  for (double c : cuts)
    if (uniq.empty() || c - uniq.back() > kCutMergeTol) uniq.push_back(c);
  if (std::abs(uniq.front()) <= kCutMergeTol) uniq.front() = 0.0;
  if (std::abs(uniq.back() - I.width) <= kCutMergeTol) uniq.back() = I.width;
  for (size_t i = 1; i < uniq.size(); ++i)
    if (uniq[i] - uniq[i - 1] < kMinCutGap)
      fail_domain(ErrorCode::SeparatrixHitsCorner,
                  "return-map cuts collide on the cross-section");
  const int d = static_cast<int>(uniq.size()) - 1;
  if (d < 2)
    fail_domain(ErrorCode::SeparatrixHitsCorner,
                "return map has fewer than two intervals");

  auto sample_interval = [&](int j, const std::vector<double>& fracs) {
    for (double f : fracs) {
      ReturnSample s;
      try {
        s = forward_return(M, I, uniq[j] + f * (uniq[j + 1] - uniq[j]),
                           max_crossings);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::CornerAmbiguity) continue;
        throw;
      }
      if (s.passed_corner) continue;
      std::vector<CurveSegment> loop = s.segs;
      loop.push_back({I.host,
                      {I.origin.x + s.x1, I.origin.y},
                      {I.origin.x + s.x0, I.origin.y}});
      Vec2 total;
      try {
        total = pairing(M, loop, true);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::CornerCrossing) continue;
        throw;
      }
      Vec2 expect{s.u_total - (s.x1 - s.x0), s.u_total};
      // Rounding in the crossing sum grows with the loop, so agreement is
      // relative to the holonomy magnitude.
      double tol = kHolonomyTol * (1.0 + std::abs(s.u_total));
      if (std::abs(total.x - expect.x) > tol ||
          std::abs(total.y - expect.y) > tol)
        fail_internal(ErrorCode::ConsistencyFailure,
                      "crossing sum disagrees with the traced return loop");
      s.loop = std::move(loop);
      return s;
    }
    fail_domain(ErrorCode::SeparatrixHitsCorner,
                "return samples keep meeting corners");
  };

  const std::vector<double> primary = {0.5, 0.47, 0.56, 0.43};
  const std::vector<double> secondary = {0.5 * (3.0 - std::sqrt(5.0)), 0.34,
                                         0.61, 0.29};
  std::vector<double> lengths(d), shifts(d);
  ReturnSystem out;
  out.crossing_counts.resize(d);
  out.displacements.resize(d);
  out.loops.resize(d);
  for (int j = 0; j < d; ++j) {
    lengths[j] = uniq[j + 1] - uniq[j];
    ReturnSample s = sample_interval(j, primary);
    ReturnSample s2 = sample_interval(j, secondary);
    double c1 = s.x1 - s.x0;
    double c2 = s2.x1 - s2.x0;
    if (std::abs(c1 - c2) > kReturnTol)
      fail_internal(ErrorCode::ConsistencyFailure,
                    "return displacement differs between samples");
    shifts[j] = c1;
    out.crossing_counts[j] = std::move(s.counts);
    out.displacements[j] = {-c1, s.u_total * kRootTwo};
    out.loops[j] = std::move(s.loop);
  }

  // Image intervals must tile [0, width); their order gives the permutation.
  std::vector<int> ord(d);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) {
    return uniq[a] + shifts[a] < uniq[b] + shifts[b];
  });
  std::vector<int> perm(d);
  double expect_at = 0.0;
  for (int r = 0; r < d; ++r) {
    int j = ord[r];
    perm[j] = r + 1;
    if (std::abs(uniq[j] + shifts[j] - expect_at) > kReturnTol)
      fail_internal(ErrorCode::ConsistencyFailure,
                    "return images do not tile the cross-section");
    expect_at += lengths[j];
  }
  if (std::abs(expect_at - I.width) > kReturnTol)
    fail_internal(ErrorCode::ConsistencyFailure,
                  "return images do not tile the cross-section");
  out.iet = make_iet(lengths, perm);
  for (int j = 0; j < d; ++j) {
    double predicted = out.iet.t[perm[j] - 1] - out.iet.b[j];
    if (std::abs(shifts[j] - predicted) > kReturnTol)
      fail_internal(ErrorCode::ConsistencyFailure,
                    "exchange data disagrees with the measured returns");
  }
  return out;
}

BirkhoffResult birkhoff_averages(const TranslationSurface& M,
                                 const std::vector<BirkhoffBox>& boxes,
                                 int poly, Vec2 start, double direction,
                                 double horizon) {
  if (direction_sign(direction) != 1)
    fail_domain(ErrorCode::DomainViolation,
                "time averages are taken along pi/4 only");
  if (!(horizon > 0.0))
    fail_domain(ErrorCode::DomainViolation, "time horizon must be positive");
  check_start(M, poly, start);
  for (const BirkhoffBox& b : boxes) {
    if (b.poly < 0 || b.poly >= static_cast<int>(M.polygons().size()))
      fail_domain(ErrorCode::DomainViolation, "polygon index out of range");
    if (!(b.x0 < b.x1) || !(b.y0 < b.y1))
      fail_domain(ErrorCode::DomainViolation, "box must have positive size");
    const UnfoldedPolygon& P = M.polygons()[b.poly];
    for (Vec2 c : {Vec2{b.x0, b.y0}, Vec2{b.x0, b.y1}, Vec2{b.x1, b.y0},
                   Vec2{b.x1, b.y1}})
      if (!inside_polygon(P, c, -1e-9))
        fail_domain(ErrorCode::DomainViolation,
                    "box must sit inside its polygon");
  }
  Tracer tr(M, poly, start, 1);
  std::vector<double> acc(boxes.size(), 0.0);
  double budget = horizon / kRootTwo;
  double done = 0.0;
  bool hit = false;
  while (budget > 0.0) {
    StepEvent ev = tr.step(budget);
    for (size_t i = 0; i < boxes.size(); ++i) {
      const BirkhoffBox& b = boxes[i];
      if (b.poly != ev.poly) continue;
      double lo = std::max({0.0, b.x0 - ev.from.x, b.y0 - ev.from.y});
      double hi = std::min({ev.seg_u, b.x1 - ev.from.x, b.y1 - ev.from.y});
      if (hi > lo) acc[i] += hi - lo;
    }
    done += ev.consumed;
    budget -= ev.consumed;
    if (ev.kind == StepEvent::Kind::Singular) {
      hit = true;
      break;
    }
    if (ev.kind == StepEvent::Kind::Capped) break;
  }
  BirkhoffResult res;
  res.elapsed = done * kRootTwo;
  res.hit_singularity = hit;
  res.fractions.resize(boxes.size());
  for (size_t i = 0; i < boxes.size(); ++i)
    res.fractions[i] = done > 0.0 ? acc[i] / done : 0.0;
  return res;
}

}  // namespace nibbled
