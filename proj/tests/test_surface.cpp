#include "nibbled/surface.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "nibbled/errors.hpp"
#include "nibbled/flatten.hpp"
#include "support/polygons.hpp"
#include "support/tables.hpp"

using namespace nibbled;
using testsupport::one_step_example;
using testsupport::ten_part_example;
using testsupport::two_rectangle_example;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool inside_polygon(const UnfoldedPolygon& up, Vec2 z) {
  Vec2 c = apply_gamma(up.gamma, z);  // reflections are involutive
  const auto& xs = up.profile.xs;
  const auto& ys = up.profile.ys;
  if (c.x <= 0.0 || c.x >= xs.back() || c.y <= 0.0 || c.y >= ys.front()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (c.x < xs[i]) return c.y < ys[i];
  return false;
}

int count_classes(const TranslationSurface& M, CornerKind kind) {
  int n = 0;
  for (const auto& cls : M.corner_classes())
    if (cls.kind == kind) ++n;
  return n;
}

// Probe scan: shoot short rays in direction pi/4 across every identified
// side and out of every singular wedge, then compare with the tables.
void check_dbe_against_probes(const TranslationSurface& M) {
  DBETables t = enumerate_DBE(M);
  REQUIRE(t.D.size() == M.identifications().size());

  double eps = 1e-7;
  for (const auto& d : t.D) {
    const Identification& id = M.identifications()[d.ident];
    auto [a1, a2] = M.side_segment(id.a);
    Vec2 mid_a = (a1 + a2) * 0.5;
    Vec2 mid_b = mid_a + id.delta;
    Vec2 before_mid = (d.before_poly == id.a.poly) ? mid_a : mid_b;
    Vec2 after_mid = (d.after_poly == id.a.poly) ? mid_a : mid_b;

    Vec2 step{eps, eps};
    CHECK(inside_polygon(M.polygons()[d.before_poly], before_mid - step));
    CHECK(inside_polygon(M.polygons()[d.after_poly], after_mid + step));
    CHECK(std::fabs(d.v.x - (before_mid.x - after_mid.x)) < 1e-12);
    CHECK(std::fabs(d.v.y - (before_mid.y - after_mid.y)) < 1e-12);
  }

  std::set<std::pair<int, int>> b_table, e_table, b_probe, e_probe;
  for (const auto& w : t.B) b_table.insert({w.corner.poly, w.corner.vertex});
  for (const auto& w : t.E) e_table.insert({w.corner.poly, w.corner.vertex});
  for (const auto& cls : M.corner_classes()) {
    if (!cls.is_singular) continue;
    for (const CornerRef& c : cls.corners) {
      Vec2 z = M.polygons()[c.poly].vertices[c.vertex];
      if (inside_polygon(M.polygons()[c.poly], z + Vec2{eps, eps}))
        b_probe.insert({c.poly, c.vertex});
      if (inside_polygon(M.polygons()[c.poly], z - Vec2{eps, eps}))
        e_probe.insert({c.poly, c.vertex});
    }
  }
  CHECK(b_table == b_probe);
  CHECK(e_table == e_probe);

  for (const auto& w : t.B) {
    Vec2 z = M.polygons()[w.corner.poly].vertices[w.corner.vertex];
    CHECK(w.value.x == -z.x);
    CHECK(w.value.y == -z.y);
  }
  for (const auto& w : t.E) {
    Vec2 z = M.polygons()[w.corner.poly].vertices[w.corner.vertex];
    CHECK(w.value.x == z.x);
    CHECK(w.value.y == z.y);
  }
}

}  // namespace

TEST_CASE("two glued rectangles unfold to a torus") {
  TranslationSurface M = unfold(two_rectangle_example());

  REQUIRE(M.polygons().size() == 8);
  CHECK(M.identifications().size() == 16);
  CHECK(M.area() == doctest::Approx(4.0 * (1.2 * 0.7 + 0.8 * 0.7)));
  CHECK(M.genus() == 1);
  CHECK(M.singularities().empty());

  for (const auto& cls : M.corner_classes()) {
    CHECK(cls.cone_angle == doctest::Approx(2.0 * kPi));
    CHECK(cls.corners.size() == 4);
  }
  CHECK(M.corner_classes().size() == 8);

  int p0 = M.polygon_index(1, Gamma::Id);
  const SingularPoint& origin = M.corner_classes()[M.class_of({p0, 0})];
  CHECK(origin.kind == CornerKind::Origin);
  CHECK_FALSE(origin.is_singular);
}

TEST_CASE("lone step corner gives one triple cone and genus two") {
  TranslationSurface M = unfold(one_step_example());

  REQUIRE(M.polygons().size() == 4);
  CHECK(M.identifications().size() == 12);
  auto sing = M.singularities();
  REQUIRE(sing.size() == 1);
  CHECK(sing[0]->kind == CornerKind::Step);
  CHECK(sing[0]->cone_angle == doctest::Approx(6.0 * kPi));
  CHECK(sing[0]->corners.size() == 4);
  CHECK(M.genus() == 2);

  DBETables t = enumerate_DBE(M);
  CHECK(t.B.size() == 3);
  CHECK(t.E.size() == 3);
  check_dbe_against_probes(M);
}

TEST_CASE("ten part fixture unfolds consistently") {
  GeneralizedPolygon gp = ten_part_example();
  TranslationSurface M = unfold(gp);

  REQUIRE(M.polygons().size() == 40);
  CHECK(M.identifications().size() == 80);
  CHECK(M.area() == doctest::Approx(4.0 * gp.area()));

  long verts = static_cast<long>(M.corner_classes().size());
  long edges = 80;
  long faces = 40;
  CHECK(verts - edges + faces == 2 - 2 * static_cast<long>(M.genus()));

  double excess = 0.0;
  for (const auto& cls : M.corner_classes()) {
    double turns = cls.cone_angle / (2.0 * kPi);
    CHECK(turns == doctest::Approx(std::round(turns)));
    excess += turns - 1.0;
  }
  CHECK(excess == doctest::Approx(2.0 * M.genus() - 2.0));

  check_dbe_against_probes(M);
}

TEST_CASE("flattened fixtures unfold at expected genus") {
  SUBCASE("symmetric one step tables are tori in both regimes") {
    NibbledEllipse table = testsupport::symmetric_k1();
    for (double s : {0.75, 1.5}) {
      FlattenedSystem sys = build_flat_polygon(table, s);
      REQUIRE(sys.components.size() == 1);
      TranslationSurface M = unfold(sys.components[0].polygon);
      CHECK(M.polygons().size() == 16);
      CHECK(M.genus() == 1);
      CHECK(M.singularities().empty());
      CHECK(M.area() == doctest::Approx(4.0 * sys.components[0].polygon.area()));
    }
  }

  SUBCASE("staggered two step table below the waist") {
    FlattenedSystem sys = build_flat_polygon(testsupport::staggered_k2(), 0.6);
    REQUIRE(sys.components.size() == 1);
    TranslationSurface M = unfold(sys.components[0].polygon);
    CHECK(M.polygons().size() == 16);
    auto sing = M.singularities();
    CHECK(sing.size() == 4);
    for (const auto* s : sing) {
      CHECK(s->kind == CornerKind::Step);
      CHECK(s->cone_angle == doctest::Approx(6.0 * kPi));
    }
    CHECK(M.genus() == 5);
    check_dbe_against_probes(M);
  }

  SUBCASE("staggered table beyond the waist mixes step counts") {
    FlattenedSystem sys = build_flat_polygon(testsupport::staggered_k2(), 1.52);
    REQUIRE(sys.components.size() == 1);
    TranslationSurface M = unfold(sys.components[0].polygon);
    CHECK(M.polygons().size() == 16);
    CHECK(M.singularities().size() == 2);
    CHECK(M.genus() == 3);
    check_dbe_against_probes(M);
  }
}

TEST_CASE("pairing reproduces loop holonomies on the torus") {
  TranslationSurface M = unfold(two_rectangle_example());
  int p1 = M.polygon_index(1, Gamma::Id);
  int p1v = M.polygon_index(1, Gamma::V);
  int p1h = M.polygon_index(1, Gamma::H);
  int p2 = M.polygon_index(2, Gamma::Id);
  int p2v = M.polygon_index(2, Gamma::V);

  SUBCASE("horizontal loop") {
    std::vector<CurveSegment> segs = {
        {p1, {0.3, 0.2}, {1.2, 0.2}},  {p1v, {-1.2, 0.2}, {0.0, 0.2}},
        {p2, {0.0, 0.2}, {0.8, 0.2}},  {p2v, {-0.8, 0.2}, {0.0, 0.2}},
        {p1, {0.0, 0.2}, {0.3, 0.2}}};
    Vec2 h = pairing(M, segs, true);
    CHECK(h.x == doctest::Approx(2.0 * (1.2 + 0.8)));
    CHECK(h.y == doctest::Approx(0.0));
  }

  SUBCASE("vertical loop") {
    std::vector<CurveSegment> segs = {{p1, {0.3, 0.2}, {0.3, 0.7}},
                                      {p1h, {0.3, -0.7}, {0.3, 0.0}},
                                      {p1, {0.3, 0.0}, {0.3, 0.2}}};
    Vec2 h = pairing(M, segs, true);
    CHECK(h.x == doctest::Approx(0.0));
    CHECK(h.y == doctest::Approx(2.0 * 0.7));
  }

  SUBCASE("out and back loop with an interior turn is null") {
    std::vector<CurveSegment> segs = {{p1, {0.3, 0.2}, {1.2, 0.3}},
                                      {p1v, {-1.2, 0.3}, {-0.6, 0.4}},
                                      {p1v, {-0.6, 0.4}, {-1.2, 0.5}},
                                      {p1, {1.2, 0.5}, {0.3, 0.2}}};
    Vec2 h = pairing(M, segs, true);
    CHECK(h.x == doctest::Approx(0.0));
    CHECK(h.y == doctest::Approx(0.0));
  }

  SUBCASE("junction too close to a corner is refused") {
    std::vector<CurveSegment> segs = {{p1, {0.3, 0.2}, {1.2, 0.7 - 1e-10}},
                                      {p1v, {-1.2, 0.7 - 1e-10}, {0.0, 0.2}},
                                      {p1, {0.3, 0.2}, {0.3, 0.2}}};
    CHECK_THROWS_AS(pairing(M, segs, true), Error);
  }

  SUBCASE("open curve endpoints must be singular") {
    std::vector<CurveSegment> segs = {{p1, {0.0, 0.0}, {1.2, 0.35}},
                                      {p1v, {-1.2, 0.35}, {0.0, 0.7}}};
    CHECK_THROWS_AS(pairing(M, segs, false), Error);
  }
}

TEST_CASE("vertical saddle connection pairs to its imaginary length") {
  TranslationSurface M = unfold(one_step_example());
  int p = M.polygon_index(1, Gamma::Id);
  int ph = M.polygon_index(1, Gamma::H);

  std::vector<CurveSegment> segs = {{p, {1.0, 0.4}, {1.0, 0.0}},
                                    {ph, {1.0, 0.0}, {1.0, -0.4}}};
  Vec2 h = pairing(M, segs, false);
  CHECK(h.x == doctest::Approx(0.0));
  CHECK(h.y == doctest::Approx(-0.8));
}

TEST_CASE("random out and back loops pair to zero") {
  GeneralizedPolygon gp = ten_part_example();
  TranslationSurface M = unfold(gp);
  std::mt19937 rng(20240819u);
  std::uniform_real_distribution<double> unit(0.15, 0.85);
  std::uniform_int_distribution<int> pick_poly(0, static_cast<int>(M.polygons().size()) - 1);

  for (int trial = 0; trial < 100; ++trial) {
    int p0 = pick_poly(rng);
    const auto& up0 = M.polygons()[p0];
    Vec2 z0 = apply_gamma(up0.gamma,
                          Vec2{up0.profile.xs[0] * unit(rng), up0.profile.ys[0] * unit(rng)});

    // Outward: cross a random point on a random side, up to four times.
    int depth = 1 + static_cast<int>(rng() % 4);
    std::vector<CurveSegment> outward;
    int p = p0;
    Vec2 z = z0;
    for (int d = 0; d < depth; ++d) {
      int n = 2 * M.polygons()[p].k() + 2;
      SideRef side{p, static_cast<int>(rng() % n)};
      auto [e1, e2] = M.side_segment(side);
      Vec2 hit = e1 + (e2 - e1) * unit(rng);
      outward.push_back({p, z, hit});
      auto [q, z2] = M.cross(side, hit);
      p = q;
      z = z2;
    }

    // Return through the same crossing points in reverse order.
    std::vector<CurveSegment> segs = outward;
    segs.push_back({p, z, z});
    for (int i = static_cast<int>(outward.size()) - 1; i > 0; --i)
      segs.push_back({outward[i].poly, outward[i].to, outward[i].from});
    segs.push_back({p0, outward[0].to, z0});

    Vec2 h = pairing(M, segs, true);
    CHECK(std::fabs(h.x) < 1e-12);
    CHECK(std::fabs(h.y) < 1e-12);
  }
}
