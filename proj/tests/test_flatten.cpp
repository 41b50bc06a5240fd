#include "nibbled/flatten.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "nibbled/errors.hpp"
#include "support/tables.hpp"

using namespace nibbled;
using nibbled::testsupport::staggered_k2;
using nibbled::testsupport::symmetric_k1;

namespace {

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

double ell_value(const NibbledEllipse& table, double s) {
  return ell(table.family(), s).value;
}

}  // namespace

TEST_CASE("parameter partition of the symmetric table") {
  NibbledEllipse table = symmetric_k1();
  ParameterPartition part = interval_partition(table);
  REQUIRE(part.breakpoints.size() == 3);
  CHECK(part.breakpoints[0] == doctest::Approx(0.5));
  CHECK(part.breakpoints[1] == doctest::Approx(1.0));
  CHECK(part.breakpoints[2] == doctest::Approx(2.0));
  REQUIRE(part.intervals.size() == 2);
  CHECK(part.interval_of(0.75) == 0);
  CHECK(part.interval_of(1.5) == 1);
  CHECK(throws_code(ErrorCode::DomainViolation, [&] { part.interval_of(1.0); }));
  CHECK(throws_code(ErrorCode::DomainViolation, [&] { part.interval_of(0.3); }));
  CHECK(throws_code(ErrorCode::DomainViolation, [&] { part.interval_of(2.4); }));
}

TEST_CASE("parameter partition of the staggered table") {
  NibbledEllipse table = staggered_k2();
  ParameterPartition part = interval_partition(table);
  const std::vector<double> expected{0.2, 0.3, 0.5, 0.55, 1.0, 1.45, 1.5, 1.55, 1.6, 2.0};
  REQUIRE(part.breakpoints.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(part.breakpoints[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(part.intervals.size() == 9);
}

TEST_CASE("elliptic chart pins the axes and the caustic") {
  NibbledEllipse table = symmetric_k1();
  const double s = 0.75;
  const double el = ell_value(table, s);

  Vec2 on_axis = flatten_point(table, s, {0.0, 0.6});
  CHECK(on_axis.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(on_axis.y > 0.1);

  const double ca = std::sqrt(2.0 - s), cb = std::sqrt(1.0 - s);
  Vec2 on_caustic = flatten_point(table, s, {ca * std::cos(1.0), cb * std::sin(1.0)});
  CHECK(on_caustic.y == doctest::Approx(0.0).epsilon(1e-7));

  // Beyond the foci the x axis carries lambda1 = b, a quarter turn around
  // the component.
  Vec2 beyond = flatten_point(table, s, {1.15, 0.0});
  CHECK(beyond.x == doctest::Approx(el).epsilon(1e-10));
}

TEST_CASE("elliptic chart tiles the cylinder in quadrant order") {
  NibbledEllipse table = symmetric_k1();
  const double s = 0.75;
  const double el = ell_value(table, s);

  const double u_pp = flatten_point(table, s, {0.3, 0.6}).x;
  const double u_pm = flatten_point(table, s, {0.3, -0.6}).x;
  const double u_mm = flatten_point(table, s, {-0.3, -0.6}).x;
  const double u_mp = flatten_point(table, s, {-0.3, 0.6}).x;
  CHECK(u_pp > 0.0);
  CHECK(u_pp < el);
  CHECK(u_pm > el);
  CHECK(u_pm < 2.0 * el);
  CHECK(u_mm > 2.0 * el);
  CHECK(u_mm < 3.0 * el);
  CHECK(u_mp > 3.0 * el);
  CHECK(u_mp < 4.0 * el);

  // Mirror points sit symmetrically around the seam images.
  CHECK(u_pm == doctest::Approx(2.0 * el - u_pp).epsilon(1e-12));
  CHECK(u_mm == doctest::Approx(2.0 * el + u_pp).epsilon(1e-12));
  CHECK(u_mp == doctest::Approx(4.0 * el - u_pp).epsilon(1e-12));

  const double eps = 1e-4;
  const double left = flatten_point(table, s, {-eps, 0.6}).x;
  const double right = flatten_point(table, s, {eps, 0.6}).x;
  double gap = std::abs(right - left);
  gap = std::min(gap, 4.0 * el - gap);
  CHECK(gap < 2e-3);
}

TEST_CASE("elliptic chart rejects points off the component") {
  NibbledEllipse table = symmetric_k1();
  const double s = 0.75;
  CHECK(throws_code(ErrorCode::OutsideComponent,
                    [&] { flatten_point(table, s, {2.5, 0.0}); }));
  CHECK(throws_code(ErrorCode::OutsideComponent,
                    [&] { flatten_point(table, s, {0.1, 0.1}); }));
  CHECK(throws_code(ErrorCode::OutsideComponent,
                    [&] { flatten_point(table, s, {1.0, 0.0}); }));
  CHECK(throws_code(ErrorCode::DegenerateCaustic,
                    [&] { flatten_point(table, 1.0, {0.3, 0.6}); }));
  CHECK(throws_code(ErrorCode::DegenerateCaustic,
                    [&] { flatten_point(table, 2.5, {0.3, 0.6}); }));
}

TEST_CASE("hyperbolic chart pins the axes and the branches") {
  NibbledEllipse table = symmetric_k1();
  const double s = 1.5;
  const double el = ell_value(table, s);

  Vec2 on_y = flatten_point(table, s, {0.0, 0.65});
  CHECK(on_y.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(on_y.y > 0.0);

  Vec2 between = flatten_point(table, s, {0.3, 0.0});
  CHECK(between.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(between.x > 0.0);

  const double ch = std::sqrt(2.0 - s), sh = std::sqrt(s - 1.0);
  Vec2 p0{ch * std::cosh(0.35), sh * std::sinh(0.35)};
  Vec2 on_branch = flatten_point(table, s, p0);
  CHECK(on_branch.x == doctest::Approx(el).epsilon(1e-7));

  // Slightly inside the branch the chart must still evaluate and stay close.
  Vec2 near_branch =
      flatten_point(table, s, {p0.x * (1.0 - 1e-7), p0.y * (1.0 - 1e-7)});
  CHECK(std::abs(near_branch.x - el) < 1e-2);

  Vec2 q = flatten_point(table, s, {0.5, 0.4});
  CHECK(q.x > 0.0);
  CHECK(q.y > 0.0);
  CHECK(flatten_point(table, s, {-0.5, 0.4}).x == doctest::Approx(-q.x));
  CHECK(flatten_point(table, s, {0.5, -0.4}).y == doctest::Approx(-q.y));
  CHECK(flatten_point(table, s, {-0.5, -0.4}).x == doctest::Approx(-q.x));

  CHECK(throws_code(ErrorCode::OutsideComponent,
                    [&] { flatten_point(table, s, {1.2, 0.1}); }));
}

TEST_CASE("tangent chords flatten to slope-one lines") {
  NibbledEllipse table = symmetric_k1();

  SUBCASE("around the elliptic component") {
    const double s = 0.75;
    const double el = ell_value(table, s);
    const double ca = std::sqrt(2.0 - s), cb = std::sqrt(1.0 - s);
    const double th = 1.0;
    Vec2 p0{ca * std::cos(th), cb * std::sin(th)};
    Vec2 dir = Vec2{-ca * std::sin(th), cb * std::cos(th)}.normalized();

    std::vector<Vec2> imgs;
    for (int i = 0; i <= 40; ++i) {
      Vec2 p = p0 + dir * (0.02 + 0.58 * i / 40.0);
      REQUIRE(table.contains(p));
      imgs.push_back(flatten_point(table, s, p));
    }
    // Unwrap the cyclic coordinate, then check collinearity at slope +-1.
    std::vector<double> us{imgs[0].x};
    for (std::size_t i = 1; i < imgs.size(); ++i) {
      double du = imgs[i].x - imgs[i - 1].x;
      if (du > 2.0 * el) du -= 4.0 * el;
      if (du < -2.0 * el) du += 4.0 * el;
      us.push_back(us.back() + du);
    }
    const double sigma = (imgs[1].y - imgs[0].y) / (us[1] - us[0]) > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < imgs.size(); ++i) {
      CHECK(std::abs((imgs[i].y - imgs[0].y) - sigma * (us[i] - us[0])) <= 1e-6 * el);
    }
  }

  SUBCASE("across the hyperbolic component") {
    const double s = 1.5;
    const double el = ell_value(table, s);
    const double ch = std::sqrt(2.0 - s), sh = std::sqrt(s - 1.0);
    const double t0 = 0.3;
    Vec2 p0{ch * std::cosh(t0), sh * std::sinh(t0)};
    Vec2 dir = Vec2{ch * std::sinh(t0), sh * std::cosh(t0)}.normalized();

    std::vector<Vec2> imgs;
    for (int i = 0; i <= 40; ++i) {
      Vec2 p = p0 + dir * (-0.3 + 0.27 * i / 40.0);
      REQUIRE(table.contains(p));
      imgs.push_back(flatten_point(table, s, p));
    }
    const double sigma =
        (imgs[1].y - imgs[0].y) / (imgs[1].x - imgs[0].x) > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < imgs.size(); ++i) {
      CHECK(std::abs((imgs[i].y - imgs[0].y) - sigma * (imgs[i].x - imgs[0].x)) <=
            1e-6 * el);
    }
  }
}

TEST_CASE("flattening the symmetric table below the focal segment") {
  NibbledEllipse table = symmetric_k1();
  const double s = 0.75;
  FlattenedSystem sys = build_flat_polygon(table, s);
  CHECK(sys.regime == CausticRegime::Elliptic);
  CHECK(sys.case_index == 2);
  CHECK(sys.subcase == 3);
  REQUIRE(sys.components.size() == 1);
  const GeneralizedPolygon& gp = sys.components[0].polygon;
  REQUIRE(gp.labels() == std::vector<int>{1, 2, 3, 4});

  CHECK(gp.part(1).gamma == Gamma::Id);
  CHECK(gp.part(2).gamma == Gamma::V);
  CHECK(gp.part(3).gamma == Gamma::Id);
  CHECK(gp.part(4).gamma == Gamma::V);
  CHECK(gp.partner(RelationLetter::V, 1) == 2);
  CHECK(gp.partner(RelationLetter::V, 3) == 4);
  CHECK(gp.partner(RelationLetter::v, 2) == 3);
  CHECK(gp.partner(RelationLetter::v, 4) == 1);
  for (int m : gp.labels()) {
    CHECK(gp.is_self(RelationLetter::H, m));
    CHECK(gp.is_self(RelationLetter::h, m));
  }

  const double el = ell_value(table, s);
  const double y1 = xi(table.family(), Interval::finite(0.5, s), s).value;
  for (int m : gp.labels()) {
    REQUIRE(gp.part(m).profile.k() == 1);
    CHECK(gp.part(m).profile.xs[0] == doctest::Approx(el).epsilon(1e-9));
    CHECK(gp.part(m).profile.ys[0] == doctest::Approx(y1).epsilon(1e-9));
  }
  CHECK(gp.area() == doctest::Approx(4.0 * el * y1).epsilon(1e-9));

  REQUIRE(sys.components[0].parts.size() == 4);
  for (const SymbolicPart& sp : sys.components[0].parts) {
    REQUIRE(sp.l == 1);
    CHECK(sp.xs_sym[0].ell_coeff == 1.0);
    CHECK(sp.xs_sym[0].terms.empty());
    CHECK(sp.ys_sym[0].ell_coeff == 1.0);
    REQUIRE(sp.ys_sym[0].terms.size() == 1);
    CHECK(sp.ys_sym[0].terms[0].coeff == -1.0);
    CHECK(sp.ys_sym[0].terms[0].domain == Interval::tail(0.5));
  }
  CHECK(sys.chart_offset(Quadrant::PP) == 0.0);
  CHECK(sys.chart_offset(Quadrant::MM) == doctest::Approx(2.0 * el));
}

TEST_CASE("flattening the symmetric table beyond the focal segment") {
  NibbledEllipse table = symmetric_k1();
  const double s = 1.5;
  FlattenedSystem sys = build_flat_polygon(table, s);
  CHECK(sys.regime == CausticRegime::Hyperbolic);
  CHECK(sys.case_index == 3);
  CHECK(sys.subcase == 0);
  REQUIRE(sys.components.size() == 1);
  const GeneralizedPolygon& gp = sys.components[0].polygon;

  CHECK(gp.part(1).gamma == Gamma::Id);
  CHECK(gp.part(2).gamma == Gamma::V);
  CHECK(gp.part(3).gamma == Gamma::VH);
  CHECK(gp.part(4).gamma == Gamma::H);
  CHECK(gp.partner(RelationLetter::V, 1) == 2);
  CHECK(gp.partner(RelationLetter::V, 3) == 4);
  CHECK(gp.partner(RelationLetter::H, 2) == 3);
  CHECK(gp.partner(RelationLetter::H, 4) == 1);
  for (int m : gp.labels()) {
    CHECK(gp.is_self(RelationLetter::v, m));
    CHECK(gp.is_self(RelationLetter::h, m));
  }

  const double direct = xi(table.family(), Interval::finite(s, 2.0), s).value;
  const double y1 = xi(table.family(), Interval::finite(0.5, 1.0), s).value;
  for (int m : gp.labels()) {
    CHECK(gp.part(m).profile.xs[0] == doctest::Approx(direct).epsilon(1e-9));
    CHECK(gp.part(m).profile.ys[0] == doctest::Approx(y1).epsilon(1e-9));
  }
}

TEST_CASE("flattening the staggered table in the lowest range") {
  NibbledEllipse table = staggered_k2();
  const double s = 0.25;
  FlattenedSystem sys = build_flat_polygon(table, s);
  CHECK(sys.case_index == 1);
  REQUIRE(sys.components.size() == 1);
  const GeneralizedPolygon& gp = sys.components[0].polygon;
  REQUIRE(gp.labels() == std::vector<int>{1, 2});
  CHECK(gp.partner(RelationLetter::V, 1) == 2);
  CHECK(gp.is_self(RelationLetter::v, 1));
  CHECK(gp.is_self(RelationLetter::h, 2));

  // Only the first column of each upper quadrant survives this low.
  CHECK(gp.part(1).profile.k() == 1);
  CHECK(gp.part(2).profile.k() == 1);
  const ConicFamily& fam = table.family();
  CHECK(gp.part(1).profile.xs[0] ==
        doctest::Approx(xi(fam, Interval::finite(1.45, 2.0), s).value).epsilon(1e-9));
  CHECK(gp.part(2).profile.xs[0] ==
        doctest::Approx(xi(fam, Interval::finite(1.5, 2.0), s).value).epsilon(1e-9));
  CHECK(gp.part(1).profile.ys[0] ==
        doctest::Approx(xi(fam, Interval::finite(0.2, s), s).value).epsilon(1e-9));
  CHECK(gp.part(1).profile.ys[0] == doctest::Approx(gp.part(2).profile.ys[0]));
}

TEST_CASE("flattening the staggered table splits into two pieces") {
  NibbledEllipse table = staggered_k2();
  const double s = 0.4;
  FlattenedSystem sys = build_flat_polygon(table, s);
  CHECK(sys.case_index == 2);
  CHECK(sys.subcase == 1);
  REQUIRE(sys.components.size() == 2);
  const GeneralizedPolygon& up = sys.components[0].polygon;
  const GeneralizedPolygon& down = sys.components[1].polygon;
  CHECK(up.labels() == std::vector<int>{1, 2});
  CHECK(down.labels() == std::vector<int>{3, 4});
  CHECK(up.partner(RelationLetter::V, 1) == 2);
  CHECK(down.partner(RelationLetter::V, 4) == 3);
  CHECK(up.is_self(RelationLetter::v, 1));
  CHECK(up.is_self(RelationLetter::v, 2));
  CHECK(down.is_self(RelationLetter::v, 3));
  CHECK(down.is_self(RelationLetter::v, 4));
  for (const FlatComponent& comp : sys.components)
    for (const SymbolicPart& sp : comp.parts) CHECK(sp.l == 1);
}

TEST_CASE("flattening the staggered table through the middle ranges") {
  NibbledEllipse table = staggered_k2();

  SUBCASE("one short vertical glued") {
    FlattenedSystem sys = build_flat_polygon(table, 0.52);
    CHECK(sys.case_index == 2);
    CHECK(sys.subcase == 2);
    REQUIRE(sys.components.size() == 1);
    const GeneralizedPolygon& gp = sys.components[0].polygon;
    CHECK(gp.partner(RelationLetter::v, 2) == 3);
    CHECK(gp.is_self(RelationLetter::v, 1));
    CHECK(gp.is_self(RelationLetter::v, 4));
    // The x < 0 quadrants already show both columns, the x > 0 ones one.
    CHECK(gp.part(1).profile.k() == 1);
    CHECK(gp.part(2).profile.k() == 2);
    CHECK(gp.part(3).profile.k() == 2);
    CHECK(gp.part(4).profile.k() == 1);
  }

  SUBCASE("both short verticals glued") {
    FlattenedSystem sys = build_flat_polygon(table, 0.6);
    CHECK(sys.case_index == 2);
    CHECK(sys.subcase == 3);
    REQUIRE(sys.components.size() == 1);
    const GeneralizedPolygon& gp = sys.components[0].polygon;
    CHECK(gp.partner(RelationLetter::v, 2) == 3);
    CHECK(gp.partner(RelationLetter::v, 4) == 1);
    const double el = ell_value(table, 0.6);
    for (int m : gp.labels()) {
      REQUIRE(gp.part(m).profile.k() == 2);
      CHECK(gp.part(m).profile.xs[1] == doctest::Approx(el).epsilon(1e-9));
    }
  }
}

TEST_CASE("flattening the staggered table beyond the focal segment") {
  NibbledEllipse table = staggered_k2();
  const double s = 1.52;
  FlattenedSystem sys = build_flat_polygon(table, s);
  CHECK(sys.case_index == 3);
  REQUIRE(sys.components.size() == 1);
  const GeneralizedPolygon& gp = sys.components[0].polygon;

  // The caustic sits in different columns of different quadrants, yet the
  // long horizontals all share the invariant length.
  CHECK(gp.part(1).profile.k() == 1);
  CHECK(gp.part(2).profile.k() == 1);
  CHECK(gp.part(3).profile.k() == 2);
  CHECK(gp.part(4).profile.k() == 2);
  CHECK(gp.partner(RelationLetter::H, 2) == 3);
  CHECK(gp.partner(RelationLetter::H, 4) == 1);
  const double el = ell_value(table, s);
  for (int m : gp.labels())
    CHECK(gp.part(m).profile.xs.back() == doctest::Approx(el).epsilon(1e-9));

  const ConicFamily& fam = table.family();
  CHECK(gp.part(4).profile.xs[0] ==
        doctest::Approx(xi(fam, Interval::finite(1.55, 2.0), s).value).epsilon(1e-9));
  CHECK(gp.part(4).profile.ys[0] ==
        doctest::Approx(xi(fam, Interval::finite(0.3, 1.0), s).value).epsilon(1e-9));
  CHECK(gp.part(4).profile.ys[1] ==
        doctest::Approx(xi(fam, Interval::finite(0.55, 1.0), s).value).epsilon(1e-9));
}

TEST_CASE("flattening refuses parameters near breakpoints") {
  NibbledEllipse table = staggered_k2();
  CHECK(throws_code(ErrorCode::DomainViolation,
                    [&] { build_flat_polygon(table, 0.5 + 1e-8); }));
  CHECK(throws_code(ErrorCode::DomainViolation, [&] { build_flat_polygon(table, 0.2); }));
  CHECK(throws_code(ErrorCode::DegenerateCaustic,
                    [&] { build_flat_polygon(table, 1.0); }));
  CHECK(throws_code(ErrorCode::DegenerateCaustic,
                    [&] { build_flat_polygon(table, -0.1); }));
}

TEST_CASE("coordinate families of the staggered table") {
  NibbledEllipse table = staggered_k2();
  const ConicFamily& fam = table.family();

  SUBCASE("elliptic range with every column present") {
    XYFamilies fams = xy_families(table, Interval::finite(0.55, 1.0));
    CHECK(fams.regime == CausticRegime::Elliptic);
    REQUIRE(fams.xs.size() == 4);
    REQUIRE(fams.ys.size() == 4);
    const double s = 0.7;
    double prev = 0.0;
    for (const AffineCombination& x : fams.xs) {
      double v = x.evaluate(fam, fams.regime, s).value;
      CHECK(v > prev);
      prev = v;
    }
    prev = 1e300;
    for (const AffineCombination& y : fams.ys) {
      double v = y.evaluate(fam, fams.regime, s).value;
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }

  SUBCASE("first hyperbolic range sees every riser") {
    XYFamilies fams = xy_families(table, Interval::finite(1.0, 1.45));
    CHECK(fams.regime == CausticRegime::Hyperbolic);
    CHECK(fams.xs.size() == 4);
    CHECK(fams.ys.size() == 4);
  }

  SUBCASE("last hyperbolic range sees only first columns") {
    XYFamilies fams = xy_families(table, Interval::finite(1.6, 2.0));
    CHECK(fams.xs.size() == 0);
    CHECK(fams.ys.size() == 2);
  }
}

TEST_CASE("coordinate families of the symmetric table") {
  NibbledEllipse table = symmetric_k1();
  const ConicFamily& fam = table.family();

  XYFamilies low = xy_families(table, Interval::finite(0.5, 1.0));
  CHECK(low.xs.empty());
  REQUIRE(low.ys.size() == 1);
  const double s = 0.75;
  const double y_direct = xi(fam, Interval::finite(0.5, s), s).value;
  CHECK(low.ys[0].evaluate(fam, low.regime, s).value ==
        doctest::Approx(y_direct).epsilon(1e-9));
  CHECK(low.ell.evaluate(fam, low.regime, s).value ==
        doctest::Approx(ell(fam, s).value).epsilon(1e-12));

  XYFamilies high = xy_families(table, Interval::finite(1.0, 2.0));
  CHECK(high.xs.empty());
  REQUIRE(high.ys.size() == 1);
  CHECK(high.ys[0].evaluate(fam, high.regime, 1.5).value ==
        doctest::Approx(xi(fam, Interval::finite(0.5, 1.0), 1.5).value));
}

TEST_CASE("chart images stay inside the flattened polygon") {
  NibbledEllipse table = symmetric_k1();
  const double s = 0.75;
  FlattenedSystem sys = build_flat_polygon(table, s);
  const GeneralizedPolygon& gp = sys.components[0].polygon;
  const double el = sys.ell;
  const double y1 = gp.part(1).profile.ys[0];

  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(-1.0, 1.0);
  int accepted = 0;
  while (accepted < 30) {
    Vec2 p{ux(rng), uy(rng)};
    if (!table.contains(p)) continue;
    EllipticCoords ec = [&] {
      try {
        return elliptic_coords(table.family(), p);
      } catch (const Error&) {
        return EllipticCoords{table.family().a, table.family().b};
      }
    }();
    if (ec.lambda2 > s - 1e-6) continue;
    ++accepted;
    Vec2 img = flatten_point(table, s, p);
    CHECK(img.x >= 0.0);
    CHECK(img.x < 4.0 * el);
    CHECK(img.y >= 0.0);
    CHECK(img.y <= y1 + 1e-9);
  }
}
