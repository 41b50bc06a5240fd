#include "nibbled/flatten.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nibbled/errors.hpp"

namespace nibbled {

namespace {

constexpr double kDedupe = 1e-12;
constexpr double kMargin = 1e-6;
constexpr double kMemberTol = 1e-9;
constexpr double kWidthFloor = 1e-13;
constexpr double kProfileTol = 1e-9;

void check_caustic(const ConicFamily& fam, double s) {
  if (!(s > 0.0 && s < fam.a) || std::abs(s - fam.b) <= kDedupe) {
    fail_domain(ErrorCode::DegenerateCaustic,
                "caustic parameter " + std::to_string(s) + " is degenerate");
  }
}

void sort_dedupe(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double x, double y) { return std::abs(x - y) <= kDedupe; }),
          v.end());
}

// Number of staircase columns of quadrant q present in the flattened part.
int steps_elliptic(const ThetaSequence& th, double inf_j) {
  int l = 0;
  for (int i = 1; i <= th.k(); ++i)
    if (th.betas[i] <= inf_j + kDedupe) l = i;
  return l;
}

int steps_hyperbolic(const ThetaSequence& th, double sup_j) {
  int l = 1;
  for (int i = 1; i < th.k(); ++i)
    if (th.alphas[i] >= sup_j - kDedupe) l = i + 1;
  return l;
}

AffineCombination ell_symbol() {
  AffineCombination c;
  c.ell_coeff = 1.0;
  return c;
}

AffineCombination single_term(double coeff, Interval domain, double ell_coeff = 0.0) {
  AffineCombination c;
  c.terms.push_back({coeff, domain});
  c.ell_coeff = ell_coeff;
  return c;
}

struct PartSpec {
  Quadrant q;
  int label;
  Gamma gamma;
};

}  // namespace

int ParameterPartition::interval_of(double s) const {
  for (std::size_t i = 0; i < intervals.size(); ++i)
    if (intervals[i].contains(s)) return static_cast<int>(i);
  fail_domain(ErrorCode::DomainViolation,
              "caustic parameter lies on a breakpoint or outside the partition range");
}

ParameterPartition interval_partition(const NibbledEllipse& table) {
  const ConicFamily& fam = table.family();
  std::vector<double> vals{table.marks().t, fam.b, fam.a};
  for (Quadrant q : kQuadrants) {
    const ThetaSequence& th = table.theta(q);
    for (int i = 1; i < th.k(); ++i) vals.push_back(th.alphas[i]);
    for (int i = 1; i <= th.k(); ++i)
      if (th.betas[i] > table.marks().t + kDedupe) vals.push_back(th.betas[i]);
  }
  sort_dedupe(vals);
  ParameterPartition part;
  part.breakpoints = vals;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i)
    part.intervals.push_back(Interval::finite(vals[i], vals[i + 1]));
  return part;
}

Quad AffineCombination::evaluate(const ConicFamily& fam, CausticRegime regime, double s,
                                 int k) const {
  double value = 0.0, err = 0.0;
  for (const AffineTerm& t : terms) {
    Quad q = xi(fam, t.domain, s, k);
    value += t.coeff * q.value;
    err += std::abs(t.coeff) * q.err;
  }
  if (ell_coeff != 0.0) {
    // Both representations have an s-independent domain, so differentiating
    // under the integral stays valid.
    Interval dom = regime == CausticRegime::Elliptic ? Interval::finite(fam.b, fam.a)
                                                     : Interval::tail(fam.b);
    Quad q = xi(fam, dom, s, k);
    value += ell_coeff * q.value;
    err += std::abs(ell_coeff) * q.err;
  }
  return {value, err};
}

Vec2 flatten_point(const NibbledEllipse& table, double s, Vec2 p) {
  const ConicFamily& fam = table.family();
  check_caustic(fam, s);
  if (!table.contains(p))
    fail_domain(ErrorCode::OutsideComponent, "point lies outside the table");
  EllipticCoords ec;
  try {
    ec = elliptic_coords(fam, p);
  } catch (const Error&) {
    fail_domain(ErrorCode::OutsideComponent,
                "focus does not belong to either caustic component");
  }
  const double el = ell(fam, s).value;
  const bool px = p.x >= 0.0, py = p.y >= 0.0;
  if (s < fam.b) {
    if (ec.lambda2 > s + kMemberTol)
      fail_domain(ErrorCode::OutsideComponent,
                  "point lies inside the caustic, off the elliptic component");
    const double l2 = std::min(ec.lambda2, s);
    const double u = fam.a - ec.lambda1 < kWidthFloor
                         ? 0.0
                         : xi(fam, Interval::finite(ec.lambda1, fam.a), s).value;
    const double v =
        s - l2 < kWidthFloor ? 0.0 : xi(fam, Interval::finite(l2, s), s).value;
    // Image reflections of the quadrant chart, glued continuously around the
    // cylinder: the four parts tile [0, 4l) in the order ++, +-, --, -+.
    double up;
    if (px && py) up = u;
    else if (!px && py) up = -u;
    else if (!px) up = u - 2.0 * el;
    else up = -2.0 * el - u;
    up = std::fmod(up, 4.0 * el);
    if (up < 0.0) up += 4.0 * el;
    return {up, v};
  }
  if (ec.lambda1 < s - kMemberTol)
    fail_domain(ErrorCode::OutsideComponent,
                "point lies beyond the caustic branches, off the hyperbolic component");
  const double l1 = std::max(ec.lambda1, s);
  // Near the caustic the integral over (lambda1, a) has its singularity just
  // outside an endpoint; the complementary form keeps s as an exact endpoint.
  double u;
  if (l1 - s < 1e-6) {
    u = el - (l1 - s < kWidthFloor ? 0.0
                                   : xi(fam, Interval::finite(s, l1), s).value);
  } else if (fam.a - l1 < kWidthFloor) {
    u = 0.0;
  } else {
    u = xi(fam, Interval::finite(l1, fam.a), s).value;
  }
  const double v = fam.b - ec.lambda2 < kWidthFloor
                       ? 0.0
                       : xi(fam, Interval::finite(ec.lambda2, fam.b), s).value;
  return {px ? u : -u, py ? v : -v};
}

double FlattenedSystem::chart_offset(Quadrant q) const {
  if (regime == CausticRegime::Hyperbolic) return 0.0;
  return quadrant_sy(q) > 0 ? 0.0 : 2.0 * ell;
}

FlattenedSystem build_flat_polygon(const NibbledEllipse& table, double s) {
  const ConicFamily& fam = table.family();
  check_caustic(fam, s);
  ParameterPartition partition = interval_partition(table);
  const Interval J = partition.intervals[partition.interval_of(s)];
  if (s - J.lo < kMargin || J.hi - s < kMargin)
    fail_domain(ErrorCode::DomainViolation,
                "caustic parameter must keep a 1e-6 margin from partition breakpoints");

  FlattenedSystem sys;
  sys.s = s;
  sys.regime = s < fam.b ? CausticRegime::Elliptic : CausticRegime::Hyperbolic;
  sys.ell = ell(fam, s).value;

  const CausticMarks& marks = table.marks();
  std::vector<PartSpec> specs;
  std::vector<std::tuple<RelationLetter, int, int>> relations;
  if (sys.regime == CausticRegime::Elliptic) {
    if (J.hi <= marks.b + kDedupe) {
      sys.case_index = 1;
      specs = {{Quadrant::PP, 1, Gamma::Id}, {Quadrant::MP, 2, Gamma::V}};
      relations = {{RelationLetter::V, 1, 2}};
    } else {
      sys.case_index = 2;
      specs = {{Quadrant::PP, 1, Gamma::Id},
               {Quadrant::MP, 2, Gamma::V},
               {Quadrant::MM, 3, Gamma::Id},
               {Quadrant::PM, 4, Gamma::V}};
      if (J.hi <= marks.l + kDedupe) {
        sys.subcase = 1;
        relations = {{RelationLetter::V, 1, 2}, {RelationLetter::V, 4, 3}};
      } else if (J.hi <= marks.r + kDedupe) {
        sys.subcase = 2;
        relations = {{RelationLetter::V, 1, 2},
                     {RelationLetter::V, 3, 4},
                     {RelationLetter::v, 2, 3}};
      } else {
        sys.subcase = 3;
        relations = {{RelationLetter::V, 1, 2},
                     {RelationLetter::V, 3, 4},
                     {RelationLetter::v, 2, 3},
                     {RelationLetter::v, 4, 1}};
      }
    }
  } else {
    sys.case_index = 3;
    specs = {{Quadrant::PP, 1, Gamma::Id},
             {Quadrant::MP, 2, Gamma::V},
             {Quadrant::MM, 3, Gamma::VH},
             {Quadrant::PM, 4, Gamma::H}};
    relations = {{RelationLetter::V, 1, 2},
                 {RelationLetter::H, 2, 3},
                 {RelationLetter::V, 3, 4},
                 {RelationLetter::H, 4, 1}};
  }

  std::vector<SymbolicPart> sym_parts;
  std::vector<BasicPolygon> basics;
  for (const PartSpec& spec : specs) {
    const ThetaSequence& th = table.theta(spec.q);
    SymbolicPart sp;
    sp.q = spec.q;
    sp.label = spec.label;
    if (sys.regime == CausticRegime::Elliptic) {
      sp.l = steps_elliptic(th, J.lo);
      if (sp.l == 0) continue;  // the quadrant contributes nothing below its treads
      for (int i = 1; i <= sp.l; ++i) {
        if (th.alphas[i] <= fam.b + kDedupe)
          sp.xs_sym.push_back(ell_symbol());
        else
          sp.xs_sym.push_back(single_term(1.0, Interval::finite(th.alphas[i], fam.a)));
        sp.ys_sym.push_back(single_term(-1.0, Interval::tail(th.betas[i]), 1.0));
      }
    } else {
      sp.l = steps_hyperbolic(th, J.hi);
      for (int i = 1; i < sp.l; ++i)
        sp.xs_sym.push_back(single_term(1.0, Interval::finite(th.alphas[i], fam.a)));
      sp.xs_sym.push_back(ell_symbol());
      for (int i = 1; i <= sp.l; ++i)
        sp.ys_sym.push_back(single_term(1.0, Interval::finite(th.betas[i], fam.b)));
    }

    std::vector<double> xs, ys;
    for (const AffineCombination& c : sp.xs_sym)
      xs.push_back(c.evaluate(fam, sys.regime, s).value);
    for (const AffineCombination& c : sp.ys_sym)
      ys.push_back(c.evaluate(fam, sys.regime, s).value);

    // The symbolic coordinates eliminate the s-dependent endpoint; the direct
    // integrals must agree with them.
    for (int i = 1; i <= sp.l; ++i) {
      double direct;
      if (sys.regime == CausticRegime::Elliptic) {
        direct = xi(fam, Interval::finite(th.betas[i], s), s).value;
      } else if (i == sp.l) {
        direct = xi(fam, Interval::finite(s, fam.a), s).value;
        if (std::abs(direct - xs[i - 1]) > kProfileTol * (1.0 + std::abs(direct)))
          fail_internal(ErrorCode::ConsistencyFailure,
                        "flattened width disagrees with its direct integral");
        continue;
      } else {
        continue;  // hyperbolic off-caustic widths already are direct integrals
      }
      if (std::abs(direct - ys[i - 1]) > kProfileTol * (1.0 + std::abs(direct)))
        fail_internal(ErrorCode::ConsistencyFailure,
                      "flattened height disagrees with its direct integral");
    }

    basics.push_back(build_basic(validate_profile(xs, ys), spec.gamma, spec.label));
    sym_parts.push_back(std::move(sp));
  }

  // Split the relation list by connected part groups; only the lowest middle
  // range produces two groups.
  std::vector<std::vector<int>> groups;
  if (sys.case_index == 2 && sys.subcase == 1)
    groups = {{1, 2}, {3, 4}};
  else {
    groups.emplace_back();
    for (const BasicPolygon& bp : basics) groups.back().push_back(bp.label);
  }

  for (const std::vector<int>& group : groups) {
    std::vector<BasicPolygon> parts;
    std::vector<std::tuple<RelationLetter, int, int>> rels;
    for (const BasicPolygon& bp : basics)
      if (std::find(group.begin(), group.end(), bp.label) != group.end())
        parts.push_back(bp);
    for (const auto& [letter, m, mp] : relations)
      if (std::find(group.begin(), group.end(), m) != group.end())
        rels.push_back({letter, m, mp});
    FlatComponent comp{build_generalized(std::move(parts), std::move(rels)), {}};
    for (const SymbolicPart& sp : sym_parts)
      if (std::find(group.begin(), group.end(), sp.label) != group.end())
        comp.parts.push_back(sp);
    sys.components.push_back(std::move(comp));
  }
  return sys;
}

XYFamilies xy_families(const NibbledEllipse& table, Interval J) {
  const ConicFamily& fam = table.family();
  if (J.left_infinite || !(J.lo < J.hi) || J.lo < 0.0 || J.hi > fam.a)
    fail_domain(ErrorCode::DomainViolation, "parameter interval is malformed");
  const bool elliptic = J.hi <= fam.b + kDedupe;
  if (!elliptic && J.lo < fam.b - kDedupe)
    fail_domain(ErrorCode::DomainViolation, "parameter interval straddles the focal segment");

  XYFamilies fams;
  fams.regime = elliptic ? CausticRegime::Elliptic : CausticRegime::Hyperbolic;
  fams.ell = ell_symbol();
  std::vector<double> alphas, betas;
  for (Quadrant q : kQuadrants) {
    const ThetaSequence& th = table.theta(q);
    if (elliptic) {
      const int l = steps_elliptic(th, J.lo);
      for (int i = 1; i <= l; ++i) {
        if (th.alphas[i] > fam.b + kDedupe) alphas.push_back(th.alphas[i]);
        betas.push_back(th.betas[i]);
      }
    } else {
      const int l = steps_hyperbolic(th, J.hi);
      for (int i = 1; i < l; ++i) alphas.push_back(th.alphas[i]);
      for (int i = 1; i <= l; ++i) betas.push_back(th.betas[i]);
    }
  }
  sort_dedupe(alphas);
  sort_dedupe(betas);
  // Larger alpha means shorter integration range, so widths increase as
  // alpha decreases; heights decrease as beta increases in both regimes.
  for (auto it = alphas.rbegin(); it != alphas.rend(); ++it)
    fams.xs.push_back(single_term(1.0, Interval::finite(*it, fam.a)));
  for (double beta : betas) {
    if (elliptic)
      fams.ys.push_back(single_term(-1.0, Interval::tail(beta), 1.0));
    else
      fams.ys.push_back(single_term(1.0, Interval::finite(beta, fam.b)));
  }
  return fams;
}

}  // namespace nibbled
