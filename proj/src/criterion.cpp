#include "nibbled/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "nibbled/errors.hpp"
#include "nibbled/parallel.hpp"

namespace nibbled {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGridMargin = 1e-6;
constexpr double kStrictFactor = 1e3;
constexpr double kWeakBand = 1e-12;
constexpr double kErrFloor = 1e-300;

// Determinant by partial-pivot elimination; destroys its argument.
long double det_inplace(std::vector<long double>& m, int n) {
  long double det = 1.0L;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(m[r * n + c]) > std::fabs(m[piv * n + c])) piv = r;
    if (m[piv * n + c] == 0.0L) return 0.0L;
    if (piv != c) {
      for (int cc = 0; cc < n; ++cc) std::swap(m[piv * n + cc], m[c * n + cc]);
      det = -det;
    }
    det *= m[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      long double f = m[r * n + c] / m[c * n + c];
      for (int cc = c + 1; cc < n; ++cc) m[r * n + cc] -= f * m[c * n + cc];
    }
  }
  return det;
}

long double cofactor(const std::vector<long double>& m, int n, int r, int c) {
  if (n == 1) return 1.0L;
  std::vector<long double> minor((n - 1) * (n - 1));
  int rr = 0;
  for (int i = 0; i < n; ++i) {
    if (i == r) continue;
    int cc = 0;
    for (int j = 0; j < n; ++j) {
      if (j == c) continue;
      minor[rr * (n - 1) + cc] = m[i * n + j];
      ++cc;
    }
    ++rr;
  }
  long double d = det_inplace(minor, n - 1);
  return ((r + c) % 2 == 0) ? d : -d;
}

}  // namespace

namespace {

double term_distance(const Interval& D, double s) {
  if (D.left_infinite) return s <= D.hi ? 0.0 : s - D.hi;
  if (s < D.lo) return D.lo - s;
  if (s > D.hi) return s - D.hi;
  return 0.0;
}

double min_distance(const std::vector<AffineTerm>& ts, double s) {
  double m = std::numeric_limits<double>::infinity();
  for (const AffineTerm& t : ts) m = std::min(m, term_distance(t.domain, s));
  return m;
}

std::vector<AffineTerm> expanded_terms(const AffineCombination& f, Interval ell_dom) {
  std::vector<AffineTerm> ts = f.terms;
  if (f.ell_coeff != 0.0) ts.push_back({f.ell_coeff, ell_dom});
  return ts;
}

// One exact column operation against the pure length column: removing a
// direct length term, or folding a term that ends at the length domain's
// endpoint into the complementary tail.  Returns whether anything changed.
bool reduce_against_length(std::vector<AffineTerm>& ts, Interval ell_dom) {
  for (size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].domain == ell_dom) {
      ts.erase(ts.begin() + static_cast<long>(i));
      return true;
    }
  }
  if (ell_dom.left_infinite) {
    for (AffineTerm& t : ts) {
      if (!t.domain.left_infinite && t.domain.hi == ell_dom.hi) {
        t.domain = Interval::tail(t.domain.lo);
        t.coeff = -t.coeff;
        return true;
      }
    }
  }
  return false;
}

// The determinant does not change under column operations, but the entry
// errors do: a column whose symbols share the length column's singular mass
// near s costs accuracy the determinant never uses.  Strip that mass
// symbolically, keeping any column the rewrite would bring closer to s.
std::vector<std::vector<AffineTerm>> conditioned_columns(
    const std::vector<AffineCombination>& fs, Interval ell_dom, double s) {
  std::vector<std::vector<AffineTerm>> cols;
  cols.reserve(fs.size());
  for (const AffineCombination& f : fs) cols.push_back(expanded_terms(f, ell_dom));

  int pivot = -1;
  for (size_t i = 0; i < cols.size(); ++i)
    if (cols[i].size() == 1 && cols[i][0].domain == ell_dom) {
      pivot = static_cast<int>(i);
      break;
    }
  if (pivot < 0) return cols;

  for (size_t i = 0; i < cols.size(); ++i) {
    if (static_cast<int>(i) == pivot) continue;
    std::vector<AffineTerm> cand = cols[i];
    bool changed = false;
    for (int round = 0; round < 8 && reduce_against_length(cand, ell_dom); ++round)
      changed = true;
    if (changed && min_distance(cand, s) + 1e-15 >= min_distance(cols[i], s))
      cols[i] = std::move(cand);
  }
  return cols;
}

Quad eval_terms(const ConicFamily& fam, const std::vector<AffineTerm>& ts, double s,
                int k) {
  double value = 0.0, err = 0.0;
  for (const AffineTerm& t : ts) {
    Quad q = xi(fam, t.domain, s, k);
    value += t.coeff * q.value;
    err += std::abs(t.coeff) * q.err;
  }
  return {value, err};
}

}  // namespace

Quad wronskian(const ConicFamily& fam, CausticRegime regime,
               const std::vector<AffineCombination>& fs, double s) {
  const int n = static_cast<int>(fs.size());
  if (n == 0) fail_domain(ErrorCode::UsageError, "empty function family");

  Interval ell_dom = regime == CausticRegime::Elliptic ? Interval::finite(fam.b, fam.a)
                                                       : Interval::tail(fam.b);
  std::vector<std::vector<AffineTerm>> cols = conditioned_columns(fs, ell_dom, s);

  // Row j holds derivative order j, column i holds family member i.
  std::vector<Quad> entries(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) entries[j * n + i] = eval_terms(fam, cols[i], s, j);

  std::vector<long double> m(n * n);
  for (int idx = 0; idx < n * n; ++idx) m[idx] = entries[idx].value;

  std::vector<long double> work = m;
  long double det = det_inplace(work, n);

  long double err = 0.0L;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      err += std::fabs(cofactor(m, n, r, c)) * static_cast<long double>(entries[r * n + c].err);

  return {static_cast<double>(std::fabs(det)), static_cast<double>(err)};
}

Quad bracket(const ConicFamily& fam, CausticRegime regime, const AffineCombination& f,
             const AffineCombination& g, double s) {
  Quad f0 = f.evaluate(fam, regime, s, 0);
  Quad f1 = f.evaluate(fam, regime, s, 1);
  Quad g0 = g.evaluate(fam, regime, s, 0);
  Quad g1 = g.evaluate(fam, regime, s, 1);
  double value = f1.value * g0.value - f0.value * g1.value;
  double err = std::abs(f1.value) * g0.err + std::abs(g0.value) * f1.err +
               std::abs(f0.value) * g1.err + std::abs(g1.value) * f0.err;
  return {value, err};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

struct Aggregator {
  bool any_violation = false;
  bool any_inconclusive = false;
  double violated_s = std::numeric_limits<double>::quiet_NaN();
  std::string violation_note, inconclusive_note;

  void violated(double s, const std::string& what) {
    if (any_violation) return;
    any_violation = true;
    violated_s = s;
    std::ostringstream os;
    os << what << " violated at s=" << std::setprecision(17) << s;
    violation_note = os.str();
  }

  void inconclusive(double s, const std::string& what) {
    if (any_inconclusive) return;
    any_inconclusive = true;
    std::ostringstream os;
    os << what << " inconclusive at s=" << std::setprecision(17) << s;
    inconclusive_note = os.str();
  }
};

}  // namespace

CriterionReport criterion_scan(const ConicFamily& fam, const XYFamilies& fams, Interval J,
                               int grid_size) {
  if (grid_size < 1) fail_domain(ErrorCode::UsageError, "grid size must be at least 1");
  if (J.left_infinite || !(J.lo + 2.0 * kGridMargin < J.hi))
    fail_domain(ErrorCode::DomainViolation,
                "parameter interval leaves no room for the evaluation margin");

  CriterionReport rep;
  rep.J = J;
  rep.regime = fams.regime;
  const bool elliptic = fams.regime == CausticRegime::Elliptic;

  std::vector<AffineCombination> family;
  family.push_back(fams.ell);
  family.insert(family.end(), fams.xs.begin(), fams.xs.end());
  family.insert(family.end(), fams.ys.begin(), fams.ys.end());

  const double lo = J.lo + kGridMargin, hi = J.hi - kGridMargin;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);

  rep.rows.resize(grid_size);
  parallel_for(grid_size, [&](int i) {
    CriterionRow& row = rep.rows[i];
    double theta = (2.0 * i + 1.0) * kPi / (2.0 * grid_size);
    row.s = mid - half * std::cos(theta);
    try {
      row.wron = wronskian(fam, fams.regime, family, row.s);
      row.x_brackets.push_back(bracket(fam, fams.regime, fams.ell, fams.ell, row.s));
      for (const AffineCombination& x : fams.xs)
        row.x_brackets.push_back(bracket(fam, fams.regime, x, fams.ell, row.s));
      for (const AffineCombination& y : fams.ys)
        row.y_brackets.push_back(bracket(fam, fams.regime, y, fams.ell, row.s));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonConvergence && e.code() != ErrorCode::ConsistencyFailure)
        throw;
      row.failed = true;
      row.message = e.what();
    }
  });

  Aggregator agg;
  double wron_min = std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  bool have_x = false, have_y = false;
  double worst_x = 0.0, worst_y = 0.0;

  for (const CriterionRow& row : rep.rows) {
    if (row.failed) {
      agg.inconclusive(row.s, "quadrature (" + row.message + ")");
      continue;
    }

    // Wronskian: strictly positive.  An absolute value cannot land on the
    // wrong side of zero, so a value inside its own error bar counts as a
    // genuine degeneracy, not a near miss.
    wron_min = std::min(wron_min, row.wron.value);
    margin = std::min(margin, row.wron.value / std::max(row.wron.err, kErrFloor));
    if (row.wron.value > kStrictFactor * row.wron.err) {
    } else if (row.wron.value <= row.wron.err) {
      agg.violated(row.s, "Wronskian positivity");
    } else {
      agg.inconclusive(row.s, "Wronskian positivity");
    }

    // Width brackets: weak sign, nonpositive below the focal parameter and
    // nonnegative above it.  Index 0 is the always-zero self pair.
    const double xdir = elliptic ? -1.0 : 1.0;
    for (size_t i = 0; i < row.x_brackets.size(); ++i) {
      const Quad& q = row.x_brackets[i];
      if (i > 0) {
        if (!have_x || xdir * q.value > xdir * worst_x) worst_x = q.value;
        have_x = true;
      }
      std::string what = "width bracket " + std::to_string(i);
      double m = xdir * q.value;
      if (m >= -kWeakBand) {
      } else if (-m > std::max(kWeakBand, kStrictFactor * q.err)) {
        agg.violated(row.s, what);
      } else {
        agg.inconclusive(row.s, what);
      }
    }

    // Height brackets: strict sign, positive below the focal parameter and
    // negative above it.
    const double ydir = elliptic ? 1.0 : -1.0;
    for (size_t j = 0; j < row.y_brackets.size(); ++j) {
      const Quad& q = row.y_brackets[j];
      if (!have_y || -ydir * q.value > -ydir * worst_y) worst_y = q.value;
      have_y = true;
      std::string what = "height bracket " + std::to_string(j);
      double m = ydir * q.value;
      margin = std::min(margin, m / std::max(q.err, kErrFloor));
      if (m > kStrictFactor * q.err) {
      } else if (m < -kStrictFactor * q.err) {
        agg.violated(row.s, what);
      } else {
        agg.inconclusive(row.s, what);
      }
    }
  }

  rep.wronskian_min = std::isfinite(wron_min) ? wron_min : 0.0;
  rep.strict_margin = std::isfinite(margin) ? margin : 0.0;
  rep.bracket_worst_x = worst_x;
  rep.bracket_worst_y = worst_y;
  if (agg.any_violation) {
    rep.verdict = Verdict::Violated;
    rep.violated_at = agg.violated_s;
    rep.note = agg.violation_note;
  } else if (agg.any_inconclusive) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = agg.inconclusive_note;
  } else {
    rep.verdict = Verdict::Satisfied;
  }
  return rep;
}

namespace {

void require_partition_cell(const NibbledEllipse& table, Interval J) {
  if (J.left_infinite || !(J.lo < J.hi))
    fail_domain(ErrorCode::DomainViolation, "parameter interval is malformed");
  ParameterPartition part = interval_partition(table);
  int idx = part.interval_of(0.5 * (J.lo + J.hi));
  const Interval& cell = part.intervals[idx];
  if (J.lo < cell.lo - 1e-12 || J.hi > cell.hi + 1e-12)
    fail_domain(ErrorCode::DomainViolation,
                "parameter interval spans a combinatorial breakpoint");
}

}  // namespace

CriterionReport verify_wronbrack(const NibbledEllipse& table, Interval J, int grid_size) {
  require_partition_cell(table, J);
  return criterion_scan(table.family(), xy_families(table, J), J, grid_size);
}

CriterionReport verify_mainsurf(const NibbledEllipse& table, Interval J, int grid_size) {
  CriterionReport rep = verify_wronbrack(table, J, grid_size);
  const char* branch = rep.regime == CausticRegime::Elliptic
                           ? "width brackets nonpositive, height brackets positive"
                           : "width brackets nonnegative, height brackets negative";
  if (rep.verdict == Verdict::Satisfied) {
    rep.note = std::string("diagonal flow uniquely ergodic on the sampled grid; ") + branch;
  } else {
    rep.note = "not certified: " + rep.note;
  }
  return rep;
}

std::string report_csv(const CriterionReport& report) {
  size_t nx = 0, ny = 0;
  for (const CriterionRow& row : report.rows) {
    if (!row.failed) {
      nx = row.x_brackets.size();
      ny = row.y_brackets.size();
      break;
    }
  }
  std::ostringstream os;
  os << std::setprecision(17);
  os << "s,wronskian,wronskian_err";
  for (size_t i = 0; i < nx; ++i) os << ",xbracket" << i;
  for (size_t j = 0; j < ny; ++j) os << ",ybracket" << j;
  os << "\n";
  for (const CriterionRow& row : report.rows) {
    os << row.s;
    if (row.failed) {
      for (size_t i = 0; i < 2 + nx + ny; ++i) os << ",nan";
    } else {
      os << "," << row.wron.value << "," << row.wron.err;
      for (const Quad& q : row.x_brackets) os << "," << q.value;
      for (const Quad& q : row.y_brackets) os << "," << q.value;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace nibbled
