#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nibbled/flatten.hpp"
#include "nibbled/table.hpp"

namespace nibbled {

// |det| of the matrix whose entry (j, i) is the j-th parameter derivative of
// family member i, over derivative orders 0..n-1.  The error bound is first
// order in the entry errors: sum over entries of |cofactor| * entry error.
Quad wronskian(const ConicFamily& fam, CausticRegime regime,
               const std::vector<AffineCombination>& fs, double s);

// [f,g](s) = f'(s) g(s) - f(s) g'(s); antisymmetric and bilinear.  Evaluating
// a member against itself gives exactly zero.
Quad bracket(const ConicFamily& fam, CausticRegime regime, const AffineCombination& f,
             const AffineCombination& g, double s);

enum class Verdict { Satisfied, Violated, Inconclusive };

const char* verdict_name(Verdict v);

// One parameter grid point: the Wronskian of the full family and the bracket
// of every member against the invariant length.  x_brackets[0] pairs the
// length with itself and is identically zero; proper width members follow.
struct CriterionRow {
  double s = 0.0;
  Quad wron;
  std::vector<Quad> x_brackets;
  std::vector<Quad> y_brackets;
  bool failed = false;     // quadrature did not converge at this point
  std::string message;
};

// Verdict rules, applied at every grid point:
//   - strict checks (Wronskian positive; height brackets nonzero with the
//     regime's sign) pass when the value clears zero by 1e3 times the
//     estimated quadrature error in the required direction, are violated
//     when they clear it in the opposite direction, and are inconclusive
//     in between;
//   - weak checks (width brackets) allow a 1e-12 band around zero.
struct CriterionReport {
  Interval J;
  CausticRegime regime = CausticRegime::Elliptic;
  std::vector<CriterionRow> rows;
  double wronskian_min = 0.0;     // smallest Wronskian value on the grid
  double strict_margin = 0.0;     // min over strict checks of value / error
  double bracket_worst_x = 0.0;   // width bracket nearest its weak bound
  double bracket_worst_y = 0.0;   // height bracket nearest its strict bound
  Verdict verdict = Verdict::Inconclusive;
  double violated_at = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

// Grid scan of an explicitly given family; the grid has grid_size points,
// clustered toward the ends of J and kept 1e-6 away from them.
CriterionReport criterion_scan(const ConicFamily& fam, const XYFamilies& fams,
                               Interval J, int grid_size = 100);

// Wronskian positivity plus the regime's bracket signs for the coordinate
// families of the partition interval J: width brackets nonpositive and
// height brackets positive below the focal parameter, the mirrored signs
// above it.
CriterionReport verify_wronbrack(const NibbledEllipse& table, Interval J,
                                 int grid_size = 100);

// The same checks reported as the unique-ergodicity certificate for the
// diagonal flow on the flattened surfaces of J; the note states which sign
// branch held.
CriterionReport verify_mainsurf(const NibbledEllipse& table, Interval J,
                                int grid_size = 100);

// One CSV row per grid point: s, Wronskian value and error, then every
// bracket value in row order.
std::string report_csv(const CriterionReport& report);

}  // namespace nibbled
