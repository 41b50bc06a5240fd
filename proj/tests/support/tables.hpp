#pragma once

#include "nibbled/table.hpp"

namespace nibbled::testsupport {

// Fully symmetric one-step table: every quadrant nibbled down to C_beta.
inline NibbledEllipse symmetric_k1(double beta = 0.5) {
  ConicFamily fam{2.0, 1.0};
  ThetaSequence th = validate_theta({2.0, 1.0}, {0.0, beta}, fam);
  return build_table(fam, th, th, th, th);
}

// Two-step table with all four quadrants staggered; marks come out as
// t = 0.2, b = 0.3, l = 0.5, r = 0.55 without flips.
inline NibbledEllipse staggered_k2() {
  ConicFamily fam{2.0, 1.0};
  ThetaSequence pp = validate_theta({2.0, 1.45, 1.0}, {0.0, 0.2, 0.55}, fam);
  ThetaSequence pm = validate_theta({2.0, 1.55, 1.0}, {0.0, 0.3, 0.55}, fam);
  ThetaSequence mp = validate_theta({2.0, 1.5, 1.0}, {0.0, 0.2, 0.5}, fam);
  ThetaSequence mm = validate_theta({2.0, 1.6, 1.0}, {0.0, 0.3, 0.5}, fam);
  return build_table(fam, pp, pm, mp, mm);
}

}  // namespace nibbled::testsupport
