#pragma once

#include "nibbled/geometry.hpp"
#include "nibbled/interval.hpp"

namespace nibbled {

struct Quad {
  double value = 0.0;
  double err = 0.0;
};

// d^k/ds^k of xi_D(s) where xi_D(s) = Integral over D of
// ((a-l)(b-l)(s-l))^{-1/2} dl.  Differentiating under the integral gives the
// closed form ((2k-1)!!/2^k) Integral e(l) / (l-s)^k dl.
//
// Domain rules: none of {a, b, s} may lie strictly inside D and the signed
// product under the root must be positive throughout.  For k = 0 the caustic
// parameter s may coincide exactly with an endpoint of D (the root becomes an
// integrable endpoint singularity); a parameter within (0, 1e-9) of an
// endpoint is refused as numerically meaningless.  For k >= 1, s must stay
// out of the closure of D by at least 1e-9.
Quad xi(const ConicFamily& fam, Interval D, double s, int k = 0);

// Invariant length of the caustic component, computed from its bounded
// integral representation and cross-checked against the tail representation
// to 1e-7 relative; disagreement raises ConsistencyFailure.
Quad ell(const ConicFamily& fam, double s);

// d^k/ds^k of ell, via the representation whose closure avoids s.
Quad ell_derivative(const ConicFamily& fam, double s, int k);

// Clears the per-thread memo of computed integrals (mainly for tests).
void clear_quadrature_cache();

}  // namespace nibbled
