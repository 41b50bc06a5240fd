#include "nibbled/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace nibbled {
namespace {

constexpr double kPiHalf = 1.5707963267948966;
constexpr double kEdgeGuard = 1e-9;
constexpr double kRelTol = 1e-12;
constexpr int kMaxLevel = 12;

// Trapezoid sums over the double-exponential variable with level doubling.
// eval(t) must include every weight factor.
template <typename F>
Quad de_levels(const F& eval, double t_max, const char* what) {
  int n0 = static_cast<int>(t_max);
  double sum = 0.0;
  for (int j = -n0; j <= n0; ++j) sum += eval(static_cast<double>(j));
  double h = 1.0;
  double prev = h * sum;
  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    int nmax = static_cast<int>(std::floor(t_max / h + 1e-9));
    double add = 0.0;
    for (int j = -nmax; j <= nmax; ++j) {
      if (j % 2 == 0) continue;
      add += eval(j * h);
    }
    double cur = 0.5 * prev + h * add;
    double d = std::abs(cur - prev);
    if (level >= 3 && d <= kRelTol * std::abs(cur)) {
      double floor_err = std::abs(cur) * std::numeric_limits<double>::epsilon();
      return {cur, std::max(d, floor_err)};
    }
    prev = cur;
  }
  fail_internal(ErrorCode::NonConvergence, std::string("quadrature level cap: ") + what);
}

// Finite interval (lo, hi) via lambda = mid + half tanh((pi/2) sinh t).
// Every factor (c - lambda) is formed from the endpoint nearer to c so that
// endpoint singularities come out exact instead of cancelling.
Quad integrate_finite(double a, double b, double s, double lo, double hi, int k,
                      double coeff) {
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  auto eval = [&](double t) {
    double g = kPiHalf * std::sinh(t);
    double u = std::exp(-2.0 * std::abs(g));
    double sech2 = 4.0 * u / ((1.0 + u) * (1.0 + u));
    double near_lo, near_hi;  // lambda - lo and hi - lambda, both positive
    if (g >= 0.0) {
      near_lo = 2.0 * half / (1.0 + u);
      near_hi = 2.0 * half * u / (1.0 + u);
    } else {
      near_lo = 2.0 * half * u / (1.0 + u);
      near_hi = 2.0 * half / (1.0 + u);
    }
    auto c_minus_lambda = [&](double c) {
      if (std::abs(c - lo) <= std::abs(c - hi)) return (c - lo) - near_lo;
      return (c - hi) + near_hi;
    };
    double fa = c_minus_lambda(a);
    double fb = c_minus_lambda(b);
    double fs = c_minus_lambda(s);
    double prod = fa * fb * fs;
    if (prod <= 0.0) return 0.0;  // only reachable at underflowed edge nodes
    double val = 1.0 / std::sqrt(prod);
    if (k > 0) {
      double lam_minus_s = -fs;
      val /= std::pow(lam_minus_s, k);
    }
    double w = half * kPiHalf * std::cosh(t) * sech2;
    return w * val;
  };
  Quad q = de_levels(eval, 4.0, "finite interval");
  q.value *= coeff;
  q.err *= std::abs(coeff);
  return q;
}

// Left tail (-inf, c) via lambda = c - r, r = exp((pi/2) sinh t).  Factors
// (x - lambda) = (x - c) + r are exact whenever x coincides with c.
Quad integrate_tail(double a, double b, double s, double c, int k, double coeff) {
  auto eval = [&](double t) {
    double st = std::sinh(t);
    double r = std::exp(kPiHalf * st);
    double fa = (a - c) + r;
    double fb = (b - c) + r;
    double fs = (s - c) + r;
    double prod = fa * fb * fs;
    if (prod <= 0.0) return 0.0;
    double val = 1.0 / std::sqrt(prod);
    if (k > 0) {
      double lam_minus_s = -fs;
      val /= std::pow(lam_minus_s, k);
    }
    double w = kPiHalf * std::cosh(t) * r;
    return w * val;
  };
  Quad q = de_levels(eval, 5.0, "tail interval");
  q.value *= coeff;
  q.err *= std::abs(coeff);
  return q;
}

struct CacheKey {
  std::array<double, 7> v;
  bool operator<(const CacheKey& o) const { return v < o.v; }
};

thread_local std::map<CacheKey, Quad> g_cache;

}  // namespace

void clear_quadrature_cache() { g_cache.clear(); }

Quad xi(const ConicFamily& fam, Interval D, double s, int k) {
  double a = fam.a, b = fam.b;
  if (k < 0) fail_domain(ErrorCode::DomainViolation, "negative derivative order");
  if (!D.left_infinite && !(D.lo < D.hi))
    fail_domain(ErrorCode::DomainViolation, "empty integration interval");

  for (double c : {a, b, s}) {
    if (D.contains(c)) {  // contains() is strict, so endpoints are fine here
      std::ostringstream os;
      os << "singular parameter " << c << " strictly inside integration interval";
      fail_domain(ErrorCode::DomainViolation, os.str());
    }
  }

  double dist_hi = std::abs(s - D.hi);
  double dist_lo = D.left_infinite ? std::numeric_limits<double>::infinity()
                                   : std::abs(s - D.lo);
  double dist = std::min(dist_lo, dist_hi);
  if (k == 0) {
    if (dist > 0.0 && dist < kEdgeGuard)
      fail_domain(ErrorCode::DomainViolation,
                  "caustic parameter indistinguishably close to an interval endpoint");
  } else {
    if (D.in_closure(s) || dist < kEdgeGuard)
      fail_domain(ErrorCode::DomainViolation,
                  "derivative requires the caustic parameter away from the interval");
  }

  // Sign sanity at a representative interior point.
  {
    double probe = D.left_infinite ? D.hi - 1.0 : 0.5 * (D.lo + D.hi);
    double prod = (a - probe) * (b - probe) * (s - probe);
    if (prod <= 0.0)
      fail_domain(ErrorCode::DomainViolation,
                  "integrand is not positive on the integration interval");
  }

  double coeff = 1.0;
  for (int i = 1; i <= k; ++i) coeff *= (2.0 * i - 1.0) / 2.0;

  CacheKey key{{a, b, D.left_infinite ? 0.0 : D.lo, D.hi, D.left_infinite ? 1.0 : 0.0, s,
                static_cast<double>(k)}};
  auto it = g_cache.find(key);
  if (it != g_cache.end()) return it->second;

  Quad q = D.left_infinite ? integrate_tail(a, b, s, D.hi, k, coeff)
                           : integrate_finite(a, b, s, D.lo, D.hi, k, coeff);
  g_cache.emplace(key, q);
  return q;
}

Quad ell(const ConicFamily& fam, double s) {
  double a = fam.a, b = fam.b;
  if (!(0.0 < s && s < a) || s == b)
    fail_domain(ErrorCode::DegenerateCaustic, "caustic parameter outside (0,a) or equal to b");
  bool elliptic = s < b;
  Quad bounded = elliptic ? xi(fam, Interval::finite(b, a), s, 0)
                          : xi(fam, Interval::finite(s, a), s, 0);
  Quad tail = elliptic ? xi(fam, Interval::tail(s), s, 0) : xi(fam, Interval::tail(b), s, 0);
  double rel = std::abs(bounded.value - tail.value) / std::abs(bounded.value);
  if (rel > 1e-7) {
    std::ostringstream os;
    os << "invariant length representations disagree by relative " << rel;
    fail_internal(ErrorCode::ConsistencyFailure, os.str());
  }
  return bounded;
}

Quad ell_derivative(const ConicFamily& fam, double s, int k) {
  double a = fam.a, b = fam.b;
  if (!(0.0 < s && s < a) || s == b)
    fail_domain(ErrorCode::DegenerateCaustic, "caustic parameter outside (0,a) or equal to b");
  if (k == 0) return ell(fam, s);
  // Use the representation whose closure excludes s.
  if (s < b) return xi(fam, Interval::finite(b, a), s, k);
  return xi(fam, Interval::tail(b), s, k);
}

}  // namespace nibbled
