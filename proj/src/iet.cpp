#include "nibbled/iet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "nibbled/errors.hpp"

namespace nibbled {
namespace {

// Tracks the minimal pairwise distance of a growing point set.  New pairs
// always involve the inserted point, so only its sorted neighbors matter.
class MinGapTracker {
 public:
  void insert(double x) {
    auto it = points_.insert(x);
    if (it != points_.begin()) gap_ = std::min(gap_, x - *std::prev(it));
    auto nx = std::next(it);
    if (nx != points_.end()) gap_ = std::min(gap_, *nx - x);
  }
  double gap() const { return gap_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::multiset<double> points_;
  double gap_ = std::numeric_limits<double>::infinity();
};

int interval_of(const IETData& iet, double x) {
  auto it = std::upper_bound(iet.b.begin(), iet.b.end(), x);
  return static_cast<int>(it - iet.b.begin());
}

}  // namespace

IETData make_iet(std::vector<double> lengths, std::vector<int> permutation) {
  int d = static_cast<int>(lengths.size());
  if (d < 2) fail_domain(ErrorCode::DomainViolation, "need at least two intervals");
  if (static_cast<int>(permutation.size()) != d)
    fail_domain(ErrorCode::DomainViolation, "permutation size differs from length count");
  for (double l : lengths)
    if (!(l > 0.0)) fail_domain(ErrorCode::DomainViolation, "interval lengths must be positive");

  std::vector<int> seen(d, 0);
  for (int p : permutation) {
    if (p < 1 || p > d || seen[p - 1]++)
      fail_domain(ErrorCode::DomainViolation, "not a permutation of 1..d");
  }

  IETData iet;
  iet.lengths = std::move(lengths);
  iet.permutation = std::move(permutation);
  iet.b.resize(d);
  iet.t.resize(d);
  std::vector<int> inverse(d);
  for (int j = 0; j < d; ++j) inverse[iet.permutation[j] - 1] = j;
  double acc = 0.0;
  for (int j = 0; j < d; ++j) {
    acc += iet.lengths[j];
    iet.b[j] = acc;
  }
  acc = 0.0;
  for (int r = 0; r < d; ++r) {
    acc += iet.lengths[inverse[r]];
    iet.t[r] = acc;
  }
  return iet;
}

double apply_iet(const IETData& iet, double x) {
  if (!(x >= 0.0) || !(x < iet.total()))
    fail_domain(ErrorCode::OutOfDomain, "point outside the exchange interval");
  int j = interval_of(iet, x);
  int r = iet.permutation[j] - 1;
  double y = x + (iet.t[r] - iet.b[j]);
  // The image lies in [t_{pi(j)-1}, t_{pi(j)}); keep rounding inside it.
  if (y >= iet.total()) y = std::nextafter(iet.total(), 0.0);
  if (y < 0.0) y = 0.0;
  return y;
}

std::vector<double> epsilon_sequence(const IETData& iet, long n, bool include_endpoints) {
  if (n < 0) fail_domain(ErrorCode::DomainViolation, "negative orbit length");
  int d = iet.d();
  MinGapTracker tracker;
  if (include_endpoints) {
    tracker.insert(0.0);
    tracker.insert(iet.total());
  }

  std::vector<double> orbit(d - 1);
  for (int i = 0; i < d - 1; ++i) orbit[i] = iet.b[i];

  std::vector<double> eps;
  eps.reserve(n + 1);
  for (long k = 0;; ++k) {
    for (double x : orbit) tracker.insert(x);
    eps.push_back(tracker.size() >= 2 ? tracker.gap() : iet.total());
    if (k == n) break;
    for (double& x : orbit) x = apply_iet(iet, x);
  }
  return eps;
}

double epsilon_n(const IETData& iet, long n, bool include_endpoints) {
  return epsilon_sequence(iet, n, include_endpoints).back();
}

std::optional<Connection> has_connection(const IETData& iet, long N, double tol) {
  if (N < 1) fail_domain(ErrorCode::DomainViolation, "need at least one step");
  if (tol < 0.0) fail_domain(ErrorCode::DomainViolation, "negative tolerance");
  int d = iet.d();
  std::vector<double> orbit(d - 1);
  for (int i = 0; i < d - 1; ++i) orbit[i] = iet.b[i];
  for (long n = 1; n <= N; ++n) {
    for (double& x : orbit) x = apply_iet(iet, x);
    for (int i = 0; i < d - 1; ++i)
      for (int j = 0; j < d - 1; ++j)
        if (std::fabs(orbit[i] - iet.b[j]) <= tol) return Connection{n, i + 1, j + 1};
  }
  return std::nullopt;
}

RecurrenceDiagnostic recurrence_diagnostic(const IETData& iet, long N, long window) {
  if (window < 1 || N < window)
    fail_domain(ErrorCode::DomainViolation, "window must satisfy 1 <= window <= N");

  std::vector<double> unit = iet.lengths;
  double total = iet.total();
  for (double& l : unit) l /= total;
  IETData norm = make_iet(std::move(unit), iet.permutation);

  std::vector<double> eps = epsilon_sequence(norm, N);
  RecurrenceDiagnostic out;
  out.min_tail = std::numeric_limits<double>::infinity();
  for (long n = 0; n <= N; ++n)
    if (eps[n] < 1e-12) out.connection_found = true;
  for (long n = N - window; n <= N; ++n) {
    double v = static_cast<double>(n) * eps[n];
    if (v < out.min_tail) {
      out.min_tail = v;
      out.argmin_n = n;
    }
  }
  return out;
}

}  // namespace nibbled
