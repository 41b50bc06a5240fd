#pragma once

#include <optional>
#include <vector>

namespace nibbled {

// Interval exchange on [0, |lambda|): interval j = [b_{j-1}, b_j) is
// translated onto [t_{pi(j)-1}, t_{pi(j)}).
struct IETData {
  std::vector<double> lengths;     // lambda_1..lambda_d, all positive
  std::vector<int> permutation;    // pi(1)..pi(d), a permutation of 1..d
  std::vector<double> b, t;        // right endpoints of domain/image intervals

  int d() const { return static_cast<int>(lengths.size()); }
  double total() const { return b.back(); }
};

IETData make_iet(std::vector<double> lengths, std::vector<int> permutation);

double apply_iet(const IETData& iet, double x);

// Minimal distance among the orbit points T^k b_i for 0 <= k <= n and
// 1 <= i < d, over distinct occurrences.  With include_endpoints the fixed
// points 0 and |lambda| join the point set.  An empty pair set returns
// |lambda|.
double epsilon_n(const IETData& iet, long n, bool include_endpoints = false);

// All of epsilon_0..epsilon_n in one incremental pass.
std::vector<double> epsilon_sequence(const IETData& iet, long n,
                                     bool include_endpoints = false);

struct Connection {
  long n = 0;
  int i = 0, j = 0;
};

// First (n, i, j) with |T^n b_i - b_j| <= tol for 1 <= n <= N, ordered by
// n, then i, then j.
std::optional<Connection> has_connection(const IETData& iet, long N, double tol);

struct RecurrenceDiagnostic {
  double min_tail = 0.0;
  long argmin_n = 0;
  bool connection_found = false;
};

// Scale-normalizes to |lambda| = 1, then reports min of n*epsilon_n over
// n in [N - window, N] and whether any epsilon_n fell below 1e-12.
RecurrenceDiagnostic recurrence_diagnostic(const IETData& iet, long N, long window);

}  // namespace nibbled
