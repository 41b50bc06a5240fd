#include "nibbled/table.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nibbled {

namespace {
constexpr double kSnap = 1e-12;
constexpr double kEndpointTol = 1e-9;
constexpr double kMemberTol = 1e-12;

int qi(Quadrant q) { return static_cast<int>(q); }
}  // namespace

const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::PP: return "pp";
    case Quadrant::PM: return "pm";
    case Quadrant::MP: return "mp";
    case Quadrant::MM: return "mm";
  }
  return "?";
}

ThetaSequence validate_theta(std::vector<double> alphas, std::vector<double> betas,
                             const ConicFamily& fam) {
  if (alphas.size() != betas.size() || alphas.size() < 2)
    fail_domain(ErrorCode::MonotonicityViolation,
                "alpha and beta lists must share a length of at least 2");
  int k = static_cast<int>(alphas.size()) - 1;

  if (std::abs(alphas.front() - fam.a) > kEndpointTol)
    fail_domain(ErrorCode::EndpointMismatch, "alpha_0 must equal a");
  if (std::abs(alphas.back() - fam.b) > kEndpointTol)
    fail_domain(ErrorCode::EndpointMismatch, "alpha_k must equal b");
  if (std::abs(betas.front()) > kEndpointTol)
    fail_domain(ErrorCode::EndpointMismatch, "beta_0 must equal 0");
  alphas.front() = fam.a;
  alphas.back() = fam.b;
  betas.front() = 0.0;

  for (int i = 1; i <= k; ++i)
    if (!(alphas[i] < alphas[i - 1]))
      fail_domain(ErrorCode::MonotonicityViolation, "alphas must strictly decrease");
  if (!(betas[k] < fam.b))
    fail_domain(ErrorCode::MonotonicityViolation, "beta_k must lie below b");
  for (int i = 2; i <= k; ++i)
    if (!(betas[i - 1] < betas[i]))
      fail_domain(ErrorCode::MonotonicityViolation, "betas must strictly increase");
  if (betas[1] < 0.0)
    fail_domain(ErrorCode::MonotonicityViolation, "beta_1 must be nonnegative");

  return ThetaSequence{std::move(alphas), std::move(betas)};
}

NibbledEllipse::NibbledEllipse(const ConicFamily& fam,
                               std::array<ThetaSequence, 4> quadrants)
    : family_(fam), quadrants_(std::move(quadrants)) {
  auto beta1 = [&](Quadrant q) { return quadrants_[qi(q)].betas[1]; };
  auto betak = [&](Quadrant q) { return quadrants_[qi(q)].betas.back(); };

  auto matched = [&](double x, double y, const char* what) {
    if (std::abs(x - y) > kSnap) {
      std::ostringstream os;
      os << what << " mismatch: " << x << " vs " << y;
      fail_domain(ErrorCode::CompatibilityViolation, os.str());
    }
    return x;
  };

  // The boundary crosses each axis inside a tread, so the adjacent quadrants
  // must continue the same conic there.
  double t = matched(beta1(Quadrant::PP), beta1(Quadrant::MP), "top tread");
  double bo = matched(beta1(Quadrant::PM), beta1(Quadrant::MM), "bottom tread");
  double r = matched(betak(Quadrant::PP), betak(Quadrant::PM), "right tread");
  double l = matched(betak(Quadrant::MP), betak(Quadrant::MM), "left tread");
  auto snap1 = [&](Quadrant q, double v) { quadrants_[qi(q)].betas[1] = v; };
  auto snapk = [&](Quadrant q, double v) { quadrants_[qi(q)].betas.back() = v; };
  snap1(Quadrant::PP, t); snap1(Quadrant::MP, t);
  snap1(Quadrant::PM, bo); snap1(Quadrant::MM, bo);
  snapk(Quadrant::PP, r); snapk(Quadrant::PM, r);
  snapk(Quadrant::MP, l); snapk(Quadrant::MM, l);

  if (t > bo) {
    std::swap(quadrants_[qi(Quadrant::PP)], quadrants_[qi(Quadrant::PM)]);
    std::swap(quadrants_[qi(Quadrant::MP)], quadrants_[qi(Quadrant::MM)]);
    std::swap(t, bo);
    flipped_h_ = true;
  }
  if (l > r) {
    std::swap(quadrants_[qi(Quadrant::PP)], quadrants_[qi(Quadrant::MP)]);
    std::swap(quadrants_[qi(Quadrant::PM)], quadrants_[qi(Quadrant::MM)]);
    std::swap(l, r);
    flipped_v_ = true;
  }
  // t <= b and l <= r are forced above; b <= l follows from the chain of the
  // quadrant that carries both marks.
  if (bo > l + kSnap)
    fail_domain(ErrorCode::CompatibilityViolation,
                "mark ordering b <= l failed after normalization");
  marks_ = CausticMarks{t, bo, l, r};
}

bool NibbledEllipse::contains(Vec2 p) const {
  EllipticCoords ec;
  try {
    ec = elliptic_coords(family_, p);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FocusSingularity) return true;  // foci are interior
    throw;
  }
  Quadrant q = p.x >= 0.0 ? (p.y >= 0.0 ? Quadrant::PP : Quadrant::PM)
                          : (p.y >= 0.0 ? Quadrant::MP : Quadrant::MM);
  const ThetaSequence& th = theta(q);
  int k = th.k();
  // Column with the smallest index containing lambda1 gives the weakest
  // beta-constraint; columns are [alpha_i, alpha_{i-1}].
  for (int i = 1; i <= k; ++i) {
    if (ec.lambda1 >= th.alphas[i] - kMemberTol)
      return ec.lambda2 >= th.betas[i] - kMemberTol;
  }
  // lambda1 = b happens only in the last column.
  return ec.lambda2 >= th.betas[k] - kMemberTol;
}

std::vector<BoundaryArc> NibbledEllipse::boundary_arcs() const {
  std::vector<BoundaryArc> arcs;
  for (Quadrant q : kQuadrants) {
    const ThetaSequence& th = theta(q);
    int k = th.k();
    for (int i = 1; i <= k; ++i)
      arcs.push_back({q, true, i, th.betas[i], th.alphas[i], th.alphas[i - 1]});
    for (int i = 1; i <= k - 1; ++i)
      arcs.push_back({q, false, i, th.alphas[i], th.betas[i], th.betas[i + 1]});
  }
  return arcs;
}

std::vector<Vec2> NibbledEllipse::corners() const {
  std::vector<Vec2> out;
  for (Quadrant q : kQuadrants) {
    const ThetaSequence& th = theta(q);
    for (int i = 1; i <= th.k() - 1; ++i) {
      for (double be : {th.betas[i], th.betas[i + 1]}) {
        out.push_back(from_elliptic(family_, {th.alphas[i], be}, quadrant_sx(q),
                                    quadrant_sy(q)));
      }
    }
  }
  return out;
}

double NibbledEllipse::diameter() const {
  double w = std::sqrt(family_.a - marks_.r) + std::sqrt(family_.a - marks_.l);
  double h = std::sqrt(family_.b - marks_.t) + std::sqrt(family_.b - marks_.b);
  return std::hypot(w, h);
}

NibbledEllipse build_table(const ConicFamily& fam, const ThetaSequence& pp,
                           const ThetaSequence& pm, const ThetaSequence& mp,
                           const ThetaSequence& mm) {
  return NibbledEllipse(fam, {pp, pm, mp, mm});
}

}  // namespace nibbled
