#include "nibbled/staircase.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace nibbled {

namespace {
constexpr double kSideTol = 1e-10;

int li(RelationLetter r) { return static_cast<int>(r); }
}  // namespace

double StaircaseProfile::area() const {
  double sum = 0.0;
  for (int i = 0; i < k(); ++i) {
    double ynext = (i + 1 < k()) ? ys[i + 1] : 0.0;
    sum += xs[i] * (ys[i] - ynext);
  }
  return sum;
}

StaircaseProfile validate_profile(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || xs.size() != ys.size())
    fail_domain(ErrorCode::ProfileViolation, "profile needs matching nonempty x and y lists");
  if (!(xs[0] > 0.0) || !(ys.back() > 0.0))
    fail_domain(ErrorCode::ProfileViolation, "profile entries must be positive");
  for (size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1]))
      fail_domain(ErrorCode::ProfileViolation, "xs must strictly increase");
    if (!(ys[i] < ys[i - 1]))
      fail_domain(ErrorCode::ProfileViolation, "ys must strictly decrease");
  }
  return StaircaseProfile{std::move(xs), std::move(ys)};
}

Gamma compose(Gamma a, Gamma b) {
  bool v = has_v(a) != has_v(b);
  bool h = has_h(a) != has_h(b);
  return v ? (h ? Gamma::VH : Gamma::V) : (h ? Gamma::H : Gamma::Id);
}

const char* gamma_name(Gamma g) {
  switch (g) {
    case Gamma::Id: return "id";
    case Gamma::V: return "v";
    case Gamma::H: return "h";
    case Gamma::VH: return "vh";
  }
  return "?";
}

const char* relation_name(RelationLetter r) {
  switch (r) {
    case RelationLetter::V: return "V";
    case RelationLetter::H: return "H";
    case RelationLetter::v: return "v";
    case RelationLetter::h: return "h";
  }
  return "?";
}

std::vector<Vec2> BasicPolygon::vertices() const {
  std::vector<Vec2> vs;
  int k = profile.k();
  vs.push_back({0.0, 0.0});
  vs.push_back({0.0, profile.ys[0]});
  for (int i = 0; i < k; ++i) {
    vs.push_back({profile.xs[i], profile.ys[i]});
    vs.push_back({profile.xs[i], i + 1 < k ? profile.ys[i + 1] : 0.0});
  }
  for (Vec2& v : vs) v = apply_gamma(gamma, v);
  return vs;
}

BasicPolygon build_basic(StaircaseProfile profile, Gamma gamma, int label) {
  return BasicPolygon{label, std::move(profile), gamma};
}

std::pair<Vec2, Vec2> side_endpoints(const StaircaseProfile& p, SideClass cls, int index) {
  int k = p.k();
  switch (cls) {
    case SideClass::LongVertical:
      return {{0.0, 0.0}, {0.0, p.ys[0]}};
    case SideClass::ShortHorizontal:
      return {{0.0, p.ys[0]}, {p.xs[0], p.ys[0]}};
    case SideClass::Riser:
      if (index < 1 || index > k - 1)
        fail_domain(ErrorCode::DomainViolation, "riser index out of range");
      return {{p.xs[index - 1], p.ys[index - 1]}, {p.xs[index - 1], p.ys[index]}};
    case SideClass::Tread:
      if (index < 2 || index > k)
        fail_domain(ErrorCode::DomainViolation, "tread index out of range");
      return {{p.xs[index - 2], p.ys[index - 1]}, {p.xs[index - 1], p.ys[index - 1]}};
    case SideClass::ShortVertical:
      return {{p.xs[k - 1], p.ys[k - 1]}, {p.xs[k - 1], 0.0}};
    case SideClass::LongHorizontal:
      return {{p.xs[k - 1], 0.0}, {0.0, 0.0}};
  }
  fail_domain(ErrorCode::DomainViolation, "unknown side class");
}

GeneralizedPolygon::GeneralizedPolygon(
    std::vector<BasicPolygon> parts,
    std::vector<std::tuple<RelationLetter, int, int>> relations) {
  for (auto& p : parts) {
    if (parts_.count(p.label))
      fail_domain(ErrorCode::RelationNotSymmetric, "duplicate part label");
    labels_.push_back(p.label);
    parts_.emplace(p.label, std::move(p));
  }
  std::sort(labels_.begin(), labels_.end());

  for (const auto& [letter, m, mp] : relations) {
    auto& pm = partners_[li(letter)];
    if (!parts_.count(m) || !parts_.count(mp))
      fail_domain(ErrorCode::RelationNotSymmetric, "relation references missing label");
    auto conflict = [&](int x, int want) {
      auto it = pm.find(x);
      return it != pm.end() && it->second != want;
    };
    if (conflict(m, mp) || conflict(mp, m)) {
      std::ostringstream os;
      os << "label has two distinct " << relation_name(letter) << " partners";
      fail_domain(ErrorCode::RelationNotSymmetric, os.str());
    }
    pm[m] = mp;
    pm[mp] = m;
  }
  for (int l : labels_)
    for (auto& pm : partners_)
      if (!pm.count(l)) pm[l] = l;  // convention: unrelated labels glue to themselves

  // Legality of every non-self pair: reflection pattern and side length.
  for (int l : labels_) {
    const BasicPolygon& P = parts_.at(l);
    for (RelationLetter letter :
         {RelationLetter::V, RelationLetter::H, RelationLetter::v, RelationLetter::h}) {
      int o = partners_[li(letter)].at(l);
      if (o == l) continue;
      const BasicPolygon& Q = parts_.at(o);
      bool vertical = letter == RelationLetter::V || letter == RelationLetter::v;
      Gamma need = compose(vertical ? Gamma::V : Gamma::H, P.gamma);
      if (Q.gamma != need) {
        std::ostringstream os;
        os << "parts " << l << " and " << o << " cannot glue along "
           << relation_name(letter) << ": reflection pattern mismatch";
        fail_domain(ErrorCode::TypeMismatch, os.str());
      }
      auto side_len = [&](const BasicPolygon& B) {
        switch (letter) {
          case RelationLetter::V: return B.profile.ys.front();
          case RelationLetter::H: return B.profile.xs.back();
          case RelationLetter::v: return B.profile.ys.back();
          case RelationLetter::h: return B.profile.xs.front();
        }
        return 0.0;
      };
      if (std::abs(side_len(P) - side_len(Q)) > kSideTol) {
        std::ostringstream os;
        os << "glued sides of " << l << " and " << o << " differ in length";
        fail_domain(ErrorCode::SideLengthMismatch, os.str());
      }
    }
  }
}

const BasicPolygon& GeneralizedPolygon::part(int label) const {
  auto it = parts_.find(label);
  if (it == parts_.end()) fail_domain(ErrorCode::DomainViolation, "unknown part label");
  return it->second;
}

int GeneralizedPolygon::partner(RelationLetter r, int label) const {
  auto it = partners_[li(r)].find(label);
  if (it == partners_[li(r)].end())
    fail_domain(ErrorCode::DomainViolation, "unknown part label");
  return it->second;
}

std::vector<std::vector<int>> GeneralizedPolygon::components() const {
  std::map<int, int> root;
  for (int l : labels_) root[l] = l;
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int l : labels_)
    for (const auto& pm : partners_) root[find(pm.at(l))] = find(l);
  std::map<int, std::vector<int>> groups;
  for (int l : labels_) groups[find(l)].push_back(l);
  std::vector<std::vector<int>> out;
  for (auto& [r, g] : groups) out.push_back(std::move(g));
  return out;
}

double GeneralizedPolygon::area() const {
  double sum = 0.0;
  for (const auto& [l, p] : parts_) sum += p.area();
  return sum;
}

CombinatorialData combinatorial_data(const GeneralizedPolygon& gp) {
  CombinatorialData cd;
  cd.labels = gp.labels();
  for (int l : cd.labels) {
    cd.gammas[l] = gp.part(l).gamma;
    cd.ks[l] = gp.part(l).profile.k();
    for (RelationLetter r :
         {RelationLetter::V, RelationLetter::H, RelationLetter::v, RelationLetter::h})
      cd.partners[static_cast<int>(r)][l] = gp.partner(r, l);
  }
  return cd;
}

}  // namespace nibbled
