#include "nibbled/io_json.hpp"

#include <cmath>

#include "json.hpp"
#include "nibbled/errors.hpp"

namespace nibbled {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_document(const std::string& what) {
  fail_domain(ErrorCode::CompatibilityViolation, "table document: " + what);
}

double number_field(const ordered_json& obj, const char* key) {
  if (!obj.contains(key)) bad_document(std::string("missing key \"") + key + "\"");
  const ordered_json& v = obj.at(key);
  if (!v.is_number()) bad_document(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const ordered_json& obj, const char* key) {
  if (!obj.contains(key)) bad_document(std::string("missing key \"") + key + "\"");
  const ordered_json& v = obj.at(key);
  if (!v.is_array()) bad_document(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const ordered_json& x : v) {
    if (!x.is_number()) bad_document(std::string("\"") + key + "\" must hold numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> known,
                         const char* where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) ok = true;
    if (!ok) bad_document(std::string("unknown key \"") + item.key() + "\" in " + where);
  }
}

const char* side_class_name(SideClass c) {
  switch (c) {
    case SideClass::LongVertical: return "long_vertical";
    case SideClass::ShortHorizontal: return "short_horizontal";
    case SideClass::Riser: return "riser";
    case SideClass::Tread: return "tread";
    case SideClass::ShortVertical: return "short_vertical";
    case SideClass::LongHorizontal: return "long_horizontal";
  }
  return "unknown";
}

const char* corner_kind_name(CornerKind k) {
  switch (k) {
    case CornerKind::Origin: return "origin";
    case CornerKind::TopLeft: return "top_left";
    case CornerKind::Diagonal: return "diagonal";
    case CornerKind::Step: return "step";
    case CornerKind::BottomRight: return "bottom_right";
  }
  return "unknown";
}

const char* regime_name(CausticRegime r) {
  return r == CausticRegime::Elliptic ? "elliptic" : "hyperbolic";
}

ordered_json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

ordered_json quad_pair(const Quad& q) { return ordered_json::array({q.value, q.err}); }

ordered_json vec2_pair(Vec2 v) { return ordered_json::array({v.x, v.y}); }

std::string finish(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

NibbledEllipse table_from_json(const std::string& text) {
  ordered_json doc = ordered_json::parse(text, nullptr, false);
  if (doc.is_discarded()) bad_document("not valid JSON");
  if (!doc.is_object()) bad_document("top level must be an object");
  reject_unknown_keys(doc, {"a", "b", "quadrants"}, "the top level");

  const double a = number_field(doc, "a");
  const double b = number_field(doc, "b");
  if (!doc.contains("quadrants")) bad_document("missing key \"quadrants\"");
  const ordered_json& quads = doc.at("quadrants");
  if (!quads.is_object()) bad_document("\"quadrants\" must be an object");
  reject_unknown_keys(quads, {"pp", "pm", "mp", "mm"}, "\"quadrants\"");

  ConicFamily fam(a, b);
  std::array<ThetaSequence, 4> thetas;
  for (Quadrant q : kQuadrants) {
    const char* name = quadrant_name(q);
    if (!quads.contains(name)) bad_document(std::string("missing quadrant \"") + name + "\"");
    const ordered_json& qobj = quads.at(name);
    if (!qobj.is_object())
      bad_document(std::string("quadrant \"") + name + "\" must be an object");
    reject_unknown_keys(qobj, {"alphas", "betas"}, std::string("quadrant \"" + std::string(name) + "\"").c_str());
    thetas[static_cast<int>(q)] =
        validate_theta(number_array(qobj, "alphas"), number_array(qobj, "betas"), fam);
  }
  return build_table(fam, thetas[0], thetas[1], thetas[2], thetas[3]);
}

std::string table_to_json(const NibbledEllipse& table) {
  ordered_json doc;
  doc["a"] = table.family().a;
  doc["b"] = table.family().b;
  ordered_json quads;
  for (Quadrant q : kQuadrants) {
    const ThetaSequence& th = table.theta(q);
    ordered_json qobj;
    qobj["alphas"] = th.alphas;
    qobj["betas"] = th.betas;
    quads[quadrant_name(q)] = std::move(qobj);
  }
  doc["quadrants"] = std::move(quads);
  return finish(doc);
}

std::string criterion_reports_json(const std::vector<CriterionReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const CriterionReport& rep : reports) {
    ordered_json obj;
    obj["interval"] = ordered_json::array({rep.J.lo, rep.J.hi});
    obj["regime"] = regime_name(rep.regime);
    obj["verdict"] = verdict_name(rep.verdict);
    obj["wronskian_min"] = rep.wronskian_min;
    obj["strict_margin"] = rep.strict_margin;
    obj["bracket_worst_x"] = rep.bracket_worst_x;
    obj["bracket_worst_y"] = rep.bracket_worst_y;
    obj["violated_at"] = number_or_null(rep.violated_at);
    obj["note"] = rep.note;
    ordered_json rows = ordered_json::array();
    for (const CriterionRow& row : rep.rows) {
      ordered_json r;
      r["s"] = row.s;
      r["failed"] = row.failed;
      if (row.failed) {
        r["message"] = row.message;
      } else {
        r["wronskian"] = quad_pair(row.wron);
        ordered_json xb = ordered_json::array();
        for (const Quad& q : row.x_brackets) xb.push_back(quad_pair(q));
        r["x_brackets"] = std::move(xb);
        ordered_json yb = ordered_json::array();
        for (const Quad& q : row.y_brackets) yb.push_back(quad_pair(q));
        r["y_brackets"] = std::move(yb);
      }
      rows.push_back(std::move(r));
    }
    obj["rows"] = std::move(rows);
    arr.push_back(std::move(obj));
  }
  return finish(arr);
}

std::string flat_systems_json(const std::vector<FlattenedSystem>& systems) {
  ordered_json arr = ordered_json::array();
  for (const FlattenedSystem& sys : systems) {
    ordered_json obj;
    obj["s"] = sys.s;
    obj["regime"] = regime_name(sys.regime);
    obj["ell"] = sys.ell;
    obj["case"] = sys.case_index;
    obj["subcase"] = sys.subcase;
    ordered_json comps = ordered_json::array();
    for (const FlatComponent& comp : sys.components) {
      ordered_json c;
      c["area"] = comp.polygon.area();
      ordered_json parts = ordered_json::array();
      for (const SymbolicPart& sp : comp.parts) {
        const BasicPolygon& bp = comp.polygon.part(sp.label);
        ordered_json p;
        p["quadrant"] = quadrant_name(sp.q);
        p["label"] = sp.label;
        p["steps"] = sp.l;
        p["gamma"] = gamma_name(bp.gamma);
        p["xs"] = bp.profile.xs;
        p["ys"] = bp.profile.ys;
        p["offset"] = sys.chart_offset(sp.q);
        parts.push_back(std::move(p));
      }
      c["parts"] = std::move(parts);
      comps.push_back(std::move(c));
    }
    obj["components"] = std::move(comps);
    arr.push_back(std::move(obj));
  }
  return finish(arr);
}

std::string surface_reports_json(const std::vector<SurfaceReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const SurfaceReport& rep : reports) {
    const TranslationSurface& M = rep.surface;
    ordered_json obj;
    obj["s"] = rep.s;
    obj["interval"] = rep.interval;
    obj["component"] = rep.component;
    obj["genus"] = M.genus();
    obj["area"] = M.area();

    ordered_json polys = ordered_json::array();
    for (const UnfoldedPolygon& P : M.polygons()) {
      ordered_json p;
      p["m"] = P.m;
      p["gamma"] = gamma_name(P.gamma);
      p["xs"] = P.profile.xs;
      p["ys"] = P.profile.ys;
      polys.push_back(std::move(p));
    }
    obj["polygons"] = std::move(polys);

    ordered_json idents = ordered_json::array();
    for (const Identification& id : M.identifications()) {
      ordered_json i;
      i["a"] = ordered_json::array({id.a.poly, id.a.chain});
      i["b"] = ordered_json::array({id.b.poly, id.b.chain});
      i["delta"] = vec2_pair(id.delta);
      idents.push_back(std::move(i));
    }
    obj["identifications"] = std::move(idents);

    ordered_json classes = ordered_json::array();
    for (const SingularPoint& sp : M.corner_classes()) {
      ordered_json c;
      c["kind"] = corner_kind_name(sp.kind);
      c["cone_angle"] = sp.cone_angle;
      c["singular"] = sp.is_singular;
      c["corners"] = static_cast<int>(sp.corners.size());
      classes.push_back(std::move(c));
    }
    obj["corner_classes"] = std::move(classes);

    ordered_json dd = ordered_json::array();
    for (const CrossingDatum& cd : rep.tables.D) {
      ordered_json d;
      d["ident"] = cd.ident;
      d["before"] = cd.before_poly;
      d["after"] = cd.after_poly;
      d["side"] = side_class_name(cd.cls);
      d["v"] = vec2_pair(cd.v);
      dd.push_back(std::move(d));
    }
    obj["D"] = std::move(dd);
    auto wedges = [](const std::vector<WedgeDatum>& ws) {
      ordered_json out = ordered_json::array();
      for (const WedgeDatum& w : ws) {
        ordered_json e;
        e["class"] = w.class_index;
        e["corner"] = ordered_json::array({w.corner.poly, w.corner.vertex});
        e["value"] = vec2_pair(w.value);
        out.push_back(std::move(e));
      }
      return out;
    };
    obj["B"] = wedges(rep.tables.B);
    obj["E"] = wedges(rep.tables.E);
    arr.push_back(std::move(obj));
  }
  return finish(arr);
}

}  // namespace nibbled
