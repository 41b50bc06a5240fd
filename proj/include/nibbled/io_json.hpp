#pragma once

#include <string>
#include <vector>

#include "nibbled/criterion.hpp"
#include "nibbled/flatten.hpp"
#include "nibbled/surface.hpp"
#include "nibbled/table.hpp"

namespace nibbled {

// Table document schema:
//   {"a": 2.0, "b": 1.0,
//    "quadrants": {"pp": {"alphas": [...], "betas": [...]},
//                  "pm": ..., "mp": ..., "mm": ...}}
// All numbers decimal, no defaults for a and b; unknown keys are rejected.
// Malformed documents raise CompatibilityViolation; the sequences themselves
// go through the usual table validation.
NibbledEllipse table_from_json(const std::string& text);

// Canonical serialization: fixed key order, shortest round-trip number
// spelling, two-space indent, trailing newline.  Reflects the normalized
// orientation, so parse then emit is idempotent byte for byte.
std::string table_to_json(const NibbledEllipse& table);

// One verification report per scanned parameter interval, with the full
// per-sample rows ([value, error] pairs for the determinant and brackets).
std::string criterion_reports_json(const std::vector<CriterionReport>& reports);

// Flattened polygon descriptions: caustic parameter, regime, combinatorial
// case, and per-part numeric profiles with their chart offsets.
std::string flat_systems_json(const std::vector<FlattenedSystem>& systems);

struct SurfaceReport {
  double s = 0.0;
  int interval = 0;
  int component = 0;
  TranslationSurface surface;
  DBETables tables;
};

// Unfolded surface summaries: polygon copies, identifications, singularity
// classes, genus, area, and the crossing/wedge tables.
std::string surface_reports_json(const std::vector<SurfaceReport>& reports);

}  // namespace nibbled
