#pragma once

#include <string>
#include <vector>

#include "nibbled/flatten.hpp"
#include "nibbled/table.hpp"

namespace nibbled {

// Deterministic figures: coordinates printed at fixed 1e-6 precision and
// elements emitted in sorted order, so equal inputs render byte-identically.
// Overlays are polylines in the same coordinate frame as the drawing, each
// stroked on top of the geometry in the order given.

// Boundary of the table: the staircase chain of confocal arcs per quadrant.
std::string svg_table(const NibbledEllipse& table,
                      const std::vector<std::vector<Vec2>>& overlays = {});

// Flattened polygon layout: each part drawn at its chart offset, so the
// picture reproduces the cylinder (elliptic) or cross (hyperbolic) shape.
std::string svg_flat(const FlattenedSystem& sys,
                     const std::vector<std::vector<Vec2>>& overlays = {});

}  // namespace nibbled
