#pragma once

namespace asmctl {

// Axis-aligned rectangle in normalized workspace coordinates, [0,1]^2.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  bool operator==(const Rect&) const = default;
};

// True when the rect lies inside the unit square with positive extents.
bool is_valid(const Rect& r);

bool contains(const Rect& outer, const Rect& inner);

double rect_intersection_area(const Rect& a, const Rect& b);

/// Fraction of the detail's own area that lies inside the zone.
/// Throws Error(kInvalidGeometry) for a zero-area bbox.
double zone_overlap_fraction(const Rect& detail_bbox, const Rect& zone);

}  // namespace asmctl
