#include "asmctl/geometry.hpp"

#include <algorithm>

#include "asmctl/error.hpp"

namespace asmctl {

bool is_valid(const Rect& r) {
  return r.x >= 0.0 && r.y >= 0.0 && r.w > 0.0 && r.h > 0.0 &&
         r.x + r.w <= 1.0 && r.y + r.h <= 1.0;
}

bool contains(const Rect& outer, const Rect& inner) {
  return inner.x >= outer.x && inner.y >= outer.y &&
         inner.x + inner.w <= outer.x + outer.w &&
         inner.y + inner.h <= outer.y + outer.h;
}

double rect_intersection_area(const Rect& a, const Rect& b) {
  const double dx = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double dy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (dx <= 0.0 || dy <= 0.0) return 0.0;
  return dx * dy;
}

double zone_overlap_fraction(const Rect& detail_bbox, const Rect& zone) {
  const double area = detail_bbox.area();
  if (!(area > 0.0)) {
    throw Error(ErrorCode::kInvalidGeometry, "detail bbox has zero area");
  }
  // Containment is decided exactly so the ratio cannot drift below 1.0.
  if (contains(zone, detail_bbox)) return 1.0;
  return std::clamp(rect_intersection_area(detail_bbox, zone) / area, 0.0, 1.0);
}

}  // namespace asmctl
