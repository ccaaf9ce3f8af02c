#pragma once

#include <algorithm>
#include <cmath>

namespace anpr {

// Axis-aligned box in pixel coordinates, (x, y) top-left.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }

  bool valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) &&
           x >= 0.0 && y >= 0.0 && w > 0.0 && h > 0.0;
  }

  bool contains_point(double px, double py) const {
    return px >= x && px <= right() && py >= y && py <= bottom();
  }

  friend bool operator==(const BBox &a, const BBox &b) {
    return a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h;
  }
};

inline double intersection_area(const BBox &a, const BBox &b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  return iw * ih;
}

// Intersection over union. Symmetric, in [0, 1], 0 for disjoint boxes.
inline double iou(const BBox &a, const BBox &b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) {
    return 0.0;
  }
  return inter / (a.area() + b.area() - inter);
}

// Minimum fraction of the inner box's area that must overlap the outer box
// for containment. Tolerates detector jitter at box edges.
inline constexpr double kContainmentOverlap = 0.9;

// A box counts as contained when its center lies inside the outer box and at
// least kContainmentOverlap of its own area overlaps it.
inline bool contains(const BBox &outer, const BBox &inner) {
  if (!outer.contains_point(inner.center_x(), inner.center_y())) {
    return false;
  }
  return intersection_area(outer, inner) >= kContainmentOverlap * inner.area();
}

// Checkpoint region where plates are expected to be read.
struct Roi {
  BBox rect;

  bool contains_center(const BBox &b) const {
    return rect.contains_point(b.center_x(), b.center_y());
  }

  friend bool operator==(const Roi &a, const Roi &b) { return a.rect == b.rect; }
};

} // namespace anpr
