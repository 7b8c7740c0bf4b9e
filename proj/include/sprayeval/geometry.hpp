#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "sprayeval/errors.hpp"

namespace sprayeval {

// Class ids used across the toolkit: 0 = sugar beet (crop), 1 = weed.
inline constexpr int kSugarBeetClass = 0;
inline constexpr int kWeedClass = 1;

// Axis-aligned box in pixel coordinates, stored as corners.
// Coordinates are real-valued: rescaling by non-integer factors produces
// fractional corners. Ground-truth boxes carry no confidence; detections do.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  int class_id = 0;
  std::optional<double> confidence;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  // Strictly positive area, non-negative corners, confidence in [0,1].
  bool valid() const {
    if (!(x_min < x_max) || !(y_min < y_max)) return false;
    if (x_min < 0.0 || y_min < 0.0) return false;
    if (confidence && (*confidence < 0.0 || *confidence > 1.0)) return false;
    return true;
  }

  bool operator==(const BoundingBox&) const = default;
};

inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

// Intersection over union. 0 for disjoint boxes, exactly 1 for identical
// boxes, symmetric in its arguments.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

// Closed interval [lo, hi] along one image axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// Sorts and merges into disjoint intervals. Intervals that merely touch
// (hi of one equals lo of the next) merge into one: abutting spray regions
// are one region.
inline std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  std::vector<Interval> merged;
  for (const Interval& iv : intervals) {
    if (iv.hi < iv.lo) throw ValidationError("interval with hi < lo");
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

// Total length of the set union of the intervals. Empty input yields 0.
// Permutation-invariant and never larger than the sum of the individual
// lengths.
inline double union_length(const std::vector<Interval>& intervals) {
  double total = 0.0;
  for (const Interval& iv : merge_intervals(intervals)) total += iv.length();
  return total;
}

}  // namespace sprayeval
