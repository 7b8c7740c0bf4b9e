#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "sprayeval/dataset.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/geometry.hpp"

namespace sprayeval {

struct ClassStats {
  std::int64_t count = 0;
  double avg_per_image = 0.0;
  double avg_occluded_fraction = 0.0;
  double avg_area_fraction = 0.0;
};

// Annotation-level dataset characteristics. All averages are over ground
// truth; values are kept at full precision here, display rounding is the
// report layer's job.
struct DatasetStats {
  std::int64_t image_count = 0;
  std::int64_t item_count = 0;
  double avg_items_per_image = 0.0;
  // Mean over boxes of (box ∩ union of the other boxes in the image) / box area.
  double avg_box_occluded_fraction = 0.0;
  // Mean over images of (union area of all boxes) / image area.
  double avg_image_area_occupied = 0.0;
  // Mean over boxes of box area / image area.
  double avg_box_area_fraction = 0.0;
  std::map<int, ClassStats> per_class;
};

namespace detail {

// Union area of axis-aligned rectangles via x-coordinate compression: each
// vertical slab contributes slab width times the union length of the y
// intervals of the rectangles spanning it. O(n^2 log n), fine for the
// per-image box counts seen here.
inline double rect_union_area(const std::vector<BoundingBox>& boxes) {
  if (boxes.empty()) return 0.0;
  std::vector<double> cuts;
  cuts.reserve(boxes.size() * 2);
  for (const BoundingBox& b : boxes) {
    cuts.push_back(b.x_min);
    cuts.push_back(b.x_max);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double area = 0.0;
  std::vector<Interval> ys;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x_lo = cuts[i], x_hi = cuts[i + 1];
    ys.clear();
    for (const BoundingBox& b : boxes)
      if (b.x_min <= x_lo && b.x_max >= x_hi) ys.push_back({b.y_min, b.y_max});
    if (!ys.empty()) area += (x_hi - x_lo) * union_length(ys);
  }
  return area;
}

// Area of `box` covered by the union of `others`, computed by clipping each
// other box to `box` and taking the union area of the clips.
inline double occluded_area(const BoundingBox& box,
                            const std::vector<BoundingBox>& others,
                            std::size_t skip_index) {
  std::vector<BoundingBox> clipped;
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (i == skip_index) continue;
    BoundingBox c = others[i];
    c.x_min = std::max(c.x_min, box.x_min);
    c.x_max = std::min(c.x_max, box.x_max);
    c.y_min = std::max(c.y_min, box.y_min);
    c.y_max = std::min(c.y_max, box.y_max);
    if (c.x_min < c.x_max && c.y_min < c.y_max) clipped.push_back(c);
  }
  return rect_union_area(clipped);
}

}  // namespace detail

// Ground-truth statistics for a dataset. Sums run in image-id-sorted order so
// results are bit-identical no matter how the dataset was assembled. Box-level
// means over an empty box set are reported as 0.
inline DatasetStats dataset_stats(const Dataset& d) {
  if (d.images.empty())
    throw ValidationError("dataset_stats: empty dataset (averages undefined)");

  std::vector<const ImageRecord*> images;
  images.reserve(d.images.size());
  for (const ImageRecord& img : d.images) images.push_back(&img);
  std::sort(images.begin(), images.end(),
            [](const ImageRecord* a, const ImageRecord* b) {
              return a->image_id < b->image_id;
            });

  DatasetStats stats;
  stats.image_count = static_cast<std::int64_t>(images.size());

  struct ClassAccum {
    std::int64_t count = 0;
    double occluded_sum = 0.0;
    double area_fraction_sum = 0.0;
  };
  std::map<int, ClassAccum> per_class;
  double occluded_sum = 0.0;
  double area_fraction_sum = 0.0;
  double occupied_sum = 0.0;

  for (const ImageRecord* img : images) {
    const double image_area = img->image_area();
    const auto& boxes = img->ground_truth;
    occupied_sum += detail::rect_union_area(boxes) / image_area;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const BoundingBox& b = boxes[i];
      const double occluded =
          detail::occluded_area(b, boxes, i) / b.area();
      const double area_fraction = b.area() / image_area;
      ++stats.item_count;
      occluded_sum += occluded;
      area_fraction_sum += area_fraction;
      ClassAccum& acc = per_class[b.class_id];
      ++acc.count;
      acc.occluded_sum += occluded;
      acc.area_fraction_sum += area_fraction;
    }
  }

  const double n_images = static_cast<double>(stats.image_count);
  stats.avg_items_per_image = static_cast<double>(stats.item_count) / n_images;
  stats.avg_image_area_occupied = occupied_sum / n_images;
  if (stats.item_count > 0) {
    stats.avg_box_occluded_fraction =
        occluded_sum / static_cast<double>(stats.item_count);
    stats.avg_box_area_fraction =
        area_fraction_sum / static_cast<double>(stats.item_count);
  }
  for (const auto& [class_id, acc] : per_class) {
    ClassStats cs;
    cs.count = acc.count;
    cs.avg_per_image = static_cast<double>(acc.count) / n_images;
    cs.avg_occluded_fraction = acc.occluded_sum / static_cast<double>(acc.count);
    cs.avg_area_fraction =
        acc.area_fraction_sum / static_cast<double>(acc.count);
    stats.per_class[class_id] = cs;
  }
  return stats;
}

}  // namespace sprayeval
