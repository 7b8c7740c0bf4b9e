#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sprayeval/dataset.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/geometry.hpp"

namespace sprayeval {

// ---------------------------------------------------------------------------
// Stripes
// ---------------------------------------------------------------------------

struct NozzleConfig {
  int nozzle_count = 1;
  // Spray extension before and after a detection along x, in pixels.
  double margin = 0.0;
};

inline void validate(const NozzleConfig& cfg) {
  if (cfg.nozzle_count < 1)
    throw ValidationError("NozzleConfig: nozzle_count must be >= 1");
  if (!(cfg.margin >= 0.0))
    throw ValidationError("NozzleConfig: margin must be >= 0");
}

struct Stripe {
  int index = 0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  double height() const { return y_hi - y_lo; }
};

// Partitions [0, height] into n contiguous stripes of equal height. Stripe k
// spans [k*height/n, (k+1)*height/n]; adjacent stripes share the boundary
// value bit for bit and the last boundary is exactly `height`.
inline std::vector<Stripe> make_stripes(double height, int n) {
  if (n < 1) throw ValidationError("make_stripes: n must be >= 1");
  if (!(height > 0.0)) throw ValidationError("make_stripes: height must be > 0");
  std::vector<double> bounds(static_cast<std::size_t>(n) + 1);
  bounds.front() = 0.0;
  bounds.back() = height;
  for (int k = 1; k < n; ++k)
    bounds[static_cast<std::size_t>(k)] = height * k / n;
  std::vector<Stripe> stripes(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    stripes[static_cast<std::size_t>(k)] = {k, bounds[static_cast<std::size_t>(k)],
                                            bounds[static_cast<std::size_t>(k) + 1]};
    if (!(stripes[static_cast<std::size_t>(k)].height() > 0.0))
      throw ValidationError("make_stripes: stripe count too large for height");
  }
  return stripes;
}

// ---------------------------------------------------------------------------
// Spray plans
// ---------------------------------------------------------------------------

struct SprayPlan {
  std::string image_id;
  std::vector<Stripe> stripes;
  // intervals[k]: merged, disjoint, sorted x-intervals sprayed in stripe k,
  // each clipped to [0, width].
  std::vector<std::vector<Interval>> intervals;
  double sprayed_area = 0.0;
};

// A box overlaps a stripe when their y-ranges intersect with positive
// height; touching a boundary with zero overlap does not count (zero-measure
// contact dispenses nothing).
inline bool overlaps_stripe(const BoundingBox& box, const Stripe& s) {
  return box.y_min < s.y_hi && box.y_max > s.y_lo;
}

// Builds the spray region for one image: every weed-class detection adds the
// x-interval [x_min - margin, x_max + margin], clipped to [0, width], to each
// stripe its box overlaps. Crop detections never trigger spray.
inline SprayPlan build_spray_plan(const ImageRecord& image, const NozzleConfig& cfg,
                                  int weed_class = kWeedClass) {
  validate(cfg);
  SprayPlan plan;
  plan.image_id = image.image_id;
  plan.stripes = make_stripes(static_cast<double>(image.height), cfg.nozzle_count);
  plan.intervals.resize(plan.stripes.size());
  const double width = static_cast<double>(image.width);
  for (std::size_t k = 0; k < plan.stripes.size(); ++k) {
    std::vector<Interval> raw;
    for (const BoundingBox& det : image.detections) {
      if (det.class_id != weed_class) continue;
      if (!overlaps_stripe(det, plan.stripes[k])) continue;
      const double lo = std::max(0.0, det.x_min - cfg.margin);
      const double hi = std::min(width, det.x_max + cfg.margin);
      if (hi > lo) raw.push_back({lo, hi});
    }
    plan.intervals[k] = merge_intervals(std::move(raw));
    plan.sprayed_area += plan.stripes[k].height() * union_length(plan.intervals[k]);
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Containment and aggregate rates
// ---------------------------------------------------------------------------

inline constexpr double kCoverageEps = 1e-9;

namespace detail {

// True when [lo, hi] is covered by the union of the (sorted, disjoint)
// intervals, tolerating `eps` at endpoints and across sub-eps seams.
inline bool covers(const std::vector<Interval>& intervals, double lo, double hi,
                   double eps) {
  double cursor = lo;
  for (const Interval& iv : intervals) {
    if (iv.lo > cursor + eps) break;  // uncoverable gap before this interval
    cursor = std::max(cursor, iv.hi);
    if (cursor >= hi - eps) return true;
  }
  return cursor >= hi - eps;
}

}  // namespace detail

// True iff the box is wholly inside the spray region: for every stripe its
// y-extent overlaps, the x-range [x_min, x_max] must be covered by that
// stripe's interval union. Purely geometric; callers filter by class.
inline bool is_sprayed(const BoundingBox& gt_weed, const SprayPlan& plan,
                       double eps = kCoverageEps) {
  for (std::size_t k = 0; k < plan.stripes.size(); ++k) {
    if (!overlaps_stripe(gt_weed, plan.stripes[k])) continue;
    if (!detail::covers(plan.intervals[k], gt_weed.x_min, gt_weed.x_max, eps))
      return false;
  }
  return true;
}

namespace detail {

inline void check_correspondence(std::span<const ImageRecord> images,
                                 std::span<const SprayPlan> plans,
                                 const char* op) {
  if (images.size() != plans.size())
    throw ValidationError(std::string(op) + ": images and plans differ in size");
  for (std::size_t i = 0; i < images.size(); ++i)
    if (images[i].image_id != plans[i].image_id)
      throw ValidationError(std::string(op) + ": plan " + std::to_string(i) +
                            " is for image '" + plans[i].image_id +
                            "', expected '" + images[i].image_id + "'");
}

}  // namespace detail

// Percentage of ground-truth weed boxes wholly contained in the spray
// region, pooled across all images.
inline double weed_coverage_rate(std::span<const ImageRecord> images,
                                 std::span<const SprayPlan> plans,
                                 int weed_class = kWeedClass,
                                 double eps = kCoverageEps) {
  detail::check_correspondence(images, plans, "weed_coverage_rate");
  std::int64_t total = 0, sprayed = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (const BoundingBox& gt : images[i].ground_truth) {
      if (gt.class_id != weed_class) continue;
      ++total;
      if (is_sprayed(gt, plans[i], eps)) ++sprayed;
    }
  }
  if (total == 0)
    throw ValidationError("weed_coverage_rate: no ground-truth weeds in dataset");
  return 100.0 * static_cast<double>(sprayed) / static_cast<double>(total);
}

// Percentage of total image area covered by spray: 100 * sum(sprayed_area) /
// sum(width * height). Sums run in image-id-sorted order so the result is
// bit-identical no matter how the plans were produced.
inline double area_sprayed(std::span<const SprayPlan> plans,
                           std::span<const ImageRecord> images) {
  detail::check_correspondence(images, plans, "area_sprayed");
  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return images[a].image_id < images[b].image_id;
  });
  double spray_sum = 0.0, area_sum = 0.0;
  for (const std::size_t i : order) {
    spray_sum += plans[i].sprayed_area;
    area_sum += images[i].image_area();
  }
  if (!(area_sum > 0.0))
    throw ValidationError("area_sprayed: empty image set");
  return 100.0 * spray_sum / area_sum;
}

// ---------------------------------------------------------------------------
// Nozzle sweep
// ---------------------------------------------------------------------------

struct SprayReport {
  int nozzle_count = 0;
  double weed_coverage_rate = 0.0;
  double area_sprayed = 0.0;
  double herbicide_saving = 0.0;  // always 100 - area_sprayed
  std::int64_t weeds_total = 0;
  std::int64_t weeds_sprayed = 0;
};

// One report per nozzle count, all computed from the same detections.
inline std::vector<SprayReport> spray_sweep(std::span<const ImageRecord> images,
                                            const std::vector<int>& nozzle_counts,
                                            double margin,
                                            int weed_class = kWeedClass) {
  if (nozzle_counts.empty())
    throw ValidationError("spray_sweep: empty nozzle count list");
  std::vector<SprayReport> reports;
  reports.reserve(nozzle_counts.size());
  for (const int n : nozzle_counts) {
    const NozzleConfig cfg{n, margin};
    validate(cfg);
    std::vector<SprayPlan> plans;
    plans.reserve(images.size());
    for (const ImageRecord& img : images)
      plans.push_back(build_spray_plan(img, cfg, weed_class));

    SprayReport report;
    report.nozzle_count = n;
    for (std::size_t i = 0; i < images.size(); ++i) {
      for (const BoundingBox& gt : images[i].ground_truth) {
        if (gt.class_id != weed_class) continue;
        ++report.weeds_total;
        if (is_sprayed(gt, plans[i])) ++report.weeds_sprayed;
      }
    }
    if (report.weeds_total == 0)
      throw ValidationError("spray_sweep: no ground-truth weeds in dataset");
    report.weed_coverage_rate = 100.0 * static_cast<double>(report.weeds_sprayed) /
                                static_cast<double>(report.weeds_total);
    report.area_sprayed = area_sprayed(plans, images);
    report.herbicide_saving = 100.0 - report.area_sprayed;
    reports.push_back(report);
  }
  return reports;
}

}  // namespace sprayeval
