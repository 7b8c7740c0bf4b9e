#pragma once

#include <cmath>
#include <cstdint>

#include "sprayeval/errors.hpp"

namespace sprayeval {

// Exact unit conversions; all planner lengths are millimetres, speeds mm/s.
inline constexpr double kMmPerMetre = 1000.0;
inline constexpr double kMmPerSecondPerMph = 447.04;   // 1 mph = 0.44704 m/s
inline constexpr double kMmPerSecondPerMps = 1000.0;

enum class BoomOrientation {
  long_edge_along_boom,   // footprint long edge spans the boom
  short_edge_along_boom,  // footprint short edge spans the boom
};

struct SprayerGeometry {
  double boom_length = 0.0;      // mm
  double footprint_long = 550.0;  // mm, camera coverage long edge
  double footprint_short = 305.0; // mm, camera coverage short edge
  double speed = 0.0;            // mm/s
  BoomOrientation orientation = BoomOrientation::long_edge_along_boom;

  double along_boom_edge() const {
    return orientation == BoomOrientation::long_edge_along_boom ? footprint_long
                                                                : footprint_short;
  }
  double along_travel_edge() const {
    return orientation == BoomOrientation::long_edge_along_boom ? footprint_short
                                                                : footprint_long;
  }
};

inline void validate(const SprayerGeometry& g) {
  if (!(g.boom_length > 0.0))
    throw ValidationError("SprayerGeometry: boom_length must be > 0");
  if (!(g.footprint_long > 0.0) || !(g.footprint_short > 0.0))
    throw ValidationError("SprayerGeometry: footprint edges must be > 0");
  if (!(g.speed > 0.0))
    throw ValidationError("SprayerGeometry: speed must be > 0");
}

struct ThroughputPlan {
  std::int64_t camera_count = 0;
  std::int64_t fps_per_camera = 0;
  std::int64_t total_fps = 0;  // always camera_count * fps_per_camera
};

namespace detail {

// ceil(num / denom) on positive reals, snapping quotients within 1e-9
// (relative) of an integer before rounding up so that unit conversions do
// not conjure a phantom extra camera or frame.
inline std::int64_t ceil_ratio(double num, double denom) {
  const double q = num / denom;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, std::abs(q)))
    return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(q));
}

}  // namespace detail

// Cameras needed across the boom, frames per second each must supply, and
// the rig's total required throughput, assuming zero frame overlap. Both
// divisions round up before the product is taken.
inline ThroughputPlan plan_throughput(const SprayerGeometry& g) {
  validate(g);
  ThroughputPlan plan;
  plan.camera_count = detail::ceil_ratio(g.boom_length, g.along_boom_edge());
  plan.fps_per_camera = detail::ceil_ratio(g.speed, g.along_travel_edge());
  plan.total_fps = plan.camera_count * plan.fps_per_camera;
  return plan;
}

// Smallest GPU count whose combined measured throughput meets the required
// total frame rate.
inline std::int64_t gpu_estimate(std::int64_t required_total_fps,
                                 double measured_fps_per_gpu) {
  if (!(measured_fps_per_gpu > 0.0))
    throw ValidationError("gpu_estimate: measured fps must be > 0");
  if (required_total_fps < 0)
    throw ValidationError("gpu_estimate: required fps must be >= 0");
  return detail::ceil_ratio(static_cast<double>(required_total_fps),
                            measured_fps_per_gpu);
}

// Largest speed (mm/s) the rig can sustain within the given total-fps
// budget, holding the camera layout fixed. Per-camera frame rates are whole
// numbers, so this is floor(budget / camera_count) * along_travel_edge;
// plan_throughput at the returned speed never exceeds the budget. Returns 0
// when the budget cannot even fund one frame per second per camera.
inline double max_feasible_speed(const SprayerGeometry& g,
                                 double available_total_fps) {
  if (!(available_total_fps > 0.0))
    throw ValidationError("max_feasible_speed: available fps must be > 0");
  validate(g);
  const auto cameras =
      static_cast<double>(detail::ceil_ratio(g.boom_length, g.along_boom_edge()));
  const double per_camera = std::floor(available_total_fps / cameras + 1e-9);
  return per_camera * g.along_travel_edge();
}

}  // namespace sprayeval
