#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "sprayeval/dataset.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/geometry.hpp"
#include "sprayeval/random.hpp"
#include "sprayeval/spray_model.hpp"

namespace sprayeval {

// ---------------------------------------------------------------------------
// Field generation
// ---------------------------------------------------------------------------

struct FieldParams {
  int image_count = 1;
  int width = 640;
  int height = 480;
  double weeds_per_image = 4.0;  // Poisson mean
  double crops_per_image = 2.0;  // Poisson mean
  int box_size_min = 10;         // box edge lengths drawn from this range
  int box_size_max = 40;
  std::uint64_t seed = 0;
};

inline void validate(const FieldParams& p) {
  if (p.image_count < 1)
    throw ValidationError("FieldParams: image_count must be >= 1");
  if (p.width < 1 || p.height < 1)
    throw ValidationError("FieldParams: image dimensions must be >= 1");
  if (p.box_size_min < 1 || p.box_size_max < p.box_size_min)
    throw ValidationError("FieldParams: need 1 <= box_size_min <= box_size_max");
  if (p.box_size_max > std::min(p.width, p.height))
    throw ValidationError("FieldParams: boxes do not fit inside the image");
  if (!(p.weeds_per_image >= 0.0) || !(p.crops_per_image >= 0.0))
    throw ValidationError("FieldParams: per-image means must be >= 0");
}

namespace detail {

inline std::string synth_image_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "synth-%06d", index);
  return buf;
}

}  // namespace detail

// Deterministic synthetic field: per image, weed and crop counts are Poisson
// draws around the configured means and every box gets integer corners, an
// edge length from [box_size_min, box_size_max] per axis, and a uniform
// position fully inside the image. Weed boxes precede crop boxes in each
// image's ground truth. Each image consumes its own derived seed, so output
// is byte-stable regardless of generation order.
inline Dataset generate_field(const FieldParams& p) {
  validate(p);
  Dataset d;
  d.name = "synthetic-" + std::to_string(p.seed);
  d.class_names = default_class_names();
  d.images.reserve(static_cast<std::size_t>(p.image_count));
  for (int i = 0; i < p.image_count; ++i) {
    Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(i)));
    ImageRecord img;
    img.image_id = detail::synth_image_id(i);
    img.width = p.width;
    img.height = p.height;
    const int weeds = rng.poisson(p.weeds_per_image);
    const int crops = rng.poisson(p.crops_per_image);
    for (int b = 0; b < weeds + crops; ++b) {
      const auto bw = rng.uniform_int(p.box_size_min, p.box_size_max);
      const auto bh = rng.uniform_int(p.box_size_min, p.box_size_max);
      const auto x = rng.uniform_int(0, p.width - bw);
      const auto y = rng.uniform_int(0, p.height - bh);
      BoundingBox box;
      box.x_min = static_cast<double>(x);
      box.y_min = static_cast<double>(y);
      box.x_max = static_cast<double>(x + bw);
      box.y_max = static_cast<double>(y + bh);
      box.class_id = b < weeds ? kWeedClass : kSugarBeetClass;
      img.ground_truth.push_back(box);
    }
    d.images.push_back(std::move(img));
  }
  finalize_dataset(d);
  return d;
}

// ---------------------------------------------------------------------------
// Detector noise
// ---------------------------------------------------------------------------

enum class ConfidenceModel {
  constant,  // every detection scores 1.0
  uniform,   // scores drawn uniformly from [0, 1)
};

struct NoiseParams {
  double miss_rate = 0.0;            // per-box drop probability
  double false_positive_rate = 0.0;  // expected spurious detections per image
  // Corner displacements are whole pixels drawn uniformly from
  // [-jitter, +jitter], so integer-aligned inputs stay integer-aligned.
  int jitter = 0;
  ConfidenceModel confidence_model = ConfidenceModel::uniform;
  std::uint64_t seed = 0;
};

inline void validate(const NoiseParams& np) {
  if (!(np.miss_rate >= 0.0) || !(np.miss_rate <= 1.0))
    throw ValidationError("NoiseParams: miss_rate must lie in [0, 1]");
  if (!(np.false_positive_rate >= 0.0))
    throw ValidationError("NoiseParams: false_positive_rate must be >= 0");
  if (np.jitter < 0) throw ValidationError("NoiseParams: jitter must be >= 0");
}

// Simulates an imperfect detector over the ground truth: each box is dropped
// with probability miss_rate, survivors get all four corners independently
// jittered and clipped to the image (a box jittered to nothing is dropped),
// and a Poisson(false_positive_rate) count of spurious weed-class boxes is
// added per image. Spurious boxes are weed-class because a false weed alarm
// is the error mode that wastes herbicide. Per-image draw order is fixed:
// drop decision, four corner offsets, confidence; spurious boxes last. The
// noise stream is domain-tagged, so reusing one seed for generation and for
// noise still yields independent draws.
inline Dataset perturb_detections(const Dataset& d, const NoiseParams& np) {
  validate(np);
  constexpr std::uint64_t kNoiseDomain = 0xD1B54A32D192ED03ULL;
  Dataset out = d;
  for (std::size_t i = 0; i < out.images.size(); ++i) {
    Rng rng(derive_seed(np.seed ^ kNoiseDomain, static_cast<std::uint64_t>(i)));
    ImageRecord& img = out.images[i];
    img.detections.clear();
    const double w = static_cast<double>(img.width);
    const double h = static_cast<double>(img.height);
    auto confidence = [&]() {
      return np.confidence_model == ConfidenceModel::constant ? 1.0
                                                              : rng.uniform_real();
    };
    for (const BoundingBox& gt : img.ground_truth) {
      const bool dropped = rng.bernoulli(np.miss_rate);
      const auto dx1 = rng.uniform_int(-np.jitter, np.jitter);
      const auto dy1 = rng.uniform_int(-np.jitter, np.jitter);
      const auto dx2 = rng.uniform_int(-np.jitter, np.jitter);
      const auto dy2 = rng.uniform_int(-np.jitter, np.jitter);
      if (dropped) continue;
      BoundingBox det = gt;
      det.x_min = std::clamp(gt.x_min + static_cast<double>(dx1), 0.0, w);
      det.y_min = std::clamp(gt.y_min + static_cast<double>(dy1), 0.0, h);
      det.x_max = std::clamp(gt.x_max + static_cast<double>(dx2), 0.0, w);
      det.y_max = std::clamp(gt.y_max + static_cast<double>(dy2), 0.0, h);
      det.confidence = confidence();
      if (det.valid()) img.detections.push_back(det);
    }
    const int spurious = rng.poisson(np.false_positive_rate);
    const auto size_cap =
        std::max<std::int64_t>(1, std::min(img.width, img.height) / 4);
    for (int s = 0; s < spurious; ++s) {
      const auto bw = rng.uniform_int(1, size_cap);
      const auto bh = rng.uniform_int(1, size_cap);
      const auto x = rng.uniform_int(0, img.width - bw);
      const auto y = rng.uniform_int(0, img.height - bh);
      BoundingBox det;
      det.x_min = static_cast<double>(x);
      det.y_min = static_cast<double>(y);
      det.x_max = static_cast<double>(x + bw);
      det.y_max = static_cast<double>(y + bh);
      det.class_id = kWeedClass;
      det.confidence = confidence();
      img.detections.push_back(det);
    }
  }
  finalize_dataset(out);
  return out;
}

// ---------------------------------------------------------------------------
// Pixel-rasterization oracle
// ---------------------------------------------------------------------------

struct RasterResult {
  double sprayed_area = 0.0;
  // One flag per weed-class ground-truth box, in ground-truth order.
  std::vector<bool> weed_sprayed;
};

namespace detail {

inline bool is_integer(double v) { return std::floor(v) == v; }

inline void require_integer_box(const BoundingBox& b, const char* kind) {
  if (!is_integer(b.x_min) || !is_integer(b.y_min) || !is_integer(b.x_max) ||
      !is_integer(b.y_max))
    throw ValidationError(std::string("raster_oracle: ") + kind +
                          " box corners must be integers");
}

}  // namespace detail

// Independent re-implementation of the spray region by brute force: paints a
// width x height pixel mask, one spray rectangle at a time, then counts
// pixels and tests per-weed containment pixel by pixel. Pixel (x, y) counts
// as painted when its unit square [x, x+1) x [y, y+1) lies inside a spray
// rectangle; a weed is sprayed when every pixel of its box is painted. On
// its restricted domain (integer corners and margin, stripe count dividing
// the height) the painted geometry coincides exactly with the analytic one,
// so results must match bit for bit, with no tolerance to hide boundary
// bugs.
inline RasterResult raster_oracle(const ImageRecord& image, const NozzleConfig& cfg,
                                  int weed_class = kWeedClass) {
  validate(cfg);
  if (!detail::is_integer(cfg.margin))
    throw ValidationError("raster_oracle: margin must be an integer");
  if (image.height % cfg.nozzle_count != 0)
    throw ValidationError(
        "raster_oracle: nozzle count must divide the image height");
  for (const BoundingBox& b : image.ground_truth)
    detail::require_integer_box(b, "ground-truth");
  for (const BoundingBox& b : image.detections)
    detail::require_integer_box(b, "detection");

  const std::int64_t w = image.width;
  const std::int64_t h = image.height;
  const std::int64_t stripe_h = h / cfg.nozzle_count;
  const auto margin = static_cast<std::int64_t>(cfg.margin);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w * h), 0);

  for (const BoundingBox& det : image.detections) {
    if (det.class_id != weed_class) continue;
    const std::int64_t x_lo =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(det.x_min) - margin);
    const std::int64_t x_hi =
        std::min<std::int64_t>(w, static_cast<std::int64_t>(det.x_max) + margin);
    for (int k = 0; k < cfg.nozzle_count; ++k) {
      const std::int64_t y_lo = k * stripe_h;
      const std::int64_t y_hi = y_lo + stripe_h;
      if (!(det.y_min < static_cast<double>(y_hi) &&
            det.y_max > static_cast<double>(y_lo)))
        continue;
      for (std::int64_t y = y_lo; y < y_hi; ++y)
        for (std::int64_t x = x_lo; x < x_hi; ++x)
          mask[static_cast<std::size_t>(y * w + x)] = 1;
    }
  }

  RasterResult result;
  std::int64_t painted = 0;
  for (const std::uint8_t bit : mask) painted += bit;
  result.sprayed_area = static_cast<double>(painted);

  for (const BoundingBox& gt : image.ground_truth) {
    if (gt.class_id != weed_class) continue;
    bool covered = true;
    for (auto y = static_cast<std::int64_t>(gt.y_min);
         covered && y < static_cast<std::int64_t>(gt.y_max); ++y)
      for (auto x = static_cast<std::int64_t>(gt.x_min);
           x < static_cast<std::int64_t>(gt.x_max); ++x)
        if (!mask[static_cast<std::size_t>(y * w + x)]) {
          covered = false;
          break;
        }
    result.weed_sprayed.push_back(covered);
  }
  return result;
}

}  // namespace sprayeval
