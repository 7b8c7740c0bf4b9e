#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sprayeval/dataset.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/random.hpp"

namespace sprayeval {

// ---------------------------------------------------------------------------
// Rescaling
// ---------------------------------------------------------------------------

// Rescales every image (and its boxes) to target_width x target_height.
// Each image must already have the target aspect ratio (tolerance 1e-6);
// aspect-changing resizes would distort box geometry.
inline Dataset rescale_dataset(const Dataset& d, int target_width,
                               int target_height) {
  if (target_width <= 0 || target_height <= 0)
    throw ValidationError("rescale: non-positive target dimensions");
  const double target_ratio =
      static_cast<double>(target_width) / target_height;

  Dataset out;
  out.name = d.name;
  out.class_names = d.class_names;
  out.images.reserve(d.images.size());
  for (const ImageRecord& img : d.images) {
    const double ratio = static_cast<double>(img.width) / img.height;
    if (std::abs(ratio - target_ratio) > 1e-6)
      throw ValidationError("rescale: image '" + img.image_id +
                            "' aspect ratio " + std::to_string(ratio) +
                            " does not match target " +
                            std::to_string(target_ratio));
    const double sx = static_cast<double>(target_width) / img.width;
    const double sy = static_cast<double>(target_height) / img.height;

    ImageRecord scaled;
    scaled.image_id = img.image_id;
    scaled.width = target_width;
    scaled.height = target_height;
    const auto scale_boxes = [&](const std::vector<BoundingBox>& boxes) {
      std::vector<BoundingBox> result;
      result.reserve(boxes.size());
      for (BoundingBox b : boxes) {
        b.x_min *= sx;
        b.x_max *= sx;
        b.y_min *= sy;
        b.y_max *= sy;
        result.push_back(b);
      }
      return result;
    };
    scaled.ground_truth = scale_boxes(img.ground_truth);
    scaled.detections = scale_boxes(img.detections);
    finalize_image(scaled);  // re-clip: scaling can overshoot by one ulp
    out.images.push_back(std::move(scaled));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

struct SplitSpec {
  double train_fraction = 0.7;
  double test_fraction = 0.2;
  double val_fraction = 0.1;
  std::uint64_t seed = 0;
};

inline void validate(const SplitSpec& spec) {
  if (spec.train_fraction < 0.0 || spec.test_fraction < 0.0 ||
      spec.val_fraction < 0.0)
    throw ValidationError("split: negative fraction");
  const double sum =
      spec.train_fraction + spec.test_fraction + spec.val_fraction;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("split: fractions sum to " + std::to_string(sum) +
                          ", expected 1");
}

struct SplitResult {
  Dataset train;
  Dataset test;
  Dataset val;
};

// Random disjoint/exhaustive partition, deterministic in the seed. Test and
// val receive floor(fraction * N) images each; the remainder goes to train.
// Membership comes from a seeded shuffle; each output keeps the original
// image order.
inline SplitResult split_dataset(const Dataset& d, const SplitSpec& spec) {
  validate(spec);
  const std::size_t n = d.images.size();
  // The 1e-9 nudge keeps floor() exact when fraction * N is an integer that
  // floating-point rounding lands just below.
  const auto share = [n](double fraction) {
    return static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n_test = share(spec.test_fraction);
  const std::size_t n_val = share(spec.val_fraction);
  const std::size_t n_train = n - n_test - n_val;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  rng.shuffle(order);

  // 0 = train, 1 = test, 2 = val
  std::vector<int> bucket(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train)
      bucket[order[i]] = 0;
    else if (i < n_train + n_test)
      bucket[order[i]] = 1;
    else
      bucket[order[i]] = 2;
  }

  SplitResult result;
  Dataset* outputs[3] = {&result.train, &result.test, &result.val};
  const char* suffixes[3] = {"-train", "-test", "-val"};
  for (int b = 0; b < 3; ++b) {
    outputs[b]->name = d.name + suffixes[b];
    outputs[b]->class_names = d.class_names;
  }
  for (std::size_t i = 0; i < n; ++i)
    outputs[bucket[i]]->images.push_back(d.images[i]);
  return result;
}

}  // namespace sprayeval
