#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sprayeval/errors.hpp"
#include "sprayeval/geometry.hpp"

namespace sprayeval {

// One frame: image dimensions plus its ground-truth and detection boxes.
struct ImageRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<BoundingBox> ground_truth;
  std::vector<BoundingBox> detections;

  double image_area() const {
    return static_cast<double>(width) * static_cast<double>(height);
  }
};

struct Dataset {
  std::string name;
  std::map<int, std::string> class_names;
  std::vector<ImageRecord> images;
};

inline std::map<int, std::string> default_class_names() {
  return {{kSugarBeetClass, "sugar_beet"}, {kWeedClass, "weed"}};
}

// Clips a box to [0,width] x [0,height]. Returns nullopt if the box is
// degenerate (zero area) after clipping.
inline std::optional<BoundingBox> clip_box(BoundingBox box, double width,
                                           double height) {
  box.x_min = std::clamp(box.x_min, 0.0, width);
  box.x_max = std::clamp(box.x_max, 0.0, width);
  box.y_min = std::clamp(box.y_min, 0.0, height);
  box.y_max = std::clamp(box.y_max, 0.0, height);
  if (!(box.x_min < box.x_max) || !(box.y_min < box.y_max)) return std::nullopt;
  return box;
}

namespace detail {

inline void finalize_boxes(std::vector<BoundingBox>& boxes, bool are_detections,
                           const ImageRecord& img) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::string where = std::string(are_detections ? "detection" : "ground-truth") +
                              " box " + std::to_string(i) + " of image '" +
                              img.image_id + "'";
    if (are_detections) {
      if (!boxes[i].confidence)
        throw ValidationError(where + ": detection without confidence");
      if (*boxes[i].confidence < 0.0 || *boxes[i].confidence > 1.0)
        throw ValidationError(where + ": confidence outside [0,1]");
    } else if (boxes[i].confidence) {
      throw ValidationError(where + ": ground truth must not carry confidence");
    }
    if (boxes[i].class_id < 0)
      throw ValidationError(where + ": negative class id");
    auto clipped = clip_box(boxes[i], img.width, img.height);
    if (!clipped)
      throw ValidationError(where + ": degenerate (zero-area) box after clipping");
    boxes[i] = *clipped;
  }
}

}  // namespace detail

// Clips every box to the image and enforces the record invariants: positive
// dimensions, strictly positive box areas, confidences present exactly on
// detections. Degenerate or out-of-bounds-degenerate boxes are rejected here,
// at ingest, so they cannot poison IoU or containment computations later.
inline void finalize_image(ImageRecord& img) {
  if (img.width <= 0 || img.height <= 0)
    throw ValidationError("image '" + img.image_id + "': non-positive dimensions");
  detail::finalize_boxes(img.ground_truth, false, img);
  detail::finalize_boxes(img.detections, true, img);
}

// finalize_image for every record plus dataset-level invariants
// (unique image ids).
inline void finalize_dataset(Dataset& d) {
  std::map<std::string, int> seen;
  for (ImageRecord& img : d.images) {
    if (++seen[img.image_id] > 1)
      throw ValidationError("duplicate image_id '" + img.image_id + "'");
    finalize_image(img);
  }
}

}  // namespace sprayeval
