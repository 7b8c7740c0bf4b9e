#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprayeval/dataset.hpp"
#include "sprayeval/errors.hpp"

namespace sprayeval {

enum class DatasetFormat { canonical_json, yolo_dir };

// ---------------------------------------------------------------------------
// YOLO text format
//
// One file per image. Each non-empty line is
//   class cx cy w h          (ground truth)
//   class cx cy w h conf     (detections)
// with cx, cy, w, h normalized to [0,1] relative to the image size. A
// directory dataset needs a sidecar index (see load_yolo_dir) because the
// text files carry no image dimensions.
// ---------------------------------------------------------------------------

// Converts YOLO center-format lines to pixel corner boxes, clipped to the
// image. Values slightly above 1 (up to 1.0001) are tolerated and clamped.
inline std::vector<BoundingBox> parse_yolo_image(const std::string& text,
                                                 double width, double height,
                                                 bool has_confidence) {
  std::vector<BoundingBox> boxes;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;  // blank line

    const auto fail = [&](const std::string& what) -> ParseError {
      return ParseError("line " + std::to_string(line_no) + ": " + what +
                        " in '" + line + "'");
    };

    int class_id = 0;
    try {
      std::size_t used = 0;
      class_id = std::stoi(first, &used);
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw fail("bad class id '" + first + "'");
    }
    if (class_id < 0) throw fail("negative class id");

    const int value_count = has_confidence ? 5 : 4;
    double v[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < value_count; ++i) {
      if (!(fields >> v[i])) throw fail("missing or malformed field");
    }
    std::string extra;
    if (fields >> extra) throw fail("unexpected trailing field '" + extra + "'");

    for (int i = 0; i < value_count; ++i) {
      if (v[i] < 0.0 || v[i] > 1.0001)
        throw fail("normalized value " + std::to_string(v[i]) +
                   " outside [0, 1.0001]");
      v[i] = std::min(v[i], 1.0);
    }

    const double cx = v[0], cy = v[1], bw = v[2], bh = v[3];
    BoundingBox box;
    box.class_id = class_id;
    box.x_min = (cx - bw / 2.0) * width;
    box.x_max = (cx + bw / 2.0) * width;
    box.y_min = (cy - bh / 2.0) * height;
    box.y_max = (cy + bh / 2.0) * height;
    if (has_confidence) box.confidence = v[4];

    auto clipped = clip_box(box, width, height);
    if (!clipped)
      throw fail("degenerate (zero-area) box after clipping");
    boxes.push_back(*clipped);
  }
  return boxes;
}

// ---------------------------------------------------------------------------
// Canonical JSON format
//
//   {
//     "name": "...",
//     "classes": {"0": "sugar_beet", "1": "weed"},
//     "images": [
//       {"id": "...", "width": 320, "height": 240,
//        "ground_truth": [{"x_min":..,"y_min":..,"x_max":..,"y_max":..,"class_id":..}],
//        "detections":  [{..., "confidence": 0.93}]}
//     ]
//   }
//
// The one self-describing source of truth; YOLO import covers detector
// pipelines that emit text files.
// ---------------------------------------------------------------------------

namespace detail {

inline double require_number(const nlohmann::json& j, const char* key,
                             const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParseError(where + ": missing or non-numeric '" + key + "'");
  return j.at(key).get<double>();
}

inline BoundingBox box_from_json(const nlohmann::json& j, bool is_detection,
                                 const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": box is not an object");
  BoundingBox box;
  box.x_min = require_number(j, "x_min", where);
  box.y_min = require_number(j, "y_min", where);
  box.x_max = require_number(j, "x_max", where);
  box.y_max = require_number(j, "y_max", where);
  if (!j.contains("class_id") || !j.at("class_id").is_number_integer())
    throw ParseError(where + ": missing or non-integer 'class_id'");
  box.class_id = j.at("class_id").get<int>();
  if (j.contains("confidence")) {
    if (!j.at("confidence").is_number())
      throw ParseError(where + ": non-numeric 'confidence'");
    box.confidence = j.at("confidence").get<double>();
  }
  (void)is_detection;  // presence rules enforced by finalize_image
  return box;
}

inline nlohmann::json box_to_json(const BoundingBox& box) {
  nlohmann::json j;
  j["x_min"] = box.x_min;
  j["y_min"] = box.y_min;
  j["x_max"] = box.x_max;
  j["y_max"] = box.y_max;
  j["class_id"] = box.class_id;
  if (box.confidence) j["confidence"] = *box.confidence;
  return j;
}

}  // namespace detail

inline Dataset dataset_from_json(const nlohmann::json& root) {
  if (!root.is_object()) throw ParseError("dataset: root is not an object");
  Dataset d;
  if (root.contains("name")) {
    if (!root.at("name").is_string()) throw ParseError("dataset: 'name' is not a string");
    d.name = root.at("name").get<std::string>();
  }
  if (root.contains("classes")) {
    if (!root.at("classes").is_object())
      throw ParseError("dataset: 'classes' is not an object");
    for (const auto& [key, value] : root.at("classes").items()) {
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ParseError("dataset: non-integer class key '" + key + "'");
      }
      if (!value.is_string())
        throw ParseError("dataset: class name for '" + key + "' is not a string");
      d.class_names[id] = value.get<std::string>();
    }
  }
  if (!root.contains("images") || !root.at("images").is_array())
    throw ParseError("dataset: missing 'images' array");
  for (const auto& jimg : root.at("images")) {
    ImageRecord img;
    if (!jimg.contains("id") || !jimg.at("id").is_string())
      throw ParseError("dataset: image without string 'id'");
    img.image_id = jimg.at("id").get<std::string>();
    const std::string where = "image '" + img.image_id + "'";
    if (!jimg.contains("width") || !jimg.at("width").is_number_integer() ||
        !jimg.contains("height") || !jimg.at("height").is_number_integer())
      throw ParseError(where + ": missing integer width/height");
    img.width = jimg.at("width").get<int>();
    img.height = jimg.at("height").get<int>();
    if (jimg.contains("ground_truth")) {
      if (!jimg.at("ground_truth").is_array())
        throw ParseError(where + ": 'ground_truth' is not an array");
      for (const auto& jb : jimg.at("ground_truth"))
        img.ground_truth.push_back(detail::box_from_json(jb, false, where));
    }
    if (jimg.contains("detections")) {
      if (!jimg.at("detections").is_array())
        throw ParseError(where + ": 'detections' is not an array");
      for (const auto& jb : jimg.at("detections"))
        img.detections.push_back(detail::box_from_json(jb, true, where));
    }
    d.images.push_back(std::move(img));
  }
  finalize_dataset(d);
  return d;
}

inline nlohmann::json dataset_to_json(const Dataset& d) {
  nlohmann::json root;
  root["name"] = d.name;
  root["classes"] = nlohmann::json::object();
  for (const auto& [id, name] : d.class_names)
    root["classes"][std::to_string(id)] = name;
  root["images"] = nlohmann::json::array();
  for (const ImageRecord& img : d.images) {
    nlohmann::json jimg;
    jimg["id"] = img.image_id;
    jimg["width"] = img.width;
    jimg["height"] = img.height;
    jimg["ground_truth"] = nlohmann::json::array();
    for (const BoundingBox& b : img.ground_truth)
      jimg["ground_truth"].push_back(detail::box_to_json(b));
    jimg["detections"] = nlohmann::json::array();
    for (const BoundingBox& b : img.detections)
      jimg["detections"].push_back(detail::box_to_json(b));
    root["images"].push_back(std::move(jimg));
  }
  return root;
}

// ---------------------------------------------------------------------------
// File loading
// ---------------------------------------------------------------------------

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Sidecar index: one line per image, `image_id width height`.
struct IndexEntry {
  std::string image_id;
  int width = 0;
  int height = 0;
};

inline std::vector<IndexEntry> parse_index(const std::string& text,
                                           const std::string& where) {
  std::vector<IndexEntry> entries;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream fields(line);
    IndexEntry e;
    if (!(fields >> e.image_id)) continue;
    if (!(fields >> e.width >> e.height))
      throw ParseError(where + " line " + std::to_string(line_no) +
                       ": expected 'image_id width height'");
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace detail

// Loads a YOLO-layout directory:
//   dir/index.txt            image_id width height   (one line per image)
//   dir/labels/<id>.txt      ground truth, `class cx cy w h`
//   dir/detections/<id>.txt  optional, `class cx cy w h conf`
// A missing per-image file means the image simply has no boxes of that kind.
inline Dataset load_yolo_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error("'" + dir.string() + "' is not a directory");
  const auto index_path = dir / "index.txt";
  if (!std::filesystem::exists(index_path))
    throw Error("missing image-dimension index '" + index_path.string() + "'");

  Dataset d;
  d.name = dir.filename().string();
  d.class_names = default_class_names();
  for (const auto& entry :
       detail::parse_index(detail::read_file(index_path), index_path.string())) {
    ImageRecord img;
    img.image_id = entry.image_id;
    img.width = entry.width;
    img.height = entry.height;
    const auto gt_path = dir / "labels" / (entry.image_id + ".txt");
    const auto det_path = dir / "detections" / (entry.image_id + ".txt");
    try {
      if (std::filesystem::exists(gt_path))
        img.ground_truth = parse_yolo_image(detail::read_file(gt_path),
                                            img.width, img.height, false);
      if (std::filesystem::exists(det_path))
        img.detections = parse_yolo_image(detail::read_file(det_path),
                                          img.width, img.height, true);
    } catch (const ParseError& e) {
      throw ParseError("image '" + entry.image_id + "': " + e.what());
    }
    d.images.push_back(std::move(img));
  }
  finalize_dataset(d);
  return d;
}

inline Dataset load_dataset(const std::filesystem::path& path,
                            DatasetFormat format) {
  if (format == DatasetFormat::yolo_dir) return load_yolo_dir(path);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(detail::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  try {
    return dataset_from_json(root);
  } catch (const ValidationError& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  } catch (const ParseError& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

inline void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << dataset_to_json(d).dump(2) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace sprayeval
