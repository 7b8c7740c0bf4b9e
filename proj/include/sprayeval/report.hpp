#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprayeval/dataset.hpp"
#include "sprayeval/detection_metrics.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/planner.hpp"
#include "sprayeval/spray_model.hpp"
#include "sprayeval/stats.hpp"
#include "sprayeval/version.hpp"

namespace sprayeval {

// ---------------------------------------------------------------------------
// Deterministic float formatting
//
// Every real number leaving this layer is rounded to 6 significant digits:
// CSV cells are written with exactly that string, JSON numbers store the
// parsed-back double (whose shortest round-trip form is the same digits).
// std::to_chars/from_chars are locale-independent and correctly rounded, so
// identical inputs yield byte-identical reports on every platform.
// ---------------------------------------------------------------------------

inline std::string format_sig6(double v) {
  if (!std::isfinite(v))
    throw std::logic_error("report: non-finite value");
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  if (res.ec != std::errc())
    throw std::logic_error("report: float formatting failed");
  return std::string(buf, res.ptr);
}

inline double round_sig6(double v) {
  const std::string s = format_sig6(v);
  double out = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc())
    throw std::logic_error("report: float parse-back failed");
  return out;
}

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

struct Provenance {
  std::string tool_version = kToolVersion;
  // input basename -> "sha256:<hex>" (raw file bytes; for directory inputs,
  // the canonical serialization of the loaded dataset).
  std::map<std::string, std::string> input_digests;
  // Empty unless the caller supplies one: wall-clock stamps would break
  // byte-identical reruns, so they are strictly opt-in.
  std::string timestamp;
};

struct PlannerEcho {
  SprayerGeometry geometry;
  ThroughputPlan plan;
  std::optional<double> measured_fps_per_gpu;
  std::optional<std::int64_t> gpus_required;
};

struct EvaluationReport {
  std::string dataset_name;
  EvalConfig eval_config;  // classes resolved, never empty
  std::vector<int> nozzle_counts;  // ascending, unique
  double margin = 0.0;
  int weed_class = kWeedClass;
  MapResult map_table;
  std::vector<SprayReport> spray_table;  // ordered by nozzle_count ascending
  DatasetStats stats;
  std::optional<PlannerEcho> planner;
  Provenance provenance;
};

namespace detail {

inline std::vector<int> ground_truth_classes(const Dataset& d) {
  std::vector<int> classes;
  for (const ImageRecord& img : d.images)
    for (const BoundingBox& b : img.ground_truth) classes.push_back(b.class_id);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

}  // namespace detail

// Runs the full evaluation: mAP table, nozzle sweep, dataset statistics.
// An empty eval_config.classes list means "every class present in the ground
// truth". Nozzle counts are deduplicated and sorted ascending.
inline EvaluationReport build_report(const Dataset& d, EvalConfig eval_config,
                                     std::vector<int> nozzle_counts, double margin,
                                     int weed_class, Provenance provenance,
                                     std::optional<PlannerEcho> planner = {}) {
  if (eval_config.classes.empty())
    eval_config.classes = detail::ground_truth_classes(d);
  if (eval_config.classes.empty())
    throw ValidationError("report: dataset has no ground-truth boxes");
  validate(eval_config);
  std::sort(nozzle_counts.begin(), nozzle_counts.end());
  nozzle_counts.erase(std::unique(nozzle_counts.begin(), nozzle_counts.end()),
                      nozzle_counts.end());

  EvaluationReport report;
  report.dataset_name = d.name;
  report.eval_config = std::move(eval_config);
  report.nozzle_counts = nozzle_counts;
  report.margin = margin;
  report.weed_class = weed_class;
  report.map_table =
      mean_average_precision({d.images.data(), d.images.size()}, report.eval_config);
  report.spray_table =
      spray_sweep({d.images.data(), d.images.size()}, nozzle_counts, margin, weed_class);
  report.stats = dataset_stats(d);
  report.planner = std::move(planner);
  report.provenance = std::move(provenance);
  return report;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

inline const char* ap_mode_name(ApMode mode) {
  return mode == ApMode::pr_curve ? "pr_curve" : "threshold_rank";
}

inline const char* orientation_name(BoomOrientation o) {
  return o == BoomOrientation::long_edge_along_boom ? "long_edge_along_boom"
                                                    : "short_edge_along_boom";
}

inline nlohmann::json stats_to_json(const DatasetStats& s) {
  nlohmann::json j;
  j["image_count"] = s.image_count;
  j["item_count"] = s.item_count;
  j["avg_items_per_image"] = round_sig6(s.avg_items_per_image);
  j["avg_box_occluded_fraction"] = round_sig6(s.avg_box_occluded_fraction);
  j["avg_image_area_occupied"] = round_sig6(s.avg_image_area_occupied);
  j["avg_box_area_fraction"] = round_sig6(s.avg_box_area_fraction);
  j["per_class"] = nlohmann::json::object();
  for (const auto& [class_id, cs] : s.per_class) {
    nlohmann::json jc;
    jc["count"] = cs.count;
    jc["avg_per_image"] = round_sig6(cs.avg_per_image);
    jc["avg_occluded_fraction"] = round_sig6(cs.avg_occluded_fraction);
    jc["avg_area_fraction"] = round_sig6(cs.avg_area_fraction);
    j["per_class"][std::to_string(class_id)] = std::move(jc);
  }
  return j;
}

namespace detail {

inline nlohmann::json spray_row_to_json(const SprayReport& row) {
  nlohmann::json j;
  j["nozzle_count"] = row.nozzle_count;
  j["weed_coverage_rate"] = round_sig6(row.weed_coverage_rate);
  j["area_sprayed"] = round_sig6(row.area_sprayed);
  j["herbicide_saving"] = round_sig6(row.herbicide_saving);
  j["weeds_total"] = row.weeds_total;
  j["weeds_sprayed"] = row.weeds_sprayed;
  return j;
}

}  // namespace detail

inline nlohmann::json planner_to_json(const PlannerEcho& p) {
  nlohmann::json j;
  j["geometry"] = {
      {"boom_length_mm", round_sig6(p.geometry.boom_length)},
      {"footprint_long_mm", round_sig6(p.geometry.footprint_long)},
      {"footprint_short_mm", round_sig6(p.geometry.footprint_short)},
      {"speed_mm_per_s", round_sig6(p.geometry.speed)},
      {"orientation", orientation_name(p.geometry.orientation)},
  };
  j["plan"] = {
      {"camera_count", p.plan.camera_count},
      {"fps_per_camera", p.plan.fps_per_camera},
      {"total_fps", p.plan.total_fps},
  };
  j["measured_fps_per_gpu"] = p.measured_fps_per_gpu
                                  ? nlohmann::json(round_sig6(*p.measured_fps_per_gpu))
                                  : nlohmann::json(nullptr);
  j["gpus_required"] = p.gpus_required ? nlohmann::json(*p.gpus_required)
                                       : nlohmann::json(nullptr);
  return j;
}

// Canonical JSON form. nlohmann::json keeps object keys sorted, all floats
// are rounded to 6 significant digits, and row orders are fixed, so equal
// reports serialize to equal bytes.
inline nlohmann::json report_to_json(const EvaluationReport& r) {
  nlohmann::json root;
  root["schema_version"] = kReportSchemaVersion;
  root["dataset_name"] = r.dataset_name;

  nlohmann::json cfg;
  cfg["iou_thresholds"] = nlohmann::json::array();
  for (const double t : r.eval_config.iou_thresholds)
    cfg["iou_thresholds"].push_back(round_sig6(t));
  cfg["classes"] = r.eval_config.classes;
  cfg["ap_mode"] = ap_mode_name(r.eval_config.ap_mode);
  cfg["nozzle_counts"] = r.nozzle_counts;
  cfg["margin_px"] = round_sig6(r.margin);
  cfg["weed_class"] = r.weed_class;
  root["config"] = std::move(cfg);

  nlohmann::json map_table;
  map_table["overall"] = round_sig6(r.map_table.overall);
  map_table["per_class"] = nlohmann::json::object();
  for (const auto& [class_id, value] : r.map_table.per_class)
    map_table["per_class"][std::to_string(class_id)] = round_sig6(value);
  map_table["cells"] = nlohmann::json::array();
  for (const MapCell& cell : r.map_table.per_class_per_threshold)
    map_table["cells"].push_back({{"class_id", cell.class_id},
                                  {"iou_threshold", round_sig6(cell.iou_threshold)},
                                  {"value", round_sig6(cell.value)}});
  root["map_table"] = std::move(map_table);

  root["spray_table"] = nlohmann::json::array();
  for (const SprayReport& row : r.spray_table)
    root["spray_table"].push_back(detail::spray_row_to_json(row));

  root["stats"] = stats_to_json(r.stats);
  root["planner"] =
      r.planner ? planner_to_json(*r.planner) : nlohmann::json(nullptr);

  nlohmann::json prov;
  prov["tool_version"] = r.provenance.tool_version;
  prov["inputs"] = nlohmann::json::object();
  for (const auto& [name, digest] : r.provenance.input_digests)
    prov["inputs"][name] = digest;
  prov["timestamp"] = r.provenance.timestamp;
  root["provenance"] = std::move(prov);
  return root;
}

// ---------------------------------------------------------------------------
// CSV serialization
// ---------------------------------------------------------------------------

// A spray table as CSV (header row, LF endings, floats at 6 significant
// digits), one row per nozzle count in the given order.
inline std::string spray_table_csv(std::span<const SprayReport> rows) {
  std::string csv =
      "nozzle_count,weed_coverage_rate,area_sprayed,herbicide_saving,"
      "weeds_total,weeds_sprayed\n";
  for (const SprayReport& row : rows) {
    csv += std::to_string(row.nozzle_count);
    csv += ',';
    csv += format_sig6(row.weed_coverage_rate);
    csv += ',';
    csv += format_sig6(row.area_sprayed);
    csv += ',';
    csv += format_sig6(row.herbicide_saving);
    csv += ',';
    csv += std::to_string(row.weeds_total);
    csv += ',';
    csv += std::to_string(row.weeds_sprayed);
    csv += '\n';
  }
  return csv;
}

inline std::string report_to_csv(const EvaluationReport& r) {
  return spray_table_csv({r.spray_table.data(), r.spray_table.size()});
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

// One evaluated model (one report file) feeding the plot series.
struct PlotSource {
  std::string model;
  double map_overall = 0.0;
  std::vector<SprayReport> spray_rows;
};

// Extracts the plot-relevant slice of a serialized report.
inline PlotSource plot_source_from_json(const nlohmann::json& j,
                                        std::string model) {
  const auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("report '" + model + "': " + what);
  };
  if (!j.is_object()) throw fail("not a JSON object");
  if (!j.contains("schema_version") ||
      !j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != kReportSchemaVersion)
    throw fail("missing or unsupported schema_version");
  PlotSource src;
  src.model = std::move(model);
  if (!j.contains("map_table") || !j.at("map_table").contains("overall") ||
      !j.at("map_table").at("overall").is_number())
    throw fail("missing map_table.overall");
  src.map_overall = j.at("map_table").at("overall").get<double>();
  if (!j.contains("spray_table") || !j.at("spray_table").is_array())
    throw fail("missing spray_table");
  for (const auto& row : j.at("spray_table")) {
    SprayReport r;
    const auto need = [&](const char* key) -> double {
      if (!row.contains(key) || !row.at(key).is_number())
        throw fail(std::string("spray_table row missing '") + key + "'");
      return row.at(key).get<double>();
    };
    r.nozzle_count = static_cast<int>(need("nozzle_count"));
    r.weed_coverage_rate = need("weed_coverage_rate");
    r.area_sprayed = need("area_sprayed");
    r.herbicide_saving = need("herbicide_saving");
    r.weeds_total = static_cast<std::int64_t>(need("weeds_total"));
    r.weeds_sprayed = static_cast<std::int64_t>(need("weeds_sprayed"));
    src.spray_rows.push_back(r);
  }
  return src;
}

namespace detail {

inline std::vector<int> distinct_nozzle_counts(
    const std::vector<PlotSource>& sources) {
  std::vector<int> counts;
  for (const PlotSource& s : sources)
    for (const SprayReport& row : s.spray_rows) counts.push_back(row.nozzle_count);
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  return counts;
}

// Tidy long format: one row per (nozzle setting, model), nozzles ascending.
template <typename ValueFn>
inline std::string nozzle_series_csv(const std::vector<PlotSource>& sources,
                                     const std::string& header, bool with_map,
                                     ValueFn&& value) {
  std::string csv = header;
  csv += '\n';
  for (const int n : distinct_nozzle_counts(sources)) {
    for (const PlotSource& s : sources) {
      for (const SprayReport& row : s.spray_rows) {
        if (row.nozzle_count != n) continue;
        csv += s.model;
        csv += ',';
        csv += std::to_string(n);
        csv += ',';
        if (with_map) {
          csv += format_sig6(s.map_overall);
          csv += ',';
        }
        csv += format_sig6(value(row));
        csv += '\n';
      }
    }
  }
  return csv;
}

}  // namespace detail

inline std::string wcr_by_nozzles_csv(const std::vector<PlotSource>& sources) {
  return detail::nozzle_series_csv(
      sources, "model,nozzle_count,weed_coverage_rate", false,
      [](const SprayReport& r) { return r.weed_coverage_rate; });
}

inline std::string area_by_nozzles_csv(const std::vector<PlotSource>& sources) {
  return detail::nozzle_series_csv(
      sources, "model,nozzle_count,area_sprayed", false,
      [](const SprayReport& r) { return r.area_sprayed; });
}

// The two scatter series relate model quality to spray outcomes, so they
// only carry rows when at least two models are being compared; with fewer,
// the header-only file marks the series as intentionally empty.
inline std::string map_vs_wcr_csv(const std::vector<PlotSource>& sources) {
  if (sources.size() < 2) return "model,nozzle_count,map,weed_coverage_rate\n";
  return detail::nozzle_series_csv(
      sources, "model,nozzle_count,map,weed_coverage_rate", true,
      [](const SprayReport& r) { return r.weed_coverage_rate; });
}

inline std::string map_vs_area_csv(const std::vector<PlotSource>& sources) {
  if (sources.size() < 2) return "model,nozzle_count,map,area_sprayed\n";
  return detail::nozzle_series_csv(
      sources, "model,nozzle_count,map,area_sprayed", true,
      [](const SprayReport& r) { return r.area_sprayed; });
}

}  // namespace sprayeval
