#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sprayeval/dataset.hpp"
#include "sprayeval/detection_metrics.hpp"
#include "sprayeval/digest.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/io.hpp"
#include "sprayeval/planner.hpp"
#include "sprayeval/report.hpp"
#include "sprayeval/spray_model.hpp"
#include "sprayeval/stats.hpp"
#include "sprayeval/synthetic.hpp"
#include "sprayeval/transforms.hpp"
#include "sprayeval/version.hpp"

namespace sprayeval {
namespace cli_detail {

// ---------------------------------------------------------------------------
// Argument parsing helpers
// ---------------------------------------------------------------------------

inline std::vector<double> parse_double_list(const std::string& text,
                                             const char* what) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": bad number '" + item + "'");
    }
    pos = comma + 1;
  }
  return values;
}

inline std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  for (const double v : parse_double_list(text, what)) {
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw ValidationError(std::string(what) + ": expected integers");
    values.push_back(static_cast<int>(v));
  }
  return values;
}

// Thresholds carry at most 6 decimal places so that range-generated and
// hand-listed values compare equal.
inline double snap6(double v) { return std::round(v * 1e6) / 1e6; }

// Either a comma list ("0.5,0.75") or a range "start:step:stop", inclusive
// of stop up to rounding.
inline std::vector<double> parse_thresholds(const std::string& spec) {
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    const auto parts = [&] {
      std::vector<std::string> p;
      std::size_t pos = 0;
      while (pos <= spec.size()) {
        const std::size_t colon = std::min(spec.find(':', pos), spec.size());
        p.push_back(spec.substr(pos, colon - pos));
        pos = colon + 1;
      }
      return p;
    }();
    if (parts.size() != 3)
      throw ValidationError("--iou-thresholds: range must be start:step:stop");
    double range[3];
    for (int i = 0; i < 3; ++i) {
      try {
        std::size_t used = 0;
        range[i] = std::stod(parts[i], &used);
        if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
      } catch (const std::exception&) {
        throw ValidationError("--iou-thresholds: bad number '" + parts[i] + "'");
      }
    }
    const double start = range[0], step = range[1], stop = range[2];
    if (!(step > 0.0))
      throw ValidationError("--iou-thresholds: step must be > 0");
    if (stop < start)
      throw ValidationError("--iou-thresholds: stop below start");
    if ((stop - start) / step > 1000)
      throw ValidationError("--iou-thresholds: more than 1000 thresholds");
    for (int k = 0;; ++k) {
      const double t = start + k * step;
      if (t > stop + 1e-9) break;
      values.push_back(snap6(t));
    }
  } else {
    for (const double t : parse_double_list(spec, "--iou-thresholds"))
      values.push_back(snap6(t));
  }
  return values;
}

inline ApMode parse_ap_mode(const std::string& name) {
  if (name == "pr_curve") return ApMode::pr_curve;
  if (name == "threshold_rank") return ApMode::threshold_rank;
  throw ValidationError("--ap-mode: unknown mode '" + name + "'");
}

// ---------------------------------------------------------------------------
// Input and output plumbing
// ---------------------------------------------------------------------------

struct InputOptions {
  std::string path;
  std::string format = "json";
};

inline void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input", in.path,
                  "dataset: canonical JSON file or YOLO directory")
      ->required();
  cmd->add_option("--format", in.format, "input format")
      ->check(CLI::IsMember({"json", "yolo"}))
      ->capture_default_str();
}

inline Dataset load_input(const InputOptions& in) {
  const auto format = in.format == "yolo" ? DatasetFormat::yolo_dir
                                          : DatasetFormat::canonical_json;
  return load_dataset(in.path, format);
}

// name -> "sha256:..." provenance entry. File inputs digest the raw bytes;
// directory inputs digest the canonical serialization of what was loaded.
inline std::pair<std::string, std::string> input_fingerprint(
    const InputOptions& in, const Dataset& d) {
  std::filesystem::path p(in.path);
  if (p.filename().empty()) p = p.parent_path();
  const std::string digest = in.format == "yolo"
                                 ? sha256_hex(dataset_to_json(d).dump(2))
                                 : sha256_hex(detail::read_file(in.path));
  return {p.filename().string(), "sha256:" + digest};
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content);

// save_dataset plus parent-directory creation, so --out-dir targets work
// without a prior mkdir.
inline void save_dataset_to(const Dataset& d,
                            const std::filesystem::path& path) {
  write_file(path, dataset_to_json(d).dump(2) + "\n");
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  try {
    if (path.has_parent_path())
      std::filesystem::create_directories(path.parent_path());
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error("cannot create directory for '" + path.string() + "': " + e.what());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
  f.flush();
  if (!f) throw Error("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Planner options (shared by `plan` and `eval --with-plan`)
// ---------------------------------------------------------------------------

struct PlannerOptions {
  double boom_m = 24.0;
  double footprint_long_mm = 550.0;
  double footprint_short_mm = 305.0;
  std::optional<double> speed_mph;
  std::optional<double> speed_mps;
  std::optional<double> speed_mms;
  std::string orientation = "long";
  std::optional<double> measured_fps;
};

inline void add_planner_options(CLI::App* cmd, PlannerOptions& o) {
  cmd->add_option("--boom-m", o.boom_m, "boom length in metres")
      ->capture_default_str();
  cmd->add_option("--footprint-long-mm", o.footprint_long_mm,
                  "camera footprint long edge in mm")
      ->capture_default_str();
  cmd->add_option("--footprint-short-mm", o.footprint_short_mm,
                  "camera footprint short edge in mm")
      ->capture_default_str();
  auto* mph =
      cmd->add_option("--speed-mph", o.speed_mph, "ground speed in miles/hour");
  auto* mps = cmd->add_option("--speed-mps", o.speed_mps,
                              "ground speed in metres/second");
  auto* mms = cmd->add_option("--speed-mms", o.speed_mms,
                              "ground speed in millimetres/second");
  mps->excludes(mph);
  mms->excludes(mph)->excludes(mps);
  cmd->add_option("--orientation", o.orientation,
                  "camera edge along the boom: long or short")
      ->check(CLI::IsMember({"long", "short"}))
      ->capture_default_str();
  cmd->add_option("--measured-fps", o.measured_fps,
                  "measured per-GPU throughput; adds a GPU-count estimate");
}

// Default speed when no flag is given: 15 mph (exactly 6705.6 mm/s).
inline SprayerGeometry geometry_from(const PlannerOptions& o) {
  SprayerGeometry g;
  g.boom_length = o.boom_m * kMmPerMetre;
  g.footprint_long = o.footprint_long_mm;
  g.footprint_short = o.footprint_short_mm;
  double speed = 15.0 * kMmPerSecondPerMph;
  if (o.speed_mph) speed = *o.speed_mph * kMmPerSecondPerMph;
  if (o.speed_mps) speed = *o.speed_mps * kMmPerSecondPerMps;
  if (o.speed_mms) speed = *o.speed_mms;
  g.speed = speed;
  g.orientation = o.orientation == "short"
                      ? BoomOrientation::short_edge_along_boom
                      : BoomOrientation::long_edge_along_boom;
  return g;
}

inline PlannerEcho planner_echo_from(const PlannerOptions& o) {
  PlannerEcho echo;
  echo.geometry = geometry_from(o);
  echo.plan = plan_throughput(echo.geometry);
  if (o.measured_fps) {
    echo.measured_fps_per_gpu = *o.measured_fps;
    echo.gpus_required = gpu_estimate(echo.plan.total_fps, *o.measured_fps);
  }
  return echo;
}

// ---------------------------------------------------------------------------
// Subcommand option bundles
// ---------------------------------------------------------------------------

struct EvalOptions {
  InputOptions in;
  std::string out_prefix;
  std::string thresholds = "0.5:0.05:0.95";
  std::string classes;  // empty = every ground-truth class
  std::string ap_mode = "pr_curve";
  std::string nozzles = "1,2,3,4";
  double margin = 0.0;
  int weed_class = kWeedClass;
  std::string timestamp;
  bool with_plan = false;
  PlannerOptions plan;
};

struct SprayOptions {
  InputOptions in;
  std::string nozzles = "1,2,3,4";
  double margin = 0.0;
  int weed_class = kWeedClass;
  std::string out;
};

struct MapOptions {
  InputOptions in;
  std::string thresholds = "0.5:0.05:0.95";
  std::string classes;
  std::string ap_mode = "pr_curve";
  std::string out;
};

struct StatsOptions {
  InputOptions in;
  std::string out;
};

struct PlanOptions {
  PlannerOptions planner;
  std::optional<double> available_fps;
  std::string out;
};

struct SplitOptions {
  InputOptions in;
  double train = 0.7;
  double test = 0.2;
  double val = 0.1;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct RescaleOptions {
  InputOptions in;
  int width = 0;
  int height = 0;
  std::string out;
};

struct SynthOptions {
  int images = 100;
  int width = 640;
  int height = 480;
  double weeds_mean = 4.0;
  double crops_mean = 2.0;
  int box_min = 10;
  int box_max = 40;
  std::uint64_t seed = 0;
  bool detections = false;
  double miss_rate = 0.0;
  double fp_rate = 0.0;
  int jitter = 0;
  std::string confidence_model = "uniform";
  std::uint64_t noise_seed = 0;
  std::string out;
};

struct PlotDataOptions {
  std::vector<std::string> reports;
  std::string out_dir;
};

// ---------------------------------------------------------------------------
// Subcommand handlers
// ---------------------------------------------------------------------------

inline void print_spray_rows(const std::vector<SprayReport>& rows,
                             std::ostream& out) {
  for (const SprayReport& r : rows) {
    out << "n=" << r.nozzle_count << ": WCR " << format_sig6(r.weed_coverage_rate)
        << ", area sprayed " << format_sig6(r.area_sprayed) << ", saving "
        << format_sig6(r.herbicide_saving) << " (" << r.weeds_sprayed << "/"
        << r.weeds_total << " weeds)\n";
  }
}

inline void cmd_eval(const EvalOptions& o, std::ostream& out) {
  const Dataset d = load_input(o.in);
  EvalConfig cfg;
  cfg.iou_thresholds = parse_thresholds(o.thresholds);
  if (!o.classes.empty()) cfg.classes = parse_int_list(o.classes, "--classes");
  cfg.ap_mode = parse_ap_mode(o.ap_mode);

  Provenance prov;
  prov.timestamp = o.timestamp;
  prov.input_digests.insert(input_fingerprint(o.in, d));

  std::optional<PlannerEcho> echo;
  if (o.with_plan) echo = planner_echo_from(o.plan);

  const EvaluationReport report =
      build_report(d, std::move(cfg), parse_int_list(o.nozzles, "--nozzles"),
                   o.margin, o.weed_class, std::move(prov), std::move(echo));

  const std::string json_path = o.out_prefix + ".json";
  const std::string csv_path = o.out_prefix + ".csv";
  write_file(json_path, report_to_json(report).dump(2) + "\n");
  write_file(csv_path, report_to_csv(report));

  out << "overall mAP " << format_sig6(report.map_table.overall) << "\n";
  print_spray_rows(report.spray_table, out);
  out << "wrote " << json_path << ", " << csv_path << "\n";
}

inline void cmd_spray(const SprayOptions& o, std::ostream& out) {
  const Dataset d = load_input(o.in);
  const std::vector<SprayReport> rows =
      spray_sweep({d.images.data(), d.images.size()},
                  parse_int_list(o.nozzles, "--nozzles"), o.margin, o.weed_class);
  print_spray_rows(rows, out);
  if (!o.out.empty()) {
    write_file(o.out, spray_table_csv({rows.data(), rows.size()}));
    out << "wrote " << o.out << "\n";
  }
}

inline void cmd_map(const MapOptions& o, std::ostream& out) {
  const Dataset d = load_input(o.in);
  EvalConfig cfg;
  cfg.iou_thresholds = parse_thresholds(o.thresholds);
  cfg.classes = o.classes.empty() ? detail::ground_truth_classes(d)
                                  : parse_int_list(o.classes, "--classes");
  if (cfg.classes.empty())
    throw ValidationError("map: dataset has no ground-truth boxes");
  cfg.ap_mode = parse_ap_mode(o.ap_mode);
  const MapResult result =
      mean_average_precision({d.images.data(), d.images.size()}, cfg);
  for (const auto& [class_id, value] : result.per_class) {
    const auto named = d.class_names.find(class_id);
    out << "class " << class_id;
    if (named != d.class_names.end()) out << " (" << named->second << ")";
    out << ": mAP " << format_sig6(value) << "\n";
  }
  out << "overall mAP " << format_sig6(result.overall) << "\n";
  if (!o.out.empty()) {
    nlohmann::json j;
    j["overall"] = round_sig6(result.overall);
    j["per_class"] = nlohmann::json::object();
    for (const auto& [class_id, value] : result.per_class)
      j["per_class"][std::to_string(class_id)] = round_sig6(value);
    j["cells"] = nlohmann::json::array();
    for (const MapCell& cell : result.per_class_per_threshold)
      j["cells"].push_back({{"class_id", cell.class_id},
                            {"iou_threshold", round_sig6(cell.iou_threshold)},
                            {"value", round_sig6(cell.value)}});
    write_file(o.out, j.dump(2) + "\n");
    out << "wrote " << o.out << "\n";
  }
}

inline void cmd_stats(const StatsOptions& o, std::ostream& out) {
  const Dataset d = load_input(o.in);
  const DatasetStats s = dataset_stats(d);
  out << "images " << s.image_count << "\n";
  out << "items " << s.item_count << "\n";
  out << "avg items per image " << format_sig6(s.avg_items_per_image) << "\n";
  out << "avg box occluded fraction " << format_sig6(s.avg_box_occluded_fraction)
      << "\n";
  out << "avg image area occupied " << format_sig6(s.avg_image_area_occupied)
      << "\n";
  out << "avg box area fraction " << format_sig6(s.avg_box_area_fraction) << "\n";
  for (const auto& [class_id, cs] : s.per_class) {
    const auto named = d.class_names.find(class_id);
    out << "class " << class_id;
    if (named != d.class_names.end()) out << " (" << named->second << ")";
    out << ": count " << cs.count << ", avg/image " << format_sig6(cs.avg_per_image)
        << ", occluded " << format_sig6(cs.avg_occluded_fraction) << ", area "
        << format_sig6(cs.avg_area_fraction) << "\n";
  }
  if (!o.out.empty()) {
    write_file(o.out, stats_to_json(s).dump(2) + "\n");
    out << "wrote " << o.out << "\n";
  }
}

inline void cmd_plan(const PlanOptions& o, std::ostream& out) {
  const PlannerEcho echo = planner_echo_from(o.planner);
  out << echo.plan.camera_count << " cameras, " << echo.plan.fps_per_camera
      << " fps, " << echo.plan.total_fps << " total\n";
  if (echo.gpus_required) out << "GPUs required: " << *echo.gpus_required << "\n";
  std::optional<double> max_speed;
  if (o.available_fps) {
    max_speed = max_feasible_speed(echo.geometry, *o.available_fps);
    out << "max feasible speed: " << format_sig6(*max_speed) << " mm/s\n";
  }
  if (!o.out.empty()) {
    nlohmann::json j = planner_to_json(echo);
    j["available_total_fps"] =
        o.available_fps ? nlohmann::json(round_sig6(*o.available_fps))
                        : nlohmann::json(nullptr);
    j["max_feasible_speed_mm_per_s"] =
        max_speed ? nlohmann::json(round_sig6(*max_speed)) : nlohmann::json(nullptr);
    write_file(o.out, j.dump(2) + "\n");
    out << "wrote " << o.out << "\n";
  }
}

inline void cmd_split(const SplitOptions& o, std::ostream& out) {
  const Dataset d = load_input(o.in);
  SplitSpec spec;
  spec.train_fraction = o.train;
  spec.test_fraction = o.test;
  spec.val_fraction = o.val;
  spec.seed = o.seed;
  const SplitResult result = split_dataset(d, spec);
  const std::filesystem::path dir(o.out_dir);
  save_dataset_to(result.train, dir / "train.json");
  save_dataset_to(result.test, dir / "test.json");
  save_dataset_to(result.val, dir / "val.json");
  out << "train " << result.train.images.size() << ", test "
      << result.test.images.size() << ", val " << result.val.images.size()
      << "\n";
  out << "wrote " << (dir / "train.json").string() << ", "
      << (dir / "test.json").string() << ", " << (dir / "val.json").string()
      << "\n";
}

inline void cmd_rescale(const RescaleOptions& o, std::ostream& out) {
  const Dataset d = load_input(o.in);
  const Dataset scaled = rescale_dataset(d, o.width, o.height);
  save_dataset_to(scaled, o.out);
  out << "rescaled " << scaled.images.size() << " images to " << o.width << "x"
      << o.height << "\n";
  out << "wrote " << o.out << "\n";
}

inline void cmd_synth(const SynthOptions& o, std::ostream& out) {
  FieldParams fp;
  fp.image_count = o.images;
  fp.width = o.width;
  fp.height = o.height;
  fp.weeds_per_image = o.weeds_mean;
  fp.crops_per_image = o.crops_mean;
  fp.box_size_min = o.box_min;
  fp.box_size_max = o.box_max;
  fp.seed = o.seed;
  Dataset d = generate_field(fp);
  if (o.detections) {
    NoiseParams np;
    np.miss_rate = o.miss_rate;
    np.false_positive_rate = o.fp_rate;
    np.jitter = o.jitter;
    np.confidence_model = o.confidence_model == "constant"
                              ? ConfidenceModel::constant
                              : ConfidenceModel::uniform;
    np.seed = o.noise_seed;
    d = perturb_detections(d, np);
  }
  save_dataset_to(d, o.out);
  std::size_t gt = 0, det = 0;
  for (const ImageRecord& img : d.images) {
    gt += img.ground_truth.size();
    det += img.detections.size();
  }
  out << "generated " << d.images.size() << " images, " << gt
      << " ground-truth boxes, " << det << " detections\n";
  out << "wrote " << o.out << "\n";
}

inline void cmd_plot_data(const PlotDataOptions& o, std::ostream& out) {
  std::vector<PlotSource> sources;
  for (const std::string& path : o.reports) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("'" + path + "': " + e.what());
    }
    sources.push_back(
        plot_source_from_json(j, std::filesystem::path(path).stem().string()));
  }
  const std::filesystem::path dir(o.out_dir);
  write_file(dir / "wcr_by_nozzles.csv", wcr_by_nozzles_csv(sources));
  write_file(dir / "area_by_nozzles.csv", area_by_nozzles_csv(sources));
  write_file(dir / "map_vs_wcr.csv", map_vs_wcr_csv(sources));
  write_file(dir / "map_vs_area.csv", map_vs_area_csv(sources));
  out << "wrote wcr_by_nozzles.csv, area_by_nozzles.csv, map_vs_wcr.csv, "
         "map_vs_area.csv to "
      << dir.string() << "\n";
}

}  // namespace cli_detail

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

// Runs the tool on the given arguments (program name excluded), writing to
// the supplied streams. Exit codes: 0 success, 2 bad usage or bad input,
// 1 internal failure.
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  using namespace cli_detail;

  CLI::App app{
      "Object-detection evaluation for precision weed spraying: detection "
      "metrics (IoU, PR, mAP), a stripe-based spray model (weed coverage "
      "rate, area sprayed, herbicide saving), dataset utilities, and a "
      "sprayer throughput planner."};
  app.name("sprayeval");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand(
      "eval", "full evaluation report (mAP + spray sweep + stats)");
  add_input_options(eval_cmd, eval_opts.in);
  eval_cmd->add_option("--out", eval_opts.out_prefix,
                       "output path prefix; writes <prefix>.json and <prefix>.csv")
      ->required();
  eval_cmd->add_option("--iou-thresholds", eval_opts.thresholds,
                       "comma list or start:step:stop range")
      ->capture_default_str();
  eval_cmd->add_option("--classes", eval_opts.classes,
                       "classes to evaluate (default: all ground-truth classes)");
  eval_cmd->add_option("--ap-mode", eval_opts.ap_mode, "AP summation mode")
      ->check(CLI::IsMember({"pr_curve", "threshold_rank"}))
      ->capture_default_str();
  eval_cmd->add_option("--nozzles", eval_opts.nozzles, "nozzle counts to sweep")
      ->capture_default_str();
  eval_cmd->add_option("--margin-px", eval_opts.margin,
                       "spray extension before/after each weed, in pixels")
      ->capture_default_str();
  eval_cmd->add_option("--weed-class", eval_opts.weed_class,
                       "class id treated as weed")
      ->capture_default_str();
  eval_cmd->add_option("--timestamp", eval_opts.timestamp,
                       "provenance timestamp (omitted by default: timestamps "
                       "break byte-identical reruns)");
  eval_cmd->add_flag("--with-plan", eval_opts.with_plan,
                     "include a sprayer throughput plan in the report");
  add_planner_options(eval_cmd, eval_opts.plan);
  eval_cmd->callback([&] { cmd_eval(eval_opts, out); });

  SprayOptions spray_opts;
  auto* spray_cmd =
      app.add_subcommand("spray", "spray sweep only (WCR / area / saving)");
  add_input_options(spray_cmd, spray_opts.in);
  spray_cmd->add_option("--nozzles", spray_opts.nozzles, "nozzle counts to sweep")
      ->capture_default_str();
  spray_cmd->add_option("--margin-px", spray_opts.margin,
                        "spray extension before/after each weed, in pixels")
      ->capture_default_str();
  spray_cmd->add_option("--weed-class", spray_opts.weed_class,
                        "class id treated as weed")
      ->capture_default_str();
  spray_cmd->add_option("--out", spray_opts.out, "write the table as CSV");
  spray_cmd->callback([&] { cmd_spray(spray_opts, out); });

  MapOptions map_opts;
  auto* map_cmd = app.add_subcommand("map", "mean average precision only");
  add_input_options(map_cmd, map_opts.in);
  map_cmd->add_option("--iou-thresholds", map_opts.thresholds,
                      "comma list or start:step:stop range")
      ->capture_default_str();
  map_cmd->add_option("--classes", map_opts.classes,
                      "classes to evaluate (default: all ground-truth classes)");
  map_cmd->add_option("--ap-mode", map_opts.ap_mode, "AP summation mode")
      ->check(CLI::IsMember({"pr_curve", "threshold_rank"}))
      ->capture_default_str();
  map_cmd->add_option("--out", map_opts.out, "write the mAP table as JSON");
  map_cmd->callback([&] { cmd_map(map_opts, out); });

  StatsOptions stats_opts;
  auto* stats_cmd = app.add_subcommand("stats", "dataset statistics");
  add_input_options(stats_cmd, stats_opts.in);
  stats_cmd->add_option("--out", stats_opts.out, "write the statistics as JSON");
  stats_cmd->callback([&] { cmd_stats(stats_opts, out); });

  PlanOptions plan_opts;
  auto* plan_cmd = app.add_subcommand(
      "plan", "camera count / frame rate / GPU feasibility from rig geometry");
  add_planner_options(plan_cmd, plan_opts.planner);
  plan_cmd->add_option("--available-fps", plan_opts.available_fps,
                       "total fps budget; adds the max feasible speed");
  plan_cmd->add_option("--out", plan_opts.out, "write the plan as JSON");
  plan_cmd->callback([&] { cmd_plan(plan_opts, out); });

  SplitOptions split_opts;
  auto* split_cmd =
      app.add_subcommand("split", "random train/test/val partition");
  add_input_options(split_cmd, split_opts.in);
  split_cmd->add_option("--train", split_opts.train, "train fraction")
      ->capture_default_str();
  split_cmd->add_option("--test", split_opts.test, "test fraction")
      ->capture_default_str();
  split_cmd->add_option("--val", split_opts.val, "val fraction")
      ->capture_default_str();
  split_cmd->add_option("--seed", split_opts.seed, "shuffle seed")
      ->capture_default_str();
  split_cmd->add_option("--out-dir", split_opts.out_dir,
                        "directory for train.json/test.json/val.json")
      ->required();
  split_cmd->callback([&] { cmd_split(split_opts, out); });

  RescaleOptions rescale_opts;
  auto* rescale_cmd = app.add_subcommand(
      "rescale", "aspect-preserving resize of images and boxes");
  add_input_options(rescale_cmd, rescale_opts.in);
  rescale_cmd->add_option("--width", rescale_opts.width, "target width")
      ->required();
  rescale_cmd->add_option("--height", rescale_opts.height, "target height")
      ->required();
  rescale_cmd->add_option("--out", rescale_opts.out, "output dataset path")
      ->required();
  rescale_cmd->callback([&] { cmd_rescale(rescale_opts, out); });

  SynthOptions synth_opts;
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a deterministic synthetic dataset");
  synth_cmd->add_option("--images", synth_opts.images, "image count")
      ->capture_default_str();
  synth_cmd->add_option("--width", synth_opts.width, "image width")
      ->capture_default_str();
  synth_cmd->add_option("--height", synth_opts.height, "image height")
      ->capture_default_str();
  synth_cmd->add_option("--weeds-mean", synth_opts.weeds_mean,
                        "mean weeds per image")
      ->capture_default_str();
  synth_cmd->add_option("--crops-mean", synth_opts.crops_mean,
                        "mean crops per image")
      ->capture_default_str();
  synth_cmd->add_option("--box-min", synth_opts.box_min, "min box edge length")
      ->capture_default_str();
  synth_cmd->add_option("--box-max", synth_opts.box_max, "max box edge length")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.seed, "generation seed")
      ->capture_default_str();
  synth_cmd->add_flag("--detections", synth_opts.detections,
                      "also produce detections via the noise model");
  synth_cmd->add_option("--miss-rate", synth_opts.miss_rate,
                        "probability a ground-truth box goes undetected")
      ->capture_default_str();
  synth_cmd->add_option("--fp-rate", synth_opts.fp_rate,
                        "expected spurious detections per image")
      ->capture_default_str();
  synth_cmd->add_option("--jitter", synth_opts.jitter,
                        "max corner displacement in pixels")
      ->capture_default_str();
  synth_cmd->add_option("--confidence-model", synth_opts.confidence_model,
                        "detection confidence model")
      ->check(CLI::IsMember({"constant", "uniform"}))
      ->capture_default_str();
  synth_cmd->add_option("--noise-seed", synth_opts.noise_seed, "noise seed")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_opts.out, "output dataset path")
      ->required();
  synth_cmd->callback([&] { cmd_synth(synth_opts, out); });

  PlotDataOptions plot_opts;
  auto* plot_cmd = app.add_subcommand(
      "plot-data", "tidy CSV series for plotting, from report JSON files");
  plot_cmd->add_option("reports", plot_opts.reports, "report JSON files")
      ->required();
  plot_cmd->add_option("--out-dir", plot_opts.out_dir, "output directory")
      ->required();
  plot_cmd->callback([&] { cmd_plot_data(plot_opts, out); });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sprayeval
