#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sprayeval/dataset.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/geometry.hpp"

namespace sprayeval {

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

struct MatchedPair {
  int detection_index = 0;    // index into the detections passed in
  int ground_truth_index = 0; // index into the ground truth passed in
  double iou_value = 0.0;
};

struct DetectionFlag {
  double confidence = 0.0;
  bool is_tp = false;
};

struct MatchResult {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  std::vector<MatchedPair> matched_pairs;
  // Confidence-descending, one entry per detection of the class.
  std::vector<DetectionFlag> per_detection_flags;
};

namespace detail {

// Detections without a confidence rank highest (treated as 1.0).
inline double confidence_of(const BoundingBox& box) {
  return box.confidence.value_or(1.0);
}

}  // namespace detail

// Greedy one-to-one matching for a single class on a single image.
// Detections of the class are processed in descending confidence (ties keep
// input order); each is assigned to the unmatched ground-truth box of the
// same class with the highest IoU, provided that IoU reaches the threshold.
// Unassigned detections are FP, unassigned ground truths FN. Cross-class
// matches are never made.
inline MatchResult match_detections(const std::vector<BoundingBox>& gt,
                                    const std::vector<BoundingBox>& det,
                                    int class_id, double iou_threshold) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0)
    throw ValidationError("iou_threshold must lie in (0, 1]");

  std::vector<int> gt_idx;
  for (int i = 0; i < static_cast<int>(gt.size()); ++i)
    if (gt[i].class_id == class_id) gt_idx.push_back(i);

  std::vector<int> det_idx;
  for (int i = 0; i < static_cast<int>(det.size()); ++i)
    if (det[i].class_id == class_id) det_idx.push_back(i);
  std::stable_sort(det_idx.begin(), det_idx.end(), [&](int a, int b) {
    return detail::confidence_of(det[a]) > detail::confidence_of(det[b]);
  });

  MatchResult result;
  std::vector<bool> gt_taken(gt_idx.size(), false);
  for (int d : det_idx) {
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gt_idx.size(); ++g) {
      if (gt_taken[g]) continue;
      const double v = iou(det[d], gt[gt_idx[g]]);
      if (v > best_iou) {
        best_iou = v;
        best = static_cast<int>(g);
      }
    }
    const bool matched = best >= 0 && best_iou >= iou_threshold;
    if (matched) {
      gt_taken[best] = true;
      result.matched_pairs.push_back({d, gt_idx[best], best_iou});
    }
    result.per_detection_flags.push_back({detail::confidence_of(det[d]), matched});
  }
  result.tp = static_cast<int>(result.matched_pairs.size());
  result.fp = static_cast<int>(det_idx.size()) - result.tp;
  result.fn = static_cast<int>(gt_idx.size()) - result.tp;
  return result;
}

// P = TP/(TP+FP), R = TP/(TP+FN). When no detections were issued at all,
// precision is 1.0 by convention (no false alarms), which keeps the PR curve
// well defined at the start of the sweep. Recall over zero ground truths is 0.
inline std::pair<double, double> precision_recall(const MatchResult& m) {
  const double precision =
      (m.tp + m.fp == 0) ? 1.0 : static_cast<double>(m.tp) / (m.tp + m.fp);
  const double recall =
      (m.tp + m.fn == 0) ? 0.0 : static_cast<double>(m.tp) / (m.tp + m.fn);
  return {precision, recall};
}

// ---------------------------------------------------------------------------
// PR curve and average precision
// ---------------------------------------------------------------------------

struct PRPoint {
  double precision = 0.0;
  double recall = 0.0;
  double confidence_cutoff = 0.0;
};

// Pools the per-detection flags of every image, sweeps confidence cutoffs
// from high to low and emits one point per distinct confidence. Equal
// confidences are processed as one cutoff group, which removes any
// input-order dependence. Recall is monotone non-decreasing along the
// returned sequence.
inline std::vector<PRPoint> pr_curve(std::span<const ImageRecord> images,
                                     int class_id, double iou_threshold) {
  std::vector<DetectionFlag> flags;
  std::int64_t total_gt = 0;
  for (const ImageRecord& img : images) {
    MatchResult m =
        match_detections(img.ground_truth, img.detections, class_id, iou_threshold);
    total_gt += m.tp + m.fn;
    flags.insert(flags.end(), m.per_detection_flags.begin(),
                 m.per_detection_flags.end());
  }
  if (total_gt == 0)
    throw ValidationError("AP undefined: no ground-truth boxes of class " +
                          std::to_string(class_id));

  std::sort(flags.begin(), flags.end(),
            [](const DetectionFlag& a, const DetectionFlag& b) {
              return a.confidence > b.confidence;
            });

  std::vector<PRPoint> points;
  std::int64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    flags[i].is_tp ? ++tp : ++fp;
    const bool group_end =
        i + 1 == flags.size() || flags[i + 1].confidence != flags[i].confidence;
    if (group_end) {
      PRPoint p;
      p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
      p.recall = static_cast<double>(tp) / static_cast<double>(total_gt);
      p.confidence_cutoff = flags[i].confidence;
      points.push_back(p);
    }
  }
  return points;
}

// All-point interpolated AP: precision at recall r is replaced by the maximum
// precision at recall >= r (monotone envelope), then the swept points are
// integrated as sum over k of (R_k - R_{k-1}) * P_k with R_0 = 0. No
// detections at all gives 0.
inline double average_precision(std::span<const ImageRecord> images,
                                int class_id, double iou_threshold) {
  const std::vector<PRPoint> points = pr_curve(images, class_id, iou_threshold);
  if (points.empty()) return 0.0;

  std::vector<double> envelope(points.size());
  double running_max = 0.0;
  for (std::size_t i = points.size(); i-- > 0;) {
    running_max = std::max(running_max, points[i].precision);
    envelope[i] = running_max;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    ap += (points[i].recall - prev_recall) * envelope[i];
    prev_recall = points[i].recall;
  }
  return ap;
}

// ---------------------------------------------------------------------------
// Mean average precision
// ---------------------------------------------------------------------------

enum class ApMode {
  // AP from the PR sweep at each IoU threshold, then averaged over
  // thresholds. The conventional reading; the default.
  pr_curve,
  // Alternative reading of the summation sum_n (R_n - R_{n-1}) * P_n where n
  // ranges over IoU threshold ranks instead of sweep points: P_n, R_n are
  // the pooled precision and recall of the full detection set at threshold
  // n. Thresholds are ranked from strictest to loosest so recall is
  // non-decreasing, with R_0 = 0.
  threshold_rank,
};

inline std::vector<double> default_iou_thresholds() {
  return {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
}

struct EvalConfig {
  std::vector<double> iou_thresholds = default_iou_thresholds();
  std::vector<int> classes;
  ApMode ap_mode = ApMode::pr_curve;
};

inline void validate(const EvalConfig& cfg) {
  if (cfg.iou_thresholds.empty())
    throw ValidationError("EvalConfig: empty IoU threshold list");
  for (std::size_t i = 0; i < cfg.iou_thresholds.size(); ++i) {
    const double t = cfg.iou_thresholds[i];
    if (!(t > 0.0) || t > 1.0)
      throw ValidationError("EvalConfig: threshold " + std::to_string(t) +
                            " outside (0, 1]");
    if (i > 0 && !(cfg.iou_thresholds[i - 1] < t))
      throw ValidationError("EvalConfig: thresholds not strictly increasing");
  }
  if (cfg.classes.empty())
    throw ValidationError("EvalConfig: empty class list");
}

struct MapCell {
  int class_id = 0;
  double iou_threshold = 0.0;
  // pr_curve mode: the AP at this threshold. threshold_rank mode: this
  // threshold's term of the summation (the terms of a class sum to its value).
  double value = 0.0;
};

struct MapResult {
  std::map<int, double> per_class;
  double overall = 0.0;
  std::vector<MapCell> per_class_per_threshold;
};

namespace detail {

inline double threshold_rank_map_for_class(std::span<const ImageRecord> images,
                                    int class_id,
                                    const std::vector<double>& thresholds,
                                    std::vector<MapCell>& cells) {
  // Strictest threshold first: recall grows as the threshold loosens.
  std::vector<double> ranked(thresholds.rbegin(), thresholds.rend());
  double value = 0.0;
  double prev_recall = 0.0;
  std::vector<MapCell> terms;
  for (const double t : ranked) {
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (const ImageRecord& img : images) {
      MatchResult m = match_detections(img.ground_truth, img.detections, class_id, t);
      tp += m.tp;
      fp += m.fp;
      fn += m.fn;
    }
    if (tp + fn == 0)
      throw ValidationError("AP undefined: no ground-truth boxes of class " +
                            std::to_string(class_id));
    const double precision =
        (tp + fp == 0) ? 1.0 : static_cast<double>(tp) / (tp + fp);
    const double recall = static_cast<double>(tp) / (tp + fn);
    const double term = (recall - prev_recall) * precision;
    value += term;
    prev_recall = recall;
    terms.push_back({class_id, t, term});
  }
  // Report cells in ascending threshold order like the table rows.
  cells.insert(cells.end(), terms.rbegin(), terms.rend());
  return value;
}

}  // namespace detail

// Per-class mAP (mean of AP over the configured IoU thresholds) and the
// overall mean across classes. Every configured class must have at least one
// ground-truth instance.
inline MapResult mean_average_precision(std::span<const ImageRecord> images,
                                        const EvalConfig& cfg) {
  validate(cfg);
  MapResult result;
  double class_sum = 0.0;
  for (const int class_id : cfg.classes) {
    double value = 0.0;
    if (cfg.ap_mode == ApMode::pr_curve) {
      double ap_sum = 0.0;
      for (const double t : cfg.iou_thresholds) {
        const double ap = average_precision(images, class_id, t);
        result.per_class_per_threshold.push_back({class_id, t, ap});
        ap_sum += ap;
      }
      value = ap_sum / static_cast<double>(cfg.iou_thresholds.size());
    } else {
      value = detail::threshold_rank_map_for_class(images, class_id, cfg.iou_thresholds,
                                            result.per_class_per_threshold);
    }
    result.per_class[class_id] = value;
    class_sum += value;
  }
  result.overall = class_sum / static_cast<double>(cfg.classes.size());
  return result;
}

}  // namespace sprayeval
