#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "chartkit/edit_distance.hpp"
#include "chartkit/errors.hpp"
#include "chartkit/matching.hpp"
#include "chartkit/str.hpp"
#include "chartkit/text.hpp"

namespace chartkit {

// A named tolerance tier: J_thr bounds the entity edit distance, e_thr the
// relative value error.
struct ToleranceLevel {
  std::string name;
  std::size_t j_thr = 0;
  double e_thr = 0.0;

  bool operator==(const ToleranceLevel&) const = default;
};

inline ToleranceLevel tolerance_strict() { return {"strict", 0, 0.0}; }
inline ToleranceLevel tolerance_slight() { return {"slight", 2, 0.05}; }
inline ToleranceLevel tolerance_high() { return {"high", 5, 0.1}; }

// The three predefined tiers, in increasing leniency.
inline std::vector<ToleranceLevel> predefined_tolerances() {
  return {tolerance_strict(), tolerance_slight(), tolerance_high()};
}

inline ToleranceLevel tolerance_by_name(std::string_view name) {
  for (ToleranceLevel t : predefined_tolerances())
    if (t.name == name) return t;
  throw Error(errc::config_invalid, "unknown tolerance '" + std::string(name) + "'");
}

// Relative epsilon for "numerically equal" under strict tolerance.
inline constexpr double kStrictValueEpsilon = 1e-9;

// Guard applied to IoU >= threshold comparisons so grid thresholds like
// 0.55 are not missed by one ulp of floating rounding.
inline constexpr double kThresholdEpsilon = 1e-12;

enum class EntityDistanceStrategy {
  joined_key,      // edit distance between the joined canonical keys
  max_per_entity,  // max of per-entity distances after canonical sorting
};

struct JudgeOptions {
  EntityDistanceStrategy strategy = EntityDistanceStrategy::joined_key;
};

struct PairJudgment {
  std::size_t j = 0;  // entity edit distance
  double e = 0.0;     // relative value error (may be +inf)
  bool l = false;     // judged compatible under the given tolerance
};

namespace detail {

inline bool values_numerically_equal(double p, double g) {
  return std::abs(p - g) <= kStrictValueEpsilon * std::max(1.0, std::abs(g));
}

inline std::size_t entity_distance(const Triplet& pred, const Triplet& gt,
                                   EntityDistanceStrategy strategy) {
  if (strategy == EntityDistanceStrategy::joined_key)
    return edit_distance(canonical_key(pred), canonical_key(gt));
  auto sorted_pair = [](const Triplet& t) {
    std::string a = text::normalize_for_match(t.row_entity);
    std::string b = text::normalize_for_match(t.col_entity);
    if (b < a) std::swap(a, b);
    return std::pair{std::move(a), std::move(b)};
  };
  const auto [pa, pb] = sorted_pair(pred);
  const auto [ga, gb] = sorted_pair(gt);
  return std::max(edit_distance(pa, ga), edit_distance(pb, gb));
}

}  // namespace detail

// Judges one prediction/ground-truth triplet pair under a tolerance tier.
//
// j: Levenshtein distance between the canonical entity keys (Unicode
//    scalars, unit cost).
// e: relative value error |v_p - v_g| / |v_g| when both values are
//    numeric (for v_g == 0: 0 if v_p is zero within epsilon, else +inf).
//    When both values are non-numeric, e is 0 iff the normalized raw
//    strings are within edit distance j_thr (the textual budget is
//    reused), else +inf. A numeric/non-numeric mix is +inf.
// l: (j <= j_thr) and the value condition. Values that are numerically
//    equal within a 1e-9 relative epsilon satisfy the value condition at
//    every tier, which also makes l monotone across tiers.
inline PairJudgment judge_pair(const Triplet& pred, const Triplet& gt,
                               const ToleranceLevel& tol, const JudgeOptions& opts = {}) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  PairJudgment out;
  out.j = detail::entity_distance(pred, gt, opts.strategy);

  bool value_ok = false;
  const auto& vp = pred.value.numeric;
  const auto& vg = gt.value.numeric;
  if (vp.has_value() && vg.has_value()) {
    const bool equal = detail::values_numerically_equal(*vp, *vg);
    if (*vg != 0.0)
      out.e = std::abs((*vp - *vg) / *vg);
    else
      out.e = equal ? 0.0 : kInf;
    value_ok = equal || out.e <= tol.e_thr;
  } else if (!vp.has_value() && !vg.has_value()) {
    const std::size_t d = edit_distance(text::normalize_for_match(pred.value.raw),
                                        text::normalize_for_match(gt.value.raw));
    out.e = d <= tol.j_thr ? 0.0 : kInf;
    value_ok = out.e <= tol.e_thr;
  } else {
    out.e = kInf;
    value_ok = false;
  }

  out.l = out.j <= tol.j_thr && value_ok;
  return out;
}

enum class MatchMode {
  matched,      // maximum-cardinality one-to-one matching; IoU in [0, 1]
  literal_sum,  // the raw double-sum form; may leave [0, 1], flagged
};

// Per-image score. In matched mode `matched` is the size of a maximum
// bipartite matching over the compatibility matrix and
// iou == matched / (pred_count + gt_count - matched). In literal_sum mode
// `matched` carries the raw double sum and `warning` is set whenever the
// unclamped value leaves [0, 1] (an infinite value means the denominator
// was <= 0).
struct ImageScore {
  double iou = 0.0;
  std::size_t matched = 0;
  std::size_t pred_count = 0;
  std::size_t gt_count = 0;
  bool warning = false;
};

// Scores one image: builds the P x Q compatibility matrix with judge_pair
// and reduces it per the mode. Both sets empty scores 1 (vacuous
// agreement); exactly one empty scores 0.
inline ImageScore image_iou(const TripletSet& pred, const TripletSet& gt,
                            const ToleranceLevel& tol, MatchMode mode = MatchMode::matched,
                            const JudgeOptions& opts = {}) {
  ImageScore score;
  score.pred_count = pred.size();
  score.gt_count = gt.size();
  if (pred.empty() && gt.empty()) {
    score.iou = 1.0;
    return score;
  }
  if (pred.empty() || gt.empty()) {
    score.iou = 0.0;
    return score;
  }

  const std::size_t p_n = pred.size(), q_n = gt.size();
  if (mode == MatchMode::matched) {
    BipartiteMatcher matcher(p_n, q_n);
    for (std::size_t p = 0; p < p_n; ++p)
      for (std::size_t q = 0; q < q_n; ++q)
        if (judge_pair(pred.triplets[p], gt.triplets[q], tol, opts).l)
          matcher.add_edge(p, q);
    score.matched = matcher.max_matching();
    score.iou = static_cast<double>(score.matched) /
                static_cast<double>(p_n + q_n - score.matched);
  } else {
    std::size_t sum = 0;
    for (std::size_t p = 0; p < p_n; ++p)
      for (std::size_t q = 0; q < q_n; ++q)
        if (judge_pair(pred.triplets[p], gt.triplets[q], tol, opts).l) ++sum;
    score.matched = sum;
    const auto denom = static_cast<double>(p_n + q_n) - static_cast<double>(sum);
    score.iou = denom > 0.0 ? static_cast<double>(sum) / denom
                            : std::numeric_limits<double>::infinity();
    score.warning = !(score.iou >= 0.0 && score.iou <= 1.0);
  }
  return score;
}

// One prediction/ground-truth pair, optionally carrying a caller id
// (e.g. a filename stem) that is echoed into reports.
struct ScoredPair {
  std::string id;
  TripletSet pred;
  TripletSet gt;
};

// The ten thresholds 0.5:0.05:0.95 averaged by mPrecision.
inline std::vector<double> mprecision_thresholds() {
  std::vector<double> out;
  out.reserve(10);
  for (int k = 10; k <= 19; ++k) out.push_back(static_cast<double>(k) / 20.0);
  return out;
}

inline std::vector<double> default_report_thresholds() { return {0.5, 0.75, 0.95, 1.0}; }

inline bool iou_passes(double iou, double threshold) {
  return iou >= threshold - kThresholdEpsilon;
}

struct ToleranceResult {
  ToleranceLevel tolerance;
  std::vector<ImageScore> per_image;
  // (threshold, fraction of images with IoU >= threshold), sorted by
  // threshold ascending.
  std::vector<std::pair<double, double>> precision_at;
  double m_precision = 0.0;
};

// Dataset-level report: per-tolerance per-image scores, Precision@t for
// the fixed thresholds, mPrecision over the ten-threshold grid, and EM
// (Precision at IoU 1.0 under strict tolerance; NaN when strict was not
// among the requested tolerances).
struct ScrmReport {
  std::vector<ToleranceResult> tolerances;
  double em = std::numeric_limits<double>::quiet_NaN();
  std::size_t image_count = 0;
  MatchMode mode = MatchMode::matched;
};

struct ReportOptions {
  std::vector<ToleranceLevel> tolerances = predefined_tolerances();
  std::vector<double> thresholds = default_report_thresholds();
  MatchMode mode = MatchMode::matched;
  JudgeOptions judge;
};

inline ScrmReport dataset_report(const std::vector<ScoredPair>& pairs,
                                 const ReportOptions& opts = {}) {
  if (pairs.empty()) throw Error(errc::empty_dataset, "no image pairs to score");

  ScrmReport report;
  report.image_count = pairs.size();
  report.mode = opts.mode;
  const double l_count = static_cast<double>(pairs.size());

  std::vector<double> thresholds = opts.thresholds;
  std::sort(thresholds.begin(), thresholds.end());

  for (const ToleranceLevel& tol : opts.tolerances) {
    ToleranceResult res;
    res.tolerance = tol;
    res.per_image.reserve(pairs.size());
    for (const ScoredPair& pair : pairs)
      res.per_image.push_back(image_iou(pair.pred, pair.gt, tol, opts.mode, opts.judge));

    for (double t : thresholds) {
      std::size_t hits = 0;
      for (const ImageScore& s : res.per_image)
        if (iou_passes(s.iou, t)) ++hits;
      res.precision_at.emplace_back(t, static_cast<double>(hits) / l_count);
    }

    std::size_t grid_hits = 0;
    for (double t : mprecision_thresholds())
      for (const ImageScore& s : res.per_image)
        if (iou_passes(s.iou, t)) ++grid_hits;
    res.m_precision = static_cast<double>(grid_hits) / (10.0 * l_count);

    if (tol.name == "strict" && tol.j_thr == 0 && tol.e_thr == 0.0) {
      std::size_t exact = 0;
      for (const ImageScore& s : res.per_image)
        if (iou_passes(s.iou, 1.0)) ++exact;
      report.em = static_cast<double>(exact) / l_count;
    }
    report.tolerances.push_back(std::move(res));
  }
  return report;
}

}  // namespace chartkit
