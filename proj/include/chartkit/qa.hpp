#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "chartkit/errors.hpp"
#include "chartkit/lct.hpp"
#include "chartkit/text.hpp"

namespace chartkit {

struct QaRecord {
  std::string question_id;
  std::string predicted;
  std::string gold;
};

// Relaxed answer matching: when both sides normalize to numbers, the
// prediction may deviate from gold by at most `margin` relative error
// (<= comparison, so an exact 5% deviation passes at the default margin;
// a zero gold requires a zero prediction). Otherwise the trimmed,
// case-folded strings must match exactly.
inline bool relaxed_match(std::string_view predicted, std::string_view gold,
                          double margin = 0.05) {
  const auto p = normalize_numeric(predicted);
  const auto g = normalize_numeric(gold);
  if (p.has_value() && g.has_value()) {
    if (*g == 0.0) return *p == 0.0;
    return std::abs(*p - *g) <= margin * std::abs(*g);
  }
  return text::to_lower(std::string(text::trim(predicted))) ==
         text::to_lower(std::string(text::trim(gold)));
}

struct QaSummary {
  std::size_t count = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

// Fraction of records whose prediction matches gold under relaxed_match.
// question_ids must be unique within the batch.
inline QaSummary relaxed_accuracy(const std::vector<QaRecord>& batch, double margin = 0.05) {
  if (batch.empty()) throw Error(errc::empty_batch, "empty QA batch");
  std::unordered_set<std::string_view> ids;
  QaSummary out;
  out.count = batch.size();
  for (const QaRecord& r : batch) {
    if (!ids.insert(r.question_id).second)
      throw Error(errc::parse_error, "duplicate question_id '" + r.question_id + "'");
    if (relaxed_match(r.predicted, r.gold, margin)) ++out.correct;
  }
  out.accuracy = static_cast<double>(out.correct) / static_cast<double>(out.count);
  return out;
}

}  // namespace chartkit
