#pragma once

// Independent reference implementations used to cross-check the library.
// These deliberately use different algorithms from the production code:
// plain recursion with memoization for edit distance and exhaustive
// enumeration of injective assignments for matching.

#include <cstddef>
#include <functional>
#include <limits>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chartkit/text.hpp"

namespace oracle {

inline std::size_t edit_distance_ref(std::string_view a, std::string_view b) {
  const auto ua = chartkit::text::utf8_decode(a);
  const auto ub = chartkit::text::utf8_decode(b);
  std::unordered_map<std::size_t, std::size_t> memo;
  const std::size_t stride = ub.size() + 1;
  std::function<std::size_t(std::size_t, std::size_t)> rec =
      [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == ua.size()) return ub.size() - j;
    if (j == ub.size()) return ua.size() - i;
    const std::size_t key = i * stride + j;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best;
    if (ua[i] == ub[j]) {
      best = rec(i + 1, j + 1);
    } else {
      best = 1 + std::min({rec(i + 1, j), rec(i, j + 1), rec(i + 1, j + 1)});
    }
    memo[key] = best;
    return best;
  };
  return rec(0, 0);
}

// Maximum number of compatible (pred, gt) pairs over all injective
// assignments, by brute-force recursion. compat[p][q] says whether pred p
// may match gt q. Feasible for P, Q <= ~10.
inline std::size_t max_matching_ref(const std::vector<std::vector<bool>>& compat,
                                    std::size_t q_count) {
  const std::size_t p_count = compat.size();
  std::function<std::size_t(std::size_t, std::size_t)> rec =
      [&](std::size_t p, std::size_t used_mask) -> std::size_t {
    if (p == p_count) return 0;
    std::size_t best = rec(p + 1, used_mask);  // leave pred p unmatched
    for (std::size_t q = 0; q < q_count; ++q) {
      if (compat[p][q] && !(used_mask & (std::size_t{1} << q))) {
        const std::size_t with = 1 + rec(p + 1, used_mask | (std::size_t{1} << q));
        if (with > best) best = with;
      }
    }
    return best;
  };
  return rec(0, 0);
}

inline double iou_ref(const std::vector<std::vector<bool>>& compat, std::size_t p_count,
                      std::size_t q_count) {
  if (p_count == 0 && q_count == 0) return 1.0;
  if (p_count == 0 || q_count == 0) return 0.0;
  const std::size_t m = max_matching_ref(compat, q_count);
  return static_cast<double>(m) / static_cast<double>(p_count + q_count - m);
}

}  // namespace oracle
