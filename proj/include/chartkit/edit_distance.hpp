#pragma once

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

#include "chartkit/text.hpp"

namespace chartkit {

// Levenshtein distance with unit-cost insert/delete/substitute, computed
// over Unicode scalar values rather than bytes.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  const std::vector<char32_t> ua = text::utf8_decode(a);
  const std::vector<char32_t> ub = text::utf8_decode(b);
  const std::size_t n = ua.size(), m = ub.size();
  if (n == 0) return m;
  if (m == 0) return n;

  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (ua[i - 1] == ub[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace chartkit
