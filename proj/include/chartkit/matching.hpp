#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace chartkit {

// Maximum-cardinality bipartite matching (Hopcroft-Karp) on a left/right
// graph given as adjacency lists from left vertices to right vertices.
class BipartiteMatcher {
public:
  BipartiteMatcher(std::size_t left, std::size_t right)
      : n_left_(left), n_right_(right), adj_(left) {}

  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  std::size_t max_matching() const {
    constexpr std::size_t NIL = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> match_l(n_left_, NIL), match_r(n_right_, NIL);
    std::vector<std::size_t> dist(n_left_);

    const auto bfs = [&]() -> bool {
      std::queue<std::size_t> q;
      bool found_free = false;
      for (std::size_t l = 0; l < n_left_; ++l) {
        if (match_l[l] == NIL) {
          dist[l] = 0;
          q.push(l);
        } else {
          dist[l] = NIL;
        }
      }
      while (!q.empty()) {
        const std::size_t l = q.front();
        q.pop();
        for (std::size_t r : adj_[l]) {
          const std::size_t nxt = match_r[r];
          if (nxt == NIL) {
            found_free = true;
          } else if (dist[nxt] == NIL) {
            dist[nxt] = dist[l] + 1;
            q.push(nxt);
          }
        }
      }
      return found_free;
    };

    std::vector<std::size_t> it(n_left_);
    const auto dfs = [&](auto&& self, std::size_t l) -> bool {
      for (; it[l] < adj_[l].size(); ++it[l]) {
        const std::size_t r = adj_[l][it[l]];
        const std::size_t nxt = match_r[r];
        if (nxt == NIL || (dist[nxt] == dist[l] + 1 && self(self, nxt))) {
          match_l[l] = r;
          match_r[r] = l;
          return true;
        }
      }
      dist[l] = NIL;
      return false;
    };

    std::size_t matched = 0;
    while (bfs()) {
      it.assign(n_left_, 0);
      for (std::size_t l = 0; l < n_left_; ++l)
        if (match_l[l] == NIL && dfs(dfs, l)) ++matched;
    }
    return matched;
  }

private:
  std::size_t n_left_;
  std::size_t n_right_;
  std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace chartkit
