#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chartkit/errors.hpp"
#include "chartkit/lct.hpp"
#include "chartkit/text.hpp"

namespace chartkit {

// One (row entity, column entity, value) record.
struct Triplet {
  std::string row_entity;
  std::string col_entity;
  Cell value;

  bool operator==(const Triplet&) const = default;
};

// Multiset of triplets; duplicates are preserved and counted.
struct TripletSet {
  std::vector<Triplet> triplets;

  std::size_t size() const { return triplets.size(); }
  bool empty() const { return triplets.empty(); }
};

// k-entity generalization for multi-charts and high-dimensional charts.
struct NTuple {
  std::vector<std::string> entity_keys;
  Cell value;

  bool operator==(const NTuple&) const = default;
};

// Multiset of NTuples with one uniform arity k >= 2.
class NTupleSet {
public:
  NTupleSet() = default;
  explicit NTupleSet(std::size_t arity) : arity_(arity) {}

  void add(NTuple t) {
    if (t.entity_keys.size() < 2)
      throw Error(errc::arity_mismatch, "tuple arity must be at least 2");
    if (arity_ == 0) arity_ = t.entity_keys.size();
    if (t.entity_keys.size() != arity_)
      throw Error(errc::arity_mismatch,
                  "mixed arities in one set: " + std::to_string(t.entity_keys.size()) +
                      " vs " + std::to_string(arity_));
    tuples_.push_back(std::move(t));
  }

  std::size_t arity() const { return arity_; }
  const std::vector<NTuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

private:
  std::size_t arity_ = 0;  // 0 until the first tuple fixes it
  std::vector<NTuple> tuples_;
};

inline NTupleSet to_ntuples(const TripletSet& s) {
  NTupleSet out(2);
  for (const Triplet& t : s.triplets) out.add({{t.row_entity, t.col_entity}, t.value});
  return out;
}

inline TripletSet to_triplets(const NTupleSet& s) {
  if (!s.empty() && s.arity() != 2)
    throw Error(errc::arity_mismatch,
                "expected arity 2, got " + std::to_string(s.arity()));
  TripletSet out;
  for (const NTuple& t : s.tuples())
    out.triplets.push_back({t.entity_keys[0], t.entity_keys[1], t.value});
  return out;
}

// Order-independent comparison key: each entity is normalized (trim,
// collapse whitespace, lowercase), the entities are sorted, and joined
// with U+001F. Sorting makes the key invariant under transposition.
inline std::string canonical_key(const std::vector<std::string>& entities) {
  std::vector<std::string> norm;
  norm.reserve(entities.size());
  for (const auto& e : entities) norm.push_back(text::normalize_for_match(e));
  std::sort(norm.begin(), norm.end());
  std::string out;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (i) out.push_back('\x1F');
    out += norm[i];
  }
  return out;
}

inline std::string canonical_key(const Triplet& t) {
  return canonical_key(std::vector<std::string>{t.row_entity, t.col_entity});
}

inline std::string canonical_key(const NTuple& t) { return canonical_key(t.entity_keys); }

// Expands a table into one triplet per grid position, row-major.
inline TripletSet to_str(const LctTable& table) {
  TripletSet out;
  out.triplets.reserve(table.rows() * table.cols());
  for (std::size_t n = 0; n < table.rows(); ++n)
    for (std::size_t m = 0; m < table.cols(); ++m)
      out.triplets.push_back({table.row_entities[n], table.col_entities[m],
                              table.values[n][m]});
  return out;
}

// Rebuilds a table from a complete-grid triplet set. Row and column order
// is lexicographic by entity string. Duplicated positions with equal raw
// values collapse to one cell; conflicting raw values are an error.
inline LctTable from_str(const TripletSet& set) {
  std::vector<std::string> rows, cols;
  for (const Triplet& t : set.triplets) {
    rows.push_back(t.row_entity);
    cols.push_back(t.col_entity);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  std::map<std::string_view, std::size_t> row_idx, col_idx;
  for (std::size_t i = 0; i < rows.size(); ++i) row_idx[rows[i]] = i;
  for (std::size_t i = 0; i < cols.size(); ++i) col_idx[cols[i]] = i;

  std::vector<std::vector<std::optional<Cell>>> grid(
      rows.size(), std::vector<std::optional<Cell>>(cols.size()));
  for (const Triplet& t : set.triplets) {
    auto& slot = grid[row_idx[t.row_entity]][col_idx[t.col_entity]];
    if (slot.has_value()) {
      if (slot->raw != t.value.raw)
        throw ConflictingDuplicateError(t.row_entity, t.col_entity);
    } else {
      slot = t.value;
    }
  }

  std::vector<std::pair<std::string, std::string>> missing;
  for (std::size_t n = 0; n < rows.size(); ++n)
    for (std::size_t m = 0; m < cols.size(); ++m)
      if (!grid[n][m].has_value()) missing.emplace_back(rows[n], cols[m]);
  if (!missing.empty()) throw IncompleteGridError(std::move(missing));

  LctTable table;
  table.row_entities = std::move(rows);
  table.col_entities = std::move(cols);
  table.values.reserve(table.row_entities.size());
  for (auto& row : grid) {
    std::vector<Cell> cells;
    cells.reserve(row.size());
    for (auto& c : row) cells.push_back(std::move(*c));
    table.values.push_back(std::move(cells));
  }
  return table;
}

// Swaps row and column roles; values are transposed.
inline LctTable transpose(const LctTable& table) {
  LctTable out;
  out.col_entities = table.row_entities;
  out.row_entities = table.col_entities;
  out.values.assign(table.cols(), std::vector<Cell>(table.rows()));
  for (std::size_t n = 0; n < table.rows(); ++n)
    for (std::size_t m = 0; m < table.cols(); ++m) out.values[m][n] = table.values[n][m];
  return out;
}

namespace detail {

inline void check_permutation(const std::vector<std::size_t>& perm, std::size_t n,
                              const char* what) {
  if (perm.size() != n)
    throw Error(errc::invalid_permutation,
                std::string(what) + " permutation has size " + std::to_string(perm.size()) +
                    ", expected " + std::to_string(n));
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p])
      throw Error(errc::invalid_permutation,
                  std::string(what) + " permutation is not a bijection");
    seen[p] = true;
  }
}

}  // namespace detail

// Reorders rows and columns: result row i is table row row_perm[i], and
// likewise for columns. The triplet multiset is unchanged.
inline LctTable permute(const LctTable& table, const std::vector<std::size_t>& row_perm,
                        const std::vector<std::size_t>& col_perm) {
  detail::check_permutation(row_perm, table.rows(), "row");
  detail::check_permutation(col_perm, table.cols(), "column");
  LctTable out;
  out.row_entities.reserve(table.rows());
  out.col_entities.reserve(table.cols());
  for (std::size_t p : row_perm) out.row_entities.push_back(table.row_entities[p]);
  for (std::size_t p : col_perm) out.col_entities.push_back(table.col_entities[p]);
  out.values.reserve(table.rows());
  for (std::size_t n = 0; n < table.rows(); ++n) {
    std::vector<Cell> row;
    row.reserve(table.cols());
    for (std::size_t m = 0; m < table.cols(); ++m)
      row.push_back(table.values[row_perm[n]][col_perm[m]]);
    out.values.push_back(std::move(row));
  }
  return out;
}

enum class StrFormat { text, jsonl };

namespace detail {

inline bool str_field_needs_quoting(std::string_view f) {
  if (f.empty()) return true;
  if (f.find_first_of(",()\"\n\r") != std::string_view::npos) return true;
  return text::is_space(f.front()) || text::is_space(f.back());
}

inline void append_str_field(std::string& out, std::string_view f) {
  if (!str_field_needs_quoting(f)) {
    out += f;
    return;
  }
  out.push_back('"');
  for (char c : f) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

inline std::vector<const NTuple*> canonical_order(const NTupleSet& set) {
  std::vector<const NTuple*> order;
  order.reserve(set.size());
  for (const NTuple& t : set.tuples()) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const NTuple* a, const NTuple* b) {
    return std::tie(a->entity_keys, a->value.raw) < std::tie(b->entity_keys, b->value.raw);
  });
  return order;
}

}  // namespace detail

// Renders a tuple set. Text format: one `(entity1, entity2[, ...], value)`
// per line; fields are quoted when they contain comma, paren, or quote (or
// would otherwise be ambiguous). JSONL format: one object per line with
// `entities` (array) and `value` ({raw, number?}). Lines are emitted in
// canonical lexicographic order; both formats parse back to an equal
// multiset.
inline std::string serialize_str(const NTupleSet& set, StrFormat format) {
  std::string out;
  const auto order = detail::canonical_order(set);
  if (format == StrFormat::text) {
    for (const NTuple* t : order) {
      out.push_back('(');
      for (const auto& e : t->entity_keys) {
        detail::append_str_field(out, e);
        out += ", ";
      }
      detail::append_str_field(out, t->value.raw);
      out += ")\n";
    }
  } else {
    for (const NTuple* t : order) {
      nlohmann::ordered_json j;
      j["entities"] = t->entity_keys;
      nlohmann::ordered_json v;
      v["raw"] = t->value.raw;
      if (t->value.numeric.has_value()) v["number"] = *t->value.numeric;
      j["value"] = std::move(v);
      out += j.dump();
      out.push_back('\n');
    }
  }
  return out;
}

inline std::string serialize_str(const TripletSet& set, StrFormat format) {
  return serialize_str(to_ntuples(set), format);
}

namespace detail {

// Splits the inside of a `(...)` line on top-level commas. Unquoted
// fields are trimmed; quoted fields unescape verbatim.
inline std::vector<std::string> split_str_fields(std::string_view inner, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false, was_quoted = false, after_quote = false;
  const auto flush = [&] {
    if (!was_quoted) cur = std::string(text::trim(cur));
    fields.push_back(std::move(cur));
    cur.clear();
    was_quoted = false;
    after_quote = false;
  };
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const char c = inner[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < inner.size() && inner[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        cur.push_back(c);
      }
      continue;
    }
    if (c == '"' && std::string_view(text::trim(cur)).empty() && !after_quote) {
      in_quotes = true;
      was_quoted = true;
      cur.clear();  // drop any leading spaces before the quote
    } else if (c == ',') {
      flush();
    } else {
      if (after_quote && !text::is_space(c))
        throw Error(errc::parse_error, "line " + std::to_string(line_no) +
                                           ": text after closing quote");
      if (!after_quote) cur.push_back(c);
    }
  }
  if (in_quotes)
    throw Error(errc::parse_error, "line " + std::to_string(line_no) + ": unterminated quote");
  flush();
  return fields;
}

}  // namespace detail

// Parses the text rendering back into a tuple set. Throws errc::parse_error
// with a line number on malformed lines; mixing arities raises
// errc::arity_mismatch.
inline NTupleSet parse_str_text(std::string_view input) {
  NTupleSet set;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    const std::size_t nl = input.find('\n', pos);
    std::string_view line = input.substr(pos, nl == std::string_view::npos ? input.size() - pos
                                                                           : nl - pos);
    pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() != '(' || line.back() != ')')
      throw Error(errc::parse_error,
                  "line " + std::to_string(line_no) + ": expected (entity, ..., value)");
    const auto fields = detail::split_str_fields(line.substr(1, line.size() - 2), line_no);
    if (fields.size() < 3)
      throw Error(errc::parse_error, "line " + std::to_string(line_no) +
                                         ": need at least 2 entities and a value");
    NTuple t;
    t.entity_keys.assign(fields.begin(), fields.end() - 1);
    t.value = Cell::from_raw(fields.back());
    set.add(std::move(t));
  }
  return set;
}

// Parses the JSONL rendering. The `number` field, if present, is ignored
// on read and recomputed from `raw` so the invariant between the two
// always holds.
inline NTupleSet parse_str_jsonl(std::string_view input) {
  NTupleSet set;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    const std::size_t nl = input.find('\n', pos);
    std::string_view line = input.substr(pos, nl == std::string_view::npos ? input.size() - pos
                                                                           : nl - pos);
    pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("entities") || !j.contains("value"))
      throw Error(errc::parse_error,
                  "line " + std::to_string(line_no) + ": expected {entities, value}");
    NTuple t;
    for (const auto& e : j.at("entities")) {
      if (!e.is_string())
        throw Error(errc::parse_error,
                    "line " + std::to_string(line_no) + ": entities must be strings");
      t.entity_keys.push_back(e.get<std::string>());
    }
    const auto& v = j.at("value");
    if (!v.is_object() || !v.contains("raw") || !v.at("raw").is_string())
      throw Error(errc::parse_error,
                  "line " + std::to_string(line_no) + ": value must be {raw, number?}");
    t.value = Cell::from_raw(v.at("raw").get<std::string>());
    set.add(std::move(t));
  }
  return set;
}

}  // namespace chartkit
