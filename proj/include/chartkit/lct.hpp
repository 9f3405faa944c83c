#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chartkit/errors.hpp"
#include "chartkit/text.hpp"

namespace chartkit {

// Strips decorations commonly found in chart labels and parses the rest as
// a signed decimal: leading/trailing whitespace, one leading currency
// symbol ($, EUR sign, GBP sign), a trailing percent sign, and commas used
// as thousands separators. A percent sign is cosmetic; the value is not
// rescaled. Returns nullopt when the remainder is not a number.
inline std::optional<double> normalize_numeric(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (s.empty()) return std::nullopt;

  for (std::string_view cur : {std::string_view("$"), std::string_view("€"),
                               std::string_view("£")}) {
    if (s.starts_with(cur)) {
      s.remove_prefix(cur.size());
      s = text::trim(s);
      break;
    }
  }
  if (s.ends_with('%')) {
    s.remove_suffix(1);
    s = text::trim(s);
  }
  if (s.empty()) return std::nullopt;

  std::string digits;
  digits.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool thousands_sep = s[i] == ',' && i > 0 && i + 1 < s.size() &&
                               s[i - 1] >= '0' && s[i - 1] <= '9' &&
                               s[i + 1] >= '0' && s[i + 1] <= '9';
    if (!thousands_sep) digits.push_back(s[i]);
  }

  double value = 0.0;
  const char* first = digits.data();
  const char* last = first + digits.size();
  if (first != last && *first == '+') ++first;  // from_chars rejects a leading '+'
  if (first == last) return std::nullopt;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

// One table cell. `raw` is the verbatim field text; `numeric` is present
// exactly when `raw` parses under normalize_numeric.
struct Cell {
  std::string raw;
  std::optional<double> numeric;

  static Cell from_raw(std::string raw) {
    Cell c;
    c.numeric = normalize_numeric(raw);
    c.raw = std::move(raw);
    return c;
  }

  bool operator==(const Cell&) const = default;
};

// A rectangular chart table: M column header entities, N row header
// entities, and an N x M grid of cells. Entity and cell text is stored
// verbatim; nothing is normalized at parse time.
struct LctTable {
  std::vector<std::string> col_entities;
  std::vector<std::string> row_entities;
  std::vector<std::vector<Cell>> values;

  std::size_t rows() const { return row_entities.size(); }
  std::size_t cols() const { return col_entities.size(); }

  bool valid() const {
    if (col_entities.empty() || row_entities.empty()) return false;
    if (values.size() != row_entities.size()) return false;
    for (const auto& r : values)
      if (r.size() != col_entities.size()) return false;
    return true;
  }

  // Positions of cells whose raw text is empty. Empty cells are kept by
  // the parser and flagged here, never dropped.
  std::vector<std::pair<std::size_t, std::size_t>> empty_cells() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t n = 0; n < values.size(); ++n)
      for (std::size_t m = 0; m < values[n].size(); ++m)
        if (values[n][m].raw.empty()) out.emplace_back(n, m);
    return out;
  }

  bool operator==(const LctTable&) const = default;
};

namespace detail {

struct RawRow {
  std::vector<std::string> fields;
  std::size_t line_no = 0;
};

// Tokenizes LCT text into rows of fields. Comma separates fields; a field
// may be double-quoted RFC-4180 style, with "" unescaping to one quote.
// Rows end at '\n', '\r', "\r\n", or the literal two-character sequence
// "/n" (accepted on read only, never emitted). Quoted fields may span any
// of these, taking them verbatim.
inline std::vector<RawRow> tokenize_lct(std::string_view t) {
  std::vector<RawRow> rows;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool row_touched = false;  // any byte seen on the current row
  std::size_t line_no = 1;

  const auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
  };
  const auto end_row = [&] {
    if (row_touched) {
      end_field();
      rows.push_back({std::move(fields), line_no});
      fields.clear();
      row_touched = false;
    }
    ++line_no;
  };

  std::size_t i = 0;
  while (i < t.size()) {
    const char c = t[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < t.size() && t[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        // Quotes only open a quoted section at field start; elsewhere
        // they are literal (lenient read).
        row_touched = true;
        if (field.empty())
          in_quotes = true;
        else
          field.push_back('"');
        ++i;
        break;
      case ',':
        row_touched = true;
        end_field();
        ++i;
        break;
      case '\r':
        if (i + 1 < t.size() && t[i + 1] == '\n') ++i;
        ++i;
        end_row();
        break;
      case '\n':
        ++i;
        end_row();
        break;
      case '/':
        if (i + 1 < t.size() && t[i + 1] == 'n') {
          i += 2;
          end_row();
        } else {
          row_touched = true;
          field.push_back(c);
          ++i;
        }
        break;
      default:
        row_touched = true;
        field.push_back(c);
        ++i;
        break;
    }
  }
  end_row();  // flush a final row without trailing newline
  return rows;
}

inline bool lct_field_needs_quoting(std::string_view f) {
  if (f.find_first_of(",\"\n\r") != std::string_view::npos) return true;
  // The read side accepts "/n" as a row break, so defend it on write.
  return f.find("/n") != std::string_view::npos;
}

inline void append_lct_field(std::string& out, std::string_view f) {
  if (!lct_field_needs_quoting(f)) {
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

}  // namespace detail

// Parses LCT text into a table. Line 1 must start with the token `none`
// (case-insensitive) or an empty field, followed by the column entities;
// every following line is a row entity plus one field per column.
//
// Errors: EmptyInput (errc::empty_input, also raised when no data rows
// follow the header), MissingHeader (errc::missing_header), and
// RaggedRowError.
inline LctTable parse_lct(std::string_view input) {
  if (text::trim(input).empty()) throw Error(errc::empty_input, "empty LCT input");

  const std::vector<detail::RawRow> rows = detail::tokenize_lct(input);
  if (rows.empty()) throw Error(errc::empty_input, "empty LCT input");

  const detail::RawRow& header = rows.front();
  if (header.fields.size() < 2)
    throw Error(errc::missing_header,
                "header line has " + std::to_string(header.fields.size()) +
                    " field(s), need at least 2");
  const std::string corner = text::to_lower(std::string(text::trim(header.fields[0])));
  if (!corner.empty() && corner != "none")
    throw Error(errc::missing_header,
                "header line must begin with 'none' or an empty field, got '" +
                    header.fields[0] + "'");

  LctTable table;
  table.col_entities.assign(header.fields.begin() + 1, header.fields.end());
  const std::size_t expected = header.fields.size();

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const detail::RawRow& row = rows[r];
    if (row.fields.size() != expected)
      throw RaggedRowError(row.line_no, expected, row.fields.size());
    table.row_entities.push_back(row.fields[0]);
    std::vector<Cell> cells;
    cells.reserve(expected - 1);
    for (std::size_t m = 1; m < row.fields.size(); ++m)
      cells.push_back(Cell::from_raw(row.fields[m]));
    table.values.push_back(std::move(cells));
  }

  if (table.row_entities.empty())
    throw Error(errc::empty_input, "LCT input has a header but no data rows");
  return table;
}

// Emits the canonical LCT layout: `none,` + column entities on line 1,
// then one line per row. Fields containing comma, quote, newline, or the
// "/n" pair are quoted. parse_lct(serialize_lct(t)) == t field for field.
inline std::string serialize_lct(const LctTable& table) {
  std::string out = "none";
  for (const auto& c : table.col_entities) {
    out.push_back(',');
    detail::append_lct_field(out, c);
  }
  out.push_back('\n');
  for (std::size_t n = 0; n < table.row_entities.size(); ++n) {
    detail::append_lct_field(out, table.row_entities[n]);
    for (const Cell& cell : table.values[n]) {
      out.push_back(',');
      detail::append_lct_field(out, cell.raw);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace chartkit
