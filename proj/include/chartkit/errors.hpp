#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chartkit {

enum class errc {
  empty_input,
  ragged_row,
  missing_header,
  incomplete_grid,
  conflicting_duplicate,
  invalid_permutation,
  arity_mismatch,
  parse_error,
  empty_dataset,
  empty_batch,
  config_invalid,
  llm_transport,
  validation_failed,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

class RaggedRowError : public Error {
public:
  RaggedRowError(std::size_t line_no, std::size_t expected, std::size_t got)
      : Error(errc::ragged_row,
              "ragged row at line " + std::to_string(line_no) + ": expected " +
                  std::to_string(expected) + " fields, got " + std::to_string(got)),
        line_no(line_no), expected(expected), got(got) {}

  std::size_t line_no;
  std::size_t expected;
  std::size_t got;
};

class ConflictingDuplicateError : public Error {
public:
  ConflictingDuplicateError(std::string row, std::string col)
      : Error(errc::conflicting_duplicate,
              "conflicting duplicate value at (" + row + ", " + col + ")"),
        row_entity(std::move(row)), col_entity(std::move(col)) {}

  std::string row_entity;
  std::string col_entity;
};

class IncompleteGridError : public Error {
public:
  explicit IncompleteGridError(std::vector<std::pair<std::string, std::string>> missing)
      : Error(errc::incomplete_grid, describe(missing)), missing(std::move(missing)) {}

  std::vector<std::pair<std::string, std::string>> missing;

private:
  static std::string describe(const std::vector<std::pair<std::string, std::string>>& m) {
    std::string s = "incomplete grid, " + std::to_string(m.size()) + " position(s) missing";
    const std::size_t shown = m.size() < 4 ? m.size() : 4;
    for (std::size_t i = 0; i < shown; ++i)
      s += (i ? ", " : ": ") + ("(" + m[i].first + ", " + m[i].second + ")");
    if (m.size() > shown) s += ", ...";
    return s;
  }
};

class LlmTransportError : public Error {
public:
  LlmTransportError(int status, const std::string& what)
      : Error(errc::llm_transport, what), status(status) {}

  int status;
};

}  // namespace chartkit
