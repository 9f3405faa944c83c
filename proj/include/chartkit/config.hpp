#pragma once

// Key-value config file handling for the batch CLI. Format: one
// `key = value` per line, `#` starts a comment, blank lines ignored.
// Unknown keys are rejected so typos fail loudly before any work starts.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chartkit/errors.hpp"
#include "chartkit/sim/pipeline.hpp"
#include "chartkit/text.hpp"

namespace chartkit {

inline std::map<std::string, std::string> parse_key_values(std::istream& in,
                                                           std::string_view origin) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos)
      throw Error(errc::config_invalid, std::string(origin) + ":" + std::to_string(line_no) +
                                            ": expected key = value");
    const std::string key(text::trim(trimmed.substr(0, eq)));
    const std::string value(text::trim(trimmed.substr(eq + 1)));
    if (key.empty())
      throw Error(errc::config_invalid,
                  std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second)
      throw Error(errc::config_invalid, std::string(origin) + ":" + std::to_string(line_no) +
                                            ": duplicate key '" + key + "'");
  }
  return out;
}

enum class LlmMode { mock, http };

// Settings for `simulate`, read from the config file. The API key is
// never placed in the file; only the name of the environment variable
// holding it is.
struct SimulateConfig {
  LlmMode mode = LlmMode::mock;
  std::string base_url;
  std::string http_path = "/v1/chat/completions";
  std::string model = "unknown";
  double temperature = 0.7;
  std::string api_key_env = "CHARTKIT_API_KEY";
  std::filesystem::path mock_responses;  // optional canned-response JSONL
  int max_retries = 3;
  int concurrency = 4;
  sim::SandboxConfig sandbox;

  std::string api_key() const {
    const char* v = std::getenv(api_key_env.c_str());
    return v ? v : "";
  }
};

namespace detail {

inline int to_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw Error(errc::config_invalid, key + ": expected integer, got '" + value + "'");
  return out;
}

inline double to_double(const std::string& key, const std::string& value) {
  double out = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw Error(errc::config_invalid, key + ": expected number, got '" + value + "'");
  return out;
}

inline bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(errc::config_invalid, key + ": expected true/false, got '" + value + "'");
}

inline std::vector<std::string> split_list(const std::string& value, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(value);
  while (std::getline(ss, cur, sep)) {
    const auto t = text::trim(cur);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace detail

inline SimulateConfig parse_simulate_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::config_invalid, "cannot open config file " + path.string());
  const auto kv = parse_key_values(in, path.string());

  SimulateConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "llm.mode") {
      if (value == "mock") cfg.mode = LlmMode::mock;
      else if (value == "http") cfg.mode = LlmMode::http;
      else throw Error(errc::config_invalid, "llm.mode: expected mock or http");
    } else if (key == "llm.base_url") {
      cfg.base_url = value;
    } else if (key == "llm.path") {
      cfg.http_path = value;
    } else if (key == "llm.model") {
      cfg.model = value;
    } else if (key == "llm.temperature") {
      cfg.temperature = detail::to_double(key, value);
    } else if (key == "llm.api_key_env") {
      cfg.api_key_env = value;
    } else if (key == "mock.responses") {
      cfg.mock_responses = value;
    } else if (key == "pipeline.max_retries") {
      cfg.max_retries = detail::to_int(key, value);
    } else if (key == "pipeline.concurrency") {
      cfg.concurrency = detail::to_int(key, value);
    } else if (key == "sandbox.command") {
      cfg.sandbox.command = detail::split_list(value, ' ');
      if (cfg.sandbox.command.empty())
        throw Error(errc::config_invalid, "sandbox.command: empty command");
    } else if (key == "sandbox.script_filename") {
      cfg.sandbox.script_filename = value;
    } else if (key == "sandbox.timeout_seconds") {
      cfg.sandbox.timeout = std::chrono::seconds(detail::to_int(key, value));
    } else if (key == "sandbox.image_extensions") {
      cfg.sandbox.image_extensions = detail::split_list(value, ',');
    } else if (key == "sandbox.isolate_network") {
      cfg.sandbox.isolate_network = detail::to_bool(key, value);
    } else if (key == "sandbox.keep_scratch") {
      cfg.sandbox.keep_scratch = detail::to_bool(key, value);
    } else {
      throw Error(errc::config_invalid, "unknown config key '" + key + "'");
    }
  }
  if (cfg.mode == LlmMode::http && cfg.base_url.empty())
    throw Error(errc::config_invalid, "llm.base_url is required when llm.mode = http");
  if (cfg.max_retries < 1) throw Error(errc::config_invalid, "pipeline.max_retries must be >= 1");
  if (cfg.concurrency < 1) throw Error(errc::config_invalid, "pipeline.concurrency must be >= 1");
  return cfg;
}

// Canned responses for mock mode: a JSONL file with one JSON string per
// line, consumed in call order.
inline std::vector<std::string> load_mock_responses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::config_invalid, "cannot open mock responses " + path.string());
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_string())
      throw Error(errc::config_invalid, path.string() + ":" + std::to_string(line_no) +
                                            ": expected a JSON string per line");
    out.push_back(j.get<std::string>());
  }
  return out;
}

}  // namespace chartkit
