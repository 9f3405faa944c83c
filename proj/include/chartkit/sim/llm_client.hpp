#pragma once

#include <atomic>
#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chartkit/errors.hpp"
#include "chartkit/sim/prompts.hpp"
#include "chartkit/text.hpp"

namespace chartkit::sim {

struct ChatRequest {
  std::string model;
  std::string system_text;
  std::string user_text;
  double temperature = 0.7;
};

// Minimal chat-completion-shaped contract; any provider exposing this
// shape can sit behind it. Implementations must be callable from
// concurrent pipeline jobs.
class LlmClient {
public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Removes a leading ``` fence line (with or without a language tag) and a
// trailing ``` fence. Responses without fences are returned verbatim.
inline std::string strip_code_fences(std::string_view response) {
  std::string_view s = text::trim(response);
  if (!s.starts_with("```") && !s.ends_with("```")) return std::string(response);
  if (s.starts_with("```")) {
    const auto nl = s.find('\n');
    s = nl == std::string_view::npos ? std::string_view{} : s.substr(nl + 1);
  }
  if (s.ends_with("```")) {
    s.remove_suffix(3);
    s = text::trim(s);
  }
  return std::string(text::trim(s));
}

// Scripted client for tests: hands out canned responses in call order and
// counts calls.
class MockLlmClient : public LlmClient {
public:
  MockLlmClient() = default;
  explicit MockLlmClient(std::vector<std::string> responses)
      : responses_(std::move(responses)) {}

  std::string complete(const ChatRequest&) override {
    std::lock_guard lock(mutex_);
    ++calls_;
    if (next_ >= responses_.size())
      throw LlmTransportError(0, "mock response queue exhausted after " +
                                     std::to_string(responses_.size()) + " responses");
    return responses_[next_++];
  }

  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }

private:
  mutable std::mutex mutex_;
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
  std::size_t calls_ = 0;
};

// Offline stand-in for smoke runs: the data stage echoes the seed table
// back, the image stage returns a fixed Python script that writes a tiny
// chart.png. Stages are told apart by the system text.
class EchoMockClient : public LlmClient {
public:
  std::string complete(const ChatRequest& request) override {
    ++calls_;
    if (request.system_text == default_data_prompt().system_text) {
      const auto open = request.user_text.find("<data>");
      const auto close = request.user_text.rfind("</data>");
      if (open == std::string::npos || close == std::string::npos || close <= open)
        throw LlmTransportError(0, "echo mock: no <data> slot in user text");
      const auto begin = open + 6;
      return std::string(
          text::trim(std::string_view(request.user_text).substr(begin, close - begin)));
    }
    return "with open('chart.png', 'wb') as f:\n    f.write(b'\\x89PNG')\n";
  }

  std::size_t calls() const { return calls_.load(); }

private:
  std::atomic<std::size_t> calls_{0};
};

}  // namespace chartkit::sim
