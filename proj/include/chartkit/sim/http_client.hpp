#pragma once

// HTTP transport for chat-completion endpoints. Kept out of llm_client.hpp
// so that tests and the pipeline do not pay for the httplib include.

#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "chartkit/errors.hpp"
#include "chartkit/sim/llm_client.hpp"

namespace chartkit::sim {

struct HttpClientConfig {
  std::string base_url;                          // e.g. http://localhost:8000
  std::string path = "/v1/chat/completions";
  std::string api_key;                           // empty -> no Authorization header
  int timeout_seconds = 120;
};

class HttpLlmClient : public LlmClient {
public:
  explicit HttpLlmClient(HttpClientConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty())
      throw Error(errc::config_invalid, "llm.base_url is required for http mode");
  }

  std::string complete(const ChatRequest& request) override {
    nlohmann::ordered_json body;
    body["model"] = request.model;
    body["messages"] = nlohmann::ordered_json::array(
        {{{"role", "system"}, {"content", request.system_text}},
         {{"role", "user"}, {"content", request.user_text}}});
    body["temperature"] = request.temperature;

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!res)
      throw LlmTransportError(0, "no response from " + config_.base_url +
                                     ": " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw LlmTransportError(res->status,
                              "endpoint returned status " + std::to_string(res->status));

    const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty() ||
        !parsed["choices"][0].contains("message"))
      throw LlmTransportError(res->status, "malformed completion response body");
    return parsed["choices"][0]["message"].value("content", std::string{});
  }

private:
  HttpClientConfig config_;
};

}  // namespace chartkit::sim
