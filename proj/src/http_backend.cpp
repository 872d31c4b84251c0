#include "treejudge/http_backend.hpp"

#include <httplib.h>

#include <json.hpp>

namespace treejudge {

using nlohmann::json;

namespace {

// Splits "http://host:port/v1" into ("http://host:port", "/v1").
std::pair<std::string, std::string> split_base_url(const std::string& url) {
  auto scheme_end = url.find("://");
  std::size_t authority_start = scheme_end == std::string::npos
                                    ? 0
                                    : scheme_end + 3;
  auto path_start = url.find('/', authority_start);
  if (path_start == std::string::npos) {
    return {url, ""};
  }
  std::string path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

}  // namespace

OpenAiHttpBackend::OpenAiHttpBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
  std::tie(host_, path_prefix_) = split_base_url(config_.base_url);
  set_retry_policy(config_.retry);
}

LlmBackend::RawCompletion OpenAiHttpBackend::do_complete(
    const std::vector<ChatMessage>& messages, const SamplingParams& params,
    CallTag tag) {
  (void)tag;

  json body;
  body["model"] = config_.model;
  body["messages"] = json::array();
  for (const auto& m : messages) {
    body["messages"].push_back(
        {{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  body["temperature"] = params.temperature;
  body["top_p"] = params.top_p;
  body["max_tokens"] = params.max_tokens;

  httplib::Client client(host_);
  client.set_connection_timeout(config_.request_timeout.count(), 0);
  client.set_read_timeout(config_.request_timeout.count(), 0);
  client.set_write_timeout(config_.request_timeout.count(), 0);

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  auto res = client.Post(path_prefix_ + "/chat/completions", headers,
                         body.dump(), "application/json");
  if (!res) {
    throw TransportError("HTTP request to " + host_ + " failed: " +
                             httplib::to_string(res.error()),
                         1);
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransportError("HTTP status " + std::to_string(res->status), 1);
  }
  if (res->status != 200) {
    // 4xx other than 429 will not improve on retry.
    throw DegenerateResponseError("HTTP status " + std::to_string(res->status) +
                                  ": " + res->body);
  }

  json doc;
  try {
    doc = json::parse(res->body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed completion JSON: ") + e.what(),
                         1);
  }

  RawCompletion raw;
  try {
    raw.text = doc.at("choices").at(0).at("message").at("content")
                   .get<std::string>();
  } catch (const json::exception&) {
    throw DegenerateResponseError("completion response carries no message content");
  }
  if (doc.contains("usage")) {
    raw.prompt_tokens = doc["usage"].value("prompt_tokens", 0);
    raw.completion_tokens = doc["usage"].value("completion_tokens", 0);
  }
  return raw;
}

}  // namespace treejudge
