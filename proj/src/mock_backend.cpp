#include "treejudge/mock_backend.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace treejudge {

using nlohmann::json;

int64_t MockBackend::count_tokens(std::string_view text) {
  int64_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

LlmBackend::RawCompletion MockBackend::do_complete(
    const std::vector<ChatMessage>& messages, const SamplingParams& params,
    CallTag tag) {
  (void)params;  // recorded in the trace by the base class; sampling is scripted

  std::string rendered;
  for (const auto& m : messages) {
    rendered.append(m.content);
    rendered.push_back('\n');
  }

  std::string response;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const MockRule* matched = nullptr;
    std::size_t matched_index = 0;
    for (std::size_t i = 0; i < script_.rules.size(); ++i) {
      const MockRule& rule = script_.rules[i];
      if (rule.tag && *rule.tag != tag) continue;
      if (!rule.pattern.empty() &&
          rendered.find(rule.pattern) == std::string::npos) {
        continue;
      }
      matched = &rule;
      matched_index = i;
      break;
    }

    if (matched == nullptr) {
      response = script_.default_response;
    } else {
      uint64_t hit = hits_[matched_index]++;
      if (matched->fail_transport > 0 &&
          hit < static_cast<uint64_t>(matched->fail_transport)) {
        throw TransportError("scripted transport failure", 1);
      }
      const uint64_t after_failures =
          hit - static_cast<uint64_t>(std::max(matched->fail_transport, 0));
      if (matched->degenerate < 0 ||
          (matched->degenerate > 0 &&
           after_failures < static_cast<uint64_t>(matched->degenerate))) {
        return RawCompletion{"", count_tokens(rendered), 0};
      }
      if (!matched->responses.empty()) {
        response = matched->responses[hit % matched->responses.size()];
      } else if (matched->bernoulli) {
        response = rng_.bernoulli(matched->bernoulli->p)
                       ? matched->bernoulli->success
                       : matched->bernoulli->failure;
      } else {
        response = script_.default_response;
      }
    }
  }

  return RawCompletion{response, count_tokens(rendered),
                       count_tokens(response)};
}

MockScript MockScript::parse(const std::string& json_text) {
  json doc = json::parse(json_text);
  MockScript script;
  script.default_response = doc.value("default_response", "Yes");
  for (const auto& item : doc.value("rules", json::array())) {
    MockRule rule;
    if (item.contains("call_tag") && item["call_tag"] != "*") {
      auto tag = call_tag_from_string(item["call_tag"].get<std::string>());
      if (!tag) {
        throw std::runtime_error("mock script: unknown call_tag '" +
                                 item["call_tag"].get<std::string>() + "'");
      }
      rule.tag = *tag;
    }
    rule.pattern = item.value("pattern", "");
    if (item.contains("responses")) {
      for (const auto& r : item["responses"]) {
        rule.responses.push_back(r.get<std::string>());
      }
    } else if (item.contains("response")) {
      rule.responses.push_back(item["response"].get<std::string>());
    }
    if (item.contains("bernoulli")) {
      const auto& b = item["bernoulli"];
      MockRule::Bernoulli bern;
      bern.p = b.at("p").get<double>();
      bern.success = b.value("success", "Yes");
      bern.failure = b.value("failure", "No");
      rule.bernoulli = bern;
    }
    rule.fail_transport = item.value("fail_transport", 0);
    if (item.contains("degenerate")) {
      rule.degenerate = item["degenerate"].is_boolean()
                            ? (item["degenerate"].get<bool>() ? -1 : 0)
                            : item["degenerate"].get<int>();
    }
    script.rules.push_back(std::move(rule));
  }
  return script;
}

MockScript MockScript::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open mock script '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace treejudge
