/*
 * Copyright 2026 The sqlbias Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"
#include "sqlbias/errors.hpp"
#include "sqlbias/relevance.hpp"

namespace sqlbias::relevance {

namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("judge endpoint needs a scheme: " + url);
  auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

/// OpenAI-style completions client. One completion request per call.
class HttpJudge final : public JudgeClient {
 public:
  explicit HttpJudge(HttpJudgeConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty())
      throw ConfigError("judge endpoint not configured");
  }

  std::string complete(const std::string& prompt) override {
    ParsedUrl url = split_url(config_.endpoint);
    httplib::Client client(url.origin);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    if (!config_.api_token.empty())
      client.set_bearer_token_auth(config_.api_token);

    json body;
    body["model"] = config_.model;
    body["prompt"] = prompt;
    body["temperature"] = config_.temperature;
    body["max_tokens"] = 8;

    auto res = client.Post(url.path, body.dump(), "application/json");
    if (!res)
      throw JudgeUnavailable("judge endpoint unreachable: " +
                             httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
      throw JudgeUnavailable("judge endpoint returned HTTP " +
                             std::to_string(res->status));
    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception& e) {
      throw JudgeUnavailable(std::string("judge reply is not JSON: ") +
                             e.what());
    }
    // Accept both completions ("text") and chat ("message.content") shapes.
    if (reply.contains("choices") && reply["choices"].is_array() &&
        !reply["choices"].empty()) {
      const auto& choice = reply["choices"][0];
      if (choice.contains("text")) return choice["text"].get<std::string>();
      if (choice.contains("message") && choice["message"].contains("content"))
        return choice["message"]["content"].get<std::string>();
    }
    throw JudgeUnavailable("judge reply held no completion text");
  }

 private:
  HttpJudgeConfig config_;
};

}  // namespace

std::unique_ptr<JudgeClient> make_http_judge(const HttpJudgeConfig& config) {
  return std::make_unique<HttpJudge>(config);
}

}  // namespace sqlbias::relevance
