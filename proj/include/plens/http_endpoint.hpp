// Copyright 2026 The propaganda-lens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP score endpoint.
//
//   GET <endpoint>/accounts/<percent-encoded id>
//   Authorization: Bearer <value of $credential_env>
//
//   200 {"status": "ok", "scores": {...}, "fetched_at": "..."}  ok
//   200 {"status": "suspended" | "id_mismatch"}               permanent
//   401, 403                                                   credential rejected
//   404                                                        id_mismatch
//   410                                                        suspended
//   anything else, or no response                              transient

#ifndef PLENS_HTTP_ENDPOINT_HPP_
#define PLENS_HTTP_ENDPOINT_HPP_

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cctype>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "plens/fetch.hpp"

namespace plens {

inline std::string PercentEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

class HttpScoreEndpoint : public ScoreEndpoint {
 public:
  explicit HttpScoreEndpoint(const ClientConfig &config) {
    if (config.endpoint.empty()) throw UsageError("fetch mode requires an endpoint URL");
    if (config.credential_env.empty()) {
      throw UsageError("fetch mode requires credential_env (a variable name)");
    }
    const char *key = std::getenv(config.credential_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw UsageError("credential variable " + config.credential_env + " is not set");
    }
    credential_ = key;
    // Split "scheme://host[:port][/prefix]".
    const auto scheme_end = config.endpoint.find("://");
    const auto path_start = config.endpoint.find(
        '/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    origin_ = config.endpoint.substr(0, path_start);
    if (path_start != std::string::npos) prefix_ = config.endpoint.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }

  EndpointResponse Fetch(const std::string &account_id) override {
    EndpointResponse resp;
    httplib::Client client(origin_);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    const httplib::Headers headers = {{"Authorization", "Bearer " + credential_}};
    auto res = client.Get(prefix_ + "/accounts/" + PercentEncode(account_id), headers);
    using Kind = EndpointResponse::Kind;
    if (!res) {
      resp.kind = Kind::kTransient;
      resp.detail = httplib::to_string(res.error());
      return resp;
    }
    switch (res->status) {
      case 401:
      case 403: resp.kind = Kind::kCredentialRejected; return resp;
      case 404: resp.kind = Kind::kIdMismatch; return resp;
      case 410: resp.kind = Kind::kSuspended; return resp;
      case 200: break;
      default:
        resp.kind = Kind::kTransient;
        resp.detail = "HTTP " + std::to_string(res->status);
        return resp;
    }
    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("status") ||
        !body["status"].is_string()) {
      resp.kind = Kind::kTransient;
      resp.detail = "malformed response body";
      return resp;
    }
    if (body.contains("fetched_at") && body["fetched_at"].is_string()) {
      resp.fetched_at = ParseIso8601(body["fetched_at"].get<std::string>());
    }
    const auto status = ParseStatus(body["status"].get<std::string>());
    if (!status) {
      resp.kind = Kind::kTransient;
      resp.detail = "unknown status";
      return resp;
    }
    if (*status == AccountStatus::kSuspended) {
      resp.kind = Kind::kSuspended;
    } else if (*status == AccountStatus::kIdMismatch) {
      resp.kind = Kind::kIdMismatch;
    } else {
      // Reuse the store-record validation for the scores object.
      nlohmann::json rec = {{"account_id", account_id},
                            {"status", "ok"},
                            {"fetched_at", "1970-01-01T00:00:00Z"},
                            {"scores", body.value("scores", nlohmann::json())}};
      auto parsed = ParseScoreRecord(rec.dump());
      if (!parsed) {
        resp.kind = Kind::kTransient;
        resp.detail = "invalid scores in response";
        return resp;
      }
      resp.kind = Kind::kOk;
      resp.scores = *parsed->scores;
    }
    return resp;
  }

 private:
  std::string credential_;
  std::string origin_;
  std::string prefix_;
};

}  // namespace plens

#endif  // PLENS_HTTP_ENDPOINT_HPP_
