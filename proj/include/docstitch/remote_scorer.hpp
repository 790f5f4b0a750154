// Copyright 2026 The docstitch Authors.
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

#pragma once

// Client for the quality-estimation scoring service.
//
//   POST /score   {"pairs":[{"src":..,"tgt":..},..]} -> {"scores":[..],"backend":".."}
//   GET  /health  {"status":"ok","backend":".."}
//
// The service accepts at most 128 pairs per request.

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "docstitch/error.hpp"
#include "docstitch/slide.hpp"

namespace docstitch {

inline constexpr std::size_t kMaxServiceBatch = 128;

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{200};
  double backoff_factor = 2.0;
  std::chrono::seconds timeout{60};
};

namespace detail {

inline bool is_transient_status(int status) { return status == 429 || status >= 500; }

inline std::vector<double> post_batch(httplib::Client &client, std::span<const TextPair> pairs,
                                      std::size_t batch_index, const RetryPolicy &retry) {
  nlohmann::json body;
  body["pairs"] = nlohmann::json::array();
  for (const auto &p : pairs) body["pairs"].push_back({{"src", p.src}, {"tgt", p.tgt}});
  const std::string payload = body.dump();

  auto backoff = retry.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= retry.max_attempts; ++attempt) {
    auto res = client.Post("/score", payload, "application/json");
    if (res && res->status >= 200 && res->status < 300) {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception &e) {
        throw ProtocolError("batch " + std::to_string(batch_index) + ": response is not JSON: " + e.what());
      }
      if (!reply.is_object() || !reply.contains("scores") || !reply["scores"].is_array()) {
        throw ProtocolError("batch " + std::to_string(batch_index) + ": response has no scores array");
      }
      const auto &scores = reply["scores"];
      if (scores.size() != pairs.size()) {
        throw ProtocolError("batch " + std::to_string(batch_index) + ": " + std::to_string(scores.size()) +
                            " scores for " + std::to_string(pairs.size()) + " pairs");
      }
      std::vector<double> out;
      out.reserve(scores.size());
      for (const auto &s : scores) {
        if (!s.is_number()) throw ProtocolError("batch " + std::to_string(batch_index) + ": non-numeric score");
        out.push_back(s.get<double>());
      }
      return out;
    }
    if (res) {
      last_error = "HTTP " + std::to_string(res->status);
      if (!is_transient_status(res->status)) break;
    } else {
      last_error = httplib::to_string(res.error());
    }
    if (attempt < retry.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<long>(backoff.count() * retry.backoff_factor));
    }
  }
  throw ScoringError("scoring service failed on batch " + std::to_string(batch_index) + ": " + last_error,
                     batch_index, true);
}

}  // namespace detail

// Scores `pairs` in order through the service at `endpoint`
// (e.g. "http://127.0.0.1:8080").  ScoringError::window_index() is the
// index of the first pair of the failing batch.
inline std::vector<double> remote_score_batch(std::span<const TextPair> pairs, const std::string &endpoint,
                                              std::size_t batch_size = 64, const RetryPolicy &retry = {}) {
  if (batch_size < 1 || batch_size > kMaxServiceBatch) {
    throw ConfigError("batch_size must lie in [1," + std::to_string(kMaxServiceBatch) + "]");
  }
  httplib::Client client(endpoint);
  client.set_connection_timeout(retry.timeout);
  client.set_read_timeout(retry.timeout);
  client.set_write_timeout(retry.timeout);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (std::size_t begin = 0, batch = 0; begin < pairs.size(); begin += batch_size, ++batch) {
    const std::size_t len = std::min(batch_size, pairs.size() - begin);
    std::vector<double> got;
    try {
      got = detail::post_batch(client, pairs.subspan(begin, len), batch, retry);
    } catch (const ScoringError &e) {
      throw ScoringError(e.what(), begin, e.retryable());
    }
    out.insert(out.end(), got.begin(), got.end());
  }
  return out;
}

inline ScorerHandle remote_scorer(std::string endpoint, std::size_t batch_size = 64, RetryPolicy retry = {}) {
  std::string id = "remote:" + endpoint;
  return {std::move(id),
          [endpoint = std::move(endpoint), batch_size, retry](std::span<const TextPair> pairs) {
            return remote_score_batch(pairs, endpoint, batch_size, retry);
          },
          0};
}

}  // namespace docstitch
