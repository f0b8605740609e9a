// Copyright (c) 2026 ASES Authors
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

// Client side of the model adapter protocol (JSON over HTTP, UTF-8):
//
//   POST /v1/score     {context, continuation}
//                      -> {tokens: [{token, logprob, entropy, loss,
//                                    span: [start, end)}], vocab_size}
//   POST /v1/generate  {input, max_new_tokens, seed?}
//                      -> {output, deterministic}
//   GET  /v1/info      -> {identity, fine_tuned, vocab_size}
//
// Spans are code point offsets into the continuation and must tile it.
// Every score response is checked for loss == -logprob. Each request carries
// a client-generated X-Request-Id header that adapters echo back.

#ifndef ASES_GATEWAY_H_
#define ASES_GATEWAY_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ases/jsonl.h"
#include "ases/orchestrator.h"
#include "ases/scoring.h"

namespace ases {

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds backoff{200};  // doubled after every failure
};

struct AdapterEndpoint {
  std::string base_url;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
};

struct AdapterInfo {
  std::string identity;
  bool fine_tuned = false;
  std::size_t vocab_size = 0;
};

struct GenerateParams {
  int max_new_tokens = 128;
  std::optional<long long> seed;
};

struct GenerateResult {
  std::string output;
  bool deterministic = false;
};

// Counting semaphore that admits waiters in arrival order.
class FifoSemaphore {
 public:
  explicit FifoSemaphore(std::size_t slots) : slots_(slots) {}
  void Acquire();
  void Release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t slots_;
  std::size_t in_use_ = 0;
  unsigned long long next_ticket_ = 0;
  unsigned long long serving_ = 0;
};

class GatewayClient {
 public:
  explicit GatewayClient(AdapterEndpoint endpoint);

  std::vector<TokenScore> Score(std::string_view context, std::string_view continuation);
  GenerateResult Generate(std::string_view input, const GenerateParams& params);
  AdapterInfo Info();

  const AdapterEndpoint& endpoint() const { return endpoint_; }
  // HTTP attempts made so far, retries included.
  std::size_t attempts_made() const { return attempts_.load(); }

 private:
  struct Reply {
    std::string request_id;
    jsonl::Json body;
  };
  Reply Send(const std::string& method, const std::string& path, const std::string& body);

  AdapterEndpoint endpoint_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  FifoSemaphore slots_;
  std::atomic<std::size_t> attempts_{0};
};

// Response validation, exposed for tests. Throws RemoteError naming the
// offending field or token.
std::vector<TokenScore> ParseScoreResponse(const jsonl::Json& body,
                                           std::string_view continuation,
                                           std::size_t* vocab_size = nullptr);
AdapterInfo ParseInfoResponse(const jsonl::Json& body);
GenerateResult ParseGenerateResponse(const jsonl::Json& body, std::string_view input);

class RemoteScorer : public SequenceScorer {
 public:
  explicit RemoteScorer(std::shared_ptr<GatewayClient> client);

  std::vector<TokenScore> Score(std::string_view context,
                                std::string_view continuation) const override;
  ScorerDescriptor Descriptor() const override;
  std::size_t VocabSize() const override { return info_.vocab_size; }

 private:
  std::shared_ptr<GatewayClient> client_;
  AdapterInfo info_;
};

class RemoteGenerator : public Generator {
 public:
  RemoteGenerator(std::shared_ptr<GatewayClient> client, GenerateParams params);

  std::string Generate(std::string_view input) override;
  std::string Identity() const override;
  bool ConcurrentSafe() const override { return true; }

 private:
  std::shared_ptr<GatewayClient> client_;
  GenerateParams params_;
  std::string identity_;
};

}  // namespace ases

#endif  // ASES_GATEWAY_H_
