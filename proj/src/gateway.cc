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

#include "ases/gateway.h"

#include <cmath>
#include <thread>

#include "httplib.h"

#include "ases/text.h"

namespace ases {

void FifoSemaphore::Acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  const auto ticket = next_ticket_++;
  cv_.wait(lock, [&] { return ticket == serving_ && in_use_ < slots_; });
  ++serving_;
  ++in_use_;
  cv_.notify_all();
}

void FifoSemaphore::Release() {
  std::lock_guard<std::mutex> lock(mu_);
  --in_use_;
  cv_.notify_all();
}

namespace {

std::atomic<unsigned long long> g_request_counter{0};

std::string NewRequestId() {
  return "ases-" + std::to_string(++g_request_counter);
}

class SlotGuard {
 public:
  explicit SlotGuard(FifoSemaphore& s) : s_(s) { s_.Acquire(); }
  ~SlotGuard() { s_.Release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  FifoSemaphore& s_;
};

[[noreturn]] void SchemaError(std::string_view what) {
  throw RemoteError("adapter response schema mismatch: " + std::string(what));
}

const jsonl::Json& Member(const jsonl::Json& j, const char* field) {
  if (!j.is_object()) SchemaError("expected an object");
  auto it = j.find(field);
  if (it == j.end()) SchemaError(std::string("missing field '") + field + "'");
  return *it;
}

double NumberField(const jsonl::Json& j, const char* field) {
  const auto& v = Member(j, field);
  if (!v.is_number()) SchemaError(std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

}  // namespace

GatewayClient::GatewayClient(AdapterEndpoint endpoint)
    : endpoint_(std::move(endpoint)), slots_(endpoint_.max_in_flight) {
  if (endpoint_.max_in_flight < 1) throw UsageError("max_in_flight must be >= 1");
  if (endpoint_.retry.attempts < 1) throw UsageError("retry attempts must be >= 1");
  std::string url = endpoint_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw UsageError("adapter URL needs a scheme, e.g. http://host:port: '" + url + "'");
  }
  const auto slash = url.find('/', scheme + 3);
  scheme_host_port_ = url.substr(0, slash);
  if (slash != std::string::npos) path_prefix_ = url.substr(slash);
}

GatewayClient::Reply GatewayClient::Send(const std::string& method, const std::string& path,
                                         const std::string& body) {
  const std::string request_id = NewRequestId();
  const std::string full_path = path_prefix_ + path;
  std::string last_error;
  auto backoff = endpoint_.retry.backoff;
  for (int attempt = 1; attempt <= endpoint_.retry.attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    ++attempts_;
    httplib::Result res;
    {
      SlotGuard slot(slots_);
      httplib::Client cli(scheme_host_port_);
      cli.set_connection_timeout(endpoint_.timeout);
      cli.set_read_timeout(endpoint_.timeout);
      cli.set_write_timeout(endpoint_.timeout);
      httplib::Headers headers = {{"X-Request-Id", request_id}};
      res = method == "GET"
                ? cli.Get(full_path, headers)
                : cli.Post(full_path, headers, body, "application/json; charset=utf-8");
    }
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status >= 400) {
      if (res->body.find("length exceeded") != std::string::npos) {
        throw LengthExceededError("length exceeded (request " + request_id + ")");
      }
      throw RemoteError("adapter rejected " + full_path + " with HTTP " +
                        std::to_string(res->status) + " (request " + request_id +
                        "): " + res->body);
    }
    try {
      return {request_id, jsonl::Json::parse(res->body)};
    } catch (const nlohmann::json::exception& e) {
      throw RemoteError("adapter returned invalid JSON (request " + request_id + "): " + e.what());
    }
  }
  throw RemoteError("adapter " + endpoint_.base_url + full_path + " failed after " +
                    std::to_string(endpoint_.retry.attempts) + " attempt(s) (request " +
                    request_id + "): " + last_error);
}

std::vector<TokenScore> GatewayClient::Score(std::string_view context,
                                             std::string_view continuation) {
  if (continuation.empty()) throw UsageError("cannot score an empty continuation");
  jsonl::Json body;
  body["context"] = std::string(context);
  body["continuation"] = std::string(continuation);
  auto reply = Send("POST", "/v1/score", jsonl::Dump(body));
  try {
    return ParseScoreResponse(reply.body, continuation);
  } catch (const RemoteError& e) {
    throw RemoteError(std::string(e.what()) + " (request " + reply.request_id + ")");
  }
}

GenerateResult GatewayClient::Generate(std::string_view input, const GenerateParams& params) {
  jsonl::Json body;
  body["input"] = std::string(input);
  body["max_new_tokens"] = params.max_new_tokens;
  if (params.seed) body["seed"] = *params.seed;
  auto reply = Send("POST", "/v1/generate", jsonl::Dump(body));
  try {
    return ParseGenerateResponse(reply.body, input);
  } catch (const RemoteError& e) {
    throw RemoteError(std::string(e.what()) + " (request " + reply.request_id + ")");
  }
}

AdapterInfo GatewayClient::Info() {
  auto reply = Send("GET", "/v1/info", "");
  return ParseInfoResponse(reply.body);
}

std::vector<TokenScore> ParseScoreResponse(const jsonl::Json& body,
                                           std::string_view continuation,
                                           std::size_t* vocab_size) {
  const auto& vs = Member(body, "vocab_size");
  if (!vs.is_number_integer() || vs.get<long long>() < 1) {
    SchemaError("field 'vocab_size' must be a positive integer");
  }
  const auto v = static_cast<std::size_t>(vs.get<long long>());
  if (vocab_size) *vocab_size = v;
  const double max_entropy = std::log(static_cast<double>(v));

  const auto& tokens = Member(body, "tokens");
  if (!tokens.is_array()) SchemaError("field 'tokens' must be an array");
  const auto cps = text::DecodeUtf8(continuation);
  if (tokens.empty()) SchemaError("field 'tokens' is empty for a non-empty continuation");

  std::vector<TokenScore> out;
  out.reserve(tokens.size());
  std::size_t expected_start = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const auto& t = tokens[k];
    const std::string where = "tokens[" + std::to_string(k) + "]";
    const auto& tok = Member(t, "token");
    if (!tok.is_string()) SchemaError("field '" + where + ".token' must be a string");
    TokenScore ts;
    ts.token = tok.get<std::string>();
    ts.logprob = NumberField(t, "logprob");
    ts.entropy = NumberField(t, "entropy");
    ts.loss = NumberField(t, "loss");
    if (ts.logprob > 1e-12) SchemaError("field '" + where + ".logprob' is positive");
    if (ts.entropy < -1e-12 || ts.entropy > max_entropy + 1e-9) {
      SchemaError("field '" + where + ".entropy' is outside [0, ln vocab_size]");
    }
    if (std::abs(ts.loss + ts.logprob) > 1e-9 * std::max(1.0, std::abs(ts.loss))) {
      throw RemoteError("consistency error: " + where + " has loss != -logprob");
    }
    const auto& span = Member(t, "span");
    if (!span.is_array() || span.size() != 2 || !span[0].is_number_integer() ||
        !span[1].is_number_integer()) {
      SchemaError("field '" + where + ".span' must be [start, end)");
    }
    const auto start = span[0].get<long long>();
    const auto end = span[1].get<long long>();
    if (start != static_cast<long long>(expected_start) || end <= start ||
        end > static_cast<long long>(cps.size())) {
      throw RemoteError("span error: " + where + ".span does not tile the continuation");
    }
    ts.begin = cps[static_cast<std::size_t>(start)].offset;
    ts.end = static_cast<std::size_t>(end) == cps.size()
                 ? continuation.size()
                 : cps[static_cast<std::size_t>(end)].offset;
    expected_start = static_cast<std::size_t>(end);
    out.push_back(std::move(ts));
  }
  if (expected_start != cps.size()) {
    throw RemoteError("span error: token spans stop short of the continuation end");
  }
  return out;
}

AdapterInfo ParseInfoResponse(const jsonl::Json& body) {
  AdapterInfo info;
  const auto& id = Member(body, "identity");
  if (!id.is_string()) SchemaError("field 'identity' must be a string");
  info.identity = id.get<std::string>();
  const auto& ft = Member(body, "fine_tuned");
  if (!ft.is_boolean()) SchemaError("field 'fine_tuned' must be a boolean");
  info.fine_tuned = ft.get<bool>();
  const auto& vs = Member(body, "vocab_size");
  if (!vs.is_number_integer() || vs.get<long long>() < 1) {
    SchemaError("field 'vocab_size' must be a positive integer");
  }
  info.vocab_size = static_cast<std::size_t>(vs.get<long long>());
  return info;
}

GenerateResult ParseGenerateResponse(const jsonl::Json& body, std::string_view input) {
  GenerateResult r;
  const auto& out = Member(body, "output");
  if (!out.is_string()) SchemaError("field 'output' must be a string");
  r.output = out.get<std::string>();
  const auto& det = Member(body, "deterministic");
  if (!det.is_boolean()) SchemaError("field 'deterministic' must be a boolean");
  r.deterministic = det.get<bool>();
  if (!input.empty() && r.output.find(input) != std::string::npos) {
    throw RemoteError("no progress: adapter output repeats the full input");
  }
  return r;
}

RemoteScorer::RemoteScorer(std::shared_ptr<GatewayClient> client)
    : client_(std::move(client)), info_(client_->Info()) {}

std::vector<TokenScore> RemoteScorer::Score(std::string_view context,
                                            std::string_view continuation) const {
  return client_->Score(context, continuation);
}

ScorerDescriptor RemoteScorer::Descriptor() const {
  return {ScorerKind::kRemoteAdapter, info_.identity, info_.fine_tuned};
}

RemoteGenerator::RemoteGenerator(std::shared_ptr<GatewayClient> client, GenerateParams params)
    : client_(std::move(client)),
      params_(params),
      identity_("remote:" + client_->endpoint().base_url) {}

std::string RemoteGenerator::Generate(std::string_view input) {
  return client_->Generate(input, params_).output;
}

std::string RemoteGenerator::Identity() const { return identity_; }

}  // namespace ases
