#include "tempscale/http_backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tempscale/entropy.hpp"
#include "tempscale/errors.hpp"

namespace tempscale {

namespace {

using nlohmann::json;

// Mean per-token entropy over the renormalized top-k logprobs, if present.
std::optional<double> entropy_from_logprobs(const json& choice) {
    if (!choice.contains("logprobs") || choice["logprobs"].is_null()) return std::nullopt;
    const json& content = choice["logprobs"].value("content", json::array());
    if (content.empty()) return std::nullopt;
    double sum = 0.0;
    long n = 0;
    for (const auto& tok : content) {
        std::vector<double> lps;
        for (const auto& top : tok.value("top_logprobs", json::array())) {
            lps.push_back(top.at("logprob").get<double>());
        }
        if (lps.empty() && tok.contains("logprob")) lps.push_back(tok["logprob"].get<double>());
        if (lps.empty()) continue;
        sum += token_entropy(TokenDistribution::from_logprobs(lps, /*truncated=*/true));
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

HttpSampler::HttpSampler(EndpointConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw ConfigError("http backend: base_url is required");
    if (config_.chunk_size < 1) throw ConfigError("http backend: chunk_size must be >= 1");
    if (!config_.auth_env.empty()) {
        const char* tok = std::getenv(config_.auth_env.c_str());
        if (!tok || !*tok) {
            throw BackendError("http backend: auth env var " + config_.auth_env + " is not set");
        }
        auth_token_ = tok;
    }
}

SampleBatch HttpSampler::sample(const SampleRequest& request) {
    if (request.temperature.is_zero() && request.count > 1) {
        throw BackendError("T=0 admits a single deterministic trace; got count=" +
                           std::to_string(request.count));
    }

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(0, config_.timeout_ms * 1000);
    client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (!auth_token_.empty()) headers.emplace("Authorization", "Bearer " + auth_token_);

    SampleBatch batch;
    long remaining = request.count;
    int next_index = request.first_index;

    while (remaining > 0) {
        long n = std::min(remaining, config_.chunk_size);
        json body = {
            {"model", config_.model},
            {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature.value()},
            {"n", n},
            {"max_tokens", config_.max_tokens},
        };
        if (config_.request_logprobs) {
            body["logprobs"] = true;
            body["top_logprobs"] = config_.top_logprobs;
        }

        json reply;
        int backoff = config_.backoff_base_ms;
        int attempt = 0;
        for (;;) {
            auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                                   "application/json");
            if (res) {
                if (res->status == 401 || res->status == 403) {
                    throw BackendError("http backend: auth failure (status " +
                                       std::to_string(res->status) + ")");
                }
                if (res->status == 200) {
                    reply = json::parse(res->body, nullptr, false);
                    if (reply.is_discarded() || !reply.contains("choices")) {
                        throw BackendError("http backend: malformed response body");
                    }
                    break;
                }
                if (!retryable_status(res->status)) {
                    throw BackendError("http backend: status " + std::to_string(res->status) +
                                       ": " + res->body);
                }
            }
            if (++attempt > config_.max_retries) {
                throw BackendError("http backend: retries exhausted for question " +
                                   request.question_id);
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff = std::min(backoff * 2, config_.backoff_cap_ms);
        }

        const json& choices = reply["choices"];
        for (const auto& choice : choices) {
            TraceRecord r;
            r.run_id = request.run_id;
            r.question_id = request.question_id;
            r.temperature = request.temperature;
            r.round = request.round;
            r.sample_index = next_index++;
            r.answer_raw = choice.at("message").at("content").get<std::string>();
            if (auto h = entropy_from_logprobs(choice)) {
                r.mean_entropy = *h;
                batch.entropy_is_lower_bound = true;
            }
            if (choice.contains("usage")) {
                r.token_count = choice["usage"].value("completion_tokens", 0);
            } else if (reply.contains("usage") && n == 1) {
                r.token_count = reply["usage"].value("completion_tokens", 0);
            }
            batch.records.push_back(std::move(r));
        }
        long got = static_cast<long>(choices.size());
        if (got < n) {
            // server under-delivered; report the shortfall instead of retrying
            batch.deficit += n - got;
        }
        remaining -= n;
    }
    if (batch.deficit > 0) {
        batch.note = "server returned " + std::to_string(batch.deficit) +
                     " fewer completions than requested";
    }
    return batch;
}

}  // namespace tempscale
