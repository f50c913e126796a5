#pragma once

#include <string>

#include "tempscale/backend.hpp"

namespace tempscale {

/// OpenAI-compatible chat-completions endpoint.
struct EndpointConfig {
    std::string base_url;  // e.g. "http://127.0.0.1:8089"
    std::string model;
    std::string auth_env;  // env var holding the bearer token; empty = no auth
    long chunk_size = 8;   // completions requested per HTTP call (the `n` field)
    int max_in_flight = 4;
    int timeout_ms = 60000;
    int max_retries = 4;
    int backoff_base_ms = 250;  // doubled per retry, capped
    int backoff_cap_ms = 4000;
    long max_tokens = 4096;
    bool request_logprobs = false;
    int top_logprobs = 20;
};

/// HTTP sampler: batches `count` into chunks, retries transient failures with
/// capped exponential backoff, and reports partial results as a deficit
/// rather than failing the whole request. T=0 with count > 1 is rejected
/// before any request is made.
class HttpSampler : public Sampler {
public:
    explicit HttpSampler(EndpointConfig config);

    SampleBatch sample(const SampleRequest& request) override;

private:
    EndpointConfig config_;
    std::string auth_token_;
};

}  // namespace tempscale
