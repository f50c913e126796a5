#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "stub_server.hpp"
#include "tempscale/errors.hpp"
#include "tempscale/http_backend.hpp"

using namespace tempscale;
using tempscale::testing::StubServer;

namespace {

EndpointConfig fast_config(const StubServer& server) {
    EndpointConfig c;
    c.base_url = server.base_url();
    c.model = "stub-model";
    c.chunk_size = 4;
    c.max_retries = 3;
    c.backoff_base_ms = 1;
    c.backoff_cap_ms = 2;
    return c;
}

SampleRequest request(long count, int temp_tenths = 7) {
    SampleRequest r;
    r.run_id = "run1";
    r.question_id = "q1";
    r.prompt = "solve it";
    r.temperature = Temperature::from_tenths(temp_tenths);
    r.count = count;
    return r;
}

}  // namespace

TEST_CASE("count=8 with chunk=4 issues two requests for 8 records") {
    StubServer server;
    HttpSampler sampler(fast_config(server));
    auto batch = sampler.sample(request(8));
    CHECK(batch.records.size() == 8);
    CHECK(batch.deficit == 0);
    CHECK(server.requests_seen == 2);
    CHECK(batch.records[0].answer_raw->find("\\boxed{42}") != std::string::npos);
    // sample indices are consecutive across chunks
    for (int i = 0; i < 8; ++i) CHECK(batch.records[i].sample_index == i);
}

TEST_CASE("temperature is passed through verbatim") {
    StubServer server;
    HttpSampler sampler(fast_config(server));
    sampler.sample(request(1, 11));
    CHECK(server.last_temperature == doctest::Approx(1.1));
}

TEST_CASE("short delivery surfaces a deficit, not an error") {
    StubServer server;
    server.short_deliver = 3;
    HttpSampler sampler(fast_config(server));
    auto batch = sampler.sample(request(4));
    CHECK(batch.records.size() == 3);
    CHECK(batch.deficit == 1);
    CHECK(!batch.note.empty());
}

TEST_CASE("transient failures are retried with backoff") {
    StubServer server;
    server.fail_first = 2;
    HttpSampler sampler(fast_config(server));
    auto batch = sampler.sample(request(4));
    CHECK(batch.records.size() == 4);
    CHECK(server.requests_seen == 3);
}

TEST_CASE("retries exhaust into a backend error") {
    StubServer server;
    server.fail_first = 100;
    HttpSampler sampler(fast_config(server));
    CHECK_THROWS_WITH_AS(sampler.sample(request(4)), doctest::Contains("retries exhausted"),
                         BackendError);
}

TEST_CASE("T=0 with count>1 is rejected before dispatch") {
    StubServer server;
    HttpSampler sampler(fast_config(server));
    CHECK_THROWS_AS(sampler.sample(request(2, 0)), BackendError);
    CHECK(server.requests_seen == 0);

    auto batch = sampler.sample(request(1, 0));
    CHECK(batch.records.size() == 1);
}

TEST_CASE("auth token travels from the environment") {
    StubServer server;
    server.require_auth = true;

    auto config = fast_config(server);
    config.auth_env = "TEMPSCALE_TEST_TOKEN";
    CHECK_THROWS_AS(HttpSampler{config}, BackendError);  // env var unset

    setenv("TEMPSCALE_TEST_TOKEN", "secret-token", 1);
    HttpSampler sampler(config);
    CHECK(sampler.sample(request(1)).records.size() == 1);

    setenv("TEMPSCALE_TEST_TOKEN", "wrong", 1);
    HttpSampler bad(config);
    CHECK_THROWS_WITH_AS(bad.sample(request(1)), doctest::Contains("auth"), BackendError);
    unsetenv("TEMPSCALE_TEST_TOKEN");
}

TEST_CASE("top-k logprobs produce lower-bound mean entropy") {
    StubServer server;
    auto config = fast_config(server);
    config.request_logprobs = true;
    HttpSampler sampler(config);
    auto batch = sampler.sample(request(1));
    REQUIRE(batch.records.size() == 1);
    REQUIRE(batch.records[0].mean_entropy.has_value());
    CHECK(*batch.records[0].mean_entropy == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(batch.entropy_is_lower_bound);
}

TEST_CASE("non-retryable status fails immediately") {
    StubServer server;
    server.fail_first = 1;
    server.fail_status = 400;
    HttpSampler sampler(fast_config(server));
    CHECK_THROWS_AS(sampler.sample(request(1)), BackendError);
    CHECK(server.requests_seen == 1);
}
