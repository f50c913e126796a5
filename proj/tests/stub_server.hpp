#pragma once

// Fault-injection stub for an OpenAI-compatible chat-completions endpoint.
// Runs cpp-httplib on a loopback port; failure behavior is scripted per test.

#include <atomic>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace tempscale::testing {

class StubServer {
public:
    // `fail_first`: number of leading requests answered with `fail_status`.
    // `short_deliver`: if > 0, return that many choices regardless of `n`.
    StubServer() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            ++requests_seen;
            if (require_auth && req.get_header_value("Authorization") != "Bearer " + token) {
                res.status = 401;
                res.set_content("{\"error\":\"unauthorized\"}", "application/json");
                return;
            }
            if (fail_first > 0) {
                --fail_first;
                res.status = fail_status;
                res.set_content("{\"error\":\"transient\"}", "application/json");
                return;
            }
            auto body = nlohmann::json::parse(req.body);
            long n = body.value("n", 1L);
            last_temperature = body.value("temperature", -1.0);
            long deliver = short_deliver > 0 ? std::min<long>(short_deliver, n) : n;
            nlohmann::json choices = nlohmann::json::array();
            for (long i = 0; i < deliver; ++i) {
                nlohmann::json choice = {
                    {"index", i},
                    {"message", {{"role", "assistant"},
                                 {"content", "The answer is \\boxed{" + answer + "}."}}},
                };
                if (body.value("logprobs", false)) {
                    // two tokens, uniform over two alternatives each: entropy ln 2
                    nlohmann::json content = nlohmann::json::array();
                    for (int t = 0; t < 2; ++t) {
                        content.push_back(
                            {{"token", "x"},
                             {"logprob", -0.6931471805599453},
                             {"top_logprobs",
                              nlohmann::json::array(
                                  {{{"token", "x"}, {"logprob", -0.6931471805599453}},
                                   {{"token", "y"}, {"logprob", -0.6931471805599453}}})}});
                    }
                    choice["logprobs"] = {{"content", content}};
                }
                choices.push_back(std::move(choice));
            }
            nlohmann::json reply = {{"id", "stub"},
                                    {"object", "chat.completion"},
                                    {"model", body.value("model", "stub-model")},
                                    {"choices", choices}};
            res.set_content(reply.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    std::string answer = "42";
    std::atomic<int> fail_first{0};
    int fail_status = 503;
    std::atomic<long> short_deliver{0};
    bool require_auth = false;
    std::string token = "secret-token";
    std::atomic<int> requests_seen{0};
    std::atomic<double> last_temperature{-1.0};

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace tempscale::testing
