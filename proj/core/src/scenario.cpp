#include "tempscale/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tempscale/errors.hpp"
#include "tempscale/rng.hpp"

namespace tempscale {

void Scenario::validate() const {
    for (const auto& q : questions) {
        if (q.id.empty()) throw ConfigError("scenario: question with empty id");
        if (q.wrong_answers.size() != q.wrong_weights.size()) {
            throw ConfigError("scenario: " + q.id + ": wrong_answers/wrong_weights size mismatch");
        }
        double wsum = 0.0;
        for (double w : q.wrong_weights) {
            if (w < 0.0) throw ConfigError("scenario: " + q.id + ": negative wrong weight");
            wsum += w;
        }
        if (!q.wrong_answers.empty() && std::abs(wsum - 1.0) > 1e-9) {
            throw ConfigError("scenario: " + q.id + ": wrong weights must sum to 1");
        }
        for (const auto& [t, p] : q.p_correct) {
            if (p < 0.0 || p > 1.0) throw ConfigError("scenario: " + q.id + ": p out of [0,1]");
            if (t.is_zero() && p != 0.0 && p != 1.0) {
                throw ConfigError("scenario: " + q.id + ": p at T=0 must be 0 or 1");
            }
        }
    }
}

const ScenarioQuestion& Scenario::question(const std::string& id) const {
    for (const auto& q : questions) {
        if (q.id == id) return q;
    }
    throw BackendError("scenario: unknown question " + id);
}

namespace {

nlohmann::ordered_json entropy_to_json(const EntropyModel& m) {
    return {{"mean_base", m.mean_base}, {"temp_slope", m.temp_slope}, {"spread", m.spread}};
}

EntropyModel entropy_from_json(const nlohmann::json& j) {
    EntropyModel m;
    m.mean_base = j.at("mean_base").get<double>();
    m.temp_slope = j.at("temp_slope").get<double>();
    m.spread = j.at("spread").get<double>();
    return m;
}

}  // namespace

nlohmann::ordered_json Scenario::to_json() const {
    nlohmann::ordered_json out;
    out["questions"] = nlohmann::ordered_json::array();
    for (const auto& q : questions) {
        nlohmann::ordered_json jq;
        jq["id"] = q.id;
        jq["label"] = to_string(q.label);
        jq["correct_answer"] = q.correct_answer;
        jq["wrong_answers"] = q.wrong_answers;
        jq["wrong_weights"] = q.wrong_weights;
        nlohmann::ordered_json jp;
        for (const auto& [t, p] : q.p_correct) jp[t.str()] = p;
        jq["p_correct"] = std::move(jp);
        jq["entropy_correct"] = entropy_to_json(q.entropy_correct);
        jq["entropy_incorrect"] = entropy_to_json(q.entropy_incorrect);
        jq["token_count_base"] = q.token_count_base;
        jq["token_count_spread"] = q.token_count_spread;
        out["questions"].push_back(std::move(jq));
    }
    return out;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
    Scenario s;
    try {
        for (const auto& jq : j.at("questions")) {
            ScenarioQuestion q;
            q.id = jq.at("id").get<std::string>();
            q.correct_answer = jq.at("correct_answer").get<std::string>();
            q.wrong_answers = jq.at("wrong_answers").get<std::vector<std::string>>();
            q.wrong_weights = jq.at("wrong_weights").get<std::vector<double>>();
            for (const auto& [k, v] : jq.at("p_correct").items()) {
                q.p_correct[Temperature::parse(k)] = v.get<double>();
            }
            q.entropy_correct = entropy_from_json(jq.at("entropy_correct"));
            q.entropy_incorrect = entropy_from_json(jq.at("entropy_incorrect"));
            q.token_count_base = jq.value("token_count_base", 256);
            q.token_count_spread = jq.value("token_count_spread", 64);
            std::string label = jq.value("label", "medium");
            if (label == "easy") q.label = DifficultyLabel::Easy;
            else if (label == "hard") q.label = DifficultyLabel::Hard;
            else if (label == "impossible") q.label = DifficultyLabel::Impossible;
            else q.label = DifficultyLabel::Medium;
            s.questions.push_back(std::move(q));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: malformed json: ") + e.what());
    }
    s.validate();
    return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("scenario is not valid JSON: " + path.string());
    return from_json(j);
}

void Scenario::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << to_json().dump(2) << '\n';
    if (!out) throw ConfigError("cannot write scenario: " + path.string());
}

Scenario scenario_from_taxonomy(int n_easy, int n_medium, int n_hard, int n_impossible,
                                const std::vector<Temperature>& temperatures,
                                uint64_t seed) {
    if (n_easy < 0 || n_medium < 0 || n_hard < 0 || n_impossible < 0) {
        throw DomainError("scenario_from_taxonomy: negative counts");
    }
    std::vector<Temperature> positive;
    for (const auto& t : temperatures) {
        if (!t.is_zero()) positive.push_back(t);
    }
    std::sort(positive.begin(), positive.end());
    if (n_hard > 0 && positive.size() < 2) {
        throw DomainError("scenario_from_taxonomy: hard questions need >= 2 positive temperatures");
    }
    bool has_zero = positive.size() != temperatures.size();

    Scenario s;
    int qi = 0;
    auto make_question = [&](DifficultyLabel label, int idx) {
        ScenarioQuestion q;
        q.label = label;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s-%02d", to_string(label).c_str(), idx);
        q.id = buf;
        q.correct_answer = std::to_string(100 + qi);
        CounterRng rng(seed, fnv1a64("scenario"), static_cast<uint64_t>(qi));
        for (int w = 0; w < 3; ++w) {
            q.wrong_answers.push_back(std::to_string(1000 + qi * 10 + w));
        }
        q.wrong_weights = {0.5, 0.3, 0.2};
        if (has_zero) {
            q.p_correct[Temperature::from_tenths(0)] = label == DifficultyLabel::Easy ? 1.0 : 0.0;
        }
        switch (label) {
            case DifficultyLabel::Easy:
                // Near-certain per-sample success: easy questions must be able
                // to reach two-stage voting consensus (all temperatures
                // unanimous within a handful of rounds), which requires solve
                // rates at the top of the >= 0.5 band.
                for (const auto& t : positive) {
                    q.p_correct[t] = 0.95 + 0.045 * rng.uniform();
                }
                break;
            case DifficultyLabel::Medium:
                for (const auto& t : positive) {
                    q.p_correct[t] = 0.005 + 0.045 * rng.uniform();
                }
                break;
            case DifficultyLabel::Hard: {
                // round-robin from the highest temperature downward
                size_t slot = positive.size() - 1 - (static_cast<size_t>(idx) % positive.size());
                for (size_t i = 0; i < positive.size(); ++i) {
                    q.p_correct[positive[i]] = i == slot ? 0.001 + 0.009 * rng.uniform() : 0.0;
                }
                break;
            }
            case DifficultyLabel::Impossible:
                for (const auto& t : positive) q.p_correct[t] = 0.0;
                break;
        }
        if (label == DifficultyLabel::Easy || label == DifficultyLabel::Medium) {
            q.entropy_correct = {0.6, 0.5, 0.2};
            q.entropy_incorrect = {1.4, 0.8, 0.3};
        } else {
            // overlapping distributions: no reliable correct/incorrect gap
            q.entropy_correct = {1.2, 0.8, 0.4};
            q.entropy_incorrect = {1.2, 0.8, 0.4};
        }
        ++qi;
        s.questions.push_back(std::move(q));
    };

    for (int i = 0; i < n_easy; ++i) make_question(DifficultyLabel::Easy, i);
    for (int i = 0; i < n_medium; ++i) make_question(DifficultyLabel::Medium, i);
    for (int i = 0; i < n_hard; ++i) make_question(DifficultyLabel::Hard, i);
    for (int i = 0; i < n_impossible; ++i) make_question(DifficultyLabel::Impossible, i);
    s.validate();
    return s;
}

SimulatedSampler::SimulatedSampler(Scenario scenario) : scenario_(std::move(scenario)) {
    scenario_.validate();
}

SampleBatch SimulatedSampler::sample(const SampleRequest& request) {
    const ScenarioQuestion& q = scenario_.question(request.question_id);
    auto pit = q.p_correct.find(request.temperature);
    if (pit == q.p_correct.end()) {
        throw BackendError("scenario: question " + q.id + " has no temperature " +
                           request.temperature.str());
    }
    double p = pit->second;
    double temp = request.temperature.value();

    SampleBatch batch;
    batch.records.reserve(static_cast<size_t>(request.count));
    for (long i = 0; i < request.count; ++i) {
        int idx = request.first_index + static_cast<int>(i);
        CounterRng rng = trace_stream(request.run_seed, q.id, request.temperature.tenths(),
                                      request.round, idx);
        TraceRecord r;
        r.run_id = request.run_id;
        r.question_id = q.id;
        r.temperature = request.temperature;
        r.round = request.round;
        r.sample_index = idx;

        bool correct = request.temperature.is_zero() ? p >= 1.0 : rng.bernoulli(p);
        std::string answer;
        if (correct || q.wrong_answers.empty()) {
            answer = q.correct_answer;
            correct = true;
        } else {
            double u = rng.uniform();
            double acc = 0.0;
            answer = q.wrong_answers.back();
            for (size_t w = 0; w < q.wrong_answers.size(); ++w) {
                acc += q.wrong_weights[w];
                if (u < acc) {
                    answer = q.wrong_answers[w];
                    break;
                }
            }
        }
        const EntropyModel& em = correct ? q.entropy_correct : q.entropy_incorrect;
        double h = rng.normal(em.mean_base + em.temp_slope * temp, em.spread);
        r.mean_entropy = std::max(h, 0.0);
        r.token_count = q.token_count_base +
                        static_cast<int>(rng.below(static_cast<uint64_t>(2 * q.token_count_spread + 1))) -
                        q.token_count_spread;
        r.answer_raw = "The final answer is \\boxed{" + answer + "}.";
        r.answer_extracted = answer;
        r.correct = correct ? Verdict::Correct : Verdict::Incorrect;
        batch.records.push_back(std::move(r));
    }
    return batch;
}

}  // namespace tempscale
