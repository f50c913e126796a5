#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempscale/backend.hpp"
#include "tempscale/plan.hpp"
#include "tempscale/temperature.hpp"

namespace tempscale {

/// Mean entropy of a simulated trace at temperature T is drawn from
/// Normal(mean_base + temp_slope * T, spread), clamped to be nonnegative.
struct EntropyModel {
    double mean_base = 1.0;
    double temp_slope = 0.5;
    double spread = 0.3;
};

struct ScenarioQuestion {
    std::string id;
    std::string correct_answer;
    std::vector<std::string> wrong_answers;
    std::vector<double> wrong_weights;  // normalized categorical over wrong answers
    std::map<Temperature, double> p_correct;
    EntropyModel entropy_correct;
    EntropyModel entropy_incorrect;
    int token_count_base = 256;
    int token_count_spread = 64;
    DifficultyLabel label = DifficultyLabel::Medium;  // construction-time label
};

/// Per-question, per-temperature generative model standing in for a real
/// model's solve rates.
struct Scenario {
    std::vector<ScenarioQuestion> questions;

    void validate() const;
    const ScenarioQuestion& question(const std::string& id) const;

    nlohmann::ordered_json to_json() const;
    static Scenario from_json(const nlohmann::json& j);
    static Scenario load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

/// Synthetic dataset following the two-temperature difficulty taxonomy:
///   easy       near-certain success (p in [0.95, 0.995]) at every T>0, and
///              deterministic success at T=0
///   medium     p in [0.005, 0.05] at every T>0
///   hard       p in [0.001, 0.01] at exactly one T>0, assigned round-robin
///              from the highest temperature downward; 0 elsewhere
///   impossible p = 0 everywhere
/// Easy/medium questions have a lower-mean entropy model for correct traces;
/// hard/impossible use one overlapping model for both.
Scenario scenario_from_taxonomy(int n_easy, int n_medium, int n_hard, int n_impossible,
                                const std::vector<Temperature>& temperatures,
                                uint64_t seed);

/// Pure counter-seeded sampler over a scenario: each record is a function of
/// (scenario, run_seed, question_id, temperature, round, sample_index) only.
class SimulatedSampler : public Sampler {
public:
    explicit SimulatedSampler(Scenario scenario);

    SampleBatch sample(const SampleRequest& request) override;

    const Scenario& scenario() const { return scenario_; }

private:
    Scenario scenario_;
};

}  // namespace tempscale
