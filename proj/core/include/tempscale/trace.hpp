#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "tempscale/temperature.hpp"

namespace tempscale {

enum class Verdict { Correct, Incorrect, Unknown };

/// One sampled completion. The tuple (run_id, question_id, temperature,
/// round, sample_index) identifies a record uniquely within a store.
struct TraceRecord {
    std::string run_id;
    std::string question_id;
    Temperature temperature;
    int round = 1;
    int sample_index = 0;
    std::optional<std::string> answer_raw;  // full completion text; prunable
    std::optional<std::string> answer_extracted;
    Verdict correct = Verdict::Unknown;
    std::optional<double> mean_entropy;  // nats
    int token_count = 0;

    /// Throws ValidationError naming the offending field.
    void validate() const;

    nlohmann::ordered_json to_json() const;
    static TraceRecord from_json(const nlohmann::json& j);

    std::string to_jsonl_line() const;
    static TraceRecord from_jsonl_line(const std::string& line);

    bool is_correct() const { return correct == Verdict::Correct; }
};

/// Key used for duplicate detection and deterministic ordering.
struct TraceKey {
    std::string run_id;
    std::string question_id;
    int temp_tenths = 0;
    int round = 0;
    int sample_index = 0;

    static TraceKey of(const TraceRecord& r) {
        return {r.run_id, r.question_id, r.temperature.tenths(), r.round, r.sample_index};
    }
    friend auto operator<=>(const TraceKey&, const TraceKey&) = default;
    std::string str() const;
};

/// Per (question, temperature) sample/correct counts; the substrate of all
/// Pass@K / Avg@N estimation.
struct QuestionTally {
    std::string question_id;
    Temperature temperature;
    long n_samples = 0;
    long n_correct = 0;
    long n_unknown = 0;  // verifier abstentions, counted as not correct
};

}  // namespace tempscale
