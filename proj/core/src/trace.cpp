#include "tempscale/trace.hpp"

#include <cmath>
#include <sstream>

#include "tempscale/errors.hpp"

namespace tempscale {

void TraceRecord::validate() const {
    if (run_id.empty()) throw ValidationError("trace record: run_id is empty");
    if (question_id.empty()) throw ValidationError("trace record: question_id is empty");
    if (temperature.tenths() < 0) throw ValidationError("trace record: temperature < 0");
    if (round < 1) throw ValidationError("trace record: round < 1");
    if (sample_index < 0) throw ValidationError("trace record: sample_index < 0");
    if (token_count < 0) throw ValidationError("trace record: token_count < 0");
    if (mean_entropy) {
        if (!std::isfinite(*mean_entropy) || *mean_entropy < 0.0) {
            throw ValidationError("trace record: mean_entropy must be finite and >= 0");
        }
    }
}

nlohmann::ordered_json TraceRecord::to_json() const {
    nlohmann::ordered_json j;
    j["run_id"] = run_id;
    j["question_id"] = question_id;
    j["temperature"] = temperature.value();
    j["round"] = round;
    j["sample_index"] = sample_index;
    if (answer_raw) j["answer_raw"] = *answer_raw;
    if (answer_extracted) j["answer_extracted"] = *answer_extracted;
    if (correct != Verdict::Unknown) j["correct"] = (correct == Verdict::Correct);
    if (mean_entropy) j["mean_entropy"] = *mean_entropy;
    j["token_count"] = token_count;
    return j;
}

TraceRecord TraceRecord::from_json(const nlohmann::json& j) {
    TraceRecord r;
    try {
        r.run_id = j.at("run_id").get<std::string>();
        r.question_id = j.at("question_id").get<std::string>();
        r.temperature = Temperature::from_value(j.at("temperature").get<double>());
        r.round = j.at("round").get<int>();
        r.sample_index = j.at("sample_index").get<int>();
        if (j.contains("answer_raw")) r.answer_raw = j["answer_raw"].get<std::string>();
        if (j.contains("answer_extracted")) r.answer_extracted = j["answer_extracted"].get<std::string>();
        if (j.contains("correct")) {
            r.correct = j["correct"].get<bool>() ? Verdict::Correct : Verdict::Incorrect;
        }
        if (j.contains("mean_entropy")) r.mean_entropy = j["mean_entropy"].get<double>();
        r.token_count = j.value("token_count", 0);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed trace record: ") + e.what());
    }
    r.validate();
    return r;
}

std::string TraceRecord::to_jsonl_line() const {
    return to_json().dump();
}

TraceRecord TraceRecord::from_jsonl_line(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ValidationError("unparseable JSONL line");
    return from_json(j);
}

std::string TraceKey::str() const {
    std::ostringstream os;
    os << run_id << "/" << question_id << "/T=" << Temperature::from_tenths(temp_tenths).str()
       << "/r" << round << "/i" << sample_index;
    return os.str();
}

}  // namespace tempscale
