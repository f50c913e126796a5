#include "tempscale/trace_store.hpp"

#include <algorithm>
#include <map>

#include "tempscale/errors.hpp"

namespace tempscale {

TraceStore::TraceStore(std::filesystem::path path) : path_(std::move(path)) {
    if (std::filesystem::exists(path_)) {
        records_ = load(path_);
        for (const auto& r : records_) keys_.insert(TraceKey::of(r));
    } else if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
    out_.open(path_, std::ios::app);
    if (!out_) throw StoreError("cannot open store for append: " + path_.string());
}

void TraceStore::append(const TraceRecord& record) {
    record.validate();
    TraceKey key = TraceKey::of(record);
    if (keys_.contains(key)) {
        throw StoreError("duplicate trace key: " + key.str());
    }
    out_ << record.to_jsonl_line() << '\n';
    out_.flush();
    if (!out_) throw StoreError("write failed: " + path_.string());
    keys_.insert(std::move(key));
    records_.push_back(record);
}

std::vector<QuestionTally> TraceStore::tally(const std::string& run_id) const {
    return tally_run(records_, run_id);
}

std::vector<TraceRecord> TraceStore::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open store: " + path.string());
    std::vector<TraceRecord> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(TraceRecord::from_jsonl_line(line));
        } catch (const std::exception& e) {
            throw StoreError(path.string() + ":" + std::to_string(lineno) +
                             ": corrupt record: " + e.what());
        }
    }
    return out;
}

namespace {

std::vector<QuestionTally> tally_impl(std::span<const TraceRecord> records,
                                      const std::string* run_id) {
    std::map<std::pair<std::string, int>, QuestionTally> acc;
    bool seen = false;
    for (const auto& r : records) {
        if (run_id && r.run_id != *run_id) continue;
        seen = true;
        auto& t = acc[{r.question_id, r.temperature.tenths()}];
        t.question_id = r.question_id;
        t.temperature = r.temperature;
        ++t.n_samples;
        if (r.correct == Verdict::Correct) ++t.n_correct;
        if (r.correct == Verdict::Unknown) ++t.n_unknown;
    }
    if (run_id && !seen && !records.empty()) throw StoreError("unknown run_id: " + *run_id);
    std::vector<QuestionTally> out;
    out.reserve(acc.size());
    for (auto& [k, t] : acc) out.push_back(std::move(t));
    return out;
}

}  // namespace

std::vector<QuestionTally> tally_run(std::span<const TraceRecord> records,
                                     const std::string& run_id) {
    return tally_impl(records, &run_id);
}

std::vector<QuestionTally> tally_all(std::span<const TraceRecord> records) {
    return tally_impl(records, nullptr);
}

}  // namespace tempscale
