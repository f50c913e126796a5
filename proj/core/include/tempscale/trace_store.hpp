#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tempscale/trace.hpp"

namespace tempscale {

/// Append-only JSONL store, one TraceRecord per line. A single writer owns the
/// file; readers may load concurrently and observe a prefix of the appends.
class TraceStore {
public:
    /// Opens (creating if needed) the store for appending. Existing records
    /// are loaded so duplicate detection and resume work across restarts.
    explicit TraceStore(std::filesystem::path path);
    TraceStore(const TraceStore&) = delete;
    TraceStore& operator=(const TraceStore&) = delete;

    const std::filesystem::path& path() const { return path_; }

    /// Validates, rejects duplicate keys (store unchanged), writes one line
    /// and flushes so readers see whole records only.
    void append(const TraceRecord& record);

    bool contains(const TraceKey& key) const { return keys_.contains(key); }

    const std::vector<TraceRecord>& records() const { return records_; }

    std::vector<QuestionTally> tally(const std::string& run_id) const;

    /// Read-only load; throws StoreError naming the 1-based line number of
    /// any corrupt line.
    static std::vector<TraceRecord> load(const std::filesystem::path& path);

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::vector<TraceRecord> records_;
    std::set<TraceKey> keys_;
};

/// Tallies for one run over an in-memory snapshot. correct=unknown counts as
/// not correct and is surfaced via n_unknown. Throws StoreError if the run id
/// matches no record.
std::vector<QuestionTally> tally_run(std::span<const TraceRecord> records,
                                     const std::string& run_id);

/// As tally_run but over all records regardless of run id (merged stores).
std::vector<QuestionTally> tally_all(std::span<const TraceRecord> records);

}  // namespace tempscale
