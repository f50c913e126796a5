#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempscale/backend.hpp"
#include "tempscale/plan.hpp"
#include "tempscale/report.hpp"
#include "tempscale/scenario.hpp"
#include "tempscale/verify.hpp"
#include "tempscale/voting.hpp"

namespace tempscale {

struct QuestionEntry {
    std::string question_id;
    std::string prompt;
    VerifierSpec verifier;
};

enum class BackendKind { Simulated, Http };

/// Resolved run configuration. Parsed from a JSON file; `${VAR}` in any
/// string value is replaced from the environment.
struct RunConfig {
    std::string run_id;
    uint64_t seed = 0;
    std::filesystem::path out_dir;
    BackendKind backend = BackendKind::Simulated;
    std::filesystem::path scenario_path;  // simulated backend
    nlohmann::json endpoint;              // http backend settings (EndpointConfig fields)
    TemperaturePlan plan;
    std::optional<VotingParams> voting;
    std::vector<Temperature> voting_excluded;  // fallback subset = plan minus these
    std::vector<QuestionEntry> questions;
    bool prune_raw = false;
    bool resume = false;

    nlohmann::ordered_json echo;  // resolved config for provenance

    static RunConfig load(const std::filesystem::path& path);
    static RunConfig from_json(nlohmann::json j);
};

/// Holds `<out_dir>/.lock` for the lifetime of a run; a second runner on the
/// same directory fails fast.
class RunLock {
public:
    explicit RunLock(const std::filesystem::path& out_dir);
    ~RunLock();
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

private:
    std::filesystem::path path_;
};

/// Wraps any backend: extracts the answer per the verifier spec, checks it,
/// optionally drops answer_raw, and exports judge-stub traces for
/// out-of-band validation.
class VerifyingSampler : public Sampler {
public:
    VerifyingSampler(Sampler& inner, std::map<std::string, VerifierSpec> specs,
                     bool prune_raw, std::filesystem::path flagged_path = {});

    SampleBatch sample(const SampleRequest& request) override;

    bool saw_lower_bound_entropy() const { return lower_bound_entropy_; }
    long unknown_count() const { return unknown_count_; }

private:
    Sampler& inner_;
    std::map<std::string, VerifierSpec> specs_;
    bool prune_raw_;
    std::filesystem::path flagged_path_;
    bool lower_bound_entropy_ = false;
    long unknown_count_ = 0;
};

std::unique_ptr<Sampler> make_backend(const RunConfig& config);

/// Full-grid (or budget-split) sweep: samples every (question, temperature)
/// allocation, persists traces to <out_dir>/<run_id>.jsonl, writes the report
/// and CSVs. Resumable: existing records are kept and only missing sample
/// indices are drawn.
RunReport cmd_sweep(const RunConfig& config);

/// Two-stage voting early-exit run followed by the fallback subset sweep on
/// survivors; the report carries the exit log and ΔC against the full grid.
RunReport cmd_vote(const RunConfig& config);

/// Recompute a report from stored traces alone (no resampling). Multiple
/// stores are merged; run_id filtering is off when `run_id` is empty.
RunReport cmd_report(const std::vector<std::filesystem::path>& store_paths,
                     const std::filesystem::path& out_dir, const std::string& run_id = "",
                     const ReportOptions& options = {});

}  // namespace tempscale
