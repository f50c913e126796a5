#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempscale/entropy.hpp"
#include "tempscale/estimators.hpp"
#include "tempscale/plan.hpp"
#include "tempscale/trace.hpp"
#include "tempscale/voting.hpp"

namespace tempscale {

struct ReportOptions {
    /// Temperatures for the two-axis difficulty classification; when absent
    /// the lowest and highest positive temperatures present are used.
    std::optional<Temperature> difficulty_t1;
    std::optional<Temperature> difficulty_t2;
    double theta_easy = 0.5;
    /// Budget grid for the multi-temperature curve; defaults to powers of two
    /// up to the total stored budget.
    std::vector<long> budget_grid;
};

/// Everything the artifact reports about one run, a pure function of the
/// stored trace records plus options.
struct RunReport {
    std::string run_id;
    std::vector<PassKCurve> per_temperature_curves;
    std::optional<PassKCurve> multi_temperature;
    std::map<Temperature, double> pass_all_single;  // fraction solved at one T
    double pass_all_multi = 0.0;                    // fraction solved anywhere
    long questions_total = 0;
    long questions_solved_multi = 0;
    Temperature difficulty_t1, difficulty_t2;
    std::map<std::string, DifficultyLabel> difficulty;
    std::vector<EntropySplit> entropy_by_temperature;
    long unknown_verdicts = 0;
    bool entropy_is_lower_bound = false;

    // present only for voting runs
    bool has_voting = false;
    std::vector<QuestionUsage> voting_usage;
    long samples_used = 0;
    long samples_full_grid = 0;
    double delta_c = 0.0;

    nlohmann::ordered_json config_echo;  // resolved config + seed, provenance

    nlohmann::ordered_json to_json() const;

    /// report.json plus curves/entropy/exit/difficulty CSVs.
    void write(const std::filesystem::path& out_dir) const;
};

/// Recompute all estimator, entropy, and difficulty outputs from stored
/// traces alone.
RunReport build_report(std::span<const TraceRecord> records, const std::string& run_id,
                       const ReportOptions& options = {});

}  // namespace tempscale
