#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempscale/backend.hpp"
#include "tempscale/plan.hpp"
#include "tempscale/trace.hpp"

namespace tempscale {

/// Two-stage voting parameters. Both thresholds are fractions: a temperature
/// is confident when its modal answer holds at least tau_intra of its pool,
/// and a question exits when the modal per-temperature majority holds at
/// least tau_cross of all M temperatures. min_rounds gates exit eligibility
/// (a 1/1 pool is always unanimous).
struct VotingParams {
    std::vector<Temperature> temperatures;
    int max_rounds = 8;
    double tau_intra = 0.8;
    double tau_cross = 1.0;
    int min_rounds = 4;

    void validate() const;
};

struct IntraVote {
    std::string answer;
    double fraction = 0.0;
};

/// Modal answer of a pool with its frequency fraction; ties break toward the
/// lexicographically smaller answer.
IntraVote intra_vote(const std::vector<std::string>& pool);

/// Modal answer across per-temperature majorities; the fraction denominator
/// is the full temperature count M (temperatures that failed intra voting
/// contribute no vote but still count).
IntraVote cross_vote(const std::vector<std::string>& majorities, int temperature_count);

enum class VoteDecision { Continue, Exit };

struct VoteOutcome {
    std::string question_id;
    int round = 0;
    std::map<Temperature, IntraVote> intra;
    bool all_intra_passed = false;
    std::optional<IntraVote> cross;
    VoteDecision decision = VoteDecision::Continue;
};

/// Algorithm state for one voting run.
class VotingSession {
public:
    VotingSession(std::vector<std::string> questions, VotingParams params);

    int round() const { return round_; }
    const VotingParams& params() const { return params_; }
    const std::vector<std::string>& questions() const { return questions_; }

    bool is_active(const std::string& question_id) const;
    std::optional<int> exit_round(const std::string& question_id) const;
    /// Rounds actually sampled for this question (differs from round() only
    /// after a sampler failure aborted a round for it).
    int rounds_completed(const std::string& question_id) const;
    const std::vector<std::string>& pool(const std::string& question_id,
                                         Temperature t) const;
    long active_count() const;

    /// One round of Algorithm 1: every temperature contributes one new trace
    /// per active question, then Stage 1 intra voting and (only if every
    /// temperature passed) Stage 2 cross voting. A sampler failure aborts the
    /// round atomically for that question; it is retried next round. Sampled
    /// records are appended to `sink`.
    std::vector<VoteOutcome> step_round(Sampler& sampler, const std::string& run_id,
                                        uint64_t run_seed,
                                        std::vector<TraceRecord>& sink,
                                        const std::map<std::string, std::string>& prompts = {});

private:
    struct QuestionState {
        bool active = true;
        int rounds_completed = 0;
        std::optional<int> exit_round;
        std::map<Temperature, std::vector<std::string>> pools;
    };

    VotingParams params_;
    std::vector<std::string> questions_;  // sorted for deterministic iteration
    std::map<std::string, QuestionState> state_;
    int round_ = 0;
};

struct QuestionUsage {
    std::string question_id;
    std::optional<int> exit_round;  // absent = survived to the fallback grid
    long samples_used = 0;
};

struct VotingRunResult {
    std::vector<QuestionUsage> usage;
    std::vector<TraceRecord> records;
    long samples_used = 0;
    long samples_full_grid = 0;
    double delta_c = 0.0;
    long exited = 0;
    long survived = 0;
};

/// Full early-exit run: voting rounds until max_rounds or all questions exit,
/// then the fallback plan on the survivors. ΔC is accounted against
/// `baseline_plan` (the full temperature grid) over all questions.
VotingRunResult run_voting(const std::vector<std::string>& questions,
                           const VotingParams& params, Sampler& sampler,
                           const TemperaturePlan& fallback_plan,
                           const TemperaturePlan& baseline_plan,
                           const std::string& run_id, uint64_t run_seed,
                           const std::map<std::string, std::string>& prompts = {});

/// 1 - used/full. Errors when full = 0 or used > full.
double delta_c(long samples_used, long samples_full_grid);

/// CSV rows `question_id,exit_round,samples_used` ("survived" when no exit).
std::string usage_to_csv(const std::vector<QuestionUsage>& usage);

}  // namespace tempscale
