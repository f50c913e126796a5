#pragma once

#include <span>
#include <string>
#include <vector>

#include "tempscale/trace.hpp"

namespace tempscale {

/// Next-token distribution as probabilities (normalized on use). For backends
/// exposing only top-k log-probabilities, build with from_top_logprobs; the
/// resulting entropy is a lower-bound approximation and flagged as such.
struct TokenDistribution {
    std::vector<double> probabilities;
    bool truncated = false;  // renormalized top-k, not the full vocabulary

    static TokenDistribution from_logprobs(std::span<const double> logprobs,
                                           bool truncated = false);
};

struct SubsetStats {
    long count = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

/// Correct/incorrect entropy statistics for one grouping key.
struct EntropySplit {
    std::string group;  // question_id or "dataset"
    Temperature temperature;
    SubsetStats all;
    SubsetStats correct;
    SubsetStats incorrect;
    long n_excluded = 0;  // missing mean_entropy or unknown verdict
    // fixed-width histogram over [hist_lo, hist_hi), per subset
    double hist_lo = 0.0;
    double hist_hi = 0.0;
    std::vector<long> hist_correct;
    std::vector<long> hist_incorrect;
};

enum class EntropyGroupBy { Question, Dataset };

inline constexpr int kEntropyHistogramBins = 30;

/// Shannon entropy in nats, with 0*log(0) := 0. Throws on negative entries or
/// a zero-sum vector; tolerates unnormalized input by normalizing first.
double token_entropy(const TokenDistribution& dist);

/// Mean of per-token entropies over one trace.
double trace_mean_entropy(std::span<const TokenDistribution> dists);

/// Grouped correct-vs-incorrect statistics. Records lacking mean_entropy or
/// with an unknown verdict are excluded and counted in n_excluded. Grouping is
/// always per temperature; EntropyGroupBy::Question splits further by question.
std::vector<EntropySplit> split_by_correctness(std::span<const TraceRecord> records,
                                               EntropyGroupBy group_by);

/// CSV rows `group,temperature,subset,count,mean,stddev`.
std::string splits_to_csv(std::span<const EntropySplit> splits);

/// CSV rows `group,temperature,subset,bin_lo,bin_hi,count`.
std::string histograms_to_csv(std::span<const EntropySplit> splits);

}  // namespace tempscale
