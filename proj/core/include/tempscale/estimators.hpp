#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "tempscale/trace.hpp"

namespace tempscale {

/// Pass@K as a function of K, for one question or for the whole dataset.
struct PassKCurve {
    std::string scope;  // question_id or "dataset"
    Temperature temperature;
    std::vector<std::pair<long, double>> points;  // (K, value), K strictly increasing
};

/// Unbiased Pass@K = 1 - C(N-C,K)/C(N,K), evaluated in log space and clamped
/// to [0,1]. Exact 0 when C=0, exact 1 when K > N-C.
double pass_at_k(long n_samples, long n_correct, long k);

/// C/N. Throws on N = 0.
double avg_at_n(long n_samples, long n_correct);

/// True iff any tally over the temperature set has at least one correct
/// sample.
bool pass_all(std::span<const QuestionTally> tallies);

/// Default K grid: powers of two up to and including n (1, 2, 4, ..., n).
std::vector<long> default_k_grid(long n);

/// Dataset Pass@K at one temperature: mean over questions of per-question
/// pass_at_k. Every question must have n_samples >= max(k_grid).
PassKCurve dataset_curve(std::span<const QuestionTally> tallies,
                         std::span<const long> k_grid);

/// Dataset Pass@budget when a total budget is split across temperatures.
/// Per question the miss probability is the product of per-temperature
/// hypergeometric misses (draws at different temperatures are independent).
/// `allocations[b]` gives the per-temperature draw counts for budget_grid[b].
PassKCurve multi_temperature_curve(
    std::span<const QuestionTally> tallies,
    std::span<const long> budget_grid,
    const std::vector<std::map<Temperature, long>>& allocations);

/// CSV rows `scope,question_id,temperature,K,value` for a set of curves.
std::string curves_to_csv(std::span<const PassKCurve> curves);

}  // namespace tempscale
