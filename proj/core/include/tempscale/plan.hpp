#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tempscale/temperature.hpp"

namespace tempscale {

/// Ordered temperature grid with per-temperature sample allocations.
/// If 0.0 is present its allocation is at most 1 (deterministic decode admits
/// a single distinct trace).
struct TemperaturePlan {
    std::vector<Temperature> temperatures;  // strictly increasing
    std::map<Temperature, long> samples;

    long total_samples() const;
    void validate() const;

    /// Plan restricted to temperatures not in `excluded`.
    TemperaturePlan without(const std::set<Temperature>& excluded) const;
};

enum class DifficultyLabel { Easy, Medium, Hard, Impossible };

std::string to_string(DifficultyLabel label);

/// Grid {t_min, t_min+step, ..., t_max} in exact decimal tenths; allocation
/// samples_per_temp everywhere except a single sample at T=0. The step must
/// land exactly on t_max.
TemperaturePlan build_grid(Temperature t_min, Temperature t_max, Temperature step,
                           long samples_per_temp);

/// Even split of `total` across the temperatures, low to high. Each gets
/// floor(total/M); the remainder goes one each to the highest temperatures.
/// T=0, when present, takes min(total, 1) off the top before splitting.
std::map<Temperature, long> split_budget(long total,
                                         const std::vector<Temperature>& temperatures);

/// Greedy cover, highest temperature first: a temperature joins the subset
/// iff it solves a question no already-chosen temperature solves. The result
/// covers the union of all solved sets.
std::vector<Temperature> minimal_subset(
    const std::map<Temperature, std::set<std::string>>& solved_sets);

/// Two-temperature difficulty taxonomy. `theta_easy` is the minimum solve
/// rate at both temperatures for the easy label.
DifficultyLabel classify_difficulty(double avg_t1, double avg_t2, long c1, long c2,
                                    double theta_easy = 0.5);

}  // namespace tempscale
