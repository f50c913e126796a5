#include "tempscale/plan.hpp"

#include <algorithm>

#include "tempscale/errors.hpp"

namespace tempscale {

long TemperaturePlan::total_samples() const {
    long total = 0;
    for (const auto& [t, n] : samples) total += n;
    return total;
}

void TemperaturePlan::validate() const {
    if (temperatures.empty()) throw DomainError("plan: no temperatures");
    if (!std::is_sorted(temperatures.begin(), temperatures.end()) ||
        std::adjacent_find(temperatures.begin(), temperatures.end()) != temperatures.end()) {
        throw DomainError("plan: temperatures must be strictly increasing");
    }
    for (const auto& t : temperatures) {
        auto it = samples.find(t);
        if (it == samples.end()) throw DomainError("plan: missing allocation for T=" + t.str());
        if (it->second < 0) throw DomainError("plan: negative allocation at T=" + t.str());
        if (t.is_zero() && it->second > 1) {
            throw DomainError("plan: T=0 allocation must be <= 1");
        }
    }
}

TemperaturePlan TemperaturePlan::without(const std::set<Temperature>& excluded) const {
    TemperaturePlan out;
    for (const auto& t : temperatures) {
        if (excluded.contains(t)) continue;
        out.temperatures.push_back(t);
        out.samples[t] = samples.at(t);
    }
    return out;
}

std::string to_string(DifficultyLabel label) {
    switch (label) {
        case DifficultyLabel::Easy: return "easy";
        case DifficultyLabel::Medium: return "medium";
        case DifficultyLabel::Hard: return "hard";
        case DifficultyLabel::Impossible: return "impossible";
    }
    return "?";
}

TemperaturePlan build_grid(Temperature t_min, Temperature t_max, Temperature step,
                           long samples_per_temp) {
    if (t_min.tenths() < 0 || t_max < t_min) throw DomainError("build_grid: need 0 <= t_min <= t_max");
    if (step.tenths() <= 0) throw DomainError("build_grid: step must be positive");
    if (samples_per_temp < 1) throw DomainError("build_grid: samples_per_temp must be >= 1");
    if ((t_max.tenths() - t_min.tenths()) % step.tenths() != 0) {
        throw DomainError("build_grid: step " + step.str() + " does not land on t_max " +
                          t_max.str());
    }
    TemperaturePlan plan;
    for (int t = t_min.tenths(); t <= t_max.tenths(); t += step.tenths()) {
        Temperature temp = Temperature::from_tenths(t);
        plan.temperatures.push_back(temp);
        plan.samples[temp] = temp.is_zero() ? 1 : samples_per_temp;
    }
    return plan;
}

std::map<Temperature, long> split_budget(long total,
                                         const std::vector<Temperature>& temperatures) {
    if (total < 0) throw DomainError("split_budget: negative budget");
    if (temperatures.empty()) throw DomainError("split_budget: no temperatures");

    std::vector<Temperature> sorted(temperatures.begin(), temperatures.end());
    std::sort(sorted.begin(), sorted.end());

    std::map<Temperature, long> alloc;
    long remaining = total;
    std::vector<Temperature> splittable;
    for (const auto& t : sorted) {
        if (t.is_zero()) {
            alloc[t] = std::min<long>(remaining, 1);
            remaining -= alloc[t];
        } else {
            splittable.push_back(t);
        }
    }
    if (splittable.empty()) {
        if (remaining > 0) throw DomainError("split_budget: budget exceeds T=0 capacity");
        return alloc;
    }
    long m = static_cast<long>(splittable.size());
    long base = remaining / m;
    long rem = remaining % m;
    for (long i = 0; i < m; ++i) {
        // remainder goes one each to the highest temperatures
        alloc[splittable[i]] = base + (i >= m - rem ? 1 : 0);
    }
    return alloc;
}

std::vector<Temperature> minimal_subset(
    const std::map<Temperature, std::set<std::string>>& solved_sets) {
    if (solved_sets.empty()) return {};
    std::set<std::string> covered;
    std::vector<Temperature> chosen;
    for (auto it = solved_sets.rbegin(); it != solved_sets.rend(); ++it) {
        bool adds = std::any_of(it->second.begin(), it->second.end(),
                                [&](const std::string& q) { return !covered.contains(q); });
        if (adds) {
            chosen.push_back(it->first);
            covered.insert(it->second.begin(), it->second.end());
        }
    }
    return chosen;
}

DifficultyLabel classify_difficulty(double avg_t1, double avg_t2, long c1, long c2,
                                    double theta_easy) {
    if (avg_t1 < 0 || avg_t1 > 1 || avg_t2 < 0 || avg_t2 > 1) {
        throw DomainError("classify_difficulty: averages must be in [0,1]");
    }
    if (c1 == 0 && c2 == 0) return DifficultyLabel::Impossible;
    if (c1 == 0 || c2 == 0) return DifficultyLabel::Hard;
    if (std::min(avg_t1, avg_t2) >= theta_easy) return DifficultyLabel::Easy;
    return DifficultyLabel::Medium;
}

}  // namespace tempscale
