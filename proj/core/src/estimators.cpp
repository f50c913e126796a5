#include "tempscale/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "tempscale/errors.hpp"

namespace tempscale {

namespace {

// ln of C(N-C,K)/C(N,K), the probability that K draws without replacement all
// miss. The binomial ratio telescopes to prod_i (N-C-i)/(N-i), accumulated as
// sum_i log1p(-C/(N-i)): the coefficients themselves overflow direct
// evaluation, and differencing lgamma values loses ~1e-11 of absolute
// precision at N=1024, which the K=1 = C/N identity cannot afford.
// Requires c >= 1 and k <= n - c.
double log_miss_probability(long n, long c, long k) {
    double log_miss = 0.0;
    for (long i = 0; i < k; ++i) {
        log_miss += std::log1p(-static_cast<double>(c) / static_cast<double>(n - i));
    }
    return log_miss;
}

double miss_probability(long n, long c, long k) {
    if (c == 0) return 1.0;
    if (k > n - c) return 0.0;
    return std::clamp(std::exp(log_miss_probability(n, c, k)), 0.0, 1.0);
}

}  // namespace

double pass_at_k(long n_samples, long n_correct, long k) {
    if (n_samples < 0 || n_correct < 0 || n_correct > n_samples) {
        throw DomainError("pass_at_k: need 0 <= C <= N");
    }
    if (k < 1 || k > n_samples) {
        throw DomainError("pass_at_k: need 1 <= K <= N, got K=" + std::to_string(k) +
                          " N=" + std::to_string(n_samples));
    }
    if (n_correct == 0) return 0.0;
    if (k > n_samples - n_correct) return 1.0;
    return std::clamp(-std::expm1(log_miss_probability(n_samples, n_correct, k)), 0.0, 1.0);
}

double avg_at_n(long n_samples, long n_correct) {
    if (n_samples < 1) throw DomainError("avg_at_n: n_samples must be >= 1");
    if (n_correct < 0 || n_correct > n_samples) throw DomainError("avg_at_n: need 0 <= C <= N");
    return static_cast<double>(n_correct) / static_cast<double>(n_samples);
}

bool pass_all(std::span<const QuestionTally> tallies) {
    if (tallies.empty()) throw DomainError("pass_all: empty tally set");
    return std::any_of(tallies.begin(), tallies.end(),
                       [](const QuestionTally& t) { return t.n_correct >= 1; });
}

std::vector<long> default_k_grid(long n) {
    std::vector<long> ks;
    for (long k = 1; k <= n; k *= 2) ks.push_back(k);
    if (!ks.empty() && ks.back() != n) ks.push_back(n);
    return ks;
}

PassKCurve dataset_curve(std::span<const QuestionTally> tallies,
                         std::span<const long> k_grid) {
    if (tallies.empty()) throw DomainError("dataset_curve: no tallies");
    long k_max = *std::max_element(k_grid.begin(), k_grid.end());
    for (const auto& t : tallies) {
        if (t.n_samples < k_max) {
            throw DomainError("dataset_curve: question " + t.question_id + " has " +
                              std::to_string(t.n_samples) + " samples, need " +
                              std::to_string(k_max));
        }
    }
    PassKCurve curve;
    curve.scope = "dataset";
    curve.temperature = tallies.front().temperature;
    for (long k : k_grid) {
        double sum = 0.0;
        for (const auto& t : tallies) sum += pass_at_k(t.n_samples, t.n_correct, k);
        curve.points.emplace_back(k, sum / static_cast<double>(tallies.size()));
    }
    return curve;
}

PassKCurve multi_temperature_curve(
    std::span<const QuestionTally> tallies,
    std::span<const long> budget_grid,
    const std::vector<std::map<Temperature, long>>& allocations) {
    if (tallies.empty()) throw DomainError("multi_temperature_curve: no tallies");
    if (allocations.size() != budget_grid.size()) {
        throw DomainError("multi_temperature_curve: one allocation per budget required");
    }

    // (question, temperature) -> tally
    std::map<std::string, std::map<Temperature, const QuestionTally*>> by_question;
    for (const auto& t : tallies) by_question[t.question_id][t.temperature] = &t;

    PassKCurve curve;
    curve.scope = "dataset";
    for (size_t b = 0; b < budget_grid.size(); ++b) {
        const auto& alloc = allocations[b];
        double sum = 0.0;
        for (const auto& [qid, temps] : by_question) {
            double miss = 1.0;
            for (const auto& [temp, k] : alloc) {
                if (k == 0) continue;
                auto it = temps.find(temp);
                if (it == temps.end() || it->second->n_samples < k) {
                    throw DomainError("multi_temperature_curve: question " + qid +
                                      " lacks " + std::to_string(k) + " samples at T=" +
                                      temp.str());
                }
                miss *= miss_probability(it->second->n_samples, it->second->n_correct, k);
            }
            sum += 1.0 - miss;
        }
        curve.points.emplace_back(budget_grid[b],
                                  sum / static_cast<double>(by_question.size()));
    }
    return curve;
}

std::string curves_to_csv(std::span<const PassKCurve> curves) {
    std::ostringstream os;
    os << "scope,question_id,temperature,K,value\n";
    for (const auto& c : curves) {
        bool dataset = c.scope == "dataset";
        for (const auto& [k, v] : c.points) {
            os << (dataset ? "dataset" : "question") << ','
               << (dataset ? "" : c.scope) << ',' << c.temperature.str() << ','
               << k << ',' << v << '\n';
        }
    }
    return os.str();
}

}  // namespace tempscale
