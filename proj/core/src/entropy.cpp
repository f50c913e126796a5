#include "tempscale/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "tempscale/errors.hpp"

namespace tempscale {

TokenDistribution TokenDistribution::from_logprobs(std::span<const double> logprobs,
                                                   bool truncated) {
    TokenDistribution d;
    d.truncated = truncated;
    d.probabilities.reserve(logprobs.size());
    for (double lp : logprobs) d.probabilities.push_back(std::exp(lp));
    return d;
}

namespace {

// Kahan-compensated accumulator: a vocabulary-sized sum of near-equal terms
// drifts by ~V*eps under naive addition, too much for the ln V identity.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double token_entropy(const TokenDistribution& dist) {
    CompensatedSum total;
    for (double p : dist.probabilities) {
        if (p < 0.0 || !std::isfinite(p)) throw DomainError("token_entropy: negative or non-finite probability");
        total.add(p);
    }
    if (total.sum <= 0.0) throw DomainError("token_entropy: zero-sum distribution");
    CompensatedSum h;
    for (double p : dist.probabilities) {
        if (p == 0.0) continue;
        double q = p / total.sum;
        h.add(-q * std::log(q));
    }
    return std::max(h.sum, 0.0);
}

double trace_mean_entropy(std::span<const TokenDistribution> dists) {
    if (dists.empty()) throw DomainError("trace_mean_entropy: empty token sequence");
    double sum = 0.0;
    for (const auto& d : dists) sum += token_entropy(d);
    return sum / static_cast<double>(dists.size());
}

namespace {

struct Accumulator {
    std::vector<double> correct;
    std::vector<double> incorrect;
    long excluded = 0;
};

SubsetStats stats_of(const std::vector<double>& xs) {
    SubsetStats s;
    s.count = static_cast<long>(xs.size());
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return s;
}

SubsetStats stats_of_both(const std::vector<double>& xa, const std::vector<double>& xb) {
    std::vector<double> both;
    both.reserve(xa.size() + xb.size());
    both.insert(both.end(), xa.begin(), xa.end());
    both.insert(both.end(), xb.begin(), xb.end());
    return stats_of(both);
}

std::vector<long> histogram(const std::vector<double>& xs, double lo, double hi) {
    std::vector<long> bins(kEntropyHistogramBins, 0);
    if (xs.empty() || hi <= lo) return bins;
    double width = (hi - lo) / kEntropyHistogramBins;
    for (double x : xs) {
        int b = static_cast<int>((x - lo) / width);
        b = std::clamp(b, 0, kEntropyHistogramBins - 1);
        ++bins[b];
    }
    return bins;
}

}  // namespace

std::vector<EntropySplit> split_by_correctness(std::span<const TraceRecord> records,
                                               EntropyGroupBy group_by) {
    std::map<std::pair<std::string, int>, Accumulator> groups;
    for (const auto& r : records) {
        std::string key = group_by == EntropyGroupBy::Question ? r.question_id : "dataset";
        auto& acc = groups[{key, r.temperature.tenths()}];
        if (!r.mean_entropy || r.correct == Verdict::Unknown) {
            ++acc.excluded;
            continue;
        }
        (r.correct == Verdict::Correct ? acc.correct : acc.incorrect).push_back(*r.mean_entropy);
    }

    std::vector<EntropySplit> out;
    for (auto& [key, acc] : groups) {
        EntropySplit s;
        s.group = key.first;
        s.temperature = Temperature::from_tenths(key.second);
        s.correct = stats_of(acc.correct);
        s.incorrect = stats_of(acc.incorrect);
        s.all = stats_of_both(acc.correct, acc.incorrect);
        s.n_excluded = acc.excluded;
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const auto* v : {&acc.correct, &acc.incorrect}) {
            for (double x : *v) {
                if (first) { lo = hi = x; first = false; }
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
        if (hi == lo) hi = lo + 1e-9;
        s.hist_lo = lo;
        s.hist_hi = hi;
        s.hist_correct = histogram(acc.correct, lo, hi);
        s.hist_incorrect = histogram(acc.incorrect, lo, hi);
        out.push_back(std::move(s));
    }
    return out;
}

std::string splits_to_csv(std::span<const EntropySplit> splits) {
    std::ostringstream os;
    os << "group,temperature,subset,count,mean,stddev\n";
    for (const auto& s : splits) {
        auto row = [&](const char* name, const SubsetStats& st) {
            os << s.group << ',' << s.temperature.str() << ',' << name << ','
               << st.count << ',' << st.mean << ',' << st.stddev << '\n';
        };
        row("all", s.all);
        row("correct", s.correct);
        row("incorrect", s.incorrect);
    }
    return os.str();
}

std::string histograms_to_csv(std::span<const EntropySplit> splits) {
    std::ostringstream os;
    os << "group,temperature,subset,bin_lo,bin_hi,count\n";
    for (const auto& s : splits) {
        double width = (s.hist_hi - s.hist_lo) / kEntropyHistogramBins;
        auto rows = [&](const char* name, const std::vector<long>& bins) {
            for (int b = 0; b < static_cast<int>(bins.size()); ++b) {
                os << s.group << ',' << s.temperature.str() << ',' << name << ','
                   << s.hist_lo + b * width << ',' << s.hist_lo + (b + 1) * width << ','
                   << bins[b] << '\n';
            }
        };
        rows("correct", s.hist_correct);
        rows("incorrect", s.hist_incorrect);
    }
    return os.str();
}

}  // namespace tempscale
