#include <doctest.h>

#include <cmath>
#include <vector>

#include "tempscale/entropy.hpp"
#include "tempscale/errors.hpp"
#include "tempscale/rng.hpp"

using namespace tempscale;

namespace {

TraceRecord entropy_record(const std::string& qid, Verdict v, double h) {
    TraceRecord r;
    r.run_id = "run1";
    r.question_id = qid;
    r.temperature = Temperature::from_tenths(7);
    r.sample_index = 0;
    r.correct = v;
    r.mean_entropy = h;
    return r;
}

}  // namespace

TEST_CASE("token_entropy closed forms") {
    CHECK(token_entropy({{0.25, 0.25, 0.25, 0.25}}) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(token_entropy({{0.0, 1.0, 0.0}}) == 0.0);
    CHECK(token_entropy({{0.75, 0.25}}) ==
          doctest::Approx(-(0.75 * std::log(0.75) + 0.25 * std::log(0.25))).epsilon(1e-9));
}

TEST_CASE("token_entropy bounds for random distributions") {
    CounterRng rng(31, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
        size_t v = 2 + rng.below(100);
        TokenDistribution d;
        for (size_t i = 0; i < v; ++i) d.probabilities.push_back(rng.uniform() + 1e-12);
        double h = token_entropy(d);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(static_cast<double>(v)) + 1e-9);
    }
}

TEST_CASE("token_entropy rejects invalid input") {
    CHECK_THROWS_AS(token_entropy({{0.5, -0.1}}), DomainError);
    CHECK_THROWS_AS(token_entropy({{0.0, 0.0}}), DomainError);
}

TEST_CASE("token_entropy normalizes unnormalized input") {
    CHECK(token_entropy({{2.0, 2.0}}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("trace_mean_entropy") {
    std::vector<TokenDistribution> deltas(5, TokenDistribution{{1.0}});
    CHECK(trace_mean_entropy(deltas) == 0.0);

    std::vector<TokenDistribution> two = {{{1.0}}, {{0.5, 0.5}}};
    CHECK(trace_mean_entropy(two) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(trace_mean_entropy(std::vector<TokenDistribution>{}), DomainError);
}

TEST_CASE("trace_mean_entropy matches an independent recomputation") {
    CounterRng gen(55, 1, 2);
    std::vector<TokenDistribution> dists;
    double expect = 0.0;
    for (int i = 0; i < 100; ++i) {
        TokenDistribution d;
        for (int j = 0; j < 8; ++j) d.probabilities.push_back(gen.uniform() + 1e-9);
        double sum = 0.0;
        for (double p : d.probabilities) sum += p;
        double h = 0.0;
        for (double p : d.probabilities) h -= p / sum * std::log(p / sum);
        expect += h;
        dists.push_back(std::move(d));
    }
    expect /= 100.0;
    CHECK(trace_mean_entropy(dists) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("split_by_correctness hand arithmetic") {
    std::vector<TraceRecord> recs = {
        entropy_record("q", Verdict::Correct, 1.0),
        entropy_record("q", Verdict::Correct, 2.0),
        entropy_record("q", Verdict::Incorrect, 3.0),
    };
    auto splits = split_by_correctness(recs, EntropyGroupBy::Dataset);
    REQUIRE(splits.size() == 1);
    CHECK(splits[0].correct.count == 2);
    CHECK(splits[0].correct.mean == doctest::Approx(1.5));
    CHECK(splits[0].incorrect.mean == doctest::Approx(3.0));
    CHECK(splits[0].all.mean == doctest::Approx(2.0));
    // recombination identity
    CHECK(splits[0].all.mean * splits[0].all.count ==
          doctest::Approx(splits[0].correct.mean * splits[0].correct.count +
                          splits[0].incorrect.mean * splits[0].incorrect.count)
              .epsilon(1e-9));
}

TEST_CASE("split handles all-correct and empty inputs") {
    std::vector<TraceRecord> recs = {entropy_record("q", Verdict::Correct, 1.0)};
    auto splits = split_by_correctness(recs, EntropyGroupBy::Dataset);
    REQUIRE(splits.size() == 1);
    CHECK(splits[0].incorrect.count == 0);

    CHECK(split_by_correctness(std::vector<TraceRecord>{}, EntropyGroupBy::Dataset).empty());
}

TEST_CASE("split excludes records without entropy or verdict") {
    std::vector<TraceRecord> recs = {
        entropy_record("q", Verdict::Correct, 1.0),
        entropy_record("q", Verdict::Unknown, 2.0),
    };
    TraceRecord no_h = entropy_record("q", Verdict::Correct, 1.0);
    no_h.mean_entropy.reset();
    recs.push_back(no_h);
    auto splits = split_by_correctness(recs, EntropyGroupBy::Dataset);
    REQUIRE(splits.size() == 1);
    CHECK(splits[0].all.count == 1);
    CHECK(splits[0].n_excluded == 2);
}

TEST_CASE("split recombination holds on random fixtures") {
    CounterRng rng(77, 3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TraceRecord> recs;
        int n = 1 + static_cast<int>(rng.below(40));
        for (int i = 0; i < n; ++i) {
            auto r = entropy_record("q", rng.bernoulli(0.5) ? Verdict::Correct : Verdict::Incorrect,
                                    rng.uniform() * 3.0);
            r.sample_index = i;
            recs.push_back(r);
        }
        auto splits = split_by_correctness(recs, EntropyGroupBy::Dataset);
        for (const auto& s : splits) {
            CHECK(s.all.count == s.correct.count + s.incorrect.count);
            CHECK(std::abs(s.all.mean * s.all.count -
                           (s.correct.mean * s.correct.count +
                            s.incorrect.mean * s.incorrect.count)) <= 1e-9);
        }
    }
}

TEST_CASE("histogram bins sum to subset counts") {
    CounterRng rng(78, 3, 4);
    std::vector<TraceRecord> recs;
    for (int i = 0; i < 200; ++i) {
        auto r = entropy_record("q", rng.bernoulli(0.4) ? Verdict::Correct : Verdict::Incorrect,
                                rng.uniform() * 2.5);
        r.sample_index = i;
        recs.push_back(r);
    }
    auto splits = split_by_correctness(recs, EntropyGroupBy::Dataset);
    REQUIRE(splits.size() == 1);
    long c = 0, ic = 0;
    for (long b : splits[0].hist_correct) c += b;
    for (long b : splits[0].hist_incorrect) ic += b;
    CHECK(c == splits[0].correct.count);
    CHECK(ic == splits[0].incorrect.count);
    CHECK(splits[0].hist_correct.size() == kEntropyHistogramBins);
}
