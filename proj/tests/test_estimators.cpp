#include <doctest.h>

#include <cmath>
#include <vector>

#include "tempscale/errors.hpp"
#include "tempscale/estimators.hpp"
#include "tempscale/rng.hpp"

using namespace tempscale;

namespace {

// Brute-force Pass@K: enumerate all C(N,K) subsets of N samples where the
// first C are correct, and count subsets containing at least one of them.
// Independent of the log-gamma implementation path.
double pass_at_k_oracle(int n, int c, int k) {
    long total = 0, hit = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        ++total;
        if (mask & ((1u << c) - 1)) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(total);
}

QuestionTally make_tally(const std::string& qid, int temp_tenths, long n, long c) {
    QuestionTally t;
    t.question_id = qid;
    t.temperature = Temperature::from_tenths(temp_tenths);
    t.n_samples = n;
    t.n_correct = c;
    return t;
}

}  // namespace

TEST_CASE("pass_at_k closed-form cases") {
    CHECK(pass_at_k(1024, 0, 512) == 0.0);
    CHECK(pass_at_k(4, 1, 4) == 1.0);  // K > N-C forces a hit
    CHECK(pass_at_k(4, 2, 2) == doctest::Approx(1.0 - 1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("pass_at_k matches subset enumeration for all N <= 12") {
    for (int n = 1; n <= 12; ++n) {
        for (int c = 0; c <= n; ++c) {
            for (int k = 1; k <= n; ++k) {
                double expect = pass_at_k_oracle(n, c, k);
                double got = pass_at_k(n, c, k);
                CHECK(std::abs(got - expect) <= 1e-12);
            }
        }
    }
}

TEST_CASE("pass_at_k at K=1 reduces to C/N") {
    for (int n = 1; n <= 12; ++n) {
        for (int c = 0; c <= n; ++c) {
            CHECK(pass_at_k(n, c, 1) ==
                  doctest::Approx(static_cast<double>(c) / n).epsilon(1e-12));
        }
    }
}

TEST_CASE("pass_at_k domain errors") {
    CHECK_THROWS_AS(pass_at_k(4, 2, 5), DomainError);
    CHECK_THROWS_AS(pass_at_k(4, 2, 0), DomainError);
    CHECK_THROWS_AS(pass_at_k(4, 5, 1), DomainError);
    CHECK_THROWS_AS(pass_at_k(-1, 0, 1), DomainError);
}

TEST_CASE("pass_at_k monotone in K and C at N=1024") {
    CounterRng rng(7, 0, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        long c = static_cast<long>(rng.below(1025));
        long k = 1 + static_cast<long>(rng.below(1023));
        double v = pass_at_k(1024, c, k);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(pass_at_k(1024, c, k + 1) >= v);
        if (c < 1024) CHECK(pass_at_k(1024, c + 1, k) >= v);
        // Avg@N never exceeds Pass@K
        CHECK(avg_at_n(1024, c) <= v + 1e-12);
    }
}

TEST_CASE("avg_at_n") {
    CHECK(avg_at_n(1024, 512) == 0.5);
    CHECK(avg_at_n(1024, 0) == 0.0);
    CHECK(avg_at_n(3, 2) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(avg_at_n(0, 0), DomainError);
}

TEST_CASE("pass_all") {
    std::vector<QuestionTally> ts = {make_tally("q", 5, 1024, 0), make_tally("q", 7, 1024, 1)};
    CHECK(pass_all(ts));
    ts[1].n_correct = 0;
    CHECK(!pass_all(ts));
    std::vector<QuestionTally> one = {make_tally("q", 7, 8, 3)};
    CHECK(pass_all(one));
    CHECK_THROWS_AS(pass_all(std::vector<QuestionTally>{}), DomainError);
}

TEST_CASE("dataset_curve flat cases") {
    std::vector<long> ks = {1, 2, 4, 8};
    std::vector<QuestionTally> all = {make_tally("a", 7, 8, 8), make_tally("b", 7, 8, 8)};
    auto curve = dataset_curve(all, ks);
    for (auto [k, v] : curve.points) CHECK(v == doctest::Approx(1.0));

    std::vector<QuestionTally> half = {make_tally("a", 7, 8, 0), make_tally("b", 7, 8, 8)};
    curve = dataset_curve(half, ks);
    for (auto [k, v] : curve.points) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("dataset_curve means the enumerated per-question values") {
    std::vector<long> ks = {1, 2, 4, 8};
    std::vector<QuestionTally> ts = {make_tally("a", 7, 8, 0), make_tally("b", 7, 8, 1),
                                     make_tally("c", 7, 8, 4)};
    auto curve = dataset_curve(ts, ks);
    for (size_t i = 0; i < ks.size(); ++i) {
        int k = static_cast<int>(ks[i]);
        double expect = (pass_at_k_oracle(8, 0, k) + pass_at_k_oracle(8, 1, k) +
                         pass_at_k_oracle(8, 4, k)) /
                        3.0;
        CHECK(curve.points[i].second == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("dataset_curve names the short question") {
    std::vector<long> ks = {1, 8};
    std::vector<QuestionTally> ts = {make_tally("a", 7, 8, 0), make_tally("shorty", 7, 4, 0)};
    CHECK_THROWS_WITH_AS(dataset_curve(ts, ks), doctest::Contains("shorty"), DomainError);
}

TEST_CASE("multi_temperature_curve basics") {
    std::vector<QuestionTally> ts = {make_tally("q", 5, 4, 1), make_tally("q", 7, 4, 1)};
    std::vector<long> budgets = {4};
    std::vector<std::map<Temperature, long>> allocs = {
        {{Temperature::from_tenths(5), 2}, {Temperature::from_tenths(7), 2}}};
    auto curve = multi_temperature_curve(ts, budgets, allocs);
    // per-temperature miss with (N=4,C=1,k=2) is C(3,2)/C(4,2) = 1/2
    CHECK(curve.points[0].second == doctest::Approx(1.0 - 0.25).epsilon(1e-12));

    // all zero correct -> 0 everywhere
    std::vector<QuestionTally> zero = {make_tally("q", 5, 4, 0), make_tally("q", 7, 4, 0)};
    CHECK(multi_temperature_curve(zero, budgets, allocs).points[0].second == 0.0);

    // one temperature fully correct with allocation >= 1 -> 1
    std::vector<QuestionTally> full = {make_tally("q", 5, 4, 4), make_tally("q", 7, 4, 0)};
    CHECK(multi_temperature_curve(full, budgets, allocs).points[0].second == 1.0);
}

TEST_CASE("multi_temperature_curve rejects over-allocation") {
    std::vector<QuestionTally> ts = {make_tally("q", 5, 4, 1)};
    std::vector<long> budgets = {8};
    std::vector<std::map<Temperature, long>> allocs = {{{Temperature::from_tenths(5), 8}}};
    CHECK_THROWS_AS(multi_temperature_curve(ts, budgets, allocs), DomainError);
}

TEST_CASE("singleton grid multi curve equals dataset curve") {
    CounterRng rng(13, 1, 1);
    for (int trial = 0; trial < 100; ++trial) {
        long n = 8 + static_cast<long>(rng.below(64));
        std::vector<QuestionTally> ts;
        for (int q = 0; q < 4; ++q) {
            ts.push_back(make_tally("q" + std::to_string(q), 7, n,
                                    static_cast<long>(rng.below(static_cast<uint64_t>(n + 1)))));
        }
        auto ks = default_k_grid(n);
        auto direct = dataset_curve(ts, ks);
        std::vector<std::map<Temperature, long>> allocs;
        for (long k : ks) allocs.push_back({{Temperature::from_tenths(7), k}});
        auto multi = multi_temperature_curve(ts, ks, allocs);
        for (size_t i = 0; i < ks.size(); ++i) {
            CHECK(std::abs(direct.points[i].second - multi.points[i].second) <= 1e-12);
        }
    }
}

TEST_CASE("curves csv shape") {
    std::vector<QuestionTally> ts = {make_tally("a", 7, 8, 4)};
    std::vector<long> ks = {1, 8};
    std::vector<PassKCurve> curves = {dataset_curve(ts, ks)};
    auto csv = curves_to_csv(curves);
    CHECK(csv.find("scope,question_id,temperature,K,value\n") == 0);
    CHECK(csv.find("dataset,,0.7,1,") != std::string::npos);
}
