#include <benchmark/benchmark.h>

#include <vector>

#include "tempscale/estimators.hpp"
#include "tempscale/rng.hpp"
#include "tempscale/scenario.hpp"
#include "tempscale/voting.hpp"

using namespace tempscale;

namespace {

Temperature T(int tenths) { return Temperature::from_tenths(tenths); }

std::vector<Temperature> grid13() {
    std::vector<Temperature> out;
    for (int i = 0; i <= 12; ++i) out.push_back(T(i));
    return out;
}

void BM_PassAtK(benchmark::State& state) {
    const long n = state.range(0);
    long k = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pass_at_k(n, n / 3, k));
        k = k % n + 1;
    }
}
BENCHMARK(BM_PassAtK)->Arg(64)->Arg(1024)->Arg(16384);

void BM_DatasetCurve(benchmark::State& state) {
    const long questions = state.range(0);
    std::vector<QuestionTally> tallies;
    CounterRng rng(1, 0, 0);
    for (long q = 0; q < questions; ++q) {
        QuestionTally t;
        t.question_id = "q" + std::to_string(q);
        t.temperature = T(7);
        t.n_samples = 1024;
        t.n_correct = long(rng.below(1025));
        tallies.push_back(std::move(t));
    }
    auto k_grid = default_k_grid(1024);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dataset_curve(tallies, k_grid));
    }
}
BENCHMARK(BM_DatasetCurve)->Arg(30)->Arg(500);

void BM_SimulatedSampling(benchmark::State& state) {
    Scenario scenario = scenario_from_taxonomy(10, 10, 8, 2, grid13(), 5);
    SimulatedSampler sampler(scenario);
    SampleRequest req;
    req.run_id = "bench";
    req.question_id = scenario.questions[0].id;
    req.temperature = T(7);
    req.count = state.range(0);
    req.run_seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampler.sample(req));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatedSampling)->Arg(64)->Arg(1024);

void BM_VotingRound(benchmark::State& state) {
    Scenario scenario = scenario_from_taxonomy(10, 10, 8, 2, grid13(), 5);
    SimulatedSampler sampler(scenario);
    VotingParams params;
    for (int i = 4; i <= 12; ++i) params.temperatures.push_back(T(i));
    params.max_rounds = 1 << 20;  // never cap inside the benchmark loop
    params.min_rounds = 1 << 20;  // never exit either
    std::vector<std::string> questions;
    for (const auto& q : scenario.questions) questions.push_back(q.id);
    VotingSession session(questions, params);
    std::vector<TraceRecord> sink;
    for (auto _ : state) {
        benchmark::DoNotOptimize(session.step_round(sampler, "bench", 1, sink));
        sink.clear();
    }
    state.SetItemsProcessed(state.iterations() * long(questions.size()) *
                            long(params.temperatures.size()));
}
BENCHMARK(BM_VotingRound);

}  // namespace

BENCHMARK_MAIN();
