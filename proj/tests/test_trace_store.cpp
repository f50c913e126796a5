#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tempscale/errors.hpp"
#include "tempscale/rng.hpp"
#include "tempscale/trace_store.hpp"

using namespace tempscale;
namespace fs = std::filesystem;

namespace {

fs::path temp_store_path(const char* name) {
    fs::path p = fs::temp_directory_path() / "tempscale_tests" / name;
    fs::create_directories(p.parent_path());
    fs::remove(p);
    return p;
}

TraceRecord make_record(const std::string& qid, int temp_tenths, int idx,
                        Verdict verdict = Verdict::Incorrect) {
    TraceRecord r;
    r.run_id = "run1";
    r.question_id = qid;
    r.temperature = Temperature::from_tenths(temp_tenths);
    r.round = 1;
    r.sample_index = idx;
    r.answer_raw = "\\boxed{41}";
    r.answer_extracted = "41";
    r.correct = verdict;
    r.mean_entropy = 1.25;
    r.token_count = 100;
    return r;
}

}  // namespace

TEST_CASE("append then reload is the identity") {
    auto path = temp_store_path("roundtrip.jsonl");
    TraceRecord r = make_record("q1", 7, 0, Verdict::Correct);
    {
        TraceStore store(path);
        store.append(r);
    }
    auto loaded = TraceStore::load(path);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].run_id == r.run_id);
    CHECK(loaded[0].question_id == r.question_id);
    CHECK(loaded[0].temperature == r.temperature);
    CHECK(loaded[0].round == r.round);
    CHECK(loaded[0].sample_index == r.sample_index);
    CHECK(loaded[0].answer_raw == r.answer_raw);
    CHECK(loaded[0].answer_extracted == r.answer_extracted);
    CHECK(loaded[0].correct == r.correct);
    CHECK(loaded[0].mean_entropy == r.mean_entropy);
    CHECK(loaded[0].token_count == r.token_count);
}

TEST_CASE("records differing only in sample_index are both retained") {
    auto path = temp_store_path("two.jsonl");
    TraceStore store(path);
    store.append(make_record("q1", 7, 0));
    store.append(make_record("q1", 7, 1));
    CHECK(store.records().size() == 2);
}

TEST_CASE("duplicate key is rejected and the store unchanged") {
    auto path = temp_store_path("dup.jsonl");
    {
        TraceStore store(path);
        store.append(make_record("q1", 7, 0));
        CHECK_THROWS_AS(store.append(make_record("q1", 7, 0)), StoreError);
    }
    // independent re-read: still exactly one record
    CHECK(TraceStore::load(path).size() == 1);
}

TEST_CASE("duplicate detection survives reopen") {
    auto path = temp_store_path("reopen.jsonl");
    {
        TraceStore store(path);
        store.append(make_record("q1", 5, 3));
    }
    TraceStore store(path);
    CHECK(store.records().size() == 1);
    CHECK_THROWS_AS(store.append(make_record("q1", 5, 3)), StoreError);
}

TEST_CASE("malformed record names the field") {
    TraceRecord r = make_record("q1", 7, 0);
    r.mean_entropy = -1.0;
    CHECK_THROWS_WITH_AS(r.validate(),
                         doctest::Contains("mean_entropy"), ValidationError);
    r = make_record("", 7, 0);
    CHECK_THROWS_WITH_AS(r.validate(), doctest::Contains("question_id"), ValidationError);
}

TEST_CASE("optional fields are omitted, not null") {
    TraceRecord r = make_record("q1", 7, 0);
    r.answer_raw.reset();
    r.mean_entropy.reset();
    r.correct = Verdict::Unknown;
    auto j = r.to_json();
    CHECK(!j.contains("answer_raw"));
    CHECK(!j.contains("mean_entropy"));
    CHECK(!j.contains("correct"));
    auto back = TraceRecord::from_json(j);
    CHECK(back.correct == Verdict::Unknown);
    CHECK(!back.answer_raw);
}

TEST_CASE("tally counts samples and correctness") {
    auto path = temp_store_path("tally.jsonl");
    TraceStore store(path);
    store.append(make_record("q1", 7, 0, Verdict::Correct));
    store.append(make_record("q1", 7, 1, Verdict::Correct));
    store.append(make_record("q1", 7, 2, Verdict::Incorrect));
    store.append(make_record("q1", 7, 3, Verdict::Unknown));

    auto tallies = store.tally("run1");
    REQUIRE(tallies.size() == 1);
    CHECK(tallies[0].n_samples == 4);
    CHECK(tallies[0].n_correct == 2);  // unknown counts as not correct
    CHECK(tallies[0].n_unknown == 1);

    CHECK_THROWS_AS(store.tally("no-such-run"), StoreError);
}

TEST_CASE("tally of empty store is empty") {
    auto path = temp_store_path("empty.jsonl");
    TraceStore store(path);
    CHECK(store.tally("run1").empty());
}

TEST_CASE("tally conservation over a seeded Bernoulli stream") {
    // independently recompute the correct count from the same counter streams
    auto path = temp_store_path("bernoulli.jsonl");
    TraceStore store(path);
    const double p = 0.25;
    long expected_correct = 0;
    for (int i = 0; i < 1024; ++i) {
        CounterRng rng = trace_stream(99, "q1", 7, 1, i);
        bool correct = rng.bernoulli(p);
        expected_correct += correct ? 1 : 0;
        store.append(make_record("q1", 7, i, correct ? Verdict::Correct : Verdict::Incorrect));
    }
    auto tallies = store.tally("run1");
    REQUIRE(tallies.size() == 1);
    CHECK(tallies[0].n_samples == 1024);
    long recount = 0;
    for (int i = 0; i < 1024; ++i) {
        CounterRng rng = trace_stream(99, "q1", 7, 1, i);
        recount += rng.bernoulli(p) ? 1 : 0;
    }
    CHECK(tallies[0].n_correct == recount);
    CHECK(tallies[0].n_correct == expected_correct);
}

TEST_CASE("corrupt line reports its line number") {
    auto path = temp_store_path("corrupt.jsonl");
    {
        TraceStore store(path);
        store.append(make_record("q1", 7, 0));
    }
    std::ofstream(path, std::ios::app) << "{not json\n";
    CHECK_THROWS_WITH_AS(TraceStore::load(path), doctest::Contains(":2"), StoreError);
}
