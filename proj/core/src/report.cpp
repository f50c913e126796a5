#include "tempscale/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "tempscale/errors.hpp"
#include "tempscale/trace_store.hpp"

namespace tempscale {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
    if (!out) throw StoreError("cannot write " + path.string());
}

}  // namespace

RunReport build_report(std::span<const TraceRecord> records, const std::string& run_id,
                       const ReportOptions& options) {
    RunReport rep;
    rep.run_id = run_id;

    std::vector<QuestionTally> tallies =
        run_id.empty() ? tally_all(records) : tally_run(records, run_id);

    std::set<std::string> questions;
    std::set<Temperature> temperatures;
    std::map<Temperature, std::vector<QuestionTally>> by_temp;
    std::map<std::string, std::map<Temperature, const QuestionTally*>> by_question;
    for (const auto& t : tallies) {
        questions.insert(t.question_id);
        temperatures.insert(t.temperature);
        by_temp[t.temperature].push_back(t);
        by_question[t.question_id][t.temperature] = &t;
        rep.unknown_verdicts += t.n_unknown;
    }
    rep.questions_total = static_cast<long>(questions.size());

    // Per-temperature dataset Pass@K; the K grid tops out at the smallest
    // per-question sample count at that temperature.
    for (const auto& [temp, ts] : by_temp) {
        long n_min = ts.front().n_samples;
        for (const auto& t : ts) n_min = std::min(n_min, t.n_samples);
        if (n_min < 1) continue;
        auto ks = default_k_grid(n_min);
        PassKCurve curve = dataset_curve(ts, ks);
        curve.temperature = temp;
        rep.per_temperature_curves.push_back(std::move(curve));

        long solved = 0;
        for (const auto& t : ts) solved += t.n_correct >= 1 ? 1 : 0;
        rep.pass_all_single[temp] =
            static_cast<double>(solved) / static_cast<double>(questions.size());
    }

    for (const auto& [qid, temps] : by_question) {
        bool solved = std::any_of(temps.begin(), temps.end(), [](const auto& kv) {
            return kv.second->n_correct >= 1;
        });
        rep.questions_solved_multi += solved ? 1 : 0;
    }
    rep.pass_all_multi = questions.empty()
                             ? 0.0
                             : static_cast<double>(rep.questions_solved_multi) /
                                   static_cast<double>(questions.size());

    // Multi-temperature curve over the even-split budget grid, only when the
    // per-question sample counts are uniform enough to honor the allocations.
    if (!temperatures.empty()) {
        std::vector<Temperature> temp_list(temperatures.begin(), temperatures.end());
        long per_temp_min = -1;
        for (const auto& [temp, ts] : by_temp) {
            if (temp.is_zero()) continue;
            for (const auto& t : ts) {
                per_temp_min = per_temp_min < 0 ? t.n_samples : std::min(per_temp_min, t.n_samples);
            }
        }
        if (per_temp_min > 0) {
            long splittable = static_cast<long>(temp_list.size()) -
                              (temperatures.contains(Temperature::from_tenths(0)) ? 1 : 0);
            long max_budget = per_temp_min * std::max<long>(splittable, 1);
            std::vector<long> budgets =
                options.budget_grid.empty() ? default_k_grid(max_budget) : options.budget_grid;
            std::vector<std::map<Temperature, long>> allocations;
            for (long b : budgets) allocations.push_back(split_budget(b, temp_list));
            try {
                rep.multi_temperature = multi_temperature_curve(tallies, budgets, allocations);
            } catch (const DomainError&) {
                // ragged run (per-question temperature coverage differs, as
                // after early exits): the even-split curve is undefined
                rep.multi_temperature.reset();
            }
        }
    }

    // Difficulty over a pair of temperatures.
    std::vector<Temperature> positive;
    for (const auto& t : temperatures) {
        if (!t.is_zero()) positive.push_back(t);
    }
    if (positive.size() >= 2 || (positive.size() == 1 && options.difficulty_t1)) {
        rep.difficulty_t1 = options.difficulty_t1.value_or(positive.front());
        rep.difficulty_t2 = options.difficulty_t2.value_or(positive.back());
        for (const auto& qid : questions) {
            auto& temps = by_question[qid];
            auto get = [&](Temperature t) -> std::pair<double, long> {
                auto it = temps.find(t);
                if (it == temps.end() || it->second->n_samples == 0) return {0.0, 0};
                return {avg_at_n(it->second->n_samples, it->second->n_correct),
                        it->second->n_correct};
            };
            auto [a1, c1] = get(rep.difficulty_t1);
            auto [a2, c2] = get(rep.difficulty_t2);
            rep.difficulty[qid] = classify_difficulty(a1, a2, c1, c2, options.theta_easy);
        }
    }

    rep.entropy_by_temperature = split_by_correctness(records, EntropyGroupBy::Dataset);
    return rep;
}

nlohmann::ordered_json RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["run_id"] = run_id;
    j["questions_total"] = questions_total;
    j["questions_solved_multi"] = questions_solved_multi;
    j["pass_all_multi"] = pass_all_multi;
    nlohmann::ordered_json singles;
    for (const auto& [t, v] : pass_all_single) singles[t.str()] = v;
    j["pass_all_single"] = std::move(singles);
    j["unknown_verdicts"] = unknown_verdicts;
    j["entropy_is_lower_bound"] = entropy_is_lower_bound;

    nlohmann::ordered_json curves = nlohmann::ordered_json::array();
    for (const auto& c : per_temperature_curves) {
        nlohmann::ordered_json jc;
        jc["temperature"] = c.temperature.str();
        for (const auto& [k, v] : c.points) jc["points"].push_back({{"K", k}, {"value", v}});
        curves.push_back(std::move(jc));
    }
    j["pass_at_k"] = std::move(curves);

    if (multi_temperature) {
        nlohmann::ordered_json jm = nlohmann::ordered_json::array();
        for (const auto& [b, v] : multi_temperature->points) {
            jm.push_back({{"budget", b}, {"value", v}});
        }
        j["multi_temperature"] = std::move(jm);
    }

    if (!difficulty.empty()) {
        j["difficulty_temperatures"] = {difficulty_t1.str(), difficulty_t2.str()};
        nlohmann::ordered_json jd;
        for (const auto& [q, label] : difficulty) jd[q] = to_string(label);
        j["difficulty"] = std::move(jd);
    }

    if (has_voting) {
        j["voting"] = {{"samples_used", samples_used},
                       {"samples_full_grid", samples_full_grid},
                       {"delta_c", delta_c},
                       {"exited", std::count_if(voting_usage.begin(), voting_usage.end(),
                                                [](const QuestionUsage& u) {
                                                    return u.exit_round.has_value();
                                                })}};
    }

    if (!config_echo.is_null()) j["config"] = config_echo;
    return j;
}

void RunReport::write(const std::filesystem::path& out_dir) const {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "report.json", to_json().dump(2) + "\n");

    std::vector<PassKCurve> all_curves = per_temperature_curves;
    if (multi_temperature) all_curves.push_back(*multi_temperature);
    write_file(out_dir / "curves.csv", curves_to_csv(all_curves));
    write_file(out_dir / "entropy.csv", splits_to_csv(entropy_by_temperature));
    write_file(out_dir / "entropy_hist.csv", histograms_to_csv(entropy_by_temperature));
    if (has_voting) write_file(out_dir / "exits.csv", usage_to_csv(voting_usage));

    std::string diff_csv = "question_id,label\n";
    for (const auto& [q, label] : difficulty) diff_csv += q + "," + to_string(label) + "\n";
    write_file(out_dir / "difficulty.csv", diff_csv);
}

}  // namespace tempscale
