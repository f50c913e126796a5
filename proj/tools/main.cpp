// tempscale: multi-temperature test-time scaling runner.
//
// Subcommands:
//   sweep        full-grid sampling run, persists traces, emits report + CSVs
//   vote         two-stage voting early exit, then fallback sweep on survivors
//   report       recompute reports from stored JSONL traces
//   scenario-gen write a synthetic difficulty-taxonomy scenario file

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tempscale/errors.hpp"
#include "tempscale/runner.hpp"
#include "tempscale/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitVerifier = 4;

tempscale::RunConfig load_config(const std::string& config_path, const std::string& out_dir,
                                 long seed, bool prune_raw, bool resume) {
    auto config = tempscale::RunConfig::load(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (seed >= 0) config.seed = static_cast<uint64_t>(seed);
    if (prune_raw) config.prune_raw = true;
    if (resume) config.resume = true;
    return config;
}

void print_summary(const tempscale::RunReport& rep) {
    std::cout << "run " << rep.run_id << ": " << rep.questions_solved_multi << "/"
              << rep.questions_total << " solved (Pass@All " << rep.pass_all_multi << ")";
    if (rep.has_voting) {
        std::cout << ", dC " << rep.delta_c * 100.0 << "% (" << rep.samples_used << "/"
                  << rep.samples_full_grid << " samples)";
    }
    if (rep.unknown_verdicts > 0) {
        std::cout << ", " << rep.unknown_verdicts << " unknown verdicts";
    }
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-temperature test-time scaling orchestrator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_id;
    long seed = -1;
    bool prune_raw = false, resume = false;

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run config JSON")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", seed, "run seed (overrides config)");
        cmd->add_flag("--prune-raw", prune_raw, "drop answer_raw from stored traces");
    };

    auto* sweep = app.add_subcommand("sweep", "full temperature-grid sampling run");
    add_run_flags(sweep);
    sweep->add_flag("--resume", resume, "continue a partially-written store");

    auto* vote = app.add_subcommand("vote", "voting early-exit run with fallback sweep");
    add_run_flags(vote);

    std::vector<std::string> store_paths;
    auto* report = app.add_subcommand("report", "recompute reports from stored traces");
    report->add_option("stores", store_paths, "JSONL trace stores")->required();
    report->add_option("--out", out_dir, "output directory")->required();
    report->add_option("--run-id", run_id, "restrict to one run id");

    int n_easy = 10, n_medium = 10, n_hard = 8, n_impossible = 2;
    double t_min = 0.0, t_max = 1.2;
    long gen_seed = 0;
    std::string scenario_out;
    auto* gen = app.add_subcommand("scenario-gen", "generate a taxonomy scenario file");
    gen->add_option("--easy", n_easy, "easy question count");
    gen->add_option("--medium", n_medium, "medium question count");
    gen->add_option("--hard", n_hard, "hard question count");
    gen->add_option("--impossible", n_impossible, "impossible question count");
    gen->add_option("--t-min", t_min, "grid minimum temperature");
    gen->add_option("--t-max", t_max, "grid maximum temperature");
    gen->add_option("--seed", gen_seed, "construction seed");
    gen->add_option("--out", scenario_out, "scenario file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            print_summary(tempscale::cmd_sweep(
                load_config(config_path, out_dir, seed, prune_raw, resume)));
        } else if (vote->parsed()) {
            print_summary(tempscale::cmd_vote(
                load_config(config_path, out_dir, seed, prune_raw, false)));
        } else if (report->parsed()) {
            std::vector<std::filesystem::path> paths(store_paths.begin(), store_paths.end());
            print_summary(tempscale::cmd_report(paths, out_dir, run_id));
        } else if (gen->parsed()) {
            auto plan = tempscale::build_grid(tempscale::Temperature::from_value(t_min),
                                              tempscale::Temperature::from_value(t_max),
                                              tempscale::Temperature::from_tenths(1), 1);
            auto scenario = tempscale::scenario_from_taxonomy(
                n_easy, n_medium, n_hard, n_impossible, plan.temperatures,
                static_cast<uint64_t>(gen_seed));
            scenario.save(scenario_out);
            std::cout << "wrote " << scenario_out << " (" << scenario.questions.size()
                      << " questions)\n";
        }
    } catch (const tempscale::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tempscale::BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const tempscale::VerifierError& e) {
        std::cerr << "verifier error: " << e.what() << "\n";
        return kExitVerifier;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
