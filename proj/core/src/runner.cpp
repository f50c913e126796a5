#include "tempscale/runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "tempscale/errors.hpp"
#include "tempscale/http_backend.hpp"
#include "tempscale/trace_store.hpp"

namespace tempscale {

namespace {

std::string interpolate_env(const std::string& s) {
    std::string out;
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '$' && i + 1 < s.size() && s[i + 1] == '{') {
            size_t end = s.find('}', i + 2);
            if (end == std::string::npos) throw ConfigError("unterminated ${ in config value: " + s);
            std::string var = s.substr(i + 2, end - i - 2);
            const char* val = std::getenv(var.c_str());
            if (!val) throw ConfigError("config references unset env var: " + var);
            out += val;
            i = end + 1;
        } else {
            out += s[i++];
        }
    }
    return out;
}

void interpolate_json(nlohmann::json& j) {
    if (j.is_string()) {
        j = interpolate_env(j.get<std::string>());
    } else if (j.is_object() || j.is_array()) {
        for (auto& el : j) interpolate_json(el);
    }
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON: " + path.string());
    return from_json(std::move(j));
}

RunConfig RunConfig::from_json(nlohmann::json j) {
    interpolate_json(j);
    RunConfig c;
    try {
        c.run_id = j.at("run_id").get<std::string>();
        c.out_dir = j.at("out_dir").get<std::string>();
        c.prune_raw = j.value("prune_raw", false);
        c.resume = j.value("resume", false);

        const auto& jb = j.at("backend");
        std::string type = jb.at("type").get<std::string>();
        if (type == "simulated") {
            c.backend = BackendKind::Simulated;
            c.scenario_path = jb.at("scenario").get<std::string>();
            if (!j.contains("seed")) {
                throw ConfigError("seed is mandatory for simulated backends");
            }
        } else if (type == "http") {
            c.backend = BackendKind::Http;
            c.endpoint = jb;
        } else {
            throw ConfigError("unknown backend type: " + type);
        }
        c.seed = j.value("seed", 0ULL);

        const auto& jg = j.at("grid");
        c.plan = build_grid(Temperature::from_value(jg.at("t_min").get<double>()),
                            Temperature::from_value(jg.at("t_max").get<double>()),
                            Temperature::from_value(jg.value("step", 0.1)),
                            jg.at("samples_per_temp").get<long>());

        if (j.contains("voting")) {
            const auto& jv = j["voting"];
            VotingParams vp;
            vp.max_rounds = jv.value("max_rounds", 8);
            vp.min_rounds = jv.value("min_rounds", 4);
            vp.tau_intra = jv.value("tau_intra", 0.8);
            vp.tau_cross = jv.value("tau_cross", 1.0);
            for (double t : jv.value("exclude_temperatures", std::vector<double>{0.1, 0.2, 0.3})) {
                c.voting_excluded.push_back(Temperature::from_value(t));
            }
            for (const auto& t : c.plan.temperatures) {
                if (t.is_zero()) continue;
                if (std::find(c.voting_excluded.begin(), c.voting_excluded.end(), t) !=
                    c.voting_excluded.end()) {
                    continue;
                }
                vp.temperatures.push_back(t);
            }
            vp.validate();
            c.voting = std::move(vp);
        }

        VerifierSpec default_spec;
        if (j.contains("verifier")) {
            default_spec.kind = verifier_kind_from_string(j["verifier"].value("kind", "exact_match"));
        }
        if (j.contains("questions")) {
            for (const auto& jq : j["questions"]) {
                QuestionEntry q;
                q.question_id = jq.at("question_id").get<std::string>();
                q.prompt = jq.value("prompt", "");
                q.verifier = default_spec;
                q.verifier.reference = jq.value("reference", "");
                if (jq.contains("verifier_kind")) {
                    q.verifier.kind = verifier_kind_from_string(jq["verifier_kind"].get<std::string>());
                }
                c.questions.push_back(std::move(q));
            }
        } else if (c.backend == BackendKind::Simulated) {
            Scenario scenario = Scenario::load(c.scenario_path);
            for (const auto& sq : scenario.questions) {
                QuestionEntry q;
                q.question_id = sq.id;
                q.verifier.kind = default_spec.kind;
                q.verifier.reference = sq.correct_answer;
                c.questions.push_back(std::move(q));
            }
        }
        if (c.questions.empty()) throw ConfigError("question manifest is empty");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    c.echo = nlohmann::ordered_json::parse(j.dump());
    return c;
}

RunLock::RunLock(const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    path_ = out_dir / ".lock";
    if (std::filesystem::exists(path_)) {
        throw ConfigError("another run holds the lock: " + path_.string());
    }
    std::ofstream(path_) << "locked\n";
}

RunLock::~RunLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
}

VerifyingSampler::VerifyingSampler(Sampler& inner, std::map<std::string, VerifierSpec> specs,
                                   bool prune_raw, std::filesystem::path flagged_path)
    : inner_(inner),
      specs_(std::move(specs)),
      prune_raw_(prune_raw),
      flagged_path_(std::move(flagged_path)) {}

SampleBatch VerifyingSampler::sample(const SampleRequest& request) {
    auto sit = specs_.find(request.question_id);
    if (sit == specs_.end()) {
        throw VerifierError("no verifier spec for question " + request.question_id);
    }
    const VerifierSpec& spec = sit->second;

    SampleBatch batch = inner_.sample(request);
    if (batch.entropy_is_lower_bound) lower_bound_entropy_ = true;
    for (auto& r : batch.records) {
        if (!r.answer_extracted && r.answer_raw) {
            switch (spec.kind) {
                case VerifierKind::BoxedInteger:
                case VerifierKind::BoxedExact: {
                    BoxedExtraction e = extract_boxed(*r.answer_raw);
                    r.answer_extracted = e.answer;
                    break;
                }
                case VerifierKind::ExactMatch:
                    r.answer_extracted = normalize_answer(*r.answer_raw);
                    break;
                case VerifierKind::ExternalJudgeStub:
                    break;
            }
        }
        r.correct = check(r.answer_extracted, spec);
        if (r.correct == Verdict::Unknown) {
            ++unknown_count_;
            if (!flagged_path_.empty()) {
                nlohmann::ordered_json flag;
                flag["question_id"] = r.question_id;
                flag["trace"] = r.answer_raw.value_or("");
                flag["reference_solutions"] = "<attach human-written reference solutions here>";
                std::ofstream out(flagged_path_, std::ios::app);
                out << flag.dump() << '\n';
            }
        }
        if (prune_raw_) r.answer_raw.reset();
    }
    return batch;
}

std::unique_ptr<Sampler> make_backend(const RunConfig& config) {
    if (config.backend == BackendKind::Simulated) {
        return std::make_unique<SimulatedSampler>(Scenario::load(config.scenario_path));
    }
    EndpointConfig ec;
    const auto& j = config.endpoint;
    ec.base_url = j.at("base_url").get<std::string>();
    ec.model = j.value("model", "");
    ec.auth_env = j.value("auth_env", "");
    ec.chunk_size = j.value("chunk_size", 8L);
    ec.max_in_flight = j.value("max_in_flight", 4);
    ec.timeout_ms = j.value("timeout_ms", 60000);
    ec.max_retries = j.value("max_retries", 4);
    ec.backoff_base_ms = j.value("backoff_base_ms", 250);
    ec.backoff_cap_ms = j.value("backoff_cap_ms", 4000);
    ec.max_tokens = j.value("max_tokens", 4096L);
    ec.request_logprobs = j.value("logprobs", false);
    return std::make_unique<HttpSampler>(ec);
}

namespace {

std::map<std::string, VerifierSpec> spec_map(const RunConfig& config) {
    std::map<std::string, VerifierSpec> specs;
    for (const auto& q : config.questions) specs[q.question_id] = q.verifier;
    return specs;
}

std::map<std::string, std::string> prompt_map(const RunConfig& config) {
    std::map<std::string, std::string> prompts;
    for (const auto& q : config.questions) prompts[q.question_id] = q.prompt;
    return prompts;
}

RunReport finish_report(const RunConfig& config, const TraceStore& store,
                        VerifyingSampler& sampler) {
    RunReport rep = build_report(store.records(), config.run_id);
    rep.entropy_is_lower_bound = sampler.saw_lower_bound_entropy();
    rep.config_echo = config.echo;
    rep.write(config.out_dir);
    return rep;
}

}  // namespace

RunReport cmd_sweep(const RunConfig& config) {
    RunLock lock(config.out_dir);
    TraceStore store(config.out_dir / (config.run_id + ".jsonl"));
    if (!store.records().empty() && !config.resume) {
        throw ConfigError("store already has records for this run; pass resume to continue");
    }

    auto backend = make_backend(config);
    VerifyingSampler sampler(*backend, spec_map(config), config.prune_raw,
                             config.out_dir / "flagged.jsonl");

    // already-stored sample counts per (question, temperature), for resume
    std::map<std::pair<std::string, int>, long> have;
    for (const auto& r : store.records()) {
        ++have[{r.question_id, r.temperature.tenths()}];
    }

    for (const auto& q : config.questions) {
        for (const auto& t : config.plan.temperatures) {
            long target = config.plan.samples.at(t);
            long existing = have[{q.question_id, t.tenths()}];
            if (existing >= target) continue;
            SampleRequest req;
            req.run_id = config.run_id;
            req.question_id = q.question_id;
            req.prompt = q.prompt;
            req.temperature = t;
            req.count = target - existing;
            req.round = 1;
            req.first_index = static_cast<int>(existing);
            req.run_seed = config.seed;
            SampleBatch batch;
            try {
                batch = sampler.sample(req);
            } catch (const BackendError& e) {
                throw BackendError("question " + q.question_id + " at T=" + t.str() + ": " +
                                   e.what());
            }
            for (const auto& r : batch.records) store.append(r);
        }
    }
    return finish_report(config, store, sampler);
}

RunReport cmd_vote(const RunConfig& config) {
    if (!config.voting) throw ConfigError("vote requires a voting section in the config");
    RunLock lock(config.out_dir);
    TraceStore store(config.out_dir / (config.run_id + ".jsonl"));

    auto backend = make_backend(config);
    VerifyingSampler sampler(*backend, spec_map(config), config.prune_raw,
                             config.out_dir / "flagged.jsonl");

    std::set<Temperature> excluded(config.voting_excluded.begin(), config.voting_excluded.end());
    TemperaturePlan fallback = config.plan.without(excluded);

    std::vector<std::string> questions;
    for (const auto& q : config.questions) questions.push_back(q.question_id);

    VotingRunResult result;
    try {
        result = run_voting(questions, *config.voting, sampler, fallback, config.plan,
                            config.run_id, config.seed, prompt_map(config));
    } catch (const BackendError& e) {
        throw BackendError(std::string("voting run: ") + e.what());
    }
    for (const auto& r : result.records) store.append(r);

    RunReport rep = build_report(store.records(), config.run_id);
    rep.entropy_is_lower_bound = sampler.saw_lower_bound_entropy();
    rep.has_voting = true;
    rep.voting_usage = result.usage;
    rep.samples_used = result.samples_used;
    rep.samples_full_grid = result.samples_full_grid;
    rep.delta_c = result.delta_c;
    rep.config_echo = config.echo;
    rep.write(config.out_dir);
    return rep;
}

RunReport cmd_report(const std::vector<std::filesystem::path>& store_paths,
                     const std::filesystem::path& out_dir, const std::string& run_id,
                     const ReportOptions& options) {
    if (store_paths.empty()) throw ConfigError("report: no store paths given");
    std::vector<TraceRecord> records;
    for (const auto& p : store_paths) {
        auto loaded = TraceStore::load(p);
        records.insert(records.end(), std::make_move_iterator(loaded.begin()),
                       std::make_move_iterator(loaded.end()));
    }
    RunReport rep = build_report(records, run_id, options);
    rep.write(out_dir);
    return rep;
}

}  // namespace tempscale
