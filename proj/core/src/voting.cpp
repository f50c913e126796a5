#include "tempscale/voting.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tempscale/errors.hpp"

namespace tempscale {

void VotingParams::validate() const {
    if (temperatures.empty()) throw DomainError("voting: no temperatures");
    for (const auto& t : temperatures) {
        if (t.is_zero()) throw DomainError("voting: T=0 cannot vote (one deterministic trace)");
    }
    if (max_rounds < 1) throw DomainError("voting: max_rounds must be >= 1");
    if (min_rounds < 1 || min_rounds > max_rounds) {
        throw DomainError("voting: need 1 <= min_rounds <= max_rounds");
    }
    if (tau_intra <= 0.0 || tau_intra > 1.0 || tau_cross <= 0.0 || tau_cross > 1.0) {
        throw DomainError("voting: thresholds must be in (0,1]");
    }
}

IntraVote intra_vote(const std::vector<std::string>& pool) {
    if (pool.empty()) throw DomainError("intra_vote: empty pool");
    std::map<std::string, long> counts;
    for (const auto& a : pool) ++counts[a];
    // std::map iterates in lexicographic order, so the first maximum is the
    // tie-broken winner
    const std::string* best = nullptr;
    long best_count = 0;
    for (const auto& [answer, count] : counts) {
        if (count > best_count) {
            best = &answer;
            best_count = count;
        }
    }
    return {*best, static_cast<double>(best_count) / static_cast<double>(pool.size())};
}

IntraVote cross_vote(const std::vector<std::string>& majorities, int temperature_count) {
    if (majorities.empty()) throw DomainError("cross_vote: no votes");
    if (temperature_count < static_cast<int>(majorities.size())) {
        throw DomainError("cross_vote: more votes than temperatures");
    }
    IntraVote v = intra_vote(majorities);
    long winners = std::count(majorities.begin(), majorities.end(), v.answer);
    return {v.answer, static_cast<double>(winners) / static_cast<double>(temperature_count)};
}

VotingSession::VotingSession(std::vector<std::string> questions, VotingParams params)
    : params_(std::move(params)), questions_(std::move(questions)) {
    params_.validate();
    if (questions_.empty()) throw DomainError("voting: no questions");
    std::sort(questions_.begin(), questions_.end());
    questions_.erase(std::unique(questions_.begin(), questions_.end()), questions_.end());
    for (const auto& q : questions_) {
        QuestionState st;
        for (const auto& t : params_.temperatures) st.pools[t] = {};
        state_.emplace(q, std::move(st));
    }
}

bool VotingSession::is_active(const std::string& question_id) const {
    return state_.at(question_id).active;
}

std::optional<int> VotingSession::exit_round(const std::string& question_id) const {
    return state_.at(question_id).exit_round;
}

int VotingSession::rounds_completed(const std::string& question_id) const {
    return state_.at(question_id).rounds_completed;
}

const std::vector<std::string>& VotingSession::pool(const std::string& question_id,
                                                    Temperature t) const {
    return state_.at(question_id).pools.at(t);
}

long VotingSession::active_count() const {
    long n = 0;
    for (const auto& [q, st] : state_) n += st.active ? 1 : 0;
    return n;
}

std::vector<VoteOutcome> VotingSession::step_round(
    Sampler& sampler, const std::string& run_id, uint64_t run_seed,
    std::vector<TraceRecord>& sink, const std::map<std::string, std::string>& prompts) {
    if (round_ >= params_.max_rounds) throw DomainError("voting: max_rounds already reached");
    ++round_;
    const int m = static_cast<int>(params_.temperatures.size());

    std::vector<VoteOutcome> outcomes;
    for (const auto& qid : questions_) {
        QuestionState& st = state_.at(qid);
        if (!st.active) continue;

        // Fetch the whole round for this question before touching its pools,
        // so a sampler failure leaves the question's state unchanged.
        std::vector<std::pair<Temperature, TraceRecord>> fetched;
        try {
            for (const auto& t : params_.temperatures) {
                SampleRequest req;
                req.run_id = run_id;
                req.question_id = qid;
                auto pit = prompts.find(qid);
                if (pit != prompts.end()) req.prompt = pit->second;
                req.temperature = t;
                req.count = 1;
                req.round = st.rounds_completed + 1;
                req.run_seed = run_seed;
                SampleBatch batch = sampler.sample(req);
                if (batch.records.size() != 1) {
                    throw BackendError("voting: expected 1 record, got " +
                                       std::to_string(batch.records.size()));
                }
                fetched.emplace_back(t, std::move(batch.records.front()));
            }
        } catch (const std::exception&) {
            continue;  // aborted atomically; retried next round
        }

        ++st.rounds_completed;
        for (auto& [t, rec] : fetched) {
            st.pools[t].push_back(rec.answer_extracted.value_or(""));
            sink.push_back(std::move(rec));
        }

        VoteOutcome out;
        out.question_id = qid;
        out.round = round_;
        out.all_intra_passed = true;
        std::vector<std::string> majorities;
        for (const auto& t : params_.temperatures) {
            IntraVote v = intra_vote(st.pools[t]);
            if (v.fraction >= params_.tau_intra) {
                majorities.push_back(v.answer);
            } else {
                out.all_intra_passed = false;
            }
            out.intra.emplace(t, std::move(v));
        }
        if (out.all_intra_passed) {
            out.cross = cross_vote(majorities, m);
            if (out.cross->fraction >= params_.tau_cross &&
                st.rounds_completed >= params_.min_rounds) {
                out.decision = VoteDecision::Exit;
                st.active = false;
                st.exit_round = round_;
            }
        }
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

VotingRunResult run_voting(const std::vector<std::string>& questions,
                           const VotingParams& params, Sampler& sampler,
                           const TemperaturePlan& fallback_plan,
                           const TemperaturePlan& baseline_plan,
                           const std::string& run_id, uint64_t run_seed,
                           const std::map<std::string, std::string>& prompts) {
    fallback_plan.validate();
    baseline_plan.validate();
    VotingSession session(std::vector<std::string>(questions), params);

    VotingRunResult result;
    while (session.round() < params.max_rounds && session.active_count() > 0) {
        session.step_round(sampler, run_id, run_seed, result.records, prompts);
    }

    const long m = static_cast<long>(params.temperatures.size());
    for (const auto& qid : session.questions()) {
        QuestionUsage usage;
        usage.question_id = qid;
        usage.exit_round = session.exit_round(qid);
        usage.samples_used = m * session.rounds_completed(qid);
        if (!usage.exit_round) {
            // survivor: full fallback allocation on top of the voting rounds
            for (const auto& t : fallback_plan.temperatures) {
                long count = fallback_plan.samples.at(t);
                if (count == 0) continue;
                SampleRequest req;
                req.run_id = run_id;
                req.question_id = qid;
                auto pit = prompts.find(qid);
                if (pit != prompts.end()) req.prompt = pit->second;
                req.temperature = t;
                req.count = count;
                req.round = params.max_rounds + 1;
                req.run_seed = run_seed;
                SampleBatch batch = sampler.sample(req);
                for (auto& rec : batch.records) result.records.push_back(std::move(rec));
                usage.samples_used += count - batch.deficit;
            }
            ++result.survived;
        } else {
            ++result.exited;
        }
        result.samples_used += usage.samples_used;
        result.usage.push_back(std::move(usage));
    }

    result.samples_full_grid =
        static_cast<long>(session.questions().size()) * baseline_plan.total_samples();
    result.delta_c = delta_c(result.samples_used, result.samples_full_grid);
    return result;
}

double delta_c(long samples_used, long samples_full_grid) {
    if (samples_full_grid <= 0) throw DomainError("delta_c: full-grid sample count must be > 0");
    if (samples_used < 0 || samples_used > samples_full_grid) {
        throw DomainError("delta_c: samples_used must be in [0, full]");
    }
    return 1.0 - static_cast<double>(samples_used) / static_cast<double>(samples_full_grid);
}

std::string usage_to_csv(const std::vector<QuestionUsage>& usage) {
    std::ostringstream os;
    os << "question_id,exit_round,samples_used\n";
    for (const auto& u : usage) {
        os << u.question_id << ',';
        if (u.exit_round) {
            os << *u.exit_round;
        } else {
            os << "survived";
        }
        os << ',' << u.samples_used << '\n';
    }
    return os.str();
}

}  // namespace tempscale
