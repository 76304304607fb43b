#include "votesim/session.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "votesim/errors.hpp"

namespace votesim {

namespace {

const Script kPaperJackson{"paper-jackson", "Jackson", {"upgrade-transport", "own-report", "joke", "get-rid", "fence"}};
const Script kPaperKingston{"paper-kingston", "Kingston", {"lower-taxes", "own-report", "loves", "really-loves", "fence"}};

std::string poll_label(int index) { return "P" + std::to_string(index); }

const ActionChoice* find_option(const std::vector<ActionChoice>& menu, std::string_view id) {
    auto it = std::find_if(menu.begin(), menu.end(), [&](const ActionChoice& a) { return a.id == id; });
    return it == menu.end() ? nullptr : &*it;
}

void check_script(const Scenario& s, const Script& script, std::size_t who) {
    if (script.choices.size() != s.rounds.size()) {
        throw ConfigError("script '" + script.id + "' has " + std::to_string(script.choices.size()) +
                          " choices for " + std::to_string(s.rounds.size()) + " rounds");
    }
    const std::string& cand = s.candidates[who].id;
    for (std::size_t r = 0; r < s.rounds.size(); ++r) {
        if (!find_option(s.rounds[r].menus.at(cand), script.choices[r])) {
            throw ConfigError("script '" + script.id + "': no option '" + script.choices[r] + "' for " + cand +
                              " in round " + s.rounds[r].id);
        }
    }
}

struct PhaseContext {
    StimulusSource source;
    std::size_t actor;
    std::string option;
};

/// Resolves every row's audience against the electorate as it stands, then applies all rows.
void apply_rows(Session& s, const std::vector<StimulusCall>& rows, const PhaseContext& ctx) {
    if (rows.empty()) return;
    const Scenario& sc = *s.scenario;
    const CandidateSpec& actor = sc.candidates[ctx.actor];
    const CandidateSpec& other = sc.candidates[1 - ctx.actor];
    const ResponseType& kind = s.model.registry.get(response::kKind);

    const std::size_t n = s.electorate.voters.size();
    std::vector<char> member(rows.size() * n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const Voter& voter = s.electorate.voters[v];
        std::optional<RabbitStance> stance;
        std::optional<double> like;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Audience& a = rows[r].audience;
            if (!a.covers(voter.bloc, actor.party)) continue;
            if (!a.rabbit.empty()) {
                if (!stance) stance = rabbit_stance(voter, s.model);
                if (std::find(a.rabbit.begin(), a.rabbit.end(), *stance) == a.rabbit.end()) continue;
            }
            if (a.min_like) {
                if (!like) like = effective_attitude(voter.profile, voter.ledger, actor.id, kind);
                if (*like < *a.min_like) continue;
            }
            member[r * n + v] = 1;
        }
    }

    const int poll = static_cast<int>(s.polls.size());
    for (std::size_t v = 0; v < n; ++v) {
        Voter& voter = s.electorate.voters[v];
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!member[r * n + v]) continue;
            const StimulusCall& row = rows[r];
            const std::string& target = row.target == TargetRole::Self       ? actor.id
                                        : row.target == TargetRole::Opponent ? other.id
                                                                             : std::string(kRabbitsTarget);
            const ResponseType& rt = s.model.registry.get(row.response_type);
            for (int k = 0; k < row.repeat; ++k) {
                const double d = apply_stimulus(voter.profile, voter.ledger, target, rt, row.positive, sc.engine, s.rng);
                if (s.record_stimuli) {
                    s.stimuli.push_back(StimulusRecord{poll, ctx.source, actor.id, ctx.option, voter.id, voter.bloc,
                                                       target, row.response_type, row.positive, d});
                }
            }
        }
    }
}

PollSnapshot record_poll(Session& s) {
    const int index = static_cast<int>(s.polls.size());
    const Phase phase = index == 0 ? Phase::PreReveal : Phase::Revealed;
    s.polls.push_back(take_poll(s.electorate, s.candidates, phase, s.model, poll_label(index)));
    s.round_pointer = static_cast<int>(s.polls.size());
    return s.polls.back();
}

// FNV-1a, 64 bit.
struct Hasher {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double d) { u64(std::bit_cast<std::uint64_t>(d)); }
    void str(std::string_view s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
};

void hash_electorate(Hasher& h, const Electorate& e) {
    h.u64(e.voters.size());
    for (const Voter& v : e.voters) {
        h.u64(static_cast<std::uint64_t>(v.id));
        h.u64(static_cast<std::uint64_t>(v.bloc));
        for (double score : v.profile.scores()) h.f64(score);
        h.u64(v.ledger.entries().size());
        for (const auto& [key, off] : v.ledger.entries()) {
            h.str(key.first);
            h.str(key.second);
            h.f64(off);
        }
    }
}

}  // namespace

const Script& paper_jackson_script() { return kPaperJackson; }
const Script& paper_kingston_script() { return kPaperKingston; }

std::optional<Script> find_script(std::string_view id) {
    if (id == kPaperJackson.id) return kPaperJackson;
    if (id == kPaperKingston.id) return kPaperKingston;
    return std::nullopt;
}

std::vector<std::string> script_names() { return {kPaperJackson.id, kPaperKingston.id}; }

std::string_view stimulus_source_name(StimulusSource s) noexcept {
    switch (s) {
        case StimulusSource::Baggage: return "baggage";
        case StimulusSource::Reveal: return "reveal";
        case StimulusSource::Event: return "event";
        case StimulusSource::Choice: return "choice";
        case StimulusSource::Opponent: return "opponent";
    }
    return "?";
}

std::string_view session_step_name(SessionStep s) noexcept {
    switch (s) {
        case SessionStep::Baggage: return "baggage";
        case SessionStep::Choice: return "choice";
        case SessionStep::Complete: return "complete";
    }
    return "?";
}

SessionStep Session::step() const noexcept {
    if (round_pointer <= 1) return SessionStep::Baggage;
    if (round_pointer >= kPollCount) return SessionStep::Complete;
    return SessionStep::Choice;
}

std::size_t Session::choice_round() const {
    if (step() != SessionStep::Choice) throw StateError("session is not in a choice round");
    return static_cast<std::size_t>(round_pointer - 2);
}

Session new_session(std::shared_ptr<const Scenario> scenario, std::uint64_t seed, SessionOptions options) {
    if (!scenario) throw ConfigError("no scenario");
    scenario->validate();

    Session s;
    s.scenario = scenario;
    s.seed = seed;
    s.model = VoteModel(scenario->registry, scenario->rules);
    s.candidates = scenario->candidate_pair();
    s.record_stimuli = options.record_stimuli;

    if (!options.played.empty()) {
        auto idx = scenario->candidate_index(options.played);
        if (!idx) throw ConfigError("unknown candidate '" + options.played + "'");
        s.played = *idx;
    }

    s.opponent = options.opponent.value_or(OpponentPolicy{scenario->opponent, {}});
    if (s.opponent.mode == OpponentMode::FixedScript) {
        const std::string& id = s.opponent.script.empty() ? s.opponent_candidate().script : s.opponent.script;
        if (id.empty()) throw ConfigError("fixed-script opponent " + s.opponent_candidate().id + " has no script");
        auto script = find_script(id);
        if (!script) throw ConfigError("unknown script '" + id + "'");
        if (scenario->candidate_index(script->candidate) != 1 - s.played) {
            throw ConfigError("script '" + id + "' is not for " + s.opponent_candidate().id);
        }
        check_script(*scenario, *script, 1 - s.played);
        s.opponent_script = std::move(*script);
    }

    s.electorate = build_electorate(scenario->population, seed, s.model);
    s.rng = FuzzStream(derive_seed(seed ^ scenario->engine.rng_seed, 1));
    record_poll(s);
    return s;
}

PollSnapshot apply_baggage(Session& s) {
    if (s.step() != SessionStep::Baggage || s.polls.size() != 1) throw StateError("baggage already applied");
    for (std::size_t c = 0; c < 2; ++c) {
        apply_rows(s, s.scenario->candidates[c].baggage, {StimulusSource::Baggage, c, {}});
    }
    for (std::size_t c = 0; c < 2; ++c) {
        apply_rows(s, s.scenario->reveal, {StimulusSource::Reveal, c, {}});
    }
    return record_poll(s);
}

const std::vector<ActionChoice>& available_choices(const Session& s) {
    if (s.step() == SessionStep::Baggage) throw StateError("polling-only step: apply baggage first");
    if (s.step() == SessionStep::Complete) throw StateError("session complete");
    return s.scenario->menu(s.choice_round(), s.played_candidate().id);
}

std::optional<std::string> scripted_opponent(const Session& s, const OpponentPolicy& policy) {
    if (policy.mode == OpponentMode::Inert) return std::nullopt;
    const std::size_t round = s.choice_round();
    if (policy == s.opponent && s.opponent_script) return s.opponent_script->choices.at(round);
    const std::string& id = policy.script.empty() ? s.opponent_candidate().script : policy.script;
    auto script = find_script(id);
    if (!script) throw ConfigError("unknown script '" + id + "'");
    if (round >= script->choices.size()) throw ConfigError("script '" + id + "' is too short");
    return script->choices[round];
}

std::optional<std::string> scripted_opponent(const Session& s) { return scripted_opponent(s, s.opponent); }

PollSnapshot apply_choice(Session& s, std::string_view option_id) {
    if (s.complete()) throw StateError("session complete");
    const auto& menu = available_choices(s);
    const ActionChoice* option = find_option(menu, option_id);
    if (!option) {
        throw InvalidChoice("'" + std::string(option_id) + "' is not on " + s.played_candidate().id + "'s menu for round " +
                            s.scenario->rounds[s.choice_round()].id);
    }

    const std::size_t round = s.choice_round();
    const Round& r = s.scenario->rounds[round];
    const std::size_t opp = 1 - s.played;
    const std::optional<std::string> opp_choice = scripted_opponent(s);
    const ActionChoice* opp_option = nullptr;
    if (opp_choice) {
        opp_option = find_option(r.menus.at(s.scenario->candidates[opp].id), *opp_choice);
        if (!opp_option) throw ConfigError("opponent option '" + *opp_choice + "' not on the menu");
    }

    apply_rows(s, r.event, {StimulusSource::Event, s.played, {}});
    apply_rows(s, option->effects, {StimulusSource::Choice, s.played, option->id});
    if (opp_option) apply_rows(s, opp_option->effects, {StimulusSource::Opponent, opp, opp_option->id});

    s.transcript.push_back({r.id, s.played_candidate().id, option->id, opp_option ? opp_option->id : std::string{}});
    return record_poll(s);
}

Session replay(std::shared_ptr<const Scenario> scenario, std::uint64_t seed, const SessionOptions& options,
               const std::vector<std::string>& choices) {
    Session s = new_session(std::move(scenario), seed, options);
    apply_baggage(s);
    for (const std::string& c : choices) apply_choice(s, c);
    return s;
}

std::vector<std::string> played_choices(const Session& s) {
    std::vector<std::string> out;
    for (const TranscriptEntry& t : s.transcript) out.push_back(t.option);
    return out;
}

std::uint64_t electorate_digest(const Electorate& e) {
    Hasher h;
    hash_electorate(h, e);
    return h.h;
}

std::uint64_t state_digest(const Session& s) {
    Hasher h;
    h.u64(s.seed);
    h.u64(static_cast<std::uint64_t>(s.round_pointer));
    h.u64(s.played);
    hash_electorate(h, s.electorate);
    h.u64(s.polls.size());
    for (const PollSnapshot& p : s.polls) {
        h.str(p.label);
        for (VoteChoice v : p.votes) h.u64(static_cast<std::uint64_t>(v));
        h.u64(static_cast<std::uint64_t>(p.rabbit_net_like));
    }
    for (const TranscriptEntry& t : s.transcript) {
        h.str(t.round_id);
        h.str(t.option);
        h.str(t.opponent_option);
    }
    h.u64(s.stimuli.size());
    h.str(s.rng.state());
    return h.h;
}

}  // namespace votesim
