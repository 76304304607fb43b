#pragma once

// Effect-table audit: replays every option of every round from the stimulus log and
// compares per-voter call counts with the canonical table.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "support/canonical_effects.hpp"
#include "votesim/scenario.hpp"
#include "votesim/session.hpp"

namespace votesim::testing {

struct AuditResult {
    int checked_pairs = 0;  // (option, voter) pairs compared
    std::vector<std::string> failures;
};

inline std::string describe(const ExpectedCounts& c) {
    std::string s = "{";
    for (const auto& [k, n] : c) s += " " + k.target + ":" + k.rt + (k.positive ? "+" : "-") + "x" + std::to_string(n);
    return s + " }";
}

inline const Script& own_script(std::string_view candidate) {
    return candidate == "Jackson" ? paper_jackson_script() : paper_kingston_script();
}

inline AuditResult audit_scenario(const std::shared_ptr<const Scenario>& sc, std::uint64_t seed) {
    AuditResult out;
    for (std::size_t who = 0; who < 2; ++who) {
        const CandidateSpec& cand = sc->candidates[who];
        const CandidateSpec& opp = sc->candidates[1 - who];
        const Script& prefix = own_script(cand.id);
        for (std::size_t round = 0; round < sc->rounds.size(); ++round) {
            SessionOptions opts;
            opts.played = cand.id;
            opts.opponent = OpponentPolicy{OpponentMode::Inert, {}};
            Session base = new_session(sc, seed, opts);
            apply_baggage(base);
            for (std::size_t r = 0; r < round; ++r) apply_choice(base, prefix.choices[r]);

            std::vector<std::string> ids;
            for (const ActionChoice& a : available_choices(base)) ids.push_back(a.id);
            if (ids != canonical_menu(cand.id, round)) {
                out.failures.push_back(cand.id + " round " + std::to_string(round + 1) + ": menu differs");
            }

            std::vector<VoterView> views;
            const ResponseType& kind = base.model.registry.get("kind");
            for (const Voter& v : base.electorate.voters) {
                views.push_back({v.bloc, rabbit_stance(v, base.model),
                                 effective_attitude(v.profile, v.ledger, cand.id, kind)});
            }
            const std::string& round_id = sc->rounds[round].id;
            const bool has_event = !sc->rounds[round].event.empty();

            for (const std::string& option : ids) {
                Session s = base;
                const std::size_t mark = s.stimuli.size();
                apply_choice(s, option);
                const auto events = observed_counts(s.stimuli, mark, StimulusSource::Event, cand.id, opp.id);
                const auto choice = observed_counts(s.stimuli, mark, StimulusSource::Choice, cand.id, opp.id);
                for (std::size_t i = mark; i < s.stimuli.size(); ++i) {
                    const StimulusRecord& r = s.stimuli[i];
                    if ((r.delta > 0) != r.positive || r.delta == 0.0) {
                        out.failures.push_back(cand.id + "/" + option + ": delta sign disagrees with call sign");
                        break;
                    }
                    if (r.source == StimulusSource::Opponent) {
                        out.failures.push_back(cand.id + "/" + option + ": inert opponent produced stimuli");
                        break;
                    }
                }
                for (std::size_t v = 0; v < views.size(); ++v) {
                    const int id = s.electorate.voters[v].id;
                    // Stance-dependent rows are only offered in rounds without an event, so the
                    // pre-choice snapshot is the one the rows were resolved against.
                    const ExpectedCounts want = canonical_option(cand.id, cand.party, option, views[v]);
                    const auto it = choice.find(id);
                    const ExpectedCounts got = it == choice.end() ? ExpectedCounts{} : it->second;
                    if (got != want) {
                        out.failures.push_back(sc->id + " seed " + std::to_string(seed) + " " + cand.id + "/" + option +
                                               " voter " + std::to_string(id) + " (" +
                                               std::string(bloc_name(views[v].bloc)) + "): expected " + describe(want) +
                                               " got " + describe(got));
                    }
                    const ExpectedCounts want_event = has_event ? canonical_event(round_id) : ExpectedCounts{};
                    const auto eit = events.find(id);
                    const ExpectedCounts got_event = eit == events.end() ? ExpectedCounts{} : eit->second;
                    if (got_event != want_event) {
                        out.failures.push_back(cand.id + "/" + round_id + " event voter " + std::to_string(id) +
                                               ": expected " + describe(want_event) + " got " + describe(got_event));
                    }
                    ++out.checked_pairs;
                }
            }
        }
    }
    return out;
}

}  // namespace votesim::testing
