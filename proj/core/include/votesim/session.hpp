#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "votesim/electorate.hpp"
#include "votesim/engine.hpp"
#include "votesim/scenario.hpp"

namespace votesim {

/// Fixed list of options, one per decision round, for one candidate.
struct Script {
    std::string id;
    std::string candidate;
    std::vector<std::string> choices;

    friend bool operator==(const Script&, const Script&) = default;
};

/// [upgrade-transport, own-report, joke, get-rid, fence] for Jackson.
const Script& paper_jackson_script();
/// [lower-taxes, own-report, loves, really-loves, fence] for Kingston.
const Script& paper_kingston_script();
/// Built-in scripts by id ("paper-jackson", "paper-kingston").
std::optional<Script> find_script(std::string_view id);
std::vector<std::string> script_names();

struct OpponentPolicy {
    OpponentMode mode = OpponentMode::FixedScript;
    /// Script id; empty uses the opponent's script from the scenario.
    std::string script;

    friend bool operator==(const OpponentPolicy&, const OpponentPolicy&) = default;
};

enum class StimulusSource : std::uint8_t { Baggage, Reveal, Event, Choice, Opponent };
std::string_view stimulus_source_name(StimulusSource s) noexcept;

/// One apply_stimulus invocation, recorded for audits.
struct StimulusRecord {
    int poll = 0;  ///< index of the poll this stimulus precedes
    StimulusSource source = StimulusSource::Choice;
    std::string actor;   ///< candidate whose row this is
    std::string option;  ///< option id ("" for baggage/reveal/event)
    int voter = 0;
    Bloc bloc = Bloc::Neutral;
    TargetId target;
    std::string response_type;
    bool positive = true;
    double delta = 0.0;
};

struct TranscriptEntry {
    std::string round_id;
    std::string candidate;
    std::string option;
    std::string opponent_option;  ///< empty when the opponent did nothing

    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct SessionOptions {
    /// Candidate the human (or script) plays; empty = the first candidate.
    std::string played;
    /// Defaults to the scenario's policy with the opponent's own script.
    std::optional<OpponentPolicy> opponent;
    bool record_stimuli = true;
};

enum class SessionStep : std::uint8_t { Baggage, Choice, Complete };
std::string_view session_step_name(SessionStep s) noexcept;

/// Seven polls in total: P0 before reveal, P1 after baggage, P2..P6 after each round.
inline constexpr int kPollCount = 7;

/// Campaign state. Owned by one thread at a time; copyable snapshot.
struct Session {
    std::shared_ptr<const Scenario> scenario;
    std::uint64_t seed = 0;
    VoteModel model;
    Electorate electorate;
    CandidatePair candidates;
    std::size_t played = 0;
    OpponentPolicy opponent;
    std::optional<Script> opponent_script;  ///< resolved script for fixed-script mode
    /// 0 pre-reveal, 1 baggage step, 2..6 choice rounds, 7 final. Equals polls.size().
    int round_pointer = 0;
    std::vector<PollSnapshot> polls;
    std::vector<TranscriptEntry> transcript;
    std::vector<StimulusRecord> stimuli;
    bool record_stimuli = true;
    FuzzStream rng{0};

    SessionStep step() const noexcept;
    bool complete() const noexcept { return step() == SessionStep::Complete; }
    /// Index into scenario->rounds; throws StateError outside a choice round.
    std::size_t choice_round() const;
    const CandidateSpec& played_candidate() const { return scenario->candidates[played]; }
    const CandidateSpec& opponent_candidate() const { return scenario->candidates[1 - played]; }
};

/// Builds the electorate and records P0. Throws ConfigError on an invalid scenario,
/// unknown played candidate or a script that does not fit the menus.
Session new_session(std::shared_ptr<const Scenario> scenario, std::uint64_t seed, SessionOptions options = {});

/// Applies both candidates' baggage and the reveal rows, records and returns P1.
PollSnapshot apply_baggage(Session& session);

/// Menu of the played candidate for the current round. Throws StateError otherwise.
const std::vector<ActionChoice>& available_choices(const Session& session);

/// Event rows, the played option, then the opponent's option; records and returns the next poll.
/// Throws InvalidChoice (state untouched) or StateError.
PollSnapshot apply_choice(Session& session, std::string_view option_id);

/// Option the opponent plays this round; empty for inert (no stimuli).
std::optional<std::string> scripted_opponent(const Session& session, const OpponentPolicy& policy);
std::optional<std::string> scripted_opponent(const Session& session);

/// new_session + apply_baggage + one apply_choice per entry.
Session replay(std::shared_ptr<const Scenario> scenario, std::uint64_t seed, const SessionOptions& options,
               const std::vector<std::string>& choices);

/// Options the played candidate chose so far.
std::vector<std::string> played_choices(const Session& session);

/// FNV-1a over electorate, polls, transcript, pointer and RNG state.
std::uint64_t state_digest(const Session& session);

/// Per-voter state hash (profiles and ledgers only).
std::uint64_t electorate_digest(const Electorate& electorate);

}  // namespace votesim
