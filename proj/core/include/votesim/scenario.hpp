#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "votesim/electorate.hpp"
#include "votesim/engine.hpp"
#include "votesim/response_type.hpp"

namespace votesim {

/// Audience tokens, resolved relative to the candidate whose action is being applied.
enum class AudienceGroup : std::uint8_t {
    All,
    Own,       ///< all three blocs of the acting candidate's party
    Opposing,  ///< all three blocs of the other party
    Others,    ///< everyone outside the acting candidate's party
    Neutral,
    Undecided,
    OwnExtreme,
    OwnSolid,
    OwnLeaning,
    OpposingExtreme,
    OpposingSolid,
    OpposingLeaning,
};

std::string_view audience_group_name(AudienceGroup g) noexcept;
std::optional<AudienceGroup> parse_audience_group(std::string_view name);

struct Audience {
    std::vector<AudienceGroup> groups{AudienceGroup::All};  ///< union
    std::vector<RabbitStance> rabbit;                       ///< empty = any stance
    std::optional<double> min_like;  ///< effective like of the acting candidate, inclusive

    /// Whether a bloc is covered by the groups when `actor` is acting.
    bool covers(Bloc bloc, Party actor) const noexcept;

    friend bool operator==(const Audience&, const Audience&) = default;
};

enum class TargetRole : std::uint8_t { Self, Opponent, Rabbits };
std::string_view target_role_name(TargetRole r) noexcept;

/// One row of an effect table: `repeat` engine calls on one response type for every
/// voter in the audience.
struct StimulusCall {
    std::string response_type;
    bool positive = true;
    int repeat = 1;
    Audience audience;
    TargetRole target = TargetRole::Self;

    friend bool operator==(const StimulusCall&, const StimulusCall&) = default;
};

struct ActionChoice {
    std::string id;
    std::string label;
    std::vector<StimulusCall> effects;

    friend bool operator==(const ActionChoice&, const ActionChoice&) = default;
};

struct Round {
    std::string id;
    std::string title;
    bool rabbit_issue = false;
    /// Applied to the played candidate before the choice (e.g. a damaging report).
    std::vector<StimulusCall> event;
    /// Candidate id -> options on offer.
    std::map<std::string, std::vector<ActionChoice>> menus;
};

struct CandidateSpec {
    std::string id;  ///< also the attitude target id
    std::string name;
    Party party = Party::Conservative;
    std::vector<StimulusCall> baggage;
    /// Fixed script this candidate follows when auto-played as the opponent.
    std::string script;
};

enum class OpponentMode : std::uint8_t { Inert, FixedScript };
std::string_view opponent_mode_name(OpponentMode m) noexcept;
std::optional<OpponentMode> parse_opponent_mode(std::string_view name);

struct Scenario {
    std::string id;
    std::string title;
    EngineConfig engine;
    ResponseRegistry registry;
    VotingRules rules;
    PopulationSpec population = PopulationSpec::standard();
    /// Index 0 plays as CandidateA.
    std::array<CandidateSpec, 2> candidates;
    /// Party-identification rows applied for each candidate at reveal, after baggage.
    std::vector<StimulusCall> reveal;
    std::vector<Round> rounds;
    OpponentMode opponent = OpponentMode::FixedScript;

    /// Number of decision rounds every complete session goes through.
    static constexpr std::size_t kRoundCount = 5;

    /// Throws ConfigError describing the first problem found.
    void validate() const;

    CandidatePair candidate_pair() const;
    /// Index of a candidate by id, case-insensitive; empty if unknown.
    std::optional<std::size_t> candidate_index(std::string_view id) const;
    /// Throws InvalidChoice for an unknown candidate.
    const std::vector<ActionChoice>& menu(std::size_t round, std::string_view candidate) const;
};

/// Engine section of any config file: engine tunables plus the response-type registry.
struct EngineSettings {
    EngineConfig engine;
    ResponseRegistry registry;
};

/// Parses a scenario document; throws ConfigError on malformed or invalid input.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
/// Reads only the engine and response_types sections.
EngineSettings parse_engine_settings(std::string_view text);

/// Resolves a scenario name ("same-baggage") or a path to a file.
std::filesystem::path find_scenario_file(const std::filesystem::path& dir, std::string_view name_or_path);
/// Scenario ids available in a directory (files ending in .scn), sorted.
std::vector<std::string> list_scenarios(const std::filesystem::path& dir);
/// Directory with the shipped scenarios: $VOTESIM_SCENARIO_DIR, else the build-time default.
std::filesystem::path default_scenario_dir();

}  // namespace votesim
