#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "votesim/attitude.hpp"
#include "votesim/engine.hpp"
#include "votesim/profile.hpp"
#include "votesim/response_type.hpp"

namespace votesim {

enum class Bloc : std::uint8_t {
    VeryConservative,
    Conservative,
    LeansConservative,
    VeryLiberal,
    Liberal,
    LeansLiberal,
    Neutral,
    Undecided,
};

inline constexpr std::array<Bloc, 8> kAllBlocs = {
    Bloc::VeryConservative, Bloc::Conservative, Bloc::LeansConservative, Bloc::VeryLiberal,
    Bloc::Liberal,          Bloc::LeansLiberal, Bloc::Neutral,           Bloc::Undecided,
};

enum class Party : std::uint8_t { Conservative, Liberal };
enum class Leaning : std::uint8_t { Conservative, Neutral, Liberal };
enum class VoteChoice : std::uint8_t { CandidateA, CandidateB, Abstain };
enum class Phase : std::uint8_t { PreReveal, Revealed };

std::string_view bloc_name(Bloc b) noexcept;
std::optional<Bloc> parse_bloc(std::string_view name);
std::string_view party_name(Party p) noexcept;
std::optional<Party> parse_party(std::string_view name);
std::string_view leaning_name(Leaning l) noexcept;
std::string_view vote_choice_name(VoteChoice v) noexcept;
std::optional<VoteChoice> parse_vote_choice(std::string_view name);

/// Party wing a bloc belongs to; empty for Neutral and Undecided.
std::optional<Party> bloc_party(Bloc b) noexcept;
/// Profile preset each bloc starts from.
std::string_view bloc_preset(Bloc b) noexcept;

/// Synthetic attitude target for the rabbit issue.
inline constexpr std::string_view kRabbitsTarget = "Rabbits";

/// Thresholds and weights of the voting model. Defaults are the calibrated values.
struct VotingRules {
    double liberal_threshold = 55.0;       ///< liberalism >= this is Liberal
    double conservative_threshold = 45.0;  ///< liberalism <= this is Conservative
    double party_bonus = 10.0;             ///< score bonus for the candidate of the voter's leaning
    double loyalty_slope = 3.0;            ///< extra bonus per point of leaning strength past the onset
    double loyalty_onset = 20.0;           ///< leaning strength |liberalism - 50| where loyalty starts
    double like_weight = 0.5;
    double trust_weight = 0.5;
    double vote_threshold = 50.0;   ///< best score needed to vote
    double decision_margin = 7.0;   ///< lead over the other candidate needed to vote
    double turnout_threshold = 30.0;
    double turnout_divisor = 4.0;
    double attitude_band = 10.0;        ///< like/trust gap that counts as "more"
    double rabbit_like_band = 55.0;     ///< effective rabbit_like >= this likes rabbits
    double rabbit_dislike_band = 45.0;  ///< <= this dislikes rabbits
    double rabbit_spread = 20.0;        ///< initial rabbit offset ~ U[-spread, spread]

    void validate() const;
    friend bool operator==(const VotingRules&, const VotingRules&) = default;
};

/// Response registry plus voting rules; everything the electorate functions read.
struct VoteModel {
    /// Defaults: built-in registry with rabbit_like added, default rules.
    VoteModel();
    VoteModel(ResponseRegistry registry, VotingRules rules);

    ResponseRegistry registry;
    VotingRules rules;
};

struct CandidateRef {
    TargetId id;
    Party party;
    friend bool operator==(const CandidateRef&, const CandidateRef&) = default;
};
/// Index 0 is CandidateA, index 1 CandidateB.
using CandidatePair = std::array<CandidateRef, 2>;

struct Voter {
    int id = 0;
    Bloc bloc = Bloc::Neutral;
    FacetProfile profile;
    AttitudeLedger ledger;

    friend bool operator==(const Voter&, const Voter&) = default;
};

struct Electorate {
    std::vector<Voter> voters;
    friend bool operator==(const Electorate&, const Electorate&) = default;
};

/// Bloc -> head count. Iteration order follows the Bloc enumeration.
struct PopulationSpec {
    std::map<Bloc, int> counts;

    /// 10/10/5 per party wing, 25 neutral, 25 undecided.
    static PopulationSpec standard();
    int total() const;
};

/// Voters are laid out bloc by bloc in enumeration order with ids 0..99.
/// Throws ConfigError when counts do not sum to 100.
Electorate build_electorate(const PopulationSpec& spec, std::uint64_t seed,
                            const VoteModel& model = {});

struct LeaningResult {
    double liberalism;
    Leaning leaning;
};
/// Mean of fantasy, aesthetics, ideas and values, classified against the rule thresholds.
LeaningResult political_leaning(const FacetProfile& profile, const VotingRules& rules = {});

/// How the voter currently sees one candidate.
struct Perception {
    double like;
    double trust;
    double efficiency;
    double dependability;
};
Perception perceive(const Voter& voter, std::string_view candidate, const VoteModel& model);

/// like/trust blend plus the party-loyalty bonus.
double candidate_score(const Voter& voter, const CandidateRef& candidate, const VoteModel& model);

/// Candidate the voter scores highest after reveal; empty on an exact tie or pre-reveal.
std::optional<std::size_t> preferred_candidate(const Voter& voter, const CandidatePair& candidates,
                                               Phase phase, const VoteModel& model);

double turnout_motivation(const Voter& voter, const CandidatePair& candidates, Phase phase,
                          const VoteModel& model = {});

VoteChoice decide_vote(const Voter& voter, const CandidatePair& candidates, Phase phase,
                       const VoteModel& model = {});

enum class RabbitStance : std::uint8_t { Likes, Dislikes, NeutralOn };
std::string_view rabbit_stance_name(RabbitStance s) noexcept;
RabbitStance rabbit_stance(const Voter& voter, const VoteModel& model);

/// Voters liking rabbits minus voters disliking them.
int rabbit_net_like(const Electorate& electorate, const VoteModel& model = {});

struct PollSnapshot {
    std::string label;
    Phase phase = Phase::PreReveal;
    std::vector<VoteChoice> votes;  ///< one per voter, in voter order
    std::array<int, 2> votes_for{};
    int abstentions = 0;
    std::array<int, 2> likes_more{};
    std::array<int, 2> trusts_more{};
    int rabbit_net_like = 0;

    friend bool operator==(const PollSnapshot&, const PollSnapshot&) = default;
};

/// Read-only survey of every voter.
PollSnapshot take_poll(const Electorate& electorate, const CandidatePair& candidates, Phase phase,
                       const VoteModel& model = {}, std::string label = {});

/// Recomputes the tallies of a snapshot from its per-voter choices.
std::array<int, 3> tally_votes(const std::vector<VoteChoice>& votes);

}  // namespace votesim
