#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "votesim/run_record.hpp"
#include "votesim/scenario.hpp"
#include "votesim/session.hpp"

namespace votesim {

/// new_session, apply_baggage, then one apply_choice per script entry. The opponent is
/// inert unless a policy is given. Throws ConfigError on a script/round mismatch.
RunRecord run_scripted(std::shared_ptr<const Scenario> scenario, const Script& script, std::uint64_t seed,
                       OpponentPolicy opponent = {OpponentMode::Inert, {}});

/// Runs seeds first..first+count-1.
std::vector<RunRecord> run_seeds(std::shared_ptr<const Scenario> scenario, const Script& script,
                                 std::uint64_t first_seed, int count,
                                 OpponentPolicy opponent = {OpponentMode::Inert, {}});

struct ArmSpec {
    std::string name;
    std::string scenario;
    std::string script;
    int runs = 0;
    /// Index of the candidate the baggage favours; empty for symmetric scenarios.
    std::optional<std::size_t> favored;
};

/// 5x paper-jackson and 5x paper-kingston on same-baggage, 3x paper-jackson on each
/// asymmetric scenario.
const std::vector<ArmSpec>& protocol_arms();

/// Mean uses exact rational sums; sign counts are {negative, zero, positive}.
struct DeltaStats {
    double mean = 0.0;
    std::array<int, 3> signs{};
    int min = 0;
    int max = 0;

    friend bool operator==(const DeltaStats&, const DeltaStats&) = default;
};

struct RoundStats {
    std::string label;  ///< later poll, "P1".."P6"
    std::array<DeltaStats, 2> votes;
    std::array<DeltaStats, 2> likes_more;
    std::array<DeltaStats, 2> trusts_more;
    DeltaStats rabbit_net_like;

    friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

/// Net-like-rabbits at a rabbit poll next to the played candidate's vote change into it.
struct RabbitPair {
    std::size_t run = 0;
    std::string label;
    int net_like = 0;
    int vote_delta = 0;

    friend bool operator==(const RabbitPair&, const RabbitPair&) = default;
};

struct AggregateStats {
    std::size_t runs = 0;
    std::vector<RoundStats> rounds;
    std::vector<RabbitPair> rabbit_pairs;

    friend bool operator==(const AggregateStats&, const AggregateStats&) = default;
};

/// Throws std::invalid_argument on an empty list or records of unequal length.
/// Vote deltas are indexed by candidate slot (A, B).
AggregateStats summarize(const std::vector<RunRecord>& records);

struct BandCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Arm {
    ArmSpec spec;
    std::vector<RunRecord> runs;
    AggregateStats stats;
};

struct ReplicationReport {
    std::uint64_t base_seed = 0;
    std::vector<Arm> arms;
    std::vector<BandCheck> bands;
    double elapsed_seconds = 0.0;

    std::size_t total_runs() const;
};

/// The 16-run protocol on seeds base..base+15, with directional band checks per arm.
ReplicationReport replicate_paper(std::uint64_t base_seed,
                                  const std::filesystem::path& scenario_dir = default_scenario_dir());

std::string render_report_text(const ReplicationReport& report);
std::string render_report_json(const ReplicationReport& report);

}  // namespace votesim
