#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "votesim/electorate.hpp"
#include "votesim/session.hpp"

namespace votesim {

/// Change between two consecutive polls.
struct PollDelta {
    std::string label;  ///< label of the later poll
    std::array<int, 2> votes{};
    std::array<int, 2> likes_more{};
    std::array<int, 2> trusts_more{};
    int rabbit_net_like = 0;

    friend bool operator==(const PollDelta&, const PollDelta&) = default;
};

/// Everything needed to reproduce and analyse one completed session.
struct RunRecord {
    std::string scenario_id;
    std::uint64_t seed = 0;
    std::string script_id;  ///< empty for interactive play
    std::string played;
    std::array<std::string, 2> candidates;  ///< ids of CandidateA, CandidateB
    std::string opponent_policy;
    std::vector<TranscriptEntry> transcript;
    std::vector<PollSnapshot> polls;

    /// polls[i] - polls[i-1] for i = 1..n-1.
    std::vector<PollDelta> deltas() const;
    /// Index (0 or 1) of the played candidate.
    std::size_t played_index() const;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord make_run_record(const Session& session, std::string script_id = {});

enum class ExportFormat : std::uint8_t { Tabular, Structured };

/// Tabular: CSV, one row per poll, fixed header, LF endings.
/// Structured: JSON with transcript and per-voter votes; round-trips through import_run.
std::string export_run(const RunRecord& record, ExportFormat format);
/// Throws IoError when the stream fails.
void write_run(const RunRecord& record, ExportFormat format, std::ostream& out);
/// Parses the structured format; throws ConfigError on malformed input.
RunRecord import_run(std::string_view text);

/// Header line of the tabular format (without the newline).
std::string_view tabular_header();

}  // namespace votesim
