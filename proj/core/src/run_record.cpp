#include "votesim/run_record.hpp"

#include <ostream>

#include <json.hpp>

#include "votesim/errors.hpp"

namespace votesim {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kFormatTag = "votesim-run/1";
constexpr std::string_view kHeader =
    "poll,phase,step,choice,opponent_choice,votes_a,votes_b,abstain,likes_more_a,likes_more_b,"
    "trusts_more_a,trusts_more_b,rabbit_net_like";

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

char vote_char(VoteChoice v) {
    switch (v) {
        case VoteChoice::CandidateA: return 'A';
        case VoteChoice::CandidateB: return 'B';
        case VoteChoice::Abstain: return '-';
    }
    return '?';
}

std::string_view phase_name(Phase p) { return p == Phase::PreReveal ? "pre-reveal" : "revealed"; }

json pair_json(const std::array<int, 2>& a) { return json::array({a[0], a[1]}); }

std::array<int, 2> pair_from(const json& v, const char* what) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        throw ConfigError(std::string("run record: '") + what + "' must be a pair of integers");
    }
    return {v[0].get<int>(), v[1].get<int>()};
}

json delta_json(const PollDelta& d) {
    json j;
    j["label"] = d.label;
    j["votes"] = pair_json(d.votes);
    j["likes_more"] = pair_json(d.likes_more);
    j["trusts_more"] = pair_json(d.trusts_more);
    j["rabbit_net_like"] = d.rabbit_net_like;
    return j;
}

const json& field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string("run record: missing '") + key + "'");
    return obj.at(key);
}

std::string str_field(const json& obj, const char* key) {
    const json& v = field(obj, key);
    if (!v.is_string()) throw ConfigError(std::string("run record: '") + key + "' must be a string");
    return v.get<std::string>();
}

int int_field(const json& obj, const char* key) {
    const json& v = field(obj, key);
    if (!v.is_number_integer()) throw ConfigError(std::string("run record: '") + key + "' must be an integer");
    return v.get<int>();
}

}  // namespace

std::string_view tabular_header() { return kHeader; }

std::vector<PollDelta> RunRecord::deltas() const {
    std::vector<PollDelta> out;
    for (std::size_t i = 1; i < polls.size(); ++i) {
        const PollSnapshot& a = polls[i - 1];
        const PollSnapshot& b = polls[i];
        PollDelta d;
        d.label = b.label;
        for (std::size_t c = 0; c < 2; ++c) {
            d.votes[c] = b.votes_for[c] - a.votes_for[c];
            d.likes_more[c] = b.likes_more[c] - a.likes_more[c];
            d.trusts_more[c] = b.trusts_more[c] - a.trusts_more[c];
        }
        d.rabbit_net_like = b.rabbit_net_like - a.rabbit_net_like;
        out.push_back(std::move(d));
    }
    return out;
}

std::size_t RunRecord::played_index() const {
    if (played == candidates[0]) return 0;
    if (played == candidates[1]) return 1;
    throw StateError("played candidate '" + played + "' is not in the record");
}

RunRecord make_run_record(const Session& s, std::string script_id) {
    RunRecord r;
    r.scenario_id = s.scenario->id;
    r.seed = s.seed;
    r.script_id = std::move(script_id);
    r.played = s.played_candidate().id;
    r.candidates = {s.candidates[0].id, s.candidates[1].id};
    r.opponent_policy = std::string(opponent_mode_name(s.opponent.mode));
    if (s.opponent.mode == OpponentMode::FixedScript && s.opponent_script) {
        r.opponent_policy += ":" + s.opponent_script->id;
    }
    r.transcript = s.transcript;
    r.polls = s.polls;
    return r;
}

std::string export_run(const RunRecord& r, ExportFormat format) {
    if (format == ExportFormat::Tabular) {
        std::string out(kHeader);
        out += '\n';
        for (std::size_t i = 0; i < r.polls.size(); ++i) {
            const PollSnapshot& p = r.polls[i];
            std::string step = i == 0 ? "pre-reveal" : i == 1 ? "baggage" : "";
            std::string choice, opp;
            if (i >= 2 && i - 2 < r.transcript.size()) {
                const TranscriptEntry& t = r.transcript[i - 2];
                step = t.round_id;
                choice = t.option;
                opp = t.opponent_option;
            }
            out += csv_field(p.label) + ',' + std::string(phase_name(p.phase)) + ',' + csv_field(step) + ',' +
                   csv_field(choice) + ',' + csv_field(opp);
            for (int v : {p.votes_for[0], p.votes_for[1], p.abstentions, p.likes_more[0], p.likes_more[1],
                          p.trusts_more[0], p.trusts_more[1], p.rabbit_net_like}) {
                out += ',' + std::to_string(v);
            }
            out += '\n';
        }
        return out;
    }

    json j;
    j["format"] = kFormatTag;
    j["scenario"] = r.scenario_id;
    j["seed"] = r.seed;
    j["script"] = r.script_id;
    j["played"] = r.played;
    j["candidates"] = json::array({r.candidates[0], r.candidates[1]});
    j["opponent_policy"] = r.opponent_policy;
    json transcript = json::array();
    for (const TranscriptEntry& t : r.transcript) {
        transcript.push_back({{"round", t.round_id},
                              {"candidate", t.candidate},
                              {"option", t.option},
                              {"opponent_option", t.opponent_option}});
    }
    j["transcript"] = std::move(transcript);
    json polls = json::array();
    for (const PollSnapshot& p : r.polls) {
        json pj;
        pj["label"] = p.label;
        pj["phase"] = phase_name(p.phase);
        pj["votes"] = pair_json(p.votes_for);
        pj["abstain"] = p.abstentions;
        pj["likes_more"] = pair_json(p.likes_more);
        pj["trusts_more"] = pair_json(p.trusts_more);
        pj["rabbit_net_like"] = p.rabbit_net_like;
        std::string voters;
        for (VoteChoice v : p.votes) voters += vote_char(v);
        pj["voters"] = voters;
        polls.push_back(std::move(pj));
    }
    j["polls"] = std::move(polls);
    json deltas = json::array();
    for (const PollDelta& d : r.deltas()) deltas.push_back(delta_json(d));
    j["deltas"] = std::move(deltas);
    return j.dump(2) + "\n";
}

void write_run(const RunRecord& record, ExportFormat format, std::ostream& out) {
    out << export_run(record, format);
    out.flush();
    if (!out) throw IoError("failed to write run record");
}

RunRecord import_run(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("run record: ") + e.what());
    }
    if (str_field(j, "format") != kFormatTag) throw ConfigError("run record: unsupported format");

    RunRecord r;
    r.scenario_id = str_field(j, "scenario");
    const json& seed = field(j, "seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw ConfigError("run record: bad seed");
    r.seed = seed.get<std::uint64_t>();
    r.script_id = str_field(j, "script");
    r.played = str_field(j, "played");
    const json& cands = field(j, "candidates");
    if (!cands.is_array() || cands.size() != 2 || !cands[0].is_string() || !cands[1].is_string()) {
        throw ConfigError("run record: 'candidates' must be two ids");
    }
    r.candidates = {cands[0].get<std::string>(), cands[1].get<std::string>()};
    r.opponent_policy = str_field(j, "opponent_policy");

    for (const json& t : field(j, "transcript")) {
        r.transcript.push_back(
            {str_field(t, "round"), str_field(t, "candidate"), str_field(t, "option"), str_field(t, "opponent_option")});
    }
    for (const json& pj : field(j, "polls")) {
        PollSnapshot p;
        p.label = str_field(pj, "label");
        const std::string phase = str_field(pj, "phase");
        if (phase == "pre-reveal") p.phase = Phase::PreReveal;
        else if (phase == "revealed") p.phase = Phase::Revealed;
        else throw ConfigError("run record: bad phase '" + phase + "'");
        p.votes_for = pair_from(field(pj, "votes"), "votes");
        p.abstentions = int_field(pj, "abstain");
        p.likes_more = pair_from(field(pj, "likes_more"), "likes_more");
        p.trusts_more = pair_from(field(pj, "trusts_more"), "trusts_more");
        p.rabbit_net_like = int_field(pj, "rabbit_net_like");
        for (char c : str_field(pj, "voters")) {
            switch (c) {
                case 'A': p.votes.push_back(VoteChoice::CandidateA); break;
                case 'B': p.votes.push_back(VoteChoice::CandidateB); break;
                case '-': p.votes.push_back(VoteChoice::Abstain); break;
                default: throw ConfigError("run record: bad voter code");
            }
        }
        const auto tally = tally_votes(p.votes);
        if (tally[0] != p.votes_for[0] || tally[1] != p.votes_for[1] || tally[2] != p.abstentions) {
            throw ConfigError("run record: poll " + p.label + " tallies disagree with voter codes");
        }
        r.polls.push_back(std::move(p));
    }
    const json& deltas = field(j, "deltas");
    json expect = json::array();
    for (const PollDelta& d : r.deltas()) expect.push_back(delta_json(d));
    if (deltas != expect) throw ConfigError("run record: deltas disagree with polls");
    return r;
}

}  // namespace votesim
