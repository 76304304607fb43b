#include "votesim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "votesim/errors.hpp"

namespace votesim {

using json = nlohmann::ordered_json;

namespace {

// Rabbit rounds are the last three of the five; their polls are P4..P6.
constexpr std::size_t kFirstRabbitPoll = 4;

DeltaStats stats_of(const std::vector<int>& xs) {
    DeltaStats s;
    long long sum = 0;
    s.min = xs.front();
    s.max = xs.front();
    for (int x : xs) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
        ++s.signs[x < 0 ? 0 : x == 0 ? 1 : 2];
    }
    s.mean = static_cast<double>(sum) / static_cast<double>(xs.size());
    return s;
}

std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

json stats_json(const DeltaStats& s) {
    return {{"mean", s.mean}, {"negative", s.signs[0]}, {"zero", s.signs[1]}, {"positive", s.signs[2]},
            {"min", s.min}, {"max", s.max}};
}

int count_if_runs(const std::vector<RunRecord>& runs, auto pred) {
    return static_cast<int>(std::count_if(runs.begin(), runs.end(), pred));
}

BandCheck check(std::string name, bool pass, std::string detail) {
    return {std::move(name), pass, std::move(detail)};
}

std::vector<BandCheck> evaluate_bands(const std::vector<Arm>& arms) {
    std::vector<BandCheck> out;

    std::string sizes;
    bool shape = arms.size() == 4;
    for (const Arm& a : arms) {
        sizes += (sizes.empty() ? "" : "/") + std::to_string(a.runs.size());
        shape = shape && static_cast<int>(a.runs.size()) == a.spec.runs;
        for (const RunRecord& r : a.runs) shape = shape && r.polls.size() == kPollCount;
    }
    out.push_back(check("protocol shape", shape && sizes == "5/5/3/3", "arms " + sizes + ", 7 polls per run"));

    for (const Arm& a : arms) {
        if (a.runs.empty()) continue;
        const std::size_t me = a.runs.front().played_index();
        const int n = static_cast<int>(a.runs.size());

        if (!a.spec.favored) {
            const int ok = count_if_runs(a.runs, [](const RunRecord& r) {
                for (std::size_t c = 0; c < 2; ++c) {
                    const int d = r.polls[1].votes_for[c] - r.polls[0].votes_for[c];
                    if (d < -2 || d > 10) return false;
                }
                return true;
            });
            out.push_back(check(a.spec.name + ": reveal gains within [-2, 10]", ok * 10 >= n * 9,
                                std::to_string(ok) + "/" + std::to_string(n) + " runs"));
        } else {
            const std::size_t fav = *a.spec.favored;
            const int lead = count_if_runs(a.runs, [&](const RunRecord& r) {
                return r.polls[1].votes_for[fav] - r.polls[1].votes_for[1 - fav] >= 10;
            });
            const int caught = count_if_runs(a.runs, [&](const RunRecord& r) {
                return r.polls.back().votes_for[1 - fav] > r.polls.back().votes_for[fav];
            });
            out.push_back(check(a.spec.name + ": favored leads by >= 10 at P1", lead * 2 > n,
                                std::to_string(lead) + "/" + std::to_string(n) + " runs"));
            out.push_back(check(a.spec.name + ": trailing candidate never leads at P6", caught == 0,
                                std::to_string(caught) + " runs overtaken"));
        }

        const AggregateStats& s = a.stats;
        if (a.spec.script == paper_kingston_script().id) {
            const int r1 = s.rounds[1].votes[me].signs[1] + s.rounds[1].votes[me].signs[2];
            out.push_back(check(a.spec.name + ": non-OTT round 1 delta >= 0", r1 * 10 >= n * 7,
                                std::to_string(r1) + "/" + std::to_string(n) + " runs"));
            const int up = count_if_runs(a.runs, [](const RunRecord& r) {
                return r.polls[6].rabbit_net_like > r.polls[4].rabbit_net_like;
            });
            out.push_back(check(a.spec.name + ": rabbit net-like rises P4 -> P6", up * 10 >= n * 9,
                                std::to_string(up) + "/" + std::to_string(n) + " runs"));
        }
        out.push_back(check(a.spec.name + ": own-report mean delta <= 0", s.rounds[2].votes[me].mean <= 0.0,
                            "mean " + fmt(s.rounds[2].votes[me].mean)));
        if (a.spec.script == paper_jackson_script().id && !a.spec.favored) {
            const double m = s.rounds[3].votes[me].mean;
            out.push_back(check(a.spec.name + ": joke mean delta in [-3, 0]", m >= -3.0 && m <= 0.0, "mean " + fmt(m)));
        }
    }
    return out;
}

}  // namespace

RunRecord run_scripted(std::shared_ptr<const Scenario> scenario, const Script& script, std::uint64_t seed,
                       OpponentPolicy opponent) {
    if (!scenario) throw ConfigError("no scenario");
    if (script.choices.size() != scenario->rounds.size()) {
        throw ConfigError("script '" + script.id + "' has " + std::to_string(script.choices.size()) + " choices for " +
                          std::to_string(scenario->rounds.size()) + " rounds");
    }
    SessionOptions opts;
    opts.played = script.candidate;
    opts.opponent = std::move(opponent);
    opts.record_stimuli = false;
    Session s = new_session(std::move(scenario), seed, opts);
    apply_baggage(s);
    for (const std::string& choice : script.choices) {
        try {
            apply_choice(s, choice);
        } catch (const InvalidChoice& e) {
            throw ConfigError("script '" + script.id + "': " + e.what());
        }
    }
    return make_run_record(s, script.id);
}

std::vector<RunRecord> run_seeds(std::shared_ptr<const Scenario> scenario, const Script& script,
                                 std::uint64_t first_seed, int count, OpponentPolicy opponent) {
    std::vector<RunRecord> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) out.push_back(run_scripted(scenario, script, first_seed + i, opponent));
    return out;
}

const std::vector<ArmSpec>& protocol_arms() {
    static const std::vector<ArmSpec> arms = {
        {"jackson/same-baggage", "same-baggage", "paper-jackson", 5, std::nullopt},
        {"kingston/same-baggage", "same-baggage", "paper-kingston", 5, std::nullopt},
        {"jackson/jackson-favored", "jackson-favored", "paper-jackson", 3, 0},
        {"jackson/kingston-favored", "kingston-favored", "paper-jackson", 3, 1},
    };
    return arms;
}

AggregateStats summarize(const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    const std::size_t polls = records.front().polls.size();
    for (const RunRecord& r : records) {
        if (r.polls.size() != polls) throw std::invalid_argument("summarize: records have different poll counts");
    }

    AggregateStats out;
    out.runs = records.size();
    std::vector<std::vector<PollDelta>> deltas;
    for (const RunRecord& r : records) deltas.push_back(r.deltas());

    for (std::size_t k = 0; k + 1 < polls; ++k) {
        RoundStats rs;
        rs.label = deltas.front()[k].label;
        for (std::size_t c = 0; c < 2; ++c) {
            std::vector<int> v, l, t;
            for (const auto& d : deltas) {
                v.push_back(d[k].votes[c]);
                l.push_back(d[k].likes_more[c]);
                t.push_back(d[k].trusts_more[c]);
            }
            rs.votes[c] = stats_of(v);
            rs.likes_more[c] = stats_of(l);
            rs.trusts_more[c] = stats_of(t);
        }
        std::vector<int> rb;
        for (const auto& d : deltas) rb.push_back(d[k].rabbit_net_like);
        rs.rabbit_net_like = stats_of(rb);
        out.rounds.push_back(std::move(rs));
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        const RunRecord& r = records[i];
        std::size_t me = 0;
        try {
            me = r.played_index();
        } catch (const StateError&) {
            continue;
        }
        for (std::size_t p = kFirstRabbitPoll; p < polls; ++p) {
            out.rabbit_pairs.push_back(
                {i, r.polls[p].label, r.polls[p].rabbit_net_like, r.polls[p].votes_for[me] - r.polls[p - 1].votes_for[me]});
        }
    }
    return out;
}

std::size_t ReplicationReport::total_runs() const {
    std::size_t n = 0;
    for (const Arm& a : arms) n += a.runs.size();
    return n;
}

ReplicationReport replicate_paper(std::uint64_t base_seed, const std::filesystem::path& scenario_dir) {
    const auto start = std::chrono::steady_clock::now();
    ReplicationReport report;
    report.base_seed = base_seed;

    std::map<std::string, std::shared_ptr<const Scenario>> loaded;
    std::uint64_t seed = base_seed;
    for (const ArmSpec& spec : protocol_arms()) {
        auto& sc = loaded[spec.scenario];
        if (!sc) sc = std::make_shared<const Scenario>(load_scenario(find_scenario_file(scenario_dir, spec.scenario)));
        const auto script = find_script(spec.script);
        if (!script) throw ConfigError("unknown script '" + spec.script + "'");
        Arm arm;
        arm.spec = spec;
        arm.runs = run_seeds(sc, *script, seed, spec.runs);
        seed += static_cast<std::uint64_t>(spec.runs);
        arm.stats = summarize(arm.runs);
        report.arms.push_back(std::move(arm));
    }
    report.bands = evaluate_bands(report.arms);
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string render_report_text(const ReplicationReport& report) {
    std::ostringstream out;
    out << "replication: " << report.total_runs() << " runs, seeds " << report.base_seed << ".."
        << report.base_seed + report.total_runs() - 1 << ", " << fmt(report.elapsed_seconds, 3) << " s\n";
    for (const Arm& arm : report.arms) {
        const std::size_t me = arm.runs.front().played_index();
        const auto& c = arm.runs.front().candidates;
        out << "\n[" << arm.spec.name << "] " << arm.runs.size() << " runs, playing " << c[me] << "\n";
        out << "  poll  mean d" << c[0] << "  mean d" << c[1] << "  played -/0/+  rabbit net\n";
        for (const RoundStats& rs : arm.stats.rounds) {
            char line[160];
            std::snprintf(line, sizeof line, "  %-4s  %9s  %9s  %4d/%d/%d  %9s\n", rs.label.c_str(),
                          fmt(rs.votes[0].mean).c_str(), fmt(rs.votes[1].mean).c_str(), rs.votes[me].signs[0],
                          rs.votes[me].signs[1], rs.votes[me].signs[2], fmt(rs.rabbit_net_like.mean).c_str());
            out << line;
        }
        out << "  final tallies:";
        for (const RunRecord& r : arm.runs) {
            const PollSnapshot& p = r.polls.back();
            out << " " << p.votes_for[0] << "-" << p.votes_for[1];
        }
        out << "\n  net like rabbits -> change in votes:";
        for (const RabbitPair& rp : arm.stats.rabbit_pairs) {
            out << " " << rp.label << " " << rp.net_like << "->" << (rp.vote_delta > 0 ? "+" : "") << rp.vote_delta;
        }
        out << "\n";
    }
    out << "\nbands:\n";
    for (const BandCheck& b : report.bands) {
        out << "  " << (b.pass ? "PASS " : "FAIL ") << b.name << " (" << b.detail << ")\n";
    }
    return out.str();
}

std::string render_report_json(const ReplicationReport& report) {
    json j;
    j["base_seed"] = report.base_seed;
    j["total_runs"] = report.total_runs();
    j["elapsed_seconds"] = report.elapsed_seconds;
    json arms = json::array();
    for (const Arm& arm : report.arms) {
        json a;
        a["name"] = arm.spec.name;
        a["scenario"] = arm.spec.scenario;
        a["script"] = arm.spec.script;
        json seeds = json::array();
        for (const RunRecord& r : arm.runs) seeds.push_back(r.seed);
        a["seeds"] = std::move(seeds);
        json rounds = json::array();
        for (const RoundStats& rs : arm.stats.rounds) {
            rounds.push_back({{"label", rs.label},
                              {"votes", json::array({stats_json(rs.votes[0]), stats_json(rs.votes[1])})},
                              {"likes_more", json::array({stats_json(rs.likes_more[0]), stats_json(rs.likes_more[1])})},
                              {"trusts_more", json::array({stats_json(rs.trusts_more[0]), stats_json(rs.trusts_more[1])})},
                              {"rabbit_net_like", stats_json(rs.rabbit_net_like)}});
        }
        a["rounds"] = std::move(rounds);
        json pairs = json::array();
        for (const RabbitPair& rp : arm.stats.rabbit_pairs) {
            pairs.push_back({{"run", rp.run}, {"poll", rp.label}, {"net_like", rp.net_like}, {"vote_delta", rp.vote_delta}});
        }
        a["rabbit_pairs"] = std::move(pairs);
        json runs = json::array();
        for (const RunRecord& r : arm.runs) runs.push_back(json::parse(export_run(r, ExportFormat::Structured)));
        a["runs"] = std::move(runs);
        arms.push_back(std::move(a));
    }
    j["arms"] = std::move(arms);
    json bands = json::array();
    for (const BandCheck& b : report.bands) bands.push_back({{"name", b.name}, {"pass", b.pass}, {"detail", b.detail}});
    j["bands"] = std::move(bands);
    return j.dump(2) + "\n";
}

}  // namespace votesim
