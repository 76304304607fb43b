#include <gtest/gtest.h>

#include <json.hpp>

#include "support/fixtures.hpp"
#include "votesim/experiments.hpp"

using namespace votesim;
using votesim::testing::shipped;

TEST(Protocol, ArmsAreFixed) {
    const auto& arms = protocol_arms();
    ASSERT_EQ(arms.size(), 4u);
    EXPECT_EQ(arms[0].scenario, "same-baggage");
    EXPECT_EQ(arms[0].script, "paper-jackson");
    EXPECT_EQ(arms[1].script, "paper-kingston");
    EXPECT_EQ(arms[2].scenario, "jackson-favored");
    EXPECT_EQ(arms[3].scenario, "kingston-favored");
    EXPECT_EQ(arms[2].favored, 0u);
    EXPECT_EQ(arms[3].favored, 1u);
    EXPECT_FALSE(arms[0].favored);
    int total = 0;
    for (const ArmSpec& a : arms) total += a.runs;
    EXPECT_EQ(total, 16);
    EXPECT_EQ((std::vector<int>{arms[0].runs, arms[1].runs, arms[2].runs, arms[3].runs}), (std::vector<int>{5, 5, 3, 3}));
}

TEST(Protocol, PaperScripts) {
    EXPECT_EQ(paper_jackson_script().choices,
              (std::vector<std::string>{"upgrade-transport", "own-report", "joke", "get-rid", "fence"}));
    EXPECT_EQ(paper_kingston_script().choices,
              (std::vector<std::string>{"lower-taxes", "own-report", "loves", "really-loves", "fence"}));
}

TEST(Replicate, SixteenRunsOnConsecutiveSeeds) {
    const ReplicationReport rep = replicate_paper(42, votesim::testing::scenario_dir());
    EXPECT_EQ(rep.total_runs(), 16u);
    EXPECT_EQ(rep.base_seed, 42u);
    std::uint64_t seed = 42;
    for (const Arm& a : rep.arms) {
        EXPECT_EQ(a.runs.size(), static_cast<std::size_t>(a.spec.runs));
        for (const RunRecord& r : a.runs) {
            EXPECT_EQ(r.seed, seed++);
            EXPECT_EQ(r.polls.size(), 7u);
            EXPECT_EQ(r.script_id, a.spec.script);
            EXPECT_EQ(r.opponent_policy, "inert");
        }
        EXPECT_EQ(a.stats, summarize(a.runs));
    }
    EXPECT_FALSE(rep.bands.empty());
    const auto j = nlohmann::json::parse(render_report_json(rep));
    EXPECT_EQ(j["arms"].size(), 4u);
    EXPECT_NE(render_report_text(rep).find("replication: 16 runs"), std::string::npos);
}

TEST(Replicate, SameSeedSameReport) {
    const auto a = replicate_paper(3, votesim::testing::scenario_dir());
    const auto b = replicate_paper(3, votesim::testing::scenario_dir());
    for (std::size_t i = 0; i < a.arms.size(); ++i) EXPECT_EQ(a.arms[i].runs, b.arms[i].runs);
}

TEST(Summarize, MatchesBruteForce) {
    const auto runs = run_seeds(shipped("same-baggage"), paper_kingston_script(), 1, 12);
    const AggregateStats s = summarize(runs);
    ASSERT_EQ(s.runs, 12u);
    ASSERT_EQ(s.rounds.size(), 6u);
    for (std::size_t k = 1; k < 7; ++k) {
        const RoundStats& rs = s.rounds[k - 1];
        EXPECT_EQ(rs.label, "P" + std::to_string(k));
        for (std::size_t c = 0; c < 2; ++c) {
            long sum = 0, tsum = 0;
            int neg = 0, zero = 0, pos = 0, mn = 1000, mx = -1000;
            for (const RunRecord& r : runs) {
                const int d = r.polls[k].votes_for[c] - r.polls[k - 1].votes_for[c];
                sum += d;
                tsum += r.polls[k].trusts_more[c] - r.polls[k - 1].trusts_more[c];
                neg += d < 0;
                zero += d == 0;
                pos += d > 0;
                mn = std::min(mn, d);
                mx = std::max(mx, d);
            }
            EXPECT_EQ(rs.votes[c].mean, static_cast<double>(sum) / 12.0);
            EXPECT_EQ(rs.trusts_more[c].mean, static_cast<double>(tsum) / 12.0);
            EXPECT_EQ(rs.votes[c].signs, (std::array<int, 3>{neg, zero, pos}));
            EXPECT_EQ(rs.votes[c].min, mn);
            EXPECT_EQ(rs.votes[c].max, mx);
        }
    }
    // Rabbit pairs: P4..P6 for each run, vote change of the played candidate.
    ASSERT_EQ(s.rabbit_pairs.size(), 36u);
    for (const RabbitPair& p : s.rabbit_pairs) {
        const RunRecord& r = runs[p.run];
        const std::size_t k = static_cast<std::size_t>(p.label[1] - '0');
        EXPECT_GE(k, 4u);
        EXPECT_EQ(p.net_like, r.polls[k].rabbit_net_like);
        EXPECT_EQ(p.vote_delta, r.polls[k].votes_for[1] - r.polls[k - 1].votes_for[1]);
    }
}

TEST(Summarize, IdenticalRecordsHaveZeroSpread) {
    const RunRecord r = run_scripted(shipped("same-baggage"), paper_jackson_script(), 1);
    const AggregateStats s = summarize({r, r, r, r});
    for (const RoundStats& rs : s.rounds) {
        for (std::size_t c = 0; c < 2; ++c) {
            EXPECT_EQ(rs.votes[c].min, rs.votes[c].max);
            EXPECT_EQ(rs.votes[c].mean, static_cast<double>(rs.votes[c].min));
            const auto& sg = rs.votes[c].signs;
            EXPECT_EQ(std::max({sg[0], sg[1], sg[2]}), 4);
        }
    }
}

TEST(Summarize, Errors) {
    EXPECT_THROW(summarize({}), std::invalid_argument);
    RunRecord a = run_scripted(shipped("same-baggage"), paper_jackson_script(), 1);
    RunRecord b = a;
    b.polls.pop_back();
    EXPECT_THROW(summarize({a, b}), std::invalid_argument);
}

TEST(Summarize, LovingDislikedRabbitsCostsVotes) {
    // Push most of the electorate to dislike rabbits before the first rabbit round.
    std::vector<RunRecord> runs;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Session s = new_session(shipped("same-baggage"), seed, {"Kingston", OpponentPolicy{OpponentMode::Inert, {}}, false});
        apply_baggage(s);
        apply_choice(s, "lower-taxes");
        apply_choice(s, "own-report");
        for (Voter& v : s.electorate.voters) {
            if (v.id % 10 < 8) v.ledger.set(kRabbitsTarget, "rabbit_like", -25.0);
        }
        EXPECT_LE(rabbit_net_like(s.electorate, s.model), -40);
        for (const char* c : {"loves", "really-loves", "fence"}) apply_choice(s, c);
        runs.push_back(make_run_record(s, "paper-kingston"));
    }
    const AggregateStats s = summarize(runs);
    EXPECT_LT(s.rounds[3].votes[1].mean, 0.0);
}
