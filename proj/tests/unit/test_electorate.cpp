#include <gtest/gtest.h>

#include <random>
#include <set>

#include "votesim/electorate.hpp"
#include "votesim/errors.hpp"
#include "votesim/session.hpp"

using namespace votesim;

namespace {

const CandidatePair kPair = {CandidateRef{"Jackson", Party::Conservative}, CandidateRef{"Kingston", Party::Liberal}};

Voter voter_of(Bloc b) {
    Voter v;
    v.bloc = b;
    v.profile = make_profile(std::string(bloc_preset(b)));
    return v;
}

}  // namespace

TEST(Population, StandardSplit) {
    const Electorate e = build_electorate(PopulationSpec::standard(), 1);
    ASSERT_EQ(e.voters.size(), 100u);
    std::map<Bloc, int> c;
    int cons = 0, lib = 0;
    for (const Voter& v : e.voters) {
        ++c[v.bloc];
        if (auto p = bloc_party(v.bloc)) (*p == Party::Conservative ? cons : lib) += 1;
    }
    EXPECT_EQ(cons, 25);
    EXPECT_EQ(lib, 25);
    EXPECT_EQ(c[Bloc::Neutral], 25);
    EXPECT_EQ(c[Bloc::Undecided], 25);
    EXPECT_EQ(c[Bloc::VeryConservative], 10);
    EXPECT_EQ(c[Bloc::Conservative], 10);
    EXPECT_EQ(c[Bloc::LeansConservative], 5);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(e.voters[static_cast<std::size_t>(i)].id, i);
}

TEST(Population, SameSeedSameState) {
    EXPECT_EQ(build_electorate(PopulationSpec::standard(), 9), build_electorate(PopulationSpec::standard(), 9));
    EXPECT_NE(build_electorate(PopulationSpec::standard(), 9), build_electorate(PopulationSpec::standard(), 10));
}

TEST(Population, MustTotalHundred) {
    PopulationSpec s = PopulationSpec::standard();
    s.counts[Bloc::Neutral] = 24;
    EXPECT_THROW(build_electorate(s, 1), ConfigError);
    s.counts[Bloc::Neutral] = 26;
    s.counts[Bloc::Undecided] = -1;
    s.counts[Bloc::Liberal] = 12;
    EXPECT_THROW(build_electorate(s, 1), ConfigError);
}

TEST(Leaning, PresetExamples) {
    auto lean = [](const char* preset) { return political_leaning(make_profile(std::string(preset))); };
    EXPECT_EQ(lean("very conservative").liberalism, 10.0);
    EXPECT_EQ(lean("very conservative").leaning, Leaning::Conservative);
    EXPECT_EQ(lean("neutral").liberalism, 50.0);
    EXPECT_EQ(lean("neutral").leaning, Leaning::Neutral);
    EXPECT_EQ(lean("leans liberal").liberalism, 60.0);
    EXPECT_EQ(lean("leans liberal").leaning, Leaning::Liberal);
}

TEST(Leaning, IgnoresFacetsOutsideOpennessCluster) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    const std::set<FacetId> cluster = {FacetId::Fantasy, FacetId::Aesthetics, FacetId::Ideas, FacetId::Values};
    for (int c = 0; c < 500; ++c) {
        FacetProfile p;
        for (FacetId f : cluster) p.set(f, u(rng));
        const LeaningResult before = political_leaning(p);
        for (FacetId f : kAllFacets) {
            if (!cluster.contains(f)) p.set(f, u(rng));
        }
        const LeaningResult after = political_leaning(p);
        EXPECT_EQ(before.liberalism, after.liberalism);
        EXPECT_EQ(before.leaning, after.leaning);
    }
}

TEST(Turnout, Examples) {
    const VoteModel m;
    EXPECT_EQ(turnout_motivation(voter_of(Bloc::Undecided), kPair, Phase::PreReveal, m), 10.0);
    EXPECT_EQ(turnout_motivation(voter_of(Bloc::Neutral), kPair, Phase::PreReveal, m), 50.0);
    Voter v = voter_of(Bloc::Neutral);
    v.ledger.set("Jackson", "kind", 20);
    // Preferred candidate at neutral efficiency and dependability adds nothing.
    EXPECT_EQ(turnout_motivation(v, kPair, Phase::Revealed, m), 50.0);
    v.ledger.set("Jackson", "efficiency", 20);
    EXPECT_DOUBLE_EQ(turnout_motivation(v, kPair, Phase::Revealed, m), 55.0);
}

TEST(DecideVote, PreRevealExamples) {
    const VoteModel m;
    EXPECT_EQ(decide_vote(voter_of(Bloc::VeryConservative), kPair, Phase::PreReveal, m), VoteChoice::CandidateA);
    EXPECT_EQ(decide_vote(voter_of(Bloc::LeansLiberal), kPair, Phase::PreReveal, m), VoteChoice::CandidateB);
    EXPECT_EQ(decide_vote(voter_of(Bloc::Undecided), kPair, Phase::PreReveal, m), VoteChoice::Abstain);
    EXPECT_EQ(decide_vote(voter_of(Bloc::Neutral), kPair, Phase::PreReveal, m), VoteChoice::Abstain);
}

TEST(DecideVote, ExactTieAbstains) {
    const VoteModel m;
    Voter v = voter_of(Bloc::Neutral);
    v.ledger.set("Jackson", "kind", 30);
    v.ledger.set("Kingston", "kind", 30);
    EXPECT_EQ(decide_vote(v, kPair, Phase::Revealed, m), VoteChoice::Abstain);
    EXPECT_FALSE(preferred_candidate(v, kPair, Phase::Revealed, m));
}

TEST(DecideVote, ClearPreferenceVotes) {
    const VoteModel m;
    Voter v = voter_of(Bloc::Neutral);
    v.ledger.set("Kingston", "kind", 30);
    EXPECT_EQ(decide_vote(v, kPair, Phase::Revealed, m), VoteChoice::CandidateB);
    v.ledger.set("Jackson", "distrust", -40);
    v.ledger.set("Jackson", "kind", 10);
    EXPECT_EQ(decide_vote(v, kPair, Phase::Revealed, m), VoteChoice::CandidateA);
}

TEST(DecideVote, ArgmaxInvariantUnderEqualShift) {
    const VoteModel m;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> off(-15.0, 15.0), shift(-10.0, 10.0);
    for (int c = 0; c < 2000; ++c) {
        Voter v = voter_of(kAllBlocs[static_cast<std::size_t>(c) % kAllBlocs.size()]);
        for (const char* t : {"Jackson", "Kingston"}) {
            v.ledger.set(t, "kind", off(rng));
            v.ledger.set(t, "trust", off(rng));
        }
        const auto before = preferred_candidate(v, kPair, Phase::Revealed, m);
        const double k = shift(rng);
        for (const char* t : {"Jackson", "Kingston"}) {
            v.ledger.add(t, "kind", k);
            v.ledger.add(t, "trust", k);
        }
        // Offsets stay within 25 of composites in [50, 62], so nothing clamps.
        EXPECT_EQ(preferred_candidate(v, kPair, Phase::Revealed, m), before) << "case " << c;
    }
}

TEST(Poll, DefaultElectoratePreRevealEnumeration) {
    // Independent enumeration: partisan wings vote along party, neutral and undecided abstain.
    const Electorate e = build_electorate(PopulationSpec::standard(), 1);
    int a = 0, b = 0, abstain = 0;
    for (const Voter& v : e.voters) {
        const bool cons = v.bloc == Bloc::VeryConservative || v.bloc == Bloc::Conservative ||
                          v.bloc == Bloc::LeansConservative;
        const bool lib = v.bloc == Bloc::VeryLiberal || v.bloc == Bloc::Liberal || v.bloc == Bloc::LeansLiberal;
        (cons ? a : lib ? b : abstain) += 1;
    }
    const PollSnapshot p = take_poll(e, kPair, Phase::PreReveal);
    EXPECT_EQ(a, 25);
    EXPECT_EQ(p.votes_for[0], a);
    EXPECT_EQ(p.votes_for[1], b);
    EXPECT_EQ(p.abstentions, abstain);
    for (const Voter& v : e.voters) {
        const auto party = bloc_party(v.bloc);
        const VoteChoice want = !party ? VoteChoice::Abstain
                                : *party == Party::Conservative ? VoteChoice::CandidateA
                                                                : VoteChoice::CandidateB;
        EXPECT_EQ(p.votes[static_cast<std::size_t>(v.id)], want);
    }
}

TEST(Poll, PureAndSymmetric) {
    const Electorate e = build_electorate(PopulationSpec::standard(), 4);
    const std::uint64_t h = electorate_digest(e);
    const PollSnapshot p1 = take_poll(e, kPair, Phase::Revealed);
    const PollSnapshot p2 = take_poll(e, kPair, Phase::Revealed);
    EXPECT_EQ(p1, p2);
    EXPECT_EQ(electorate_digest(e), h);
    EXPECT_EQ(p1.likes_more[0], p1.likes_more[1]);
    EXPECT_EQ(p1.trusts_more[0], p1.trusts_more[1]);
}

TEST(Poll, TallyConservation) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> off(-60.0, 60.0);
    for (int c = 0; c < 50; ++c) {
        Electorate e = build_electorate(PopulationSpec::standard(), static_cast<std::uint64_t>(c));
        for (Voter& v : e.voters) {
            for (const char* t : {"Jackson", "Kingston"}) {
                for (const char* rt : {"kind", "distrust", "efficiency", "dependability"}) v.ledger.set(t, rt, off(rng));
            }
        }
        for (Phase ph : {Phase::PreReveal, Phase::Revealed}) {
            const PollSnapshot p = take_poll(e, kPair, ph);
            EXPECT_EQ(p.votes_for[0] + p.votes_for[1] + p.abstentions, 100);
            const auto t = tally_votes(p.votes);
            EXPECT_EQ(t[0], p.votes_for[0]);
            EXPECT_EQ(t[2], p.abstentions);
            EXPECT_GE(p.rabbit_net_like, -100);
            EXPECT_LE(p.rabbit_net_like, 100);
        }
    }
}

TEST(Rabbits, NetLikeCountOracle) {
    const VoteModel m;
    Electorate e;
    for (int i = 0; i < 100; ++i) {
        Voter v;
        v.id = i;
        if (i < 30) v.ledger.set(kRabbitsTarget, "rabbit_like", 10);
        else if (i < 72) v.ledger.set(kRabbitsTarget, "rabbit_like", -10);
        e.voters.push_back(v);
    }
    EXPECT_EQ(rabbit_net_like(e, m), 30 - 42);
    EXPECT_EQ(rabbit_stance(e.voters[0], m), RabbitStance::Likes);
    EXPECT_EQ(rabbit_stance(e.voters[50], m), RabbitStance::Dislikes);
    EXPECT_EQ(rabbit_stance(e.voters[80], m), RabbitStance::NeutralOn);
}

TEST(Rabbits, AllFiftyIsZero) {
    Electorate e;
    for (int i = 0; i < 100; ++i) e.voters.push_back(Voter{i, Bloc::Neutral, {}, {}});
    EXPECT_EQ(rabbit_net_like(e), 0);
}

TEST(Rabbits, InitialOffsetsWithinSpread) {
    const Electorate e = build_electorate(PopulationSpec::standard(), 3);
    for (const Voter& v : e.voters) {
        const double o = v.ledger.offset(kRabbitsTarget, "rabbit_like");
        EXPECT_GE(o, -20.0);
        EXPECT_LE(o, 20.0);
    }
}

TEST(VotingRules, Validation) {
    VotingRules r;
    r.conservative_threshold = 60;
    EXPECT_THROW(r.validate(), ConfigError);
    r = {};
    r.turnout_divisor = 0;
    EXPECT_THROW(r.validate(), ConfigError);
    EXPECT_THROW(VoteModel(ResponseRegistry::empty(), VotingRules{}), UnknownResponseType);
}

TEST(Names, RoundTrip) {
    for (Bloc b : kAllBlocs) EXPECT_EQ(parse_bloc(bloc_name(b)), b);
    for (VoteChoice v : {VoteChoice::CandidateA, VoteChoice::CandidateB, VoteChoice::Abstain}) {
        EXPECT_EQ(parse_vote_choice(vote_choice_name(v)), v);
    }
    EXPECT_EQ(parse_party("liberal"), Party::Liberal);
    EXPECT_FALSE(parse_party("green"));
}
