#include "votesim/electorate.hpp"

#include <algorithm>
#include <cmath>

#include "votesim/errors.hpp"

namespace votesim {

namespace {

constexpr std::array<std::string_view, 8> kBlocNames = {
    "VeryConservative", "Conservative", "LeansConservative", "VeryLiberal",
    "Liberal",          "LeansLiberal", "Neutral",           "Undecided",
};

constexpr std::array<std::string_view, 8> kBlocPresets = {
    "very conservative", "conservative", "leans conservative", "very liberal",
    "liberal",           "leans liberal", "neutral",           "unwilling to vote",
};

double trust_perception(const Voter& v, std::string_view candidate, const ResponseRegistry& reg) {
    const double base = evaluate_composite(v.profile, reg.get(response::kTrust));
    return clamp_score(base + v.ledger.offset(candidate, response::kTrust) -
                       v.ledger.offset(candidate, response::kDistrust));
}

bool matches(Leaning l, Party p) {
    return (l == Leaning::Conservative && p == Party::Conservative) ||
           (l == Leaning::Liberal && p == Party::Liberal);
}

}  // namespace

std::string_view bloc_name(Bloc b) noexcept { return kBlocNames[static_cast<std::size_t>(b)]; }

std::optional<Bloc> parse_bloc(std::string_view name) {
    for (std::size_t i = 0; i < kBlocNames.size(); ++i) {
        if (kBlocNames[i] == name) return static_cast<Bloc>(i);
    }
    return std::nullopt;
}

std::string_view party_name(Party p) noexcept {
    return p == Party::Conservative ? "conservative" : "liberal";
}

std::optional<Party> parse_party(std::string_view name) {
    if (name == "conservative") return Party::Conservative;
    if (name == "liberal") return Party::Liberal;
    return std::nullopt;
}

std::string_view leaning_name(Leaning l) noexcept {
    switch (l) {
        case Leaning::Conservative: return "conservative";
        case Leaning::Neutral: return "neutral";
        case Leaning::Liberal: return "liberal";
    }
    return "";
}

std::string_view vote_choice_name(VoteChoice v) noexcept {
    switch (v) {
        case VoteChoice::CandidateA: return "A";
        case VoteChoice::CandidateB: return "B";
        case VoteChoice::Abstain: return "abstain";
    }
    return "";
}

std::optional<VoteChoice> parse_vote_choice(std::string_view name) {
    if (name == "A") return VoteChoice::CandidateA;
    if (name == "B") return VoteChoice::CandidateB;
    if (name == "abstain") return VoteChoice::Abstain;
    return std::nullopt;
}

std::optional<Party> bloc_party(Bloc b) noexcept {
    switch (b) {
        case Bloc::VeryConservative:
        case Bloc::Conservative:
        case Bloc::LeansConservative: return Party::Conservative;
        case Bloc::VeryLiberal:
        case Bloc::Liberal:
        case Bloc::LeansLiberal: return Party::Liberal;
        case Bloc::Neutral:
        case Bloc::Undecided: return std::nullopt;
    }
    return std::nullopt;
}

std::string_view bloc_preset(Bloc b) noexcept { return kBlocPresets[static_cast<std::size_t>(b)]; }

void VotingRules::validate() const {
    if (!(conservative_threshold < liberal_threshold)) {
        throw ConfigError("conservative threshold must be below the liberal threshold");
    }
    if (!(rabbit_dislike_band < rabbit_like_band)) throw ConfigError("rabbit bands are inverted");
    if (decision_margin < 0 || attitude_band < 0 || rabbit_spread < 0 || loyalty_slope < 0) {
        throw ConfigError("voting margins must be non-negative");
    }
    if (!(turnout_divisor > 0)) throw ConfigError("turnout_divisor must be positive");
    if (like_weight < 0 || trust_weight < 0) throw ConfigError("score weights must be non-negative");
}

VoteModel::VoteModel() : VoteModel(ResponseRegistry{}, VotingRules{}) {}

VoteModel::VoteModel(ResponseRegistry reg, VotingRules r) : registry(std::move(reg)), rules(r) {
    if (!registry.contains(response::kRabbitLike)) {
        registry.define(std::string(response::kRabbitLike), default_rabbit_like_weights());
    }
    for (std::string_view needed : {response::kTrust, response::kDistrust, response::kKind,
                                    response::kEfficiency, response::kDependability}) {
        if (!registry.contains(needed)) throw UnknownResponseType(std::string(needed));
    }
    rules.validate();
}

PopulationSpec PopulationSpec::standard() {
    return PopulationSpec{{
        {Bloc::VeryConservative, 10},
        {Bloc::Conservative, 10},
        {Bloc::LeansConservative, 5},
        {Bloc::VeryLiberal, 10},
        {Bloc::Liberal, 10},
        {Bloc::LeansLiberal, 5},
        {Bloc::Neutral, 25},
        {Bloc::Undecided, 25},
    }};
}

int PopulationSpec::total() const {
    int n = 0;
    for (const auto& [_, c] : counts) n += c;
    return n;
}

Electorate build_electorate(const PopulationSpec& spec, std::uint64_t seed, const VoteModel& model) {
    for (const auto& [bloc, count] : spec.counts) {
        if (count < 0) throw ConfigError("negative head count for bloc " + std::string(bloc_name(bloc)));
    }
    if (spec.total() != 100) {
        throw ConfigError("population must total 100 voters, got " + std::to_string(spec.total()));
    }

    FuzzStream rng(derive_seed(seed, 0));
    const double spread = model.rules.rabbit_spread;
    Electorate e;
    e.voters.reserve(100);
    for (const auto& [bloc, count] : spec.counts) {
        const FacetProfile preset = make_profile(std::string(bloc_preset(bloc)));
        for (int i = 0; i < count; ++i) {
            Voter v;
            v.id = static_cast<int>(e.voters.size());
            v.bloc = bloc;
            v.profile = preset;
            v.ledger.set(kRabbitsTarget, response::kRabbitLike, rng.uniform(-spread, spread));
            e.voters.push_back(std::move(v));
        }
    }
    return e;
}

LeaningResult political_leaning(const FacetProfile& p, const VotingRules& rules) {
    const double score =
        (p[FacetId::Fantasy] + p[FacetId::Aesthetics] + p[FacetId::Ideas] + p[FacetId::Values]) / 4.0;
    Leaning l = Leaning::Neutral;
    if (score >= rules.liberal_threshold) {
        l = Leaning::Liberal;
    } else if (score <= rules.conservative_threshold) {
        l = Leaning::Conservative;
    }
    return {score, l};
}

Perception perceive(const Voter& v, std::string_view candidate, const VoteModel& model) {
    const ResponseRegistry& reg = model.registry;
    return {
        effective_attitude(v.profile, v.ledger, candidate, reg.get(response::kKind)),
        trust_perception(v, candidate, reg),
        effective_attitude(v.profile, v.ledger, candidate, reg.get(response::kEfficiency)),
        effective_attitude(v.profile, v.ledger, candidate, reg.get(response::kDependability)),
    };
}

double candidate_score(const Voter& v, const CandidateRef& c, const VoteModel& model) {
    const VotingRules& r = model.rules;
    const ResponseRegistry& reg = model.registry;
    const double like = effective_attitude(v.profile, v.ledger, c.id, reg.get(response::kKind));
    const double trust = trust_perception(v, c.id, reg);
    double score = r.like_weight * like + r.trust_weight * trust;

    const LeaningResult lean = political_leaning(v.profile, r);
    if (matches(lean.leaning, c.party)) {
        const double strength = std::abs(lean.liberalism - kNeutralScore);
        score += r.party_bonus + r.loyalty_slope * std::max(0.0, strength - r.loyalty_onset);
    }
    return score;
}

std::optional<std::size_t> preferred_candidate(const Voter& v, const CandidatePair& cands, Phase phase,
                                               const VoteModel& model) {
    if (phase == Phase::PreReveal) return std::nullopt;
    const double a = candidate_score(v, cands[0], model);
    const double b = candidate_score(v, cands[1], model);
    if (a == b) return std::nullopt;
    return a > b ? std::size_t{0} : std::size_t{1};
}

namespace {

double base_drive(const FacetProfile& p) {
    return (p[FacetId::PositiveEmotions] + p[FacetId::Assertiveness]) / 2.0;
}

double motivation_toward(const Voter& v, std::optional<std::size_t> pref, const CandidatePair& cands,
                         const VoteModel& model) {
    double m = base_drive(v.profile);
    if (pref) {
        const ResponseRegistry& reg = model.registry;
        const TargetId& id = cands[*pref].id;
        const double eff = effective_attitude(v.profile, v.ledger, id, reg.get(response::kEfficiency));
        const double dep = effective_attitude(v.profile, v.ledger, id, reg.get(response::kDependability));
        m += (eff + dep - 100.0) / model.rules.turnout_divisor;
    }
    return m;
}

}  // namespace

double turnout_motivation(const Voter& v, const CandidatePair& cands, Phase phase, const VoteModel& model) {
    return motivation_toward(v, preferred_candidate(v, cands, phase, model), cands, model);
}

VoteChoice decide_vote(const Voter& v, const CandidatePair& cands, Phase phase, const VoteModel& model) {
    const VotingRules& r = model.rules;
    if (phase == Phase::PreReveal) {
        const Leaning l = political_leaning(v.profile, r).leaning;
        if (l == Leaning::Neutral || base_drive(v.profile) < r.turnout_threshold) return VoteChoice::Abstain;
        for (std::size_t i = 0; i < 2; ++i) {
            if (matches(l, cands[i].party)) return i == 0 ? VoteChoice::CandidateA : VoteChoice::CandidateB;
        }
        return VoteChoice::Abstain;
    }

    const double a = candidate_score(v, cands[0], model);
    const double b = candidate_score(v, cands[1], model);
    if (a == b) return VoteChoice::Abstain;
    const std::size_t best = a > b ? 0 : 1;
    if (std::max(a, b) < r.vote_threshold || std::abs(a - b) < r.decision_margin) return VoteChoice::Abstain;
    if (motivation_toward(v, best, cands, model) < r.turnout_threshold) return VoteChoice::Abstain;
    return best == 0 ? VoteChoice::CandidateA : VoteChoice::CandidateB;
}

std::string_view rabbit_stance_name(RabbitStance s) noexcept {
    switch (s) {
        case RabbitStance::Likes: return "likes";
        case RabbitStance::Dislikes: return "dislikes";
        case RabbitStance::NeutralOn: return "neutral";
    }
    return "";
}

RabbitStance rabbit_stance(const Voter& v, const VoteModel& model) {
    const double x =
        effective_attitude(v.profile, v.ledger, kRabbitsTarget, model.registry.get(response::kRabbitLike));
    if (x >= model.rules.rabbit_like_band) return RabbitStance::Likes;
    if (x <= model.rules.rabbit_dislike_band) return RabbitStance::Dislikes;
    return RabbitStance::NeutralOn;
}

int rabbit_net_like(const Electorate& e, const VoteModel& model) {
    int net = 0;
    for (const Voter& v : e.voters) {
        switch (rabbit_stance(v, model)) {
            case RabbitStance::Likes: ++net; break;
            case RabbitStance::Dislikes: --net; break;
            case RabbitStance::NeutralOn: break;
        }
    }
    return net;
}

std::array<int, 3> tally_votes(const std::vector<VoteChoice>& votes) {
    std::array<int, 3> t{};
    for (VoteChoice c : votes) ++t[static_cast<std::size_t>(c)];
    return t;
}

PollSnapshot take_poll(const Electorate& e, const CandidatePair& cands, Phase phase, const VoteModel& model,
                       std::string label) {
    PollSnapshot s;
    s.label = std::move(label);
    s.phase = phase;
    s.votes.reserve(e.voters.size());
    const double band = model.rules.attitude_band;
    for (const Voter& v : e.voters) {
        s.votes.push_back(decide_vote(v, cands, phase, model));
        const Perception pa = perceive(v, cands[0].id, model);
        const Perception pb = perceive(v, cands[1].id, model);
        if (pa.like - pb.like >= band) ++s.likes_more[0];
        if (pb.like - pa.like >= band) ++s.likes_more[1];
        if (pa.trust - pb.trust >= band) ++s.trusts_more[0];
        if (pb.trust - pa.trust >= band) ++s.trusts_more[1];
    }
    const auto t = tally_votes(s.votes);
    s.votes_for = {t[0], t[1]};
    s.abstentions = t[2];
    s.rabbit_net_like = rabbit_net_like(e, model);
    return s;
}

}  // namespace votesim
