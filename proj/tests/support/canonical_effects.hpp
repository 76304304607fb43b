#pragma once

// Hand-written per-bloc effect table, kept independent of the scenario files so the
// audit compares two encodings. Counts are engine calls per voter.

#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "votesim/electorate.hpp"
#include "votesim/session.hpp"

namespace votesim::testing {

struct Expected {
    std::string target;  // "self", "opponent", "rabbits"
    std::string rt;
    bool positive;

    auto operator<=>(const Expected&) const = default;
};
using ExpectedCounts = std::map<Expected, int>;

struct VoterView {
    Bloc bloc;
    RabbitStance stance;
    double like_of_actor;
};

enum class Role { Own, Opposing, Neutral, Undecided };

inline Role role_of(Bloc bloc, Party actor) {
    const auto p = bloc_party(bloc);
    if (!p) return bloc == Bloc::Neutral ? Role::Neutral : Role::Undecided;
    return *p == actor ? Role::Own : Role::Opposing;
}

inline bool firm(RabbitStance s) { return s != RabbitStance::NeutralOn; }

/// Stance the attacker shares with the voters it mobilises when using the rabbits negatively.
inline RabbitStance attack_stance(std::string_view candidate) {
    return candidate == "Jackson" ? RabbitStance::Dislikes : RabbitStance::Likes;
}

/// Expected calls of one option for one voter.
inline ExpectedCounts canonical_option(std::string_view candidate, Party actor, std::string_view option,
                                       const VoterView& v) {
    ExpectedCounts e;
    const Role role = role_of(v.bloc, actor);
    auto add = [&](const char* target, const char* rt, bool pos, int n) {
        if (n > 0) e[{target, rt, pos}] += n;
    };
    if (option == "free-transport") {
        add("self", "kind", true, 1);
        if (role == Role::Opposing) add("self", "distrust", true, 1);
    } else if (option == "lower-taxes") {
        switch (role) {
            case Role::Own: add("self", "kind", true, 2); break;
            case Role::Opposing: add("self", "kind", true, 1); add("self", "distrust", true, 1); break;
            case Role::Neutral: add("self", "kind", true, 2); add("self", "distrust", true, 1); break;
            case Role::Undecided: add("self", "kind", true, 1); break;
        }
    } else if (option == "upgrade-transport") {
        if (role == Role::Own || role == Role::Undecided) {
            add("self", "kind", true, 2);
            add("self", "distrust", true, 1);
        } else {
            add("self", "kind", true, 1);
            add("self", "distrust", true, 2);
        }
    } else if (option == "ignore-report") {
        add("self", "distrust", true, role == Role::Own ? 1 : 2);
    } else if (option == "own-report") {
        if (role != Role::Own) add("self", "distrust", false, 1);
    } else if (option == "get-rid") {
        if (v.stance == RabbitStance::Likes) add("self", "kind", false, 1);
        if (v.stance == RabbitStance::Dislikes) add("self", "kind", true, 1);
    } else if (option == "loves" || option == "really-loves") {
        if (v.stance == RabbitStance::Likes) add("self", "kind", true, option == "loves" ? 1 : 2);
        if (v.stance == RabbitStance::Dislikes) add("self", "kind", false, 1);
        if (v.like_of_actor >= 60.0) add("rabbits", "rabbit_like", true, 1);
    } else if (option == "joke") {
        if (role == Role::Opposing) add("self", "distrust", true, 1);
    } else if (option == "fence") {
        if (firm(v.stance)) add("self", "distrust", true, 1);
    } else if (option == "ignore-rabbits") {
        if (firm(v.stance)) add("self", "kind", false, 1);
    } else if (option == "use-against") {
        if (v.stance == attack_stance(candidate)) add("opponent", "kind", false, 1);
        else add("self", "distrust", true, 1);
    } else {
        throw std::invalid_argument("no canonical row for option " + std::string(option));
    }
    return e;
}

/// Round events hit the played candidate before the choice.
inline ExpectedCounts canonical_event(std::string_view round_id) {
    ExpectedCounts e;
    if (round_id == "report") e[{"self", "distrust", true}] = 2;
    return e;
}

/// Menus per candidate and round, in offer order.
inline std::vector<std::string> canonical_menu(std::string_view candidate, std::size_t round) {
    const bool jackson = candidate == "Jackson";
    switch (round) {
        case 0:
            if (jackson) return {"free-transport", "lower-taxes", "upgrade-transport"};
            return {"free-transport", "lower-taxes"};
        case 1: return {"ignore-report", "own-report"};
        case 2: return {"ignore-rabbits", jackson ? "joke" : "loves", "get-rid", "use-against"};
        case 3: return {"ignore-rabbits", jackson ? "joke" : "really-loves", "get-rid", "use-against"};
        case 4: return {"ignore-rabbits", "fence", "get-rid", "use-against"};
        default: return {};
    }
}

/// Groups stimulus records by voter into expected-count form, relative to `actor`.
inline std::map<int, ExpectedCounts> observed_counts(const std::vector<StimulusRecord>& log, std::size_t from,
                                                     StimulusSource source, const std::string& actor,
                                                     const std::string& opponent) {
    std::map<int, ExpectedCounts> out;
    for (std::size_t i = from; i < log.size(); ++i) {
        const StimulusRecord& r = log[i];
        if (r.source != source) continue;
        const char* target = r.target == actor ? "self" : r.target == opponent ? "opponent" : "rabbits";
        out[r.voter][{target, r.response_type, r.positive}] += 1;
    }
    return out;
}

}  // namespace votesim::testing
