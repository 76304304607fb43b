#include "votesim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "votesim/errors.hpp"

#ifndef VOTESIM_DEFAULT_SCENARIO_DIR
#define VOTESIM_DEFAULT_SCENARIO_DIR "scenarios"
#endif

namespace votesim {

using json = nlohmann::ordered_json;

namespace {

struct GroupName {
    AudienceGroup group;
    std::string_view name;
};

constexpr GroupName kGroupNames[] = {
    {AudienceGroup::All, "all"},
    {AudienceGroup::Own, "own"},
    {AudienceGroup::Opposing, "opposing"},
    {AudienceGroup::Others, "others"},
    {AudienceGroup::Neutral, "neutral"},
    {AudienceGroup::Undecided, "undecided"},
    {AudienceGroup::OwnExtreme, "own-extreme"},
    {AudienceGroup::OwnSolid, "own-solid"},
    {AudienceGroup::OwnLeaning, "own-leaning"},
    {AudienceGroup::OpposingExtreme, "opposing-extreme"},
    {AudienceGroup::OpposingSolid, "opposing-solid"},
    {AudienceGroup::OpposingLeaning, "opposing-leaning"},
};

// 0 = extreme, 1 = solid, 2 = leaning; -1 for non-partisan blocs.
int bloc_strength(Bloc b) {
    switch (b) {
        case Bloc::VeryConservative:
        case Bloc::VeryLiberal: return 0;
        case Bloc::Conservative:
        case Bloc::Liberal: return 1;
        case Bloc::LeansConservative:
        case Bloc::LeansLiberal: return 2;
        default: return -1;
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing '") + key + "'");
    return obj.at(key);
}

std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

double get_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where, "expected a finite number");
    return d;
}

bool parse_sign(const json& v, const std::string& where) {
    if (v.is_boolean()) return v.get<bool>();
    const std::string s = get_string(v, where);
    if (s == "+" || s == "positive") return true;
    if (s == "-" || s == "negative") return false;
    fail(where, "sign must be '+' or '-'");
}

std::optional<RabbitStance> parse_stance(std::string_view s) {
    if (s == "likes") return RabbitStance::Likes;
    if (s == "dislikes") return RabbitStance::Dislikes;
    if (s == "neutral") return RabbitStance::NeutralOn;
    return std::nullopt;
}

Audience parse_audience(const json& v, const std::string& where) {
    Audience a;
    if (v.is_string() || v.is_array()) {
        // shorthand: a group token or a list of tokens
        json obj = json::object();
        obj["groups"] = v;
        return parse_audience(obj, where);
    }
    if (!v.is_object()) fail(where, "audience must be an object, string or list");
    for (const auto& [key, _] : v.items()) {
        if (key != "groups" && key != "rabbit" && key != "min_like") fail(where, "unknown audience key '" + key + "'");
    }
    if (v.contains("groups")) {
        const json& g = v.at("groups");
        a.groups.clear();
        const json list = g.is_array() ? g : json::array({g});
        for (const json& item : list) {
            const std::string name = get_string(item, where + ".groups");
            auto parsed = parse_audience_group(name);
            if (!parsed) fail(where, "unknown audience group '" + name + "'");
            a.groups.push_back(*parsed);
        }
        if (a.groups.empty()) fail(where, "audience groups must not be empty");
    }
    if (v.contains("rabbit")) {
        const json& r = v.at("rabbit");
        const std::string rw = where + ".rabbit";
        if (r.is_string() && r.get<std::string>() == "firm") {
            a.rabbit = {RabbitStance::Likes, RabbitStance::Dislikes};
        } else {
            const json list = r.is_array() ? r : json::array({r});
            for (const json& item : list) {
                const std::string name = get_string(item, rw);
                auto st = parse_stance(name);
                if (!st) fail(rw, "unknown rabbit stance '" + name + "'");
                a.rabbit.push_back(*st);
            }
        }
    }
    if (v.contains("min_like")) {
        const double m = get_number(v.at("min_like"), where + ".min_like");
        if (m < 0.0 || m > 100.0) fail(where, "min_like must be in [0, 100]");
        a.min_like = m;
    }
    return a;
}

StimulusCall parse_call(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where, "effect row must be an object");
    for (const auto& [key, _] : v.items()) {
        if (key != "rt" && key != "sign" && key != "repeat" && key != "audience" && key != "target") {
            fail(where, "unknown effect key '" + key + "'");
        }
    }
    StimulusCall c;
    c.response_type = get_string(require(v, "rt", where), where + ".rt");
    c.positive = v.contains("sign") ? parse_sign(v.at("sign"), where + ".sign") : true;
    if (v.contains("repeat")) {
        const json& r = v.at("repeat");
        if (!r.is_number_integer()) fail(where, "repeat must be an integer");
        c.repeat = r.get<int>();
    }
    if (v.contains("audience")) c.audience = parse_audience(v.at("audience"), where + ".audience");
    if (v.contains("target")) {
        const std::string t = get_string(v.at("target"), where + ".target");
        if (t == "self") c.target = TargetRole::Self;
        else if (t == "opponent") c.target = TargetRole::Opponent;
        else if (t == "rabbits") c.target = TargetRole::Rabbits;
        else fail(where, "target must be self, opponent or rabbits");
    }
    return c;
}

std::vector<StimulusCall> parse_calls(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected a list of effect rows");
    std::vector<StimulusCall> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_call(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<FacetWeight> parse_weights(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "weight table must be a list");
    std::vector<FacetWeight> out;
    for (const json& row : v) {
        std::string facet;
        double weight = 0.0;
        Polarity pol = Polarity::Positive;
        if (row.is_array()) {
            if (row.size() < 2 || row.size() > 3) fail(where, "weight row is [facet, weight, sign?]");
            facet = get_string(row[0], where);
            weight = get_number(row[1], where);
            if (row.size() == 3) pol = parse_sign(row[2], where) ? Polarity::Positive : Polarity::Negative;
        } else if (row.is_object()) {
            facet = get_string(require(row, "facet", where), where);
            weight = get_number(require(row, "weight", where), where);
            if (row.contains("polarity")) pol = parse_sign(row.at("polarity"), where) ? Polarity::Positive : Polarity::Negative;
        } else {
            fail(where, "weight row must be a list or object");
        }
        auto id = parse_facet(facet);
        if (!id) fail(where, "unknown facet '" + facet + "'");
        out.push_back({*id, weight, pol});
    }
    return out;
}

EngineConfig parse_engine(const json& v, const std::string& where) {
    EngineConfig cfg;
    if (!v.is_object()) fail(where, "engine must be an object");
    for (const auto& [key, val] : v.items()) {
        const std::string w = where + "." + key;
        if (key == "attitude_step") cfg.attitude_step = get_number(val, w);
        else if (key == "drift_ratio") cfg.drift_ratio = get_number(val, w);
        else if (key == "fuzz") {
            if (!val.is_array() || val.size() != 2) fail(w, "fuzz is [lo, hi]");
            cfg.fuzz_lo = get_number(val[0], w);
            cfg.fuzz_hi = get_number(val[1], w);
        } else if (key == "rng_seed") {
            if (!val.is_number_unsigned() && !val.is_number_integer()) fail(w, "expected an integer");
            cfg.rng_seed = val.get<std::uint64_t>();
        } else {
            fail(where, "unknown engine key '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        fail(where, e.what());
    }
    return cfg;
}

ResponseRegistry parse_registry(const json& root) {
    const bool builtins = !root.contains("builtin_response_types") || root.at("builtin_response_types").get<bool>();
    ResponseRegistry reg = builtins ? ResponseRegistry{} : ResponseRegistry::empty();
    if (root.contains("response_types")) {
        const json& types = root.at("response_types");
        if (!types.is_object()) fail("response_types", "expected an object of weight tables");
        for (const auto& [name, table] : types.items()) {
            const std::string w = "response_types." + name;
            try {
                reg.define(name, parse_weights(table, w));
            } catch (const ConfigError& e) {
                if (std::string_view(e.what()).starts_with(w)) throw;
                fail(w, e.what());
            }
        }
    }
    return reg;
}

VotingRules parse_rules(const json& v) {
    VotingRules r;
    if (!v.is_object()) fail("voting", "expected an object");
    const std::pair<const char*, double VotingRules::*> fields[] = {
        {"liberal_threshold", &VotingRules::liberal_threshold},
        {"conservative_threshold", &VotingRules::conservative_threshold},
        {"party_bonus", &VotingRules::party_bonus},
        {"loyalty_slope", &VotingRules::loyalty_slope},
        {"loyalty_onset", &VotingRules::loyalty_onset},
        {"like_weight", &VotingRules::like_weight},
        {"trust_weight", &VotingRules::trust_weight},
        {"vote_threshold", &VotingRules::vote_threshold},
        {"decision_margin", &VotingRules::decision_margin},
        {"turnout_threshold", &VotingRules::turnout_threshold},
        {"turnout_divisor", &VotingRules::turnout_divisor},
        {"attitude_band", &VotingRules::attitude_band},
        {"rabbit_like_band", &VotingRules::rabbit_like_band},
        {"rabbit_dislike_band", &VotingRules::rabbit_dislike_band},
        {"rabbit_spread", &VotingRules::rabbit_spread},
    };
    for (const auto& [key, val] : v.items()) {
        auto it = std::find_if(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; });
        if (it == std::end(fields)) fail("voting", "unknown key '" + key + "'");
        r.*(it->second) = get_number(val, "voting." + key);
    }
    try {
        r.validate();
    } catch (const ConfigError& e) {
        fail("voting", e.what());
    }
    return r;
}

PopulationSpec parse_population(const json& v) {
    if (!v.is_object()) fail("population", "expected an object of bloc counts");
    PopulationSpec spec;
    for (const auto& [key, val] : v.items()) {
        auto bloc = parse_bloc(key);
        if (!bloc) fail("population", "unknown bloc '" + key + "'");
        if (!val.is_number_integer()) fail("population." + key, "expected an integer");
        spec.counts[*bloc] = val.get<int>();
    }
    return spec;
}

ActionChoice parse_option(const json& v, const std::string& where) {
    ActionChoice a;
    a.id = get_string(require(v, "id", where), where + ".id");
    a.label = v.contains("label") ? get_string(v.at("label"), where + ".label") : a.id;
    if (v.contains("effects")) a.effects = parse_calls(v.at("effects"), where + ".effects");
    return a;
}

Round parse_round(const json& v, const std::string& where) {
    Round r;
    r.id = get_string(require(v, "id", where), where + ".id");
    r.title = v.contains("title") ? get_string(v.at("title"), where + ".title") : r.id;
    if (v.contains("rabbit_issue")) r.rabbit_issue = v.at("rabbit_issue").get<bool>();
    if (v.contains("event")) r.event = parse_calls(v.at("event"), where + ".event");
    const json& menus = require(v, "menus", where);
    if (!menus.is_object()) fail(where, "menus must map candidate ids to option lists");
    for (const auto& [cand, list] : menus.items()) {
        const std::string w = where + ".menus." + cand;
        if (!list.is_array()) fail(w, "expected a list of options");
        std::vector<ActionChoice> options;
        for (std::size_t i = 0; i < list.size(); ++i) options.push_back(parse_option(list[i], w + "[" + std::to_string(i) + "]"));
        r.menus[cand] = std::move(options);
    }
    return r;
}

CandidateSpec parse_candidate(const json& v, const std::string& where) {
    CandidateSpec c;
    c.id = get_string(require(v, "id", where), where + ".id");
    c.name = v.contains("name") ? get_string(v.at("name"), where + ".name") : c.id;
    const std::string party = get_string(require(v, "party", where), where + ".party");
    auto p = parse_party(party);
    if (!p) fail(where, "unknown party '" + party + "'");
    c.party = *p;
    if (v.contains("baggage")) c.baggage = parse_calls(v.at("baggage"), where + ".baggage");
    if (v.contains("script")) c.script = get_string(v.at("script"), where + ".script");
    return c;
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    }
}

void check_calls(const std::vector<StimulusCall>& calls, const ResponseRegistry& reg, const std::string& where) {
    for (const StimulusCall& c : calls) {
        if (!reg.contains(c.response_type)) fail(where, "unregistered response type '" + c.response_type + "'");
        if (c.repeat < 1 || c.repeat > 2) fail(where, "repeat must be 1 or 2");
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string_view audience_group_name(AudienceGroup g) noexcept {
    for (const GroupName& n : kGroupNames) {
        if (n.group == g) return n.name;
    }
    return "?";
}

std::optional<AudienceGroup> parse_audience_group(std::string_view name) {
    const std::string key = lower(name);
    for (const GroupName& n : kGroupNames) {
        if (n.name == key) return n.group;
    }
    return std::nullopt;
}

bool Audience::covers(Bloc bloc, Party actor) const noexcept {
    const std::optional<Party> party = bloc_party(bloc);
    const bool own = party && *party == actor;
    const bool opposing = party && *party != actor;
    const int strength = bloc_strength(bloc);
    for (AudienceGroup g : groups) {
        switch (g) {
            case AudienceGroup::All: return true;
            case AudienceGroup::Own: if (own) return true; break;
            case AudienceGroup::Opposing: if (opposing) return true; break;
            case AudienceGroup::Others: if (!own) return true; break;
            case AudienceGroup::Neutral: if (bloc == Bloc::Neutral) return true; break;
            case AudienceGroup::Undecided: if (bloc == Bloc::Undecided) return true; break;
            case AudienceGroup::OwnExtreme: if (own && strength == 0) return true; break;
            case AudienceGroup::OwnSolid: if (own && strength == 1) return true; break;
            case AudienceGroup::OwnLeaning: if (own && strength == 2) return true; break;
            case AudienceGroup::OpposingExtreme: if (opposing && strength == 0) return true; break;
            case AudienceGroup::OpposingSolid: if (opposing && strength == 1) return true; break;
            case AudienceGroup::OpposingLeaning: if (opposing && strength == 2) return true; break;
        }
    }
    return false;
}

std::string_view target_role_name(TargetRole r) noexcept {
    switch (r) {
        case TargetRole::Self: return "self";
        case TargetRole::Opponent: return "opponent";
        case TargetRole::Rabbits: return "rabbits";
    }
    return "?";
}

std::string_view opponent_mode_name(OpponentMode m) noexcept {
    return m == OpponentMode::Inert ? "inert" : "fixed-script";
}

std::optional<OpponentMode> parse_opponent_mode(std::string_view name) {
    const std::string key = lower(name);
    if (key == "inert") return OpponentMode::Inert;
    if (key == "fixed-script" || key == "fixed_script" || key == "script") return OpponentMode::FixedScript;
    return std::nullopt;
}

void Scenario::validate() const {
    engine.validate();
    rules.validate();
    if (population.total() != 100) fail("population", "bloc counts must sum to 100");
    for (const auto& [bloc, n] : population.counts) {
        if (n < 0) fail("population", "negative count for " + std::string(bloc_name(bloc)));
    }
    if (!registry.contains(response::kKind) || !registry.contains(response::kTrust) ||
        !registry.contains(response::kDistrust) || !registry.contains(response::kEfficiency) ||
        !registry.contains(response::kDependability)) {
        fail("response_types", "kind, trust, distrust, efficiency and dependability are required");
    }
    if (candidates[0].id.empty() || candidates[1].id.empty()) fail("candidates", "exactly two candidates required");
    if (lower(candidates[0].id) == lower(candidates[1].id)) fail("candidates", "candidate ids must differ");
    if (candidates[0].party == candidates[1].party) fail("candidates", "one candidate per party required");
    if (lower(candidates[0].id) == lower(kRabbitsTarget) || lower(candidates[1].id) == lower(kRabbitsTarget)) {
        fail("candidates", "candidate id clashes with the rabbits target");
    }
    for (const CandidateSpec& c : candidates) check_calls(c.baggage, registry, "candidates." + c.id + ".baggage");
    check_calls(reveal, registry, "reveal");
    if (rounds.size() != kRoundCount) fail("rounds", "exactly 5 rounds required");
    std::set<std::string> round_ids;
    for (const Round& r : rounds) {
        const std::string w = "rounds." + r.id;
        if (!round_ids.insert(r.id).second) fail(w, "duplicate round id");
        check_calls(r.event, registry, w + ".event");
        for (const auto& [cand, _] : r.menus) {
            if (cand != candidates[0].id && cand != candidates[1].id) fail(w, "menu for unknown candidate '" + cand + "'");
        }
        for (const CandidateSpec& c : candidates) {
            auto it = r.menus.find(c.id);
            if (it == r.menus.end()) fail(w, "no menu for " + c.id);
            if (it->second.size() < 2) fail(w, "menu for " + c.id + " needs at least 2 options");
            std::set<std::string> ids;
            for (const ActionChoice& a : it->second) {
                if (a.id.empty()) fail(w, "option without an id");
                if (!ids.insert(a.id).second) fail(w, "duplicate option '" + a.id + "'");
                check_calls(a.effects, registry, w + "." + c.id + "." + a.id);
            }
        }
    }
}

CandidatePair Scenario::candidate_pair() const {
    return {CandidateRef{candidates[0].id, candidates[0].party}, CandidateRef{candidates[1].id, candidates[1].party}};
}

std::optional<std::size_t> Scenario::candidate_index(std::string_view id) const {
    const std::string key = lower(id);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (lower(candidates[i].id) == key) return i;
    }
    return std::nullopt;
}

const std::vector<ActionChoice>& Scenario::menu(std::size_t round, std::string_view candidate) const {
    if (round >= rounds.size()) throw StateError("no such round");
    auto idx = candidate_index(candidate);
    if (!idx) throw InvalidChoice("unknown candidate '" + std::string(candidate) + "'");
    return rounds[round].menus.at(candidates[*idx].id);
}

EngineSettings parse_engine_settings(std::string_view text) {
    const json root = parse_document(text);
    if (!root.is_object()) throw ConfigError("config root must be an object");
    EngineSettings s{EngineConfig{}, parse_registry(root)};
    if (root.contains("engine")) s.engine = parse_engine(root.at("engine"), "engine");
    return s;
}

Scenario parse_scenario(std::string_view text) {
    const json root = parse_document(text);
    if (!root.is_object()) throw ConfigError("scenario root must be an object");

    static const std::set<std::string> known = {
        "id", "title", "engine", "builtin_response_types", "response_types", "voting", "population",
        "opponent_policy", "candidates", "reveal", "rounds",
    };
    for (const auto& [key, _] : root.items()) {
        if (!known.contains(key)) fail("scenario", "unknown key '" + key + "'");
    }

    Scenario s;
    s.id = get_string(require(root, "id", "scenario"), "id");
    s.title = root.contains("title") ? get_string(root.at("title"), "title") : s.id;
    if (root.contains("engine")) s.engine = parse_engine(root.at("engine"), "engine");
    s.registry = parse_registry(root);
    if (!s.registry.contains(response::kRabbitLike)) {
        s.registry.define(std::string(response::kRabbitLike), default_rabbit_like_weights());
    }
    if (root.contains("voting")) s.rules = parse_rules(root.at("voting"));
    if (root.contains("population")) s.population = parse_population(root.at("population"));
    if (root.contains("opponent_policy")) {
        const std::string m = get_string(root.at("opponent_policy"), "opponent_policy");
        auto mode = parse_opponent_mode(m);
        if (!mode) fail("opponent_policy", "expected 'inert' or 'fixed-script'");
        s.opponent = *mode;
    }

    const json& cands = require(root, "candidates", "scenario");
    if (!cands.is_array() || cands.size() != 2) fail("candidates", "exactly two candidates required");
    for (std::size_t i = 0; i < 2; ++i) s.candidates[i] = parse_candidate(cands[i], "candidates[" + std::to_string(i) + "]");
    if (root.contains("reveal")) s.reveal = parse_calls(root.at("reveal"), "reveal");

    const json& rounds = require(root, "rounds", "scenario");
    if (!rounds.is_array()) fail("rounds", "expected a list");
    for (std::size_t i = 0; i < rounds.size(); ++i) s.rounds.push_back(parse_round(rounds[i], "rounds[" + std::to_string(i) + "]"));

    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return parse_scenario(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.filename().string() + ": " + e.what());
    }
}

std::filesystem::path find_scenario_file(const std::filesystem::path& dir, std::string_view name_or_path) {
    const std::filesystem::path direct(name_or_path);
    if (direct.has_extension() && std::filesystem::is_regular_file(direct)) return direct;
    std::filesystem::path candidate = dir / direct;
    if (!candidate.has_extension()) candidate += ".scn";
    if (std::filesystem::is_regular_file(candidate)) return candidate;
    throw IoError("scenario '" + std::string(name_or_path) + "' not found in " + dir.string());
}

std::vector<std::string> list_scenarios(const std::filesystem::path& dir) {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".scn") out.push_back(entry.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::filesystem::path default_scenario_dir() {
    if (const char* env = std::getenv("VOTESIM_SCENARIO_DIR"); env && *env) return env;
    return VOTESIM_DEFAULT_SCENARIO_DIR;
}

}  // namespace votesim
