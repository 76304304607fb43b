#include "votesim/profile.hpp"

#include <cctype>
#include <cmath>
#include <initializer_list>
#include <utility>

#include "votesim/errors.hpp"

namespace votesim {
namespace {

struct Preset {
    std::string_view name;
    double openness_cluster;  // fantasy, aesthetics, ideas, values
    double duty_trust;        // dutifulness, trust; 0 = untouched
    double drive;             // self-discipline, positive emotions, assertiveness; 0 = untouched
};

// Political attitude table. Facets not listed stay at 50.
constexpr std::array<Preset, 7> kPartisanPresets = {{
    {"very conservative", 10, 80, 60},
    {"conservative", 20, 60, 60},
    {"leans conservative", 30, 0, 60},
    {"very liberal", 80, 80, 60},
    {"liberal", 70, 60, 60},
    {"leans liberal", 60, 0, 60},
    {"neutral", 0, 0, 0},
}};

std::string normalize(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '-' || c == '_') c = ' ';
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

void set_all(FacetProfile& p, std::initializer_list<FacetId> facets, double v) {
    for (FacetId f : facets) p.set(f, v);
}

FacetProfile from_preset(const std::string& raw) {
    const std::string name = normalize(raw);
    FacetProfile p;
    if (name == "unwilling to vote" || name == "undecided") {
        set_all(p, {FacetId::Assertiveness, FacetId::PositiveEmotions}, 10);
        return p;
    }
    for (const Preset& preset : kPartisanPresets) {
        if (preset.name != name) continue;
        if (preset.openness_cluster > 0) {
            set_all(p, {FacetId::Fantasy, FacetId::Aesthetics, FacetId::Ideas, FacetId::Values},
                    preset.openness_cluster);
        }
        if (preset.duty_trust > 0) set_all(p, {FacetId::Dutifulness, FacetId::Trust}, preset.duty_trust);
        if (preset.drive > 0) {
            set_all(p, {FacetId::SelfDiscipline, FacetId::PositiveEmotions, FacetId::Assertiveness},
                    preset.drive);
        }
        return p;
    }
    throw ConfigError("unknown profile preset '" + raw + "'");
}

}  // namespace

FacetProfile make_profile(const ProfileSpec& spec) {
    if (const auto* preset = std::get_if<std::string>(&spec)) return from_preset(*preset);

    FacetProfile p;
    for (const auto& [key, value] : std::get<std::map<std::string, double>>(spec)) {
        const auto facet = parse_facet(key);
        if (!facet) throw ConfigError("unknown facet '" + key + "'");
        if (!std::isfinite(value)) throw ConfigError("non-finite score for facet '" + key + "'");
        p.set(*facet, value);
    }
    return p;
}

std::vector<std::string_view> preset_names() {
    std::vector<std::string_view> names;
    for (const Preset& p : kPartisanPresets) names.push_back(p.name);
    names.push_back("unwilling to vote");
    return names;
}

}  // namespace votesim
