#include "votesim/facet.hpp"

#include <cctype>
#include <string>

namespace votesim {

const std::array<FacetId, kFacetCount> kAllFacets = [] {
    std::array<FacetId, kFacetCount> out{};
    for (std::size_t i = 0; i < kFacetCount; ++i) out[i] = static_cast<FacetId>(i + 1);
    return out;
}();

namespace {

constexpr std::array<std::string_view, kFacetCount> kKeys = {
    "fantasy",           "aesthetics",        "feelings",
    "actions",           "ideas",             "values",
    "competence",        "order",             "dutifulness",
    "achievement_striving", "self_discipline", "deliberation",
    "warmth",            "gregariousness",    "assertiveness",
    "activity",          "excitement_seeking", "positive_emotions",
    "trust",             "straightforwardness", "altruism",
    "compliance",        "modesty",           "tender_mindedness",
    "anxiety",           "angry_hostility",   "depression",
    "self_consciousness", "impulsiveness",    "vulnerability",
};

std::string normalize(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == '-' || c == ' ') {
            out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

}  // namespace

std::string_view facet_key(FacetId f) noexcept { return kKeys[facet_index(f)]; }

std::string_view factor_name(Factor f) noexcept {
    switch (f) {
        case Factor::Openness: return "openness";
        case Factor::Conscientiousness: return "conscientiousness";
        case Factor::Extraversion: return "extraversion";
        case Factor::Agreeableness: return "agreeableness";
        case Factor::Neuroticism: return "neuroticism";
    }
    return "";
}

std::optional<FacetId> parse_facet(std::string_view name) {
    const std::string key = normalize(name);
    for (std::size_t i = 0; i < kFacetCount; ++i) {
        if (kKeys[i] == key) return static_cast<FacetId>(i + 1);
    }
    // common short forms used in presets
    if (key == "pos_emo" || key == "pos_emotions") return FacetId::PositiveEmotions;
    if (key == "selfdiscipline") return FacetId::SelfDiscipline;
    return std::nullopt;
}

std::optional<FacetId> facet_from_number(int id) noexcept {
    if (id < 1 || id > static_cast<int>(kFacetCount)) return std::nullopt;
    return static_cast<FacetId>(id);
}

}  // namespace votesim
