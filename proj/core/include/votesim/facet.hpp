#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace votesim {

enum class Factor : std::uint8_t {
    Openness,
    Conscientiousness,
    Extraversion,
    Agreeableness,
    Neuroticism,
};

/// The thirty facets of the Five Factor model. Underlying values are the
/// catalogue ids (1-30) and are stable across releases.
enum class FacetId : std::uint8_t {
    Fantasy = 1,
    Aesthetics,
    Feelings,
    Actions,
    Ideas,
    Values,
    Competence,
    Order,
    Dutifulness,
    AchievementStriving,
    SelfDiscipline,
    Deliberation,
    Warmth,
    Gregariousness,
    Assertiveness,
    Activity,
    ExcitementSeeking,
    PositiveEmotions,
    Trust,
    Straightforwardness,
    Altruism,
    Compliance,
    Modesty,
    TenderMindedness,
    Anxiety,
    AngryHostility,
    Depression,
    SelfConsciousness,
    Impulsiveness,
    Vulnerability,
};

inline constexpr std::size_t kFacetCount = 30;

/// Facets in catalogue order.
extern const std::array<FacetId, kFacetCount> kAllFacets;

constexpr int facet_number(FacetId f) noexcept { return static_cast<int>(f); }
constexpr std::size_t facet_index(FacetId f) noexcept { return static_cast<std::size_t>(f) - 1; }

/// Six consecutive facets per factor, in catalogue order.
constexpr Factor factor_of(FacetId f) noexcept {
    return static_cast<Factor>((facet_number(f) - 1) / 6);
}

/// snake_case key used in config files, e.g. "tender_mindedness".
std::string_view facet_key(FacetId f) noexcept;
std::string_view factor_name(Factor f) noexcept;

/// Accepts snake_case, kebab-case or spaced names, case-insensitively.
std::optional<FacetId> parse_facet(std::string_view name);
std::optional<FacetId> facet_from_number(int id) noexcept;

}  // namespace votesim
