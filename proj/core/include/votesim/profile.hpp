#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "votesim/facet.hpp"

namespace votesim {

inline constexpr double kScoreMin = 0.0;
inline constexpr double kScoreMax = 100.0;
inline constexpr double kNeutralScore = 50.0;

constexpr double clamp_score(double v) noexcept {
    return v < kScoreMin ? kScoreMin : (v > kScoreMax ? kScoreMax : v);
}

/// A base personality: one 0-100 score per facet. Every write is clamped.
class FacetProfile {
public:
    /// All facets at the neutral score.
    FacetProfile() { scores_.fill(kNeutralScore); }

    double operator[](FacetId f) const noexcept { return scores_[facet_index(f)]; }
    void set(FacetId f, double v) noexcept { scores_[facet_index(f)] = clamp_score(v); }
    void add(FacetId f, double delta) noexcept { set(f, (*this)[f] + delta); }

    const std::array<double, kFacetCount>& scores() const noexcept { return scores_; }

    friend bool operator==(const FacetProfile&, const FacetProfile&) = default;

private:
    std::array<double, kFacetCount> scores_{};
};

/// Either a preset name or an explicit facet-key -> score map.
using ProfileSpec = std::variant<std::string, std::map<std::string, double>>;

/// Builds a complete profile. Unspecified facets default to 50, everything is clamped.
/// Throws ConfigError on an unknown preset, an unknown facet key or a non-finite score.
FacetProfile make_profile(const ProfileSpec& spec);

/// Preset names accepted by make_profile, in canonical spelling.
std::vector<std::string_view> preset_names();

}  // namespace votesim
