#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "votesim/facet.hpp"
#include "votesim/profile.hpp"

namespace votesim {

enum class Polarity { Positive, Negative };

struct FacetWeight {
    FacetId facet;
    double weight;
    Polarity polarity = Polarity::Positive;

    friend bool operator==(const FacetWeight&, const FacetWeight&) = default;
};

/// Named signed combination of facets, evaluated as a normalized weighted mean
/// where negative-polarity facets contribute (100 - score).
class ResponseType {
public:
    ResponseType(std::string name, std::vector<FacetWeight> weights);

    const std::string& name() const noexcept { return name_; }
    const std::vector<FacetWeight>& weights() const noexcept { return weights_; }
    double total_weight() const noexcept { return total_weight_; }

    friend bool operator==(const ResponseType&, const ResponseType&) = default;

private:
    std::string name_;
    std::vector<FacetWeight> weights_;
    double total_weight_ = 0.0;
};

namespace response {
inline constexpr std::string_view kTrust = "trust";
inline constexpr std::string_view kDistrust = "distrust";
inline constexpr std::string_view kKind = "kind";
inline constexpr std::string_view kEfficiency = "efficiency";
inline constexpr std::string_view kDependability = "dependability";
inline constexpr std::string_view kRabbitLike = "rabbit_like";
}  // namespace response

/// Weight used for a facet that is "highly" correlated with a response.
inline constexpr double kHighCorrelation = 1.0;
/// Weight used for a "moderately" correlated facet.
inline constexpr double kModerateCorrelation = 0.5;

class ResponseRegistry {
public:
    /// Pre-registers trust, distrust, kind, efficiency and dependability.
    ResponseRegistry();

    /// An empty registry, used when a config file supplies every type.
    static ResponseRegistry empty();

    /// Throws ConfigError on a duplicate name, empty weight list or non-positive weight.
    const ResponseType& define(std::string name, std::vector<FacetWeight> weights);

    bool contains(std::string_view name) const;
    /// Throws UnknownResponseType.
    const ResponseType& get(std::string_view name) const;

    std::vector<std::string> names() const;

    friend bool operator==(const ResponseRegistry&, const ResponseRegistry&) = default;

private:
    struct EmptyTag {};
    explicit ResponseRegistry(EmptyTag) {}

    std::map<std::string, ResponseType, std::less<>> types_;
};

/// Weights for the rabbit attitude composite registered by scenarios.
std::vector<FacetWeight> default_rabbit_like_weights();

/// Weighted composite score in [0, 100].
double evaluate_composite(const FacetProfile& profile, const ResponseType& rt) noexcept;
/// Registry lookup; throws UnknownResponseType.
double evaluate_composite(const FacetProfile& profile, const ResponseRegistry& registry,
                          std::string_view rt);

}  // namespace votesim
