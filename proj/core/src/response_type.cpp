#include "votesim/response_type.hpp"

#include <cmath>
#include <utility>

#include "votesim/errors.hpp"

namespace votesim {

ResponseType::ResponseType(std::string name, std::vector<FacetWeight> weights)
    : name_(std::move(name)), weights_(std::move(weights)) {
    if (name_.empty()) throw ConfigError("response type needs a name");
    if (weights_.empty()) throw ConfigError("response type '" + name_ + "' has no weights");
    for (const FacetWeight& w : weights_) {
        if (!(w.weight > 0.0) || !std::isfinite(w.weight)) {
            throw ConfigError("response type '" + name_ + "' has a non-positive weight");
        }
        total_weight_ += w.weight;
    }
}

namespace {

std::vector<FacetWeight> trust_weights(Polarity p) {
    return {
        {FacetId::Trust, kHighCorrelation, p},
        {FacetId::SelfConsciousness, kModerateCorrelation, p},
        {FacetId::Altruism, kModerateCorrelation, p},
        {FacetId::TenderMindedness, kModerateCorrelation, p},
    };
}

}  // namespace

ResponseRegistry::ResponseRegistry() {
    define(std::string(response::kTrust), trust_weights(Polarity::Positive));
    define(std::string(response::kDistrust), trust_weights(Polarity::Negative));
    define(std::string(response::kKind), {
                                             {FacetId::Warmth, kHighCorrelation},
                                             {FacetId::Altruism, kModerateCorrelation},
                                             {FacetId::TenderMindedness, kModerateCorrelation},
                                         });
    define(std::string(response::kEfficiency), {
                                                   {FacetId::Competence, kHighCorrelation},
                                                   {FacetId::SelfDiscipline, kModerateCorrelation},
                                                   {FacetId::Order, kModerateCorrelation},
                                               });
    define(std::string(response::kDependability), {
                                                      {FacetId::Dutifulness, kHighCorrelation},
                                                      {FacetId::SelfDiscipline, kModerateCorrelation},
                                                      {FacetId::Deliberation, kModerateCorrelation},
                                                  });
}

ResponseRegistry ResponseRegistry::empty() { return ResponseRegistry(EmptyTag{}); }

const ResponseType& ResponseRegistry::define(std::string name, std::vector<FacetWeight> weights) {
    if (types_.contains(name)) throw ConfigError("response type '" + name + "' already registered");
    ResponseType rt(name, std::move(weights));
    return types_.emplace(std::move(name), std::move(rt)).first->second;
}

bool ResponseRegistry::contains(std::string_view name) const { return types_.find(name) != types_.end(); }

const ResponseType& ResponseRegistry::get(std::string_view name) const {
    auto it = types_.find(name);
    if (it == types_.end()) throw UnknownResponseType(std::string(name));
    return it->second;
}

std::vector<std::string> ResponseRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(types_.size());
    for (const auto& [name, _] : types_) out.push_back(name);
    return out;
}

std::vector<FacetWeight> default_rabbit_like_weights() {
    return {
        {FacetId::TenderMindedness, kHighCorrelation},
        {FacetId::Altruism, kModerateCorrelation},
    };
}

double evaluate_composite(const FacetProfile& profile, const ResponseType& rt) noexcept {
    // Centred on the neutral score so an all-50 profile gives exactly 50.
    double sum = 0.0;
    for (const FacetWeight& w : rt.weights()) {
        const double d = profile[w.facet] - kNeutralScore;
        sum += w.weight * (w.polarity == Polarity::Positive ? d : -d);
    }
    return clamp_score(kNeutralScore + sum / rt.total_weight());
}

double evaluate_composite(const FacetProfile& profile, const ResponseRegistry& registry,
                          std::string_view rt) {
    return evaluate_composite(profile, registry.get(rt));
}

}  // namespace votesim
