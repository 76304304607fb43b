#include "votesim/attitude.hpp"

namespace votesim {

double AttitudeLedger::offset(std::string_view target, std::string_view rt) const {
    auto it = offsets_.find(Key{std::string(target), std::string(rt)});
    return it == offsets_.end() ? 0.0 : it->second;
}

void AttitudeLedger::add(std::string_view target, std::string_view rt, double delta) {
    offsets_[Key{std::string(target), std::string(rt)}] += delta;
}

void AttitudeLedger::set(std::string_view target, std::string_view rt, double value) {
    offsets_[Key{std::string(target), std::string(rt)}] = value;
}

double effective_attitude(const FacetProfile& profile, const AttitudeLedger& ledger,
                          std::string_view target, const ResponseType& rt) {
    return clamp_score(evaluate_composite(profile, rt) + ledger.offset(target, rt.name()));
}

double effective_attitude(const FacetProfile& profile, const AttitudeLedger& ledger,
                          std::string_view target, const ResponseRegistry& registry,
                          std::string_view rt) {
    return effective_attitude(profile, ledger, target, registry.get(rt));
}

}  // namespace votesim
