#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "votesim/profile.hpp"
#include "votesim/response_type.hpp"

namespace votesim {

/// Identifies who an attitude is about: a candidate id or a synthetic issue such as "Rabbits".
using TargetId = std::string;

/// Per-target offsets on response types, layered over the base profile.
/// Entries for different targets never interact.
class AttitudeLedger {
public:
    using Key = std::pair<TargetId, std::string>;

    /// Missing entries read as 0.
    double offset(std::string_view target, std::string_view rt) const;
    void add(std::string_view target, std::string_view rt, double delta);
    void set(std::string_view target, std::string_view rt, double value);

    const std::map<Key, double>& entries() const noexcept { return offsets_; }
    bool empty() const noexcept { return offsets_.empty(); }

    friend bool operator==(const AttitudeLedger&, const AttitudeLedger&) = default;

private:
    std::map<Key, double> offsets_;
};

/// clamp(composite + ledger offset for (target, rt)).
double effective_attitude(const FacetProfile& profile, const AttitudeLedger& ledger,
                          std::string_view target, const ResponseType& rt);
/// Registry lookup; throws UnknownResponseType.
double effective_attitude(const FacetProfile& profile, const AttitudeLedger& ledger,
                          std::string_view target, const ResponseRegistry& registry,
                          std::string_view rt);

}  // namespace votesim
