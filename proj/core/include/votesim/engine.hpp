#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "votesim/attitude.hpp"
#include "votesim/profile.hpp"
#include "votesim/response_type.hpp"

namespace votesim {

struct EngineConfig {
    /// Attitude points moved by one stimulus call before fuzz.
    double attitude_step = 8.0;
    /// Fraction of the attitude delta that leaks into the base facets.
    double drift_ratio = 0.1;
    double fuzz_lo = 0.5;
    double fuzz_hi = 1.5;
    std::uint64_t rng_seed = 0;

    /// Throws ConfigError when a field is out of range.
    void validate() const;

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// Deterministic random stream shared by every stimulus of one session.
/// Uses its own uniform mapping so results are identical across standard libraries.
class FuzzStream {
public:
    explicit FuzzStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo == hi ? lo : lo + (hi - lo) * unit(); }

    /// Serialized engine state (for digests and snapshots).
    std::string state() const;

    friend bool operator==(const FuzzStream& a, const FuzzStream& b) { return a.engine_ == b.engine_; }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 step, used to derive independent stream seeds from one session seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// One engine call: nudges the (target, rt) attitude by +/- step * fuzz and drifts
/// the base facets of rt by drift_ratio of that delta, split by weight. Returns the delta.
double apply_stimulus(FacetProfile& profile, AttitudeLedger& ledger, std::string_view target,
                      const ResponseType& rt, bool positive, const EngineConfig& cfg,
                      FuzzStream& rng);

/// Registry lookup; throws UnknownResponseType before touching any state.
double apply_stimulus(FacetProfile& profile, AttitudeLedger& ledger, std::string_view target,
                      const ResponseRegistry& registry, std::string_view rt, bool positive,
                      const EngineConfig& cfg, FuzzStream& rng);

}  // namespace votesim
