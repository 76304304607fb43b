#include "votesim/engine.hpp"

#include <cmath>
#include <sstream>

#include "votesim/errors.hpp"

namespace votesim {

void EngineConfig::validate() const {
    if (!std::isfinite(attitude_step) || attitude_step < 0.0) {
        throw ConfigError("attitude_step must be finite and >= 0");
    }
    if (!(drift_ratio >= 0.0 && drift_ratio <= 1.0)) throw ConfigError("drift_ratio must be in [0, 1]");
    if (!(fuzz_lo > 0.0) || !(fuzz_lo <= fuzz_hi) || !std::isfinite(fuzz_hi)) {
        throw ConfigError("fuzz range must satisfy 0 < lo <= hi");
    }
}

std::string FuzzStream::state() const {
    std::ostringstream out;
    out << engine_;
    return out.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double apply_stimulus(FacetProfile& profile, AttitudeLedger& ledger, std::string_view target,
                      const ResponseType& rt, bool positive, const EngineConfig& cfg,
                      FuzzStream& rng) {
    const double fuzz = rng.uniform(cfg.fuzz_lo, cfg.fuzz_hi);
    const double delta = (positive ? 1.0 : -1.0) * cfg.attitude_step * fuzz;
    if (delta == 0.0) return delta;

    ledger.add(target, rt.name(), delta);

    if (cfg.drift_ratio > 0.0) {
        const double budget = cfg.drift_ratio * std::abs(delta) / rt.total_weight();
        for (const FacetWeight& w : rt.weights()) {
            // A facet moves with the composite when its polarity agrees with the stimulus.
            const bool raise = positive == (w.polarity == Polarity::Positive);
            profile.add(w.facet, raise ? budget * w.weight : -budget * w.weight);
        }
    }
    return delta;
}

double apply_stimulus(FacetProfile& profile, AttitudeLedger& ledger, std::string_view target,
                      const ResponseRegistry& registry, std::string_view rt, bool positive,
                      const EngineConfig& cfg, FuzzStream& rng) {
    return apply_stimulus(profile, ledger, target, registry.get(rt), positive, cfg, rng);
}

}  // namespace votesim
