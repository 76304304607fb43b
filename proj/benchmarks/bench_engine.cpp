#include <benchmark/benchmark.h>

#include <memory>

#include "votesim/electorate.hpp"
#include "votesim/engine.hpp"
#include "votesim/experiments.hpp"
#include "votesim/scenario.hpp"
#include "votesim/session.hpp"

using namespace votesim;

namespace {

std::shared_ptr<const Scenario> scenario(const char* name) {
    static auto sc = std::make_shared<const Scenario>(
        load_scenario(find_scenario_file(VOTESIM_BENCH_SCENARIO_DIR, name)));
    return sc;
}

void BM_ApplyStimulus(benchmark::State& state) {
    const ResponseRegistry reg;
    const ResponseType& rt = reg.get("trust");
    const EngineConfig cfg;
    FacetProfile p;
    AttitudeLedger led;
    FuzzStream rng(1);
    bool pos = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_stimulus(p, led, "Jackson", rt, pos, cfg, rng));
        pos = !pos;
    }
}
BENCHMARK(BM_ApplyStimulus);

void BM_TakePoll(benchmark::State& state) {
    const VoteModel model;
    const Electorate e = build_electorate(PopulationSpec::standard(), 1, model);
    const CandidatePair pair = {CandidateRef{"Jackson", Party::Conservative}, CandidateRef{"Kingston", Party::Liberal}};
    for (auto _ : state) benchmark::DoNotOptimize(take_poll(e, pair, Phase::Revealed, model));
}
BENCHMARK(BM_TakePoll);

void BM_ScriptedRun(benchmark::State& state) {
    const auto sc = scenario("same-baggage");
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_scripted(sc, paper_kingston_script(), seed++));
}
BENCHMARK(BM_ScriptedRun)->Unit(benchmark::kMicrosecond);

void BM_Replicate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(replicate_paper(42, VOTESIM_BENCH_SCENARIO_DIR));
}
BENCHMARK(BM_Replicate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
