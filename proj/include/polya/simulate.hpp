#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "polya/kernels.hpp"
#include "polya/params.hpp"
#include "polya/rng.hpp"

namespace polya {

enum class ScenarioMode { GrowthOnly, TwoPhase };

/// One experiment: pure growth, or growth up to threshold_level followed by
/// capital-conserving DOWN/UP fluctuation until total_steps.
struct ScenarioConfig {
    ModelParams params{1.0, 1};
    ScenarioMode mode = ScenarioMode::GrowthOnly;
    std::int64_t total_steps = 0;
    std::int64_t threshold_level = 0;  // TwoPhase only
    std::uint64_t seed = 0;
    std::int64_t record_every = 1;
    /// Opt-in fluctuation variant: each post-threshold step is a single DOWN
    /// or UP with probability 1/2, so the level drifts instead of holding.
    /// An empty urn forces UP. Default is the level-conserving pair.
    bool single_move_fluctuation = false;
};

inline void validate(const ScenarioConfig& cfg) {
    if (cfg.total_steps < 0) throw std::domain_error("ScenarioConfig: negative step count");
    if (cfg.record_every < 1) throw std::domain_error("ScenarioConfig: record_every must be >= 1");
    if (cfg.total_steps % cfg.record_every != 0)
        throw std::domain_error("ScenarioConfig: record_every must divide total_steps evenly");
    if (cfg.mode == ScenarioMode::TwoPhase) {
        if (cfg.threshold_level < 0 || cfg.threshold_level > cfg.total_steps)
            throw std::domain_error("ScenarioConfig: threshold level must lie in [0, total_steps]");
        if (cfg.threshold_level == 0 && cfg.total_steps > 0 && !cfg.single_move_fluctuation)
            throw std::domain_error("ScenarioConfig: DOWN step requested at level 0");
    }
}

struct TrajectoryRecord {
    std::int64_t step;
    StepKind kind;  // the move that produced this state
    Composition state;
};

struct Trajectory {
    ScenarioConfig scenario;
    std::vector<TrajectoryRecord> records;
    Composition terminal;

    /// Recorded state at an exact step, or throws.
    const Composition& at_step(std::int64_t step) const {
        for (const auto& rec : records)
            if (rec.step == step) return rec.state;
        throw std::out_of_range("Trajectory: step " + std::to_string(step) + " was not recorded");
    }
};

namespace detail {

template <class StepFn>
Trajectory run_scenario(const ScenarioConfig& cfg, RngEngine& rng, StepFn step_fn) {
    Trajectory traj{cfg, {}, Composition(static_cast<std::size_t>(cfg.params.m()), 0)};
    if (cfg.record_every > 0)
        traj.records.reserve(static_cast<std::size_t>(cfg.total_steps / cfg.record_every));
    Composition x = traj.terminal;
    for (std::int64_t t = 1; t <= cfg.total_steps; ++t) {
        TransitionEvent ev = step_fn(t, x, rng);
        x = ev.target;
        if (t % cfg.record_every == 0)
            traj.records.push_back(TrajectoryRecord{t, ev.kind, x});
    }
    traj.terminal = std::move(x);
    return traj;
}

}  // namespace detail

/// Pure growth from the empty urn: total_steps UP moves.
inline Trajectory run_growth(const ScenarioConfig& cfg, RngEngine& rng) {
    validate(cfg);
    if (cfg.mode != ScenarioMode::GrowthOnly)
        throw std::invalid_argument("run_growth: config is not a growth scenario");
    return detail::run_scenario(cfg, rng, [&](std::int64_t, const Composition& x, RngEngine& r) {
        return sample_up(cfg.params, x, r);
    });
}

/// Growth until the level reaches threshold_level, then DOWN/UP fluctuation
/// (one composite move per step) for the remaining steps. The level stays at
/// the threshold for every step past it.
inline Trajectory run_two_phase(const ScenarioConfig& cfg, RngEngine& rng) {
    validate(cfg);
    if (cfg.mode != ScenarioMode::TwoPhase)
        throw std::invalid_argument("run_two_phase: config is not a two-phase scenario");
    return detail::run_scenario(cfg, rng, [&](std::int64_t t, const Composition& x, RngEngine& r) {
        if (t <= cfg.threshold_level) return sample_up(cfg.params, x, r);
        if (!cfg.single_move_fluctuation) return sample_downup(cfg.params, x, r);
        const bool go_down = level(x) > 0 && canonical_uniform(r) < 0.5;
        return go_down ? sample_down(cfg.params, x, r) : sample_up(cfg.params, x, r);
    });
}

inline Trajectory run_scenario(const ScenarioConfig& cfg, RngEngine& rng) {
    return cfg.mode == ScenarioMode::GrowthOnly ? run_growth(cfg, rng) : run_two_phase(cfg, rng);
}

/// Independent replicas of one scenario. Replica r runs with the stream seed
/// derive_stream_seed(base_seed, r); results are ordered by replica index and
/// do not depend on scheduling.
inline std::vector<Trajectory> run_ensemble(const ScenarioConfig& cfg, std::int64_t replicas,
                                            std::uint64_t base_seed) {
    if (replicas < 1) throw std::domain_error("run_ensemble: need at least one replica");
    validate(cfg);
    std::vector<Trajectory> out(static_cast<std::size_t>(replicas),
                                Trajectory{cfg, {}, Composition{}});
    const unsigned hw = std::thread::hardware_concurrency();
    const std::int64_t workers =
        std::min<std::int64_t>(replicas, hw == 0 ? 1 : static_cast<std::int64_t>(hw));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t r = w; r < replicas; r += workers) {
                ScenarioConfig local = cfg;
                local.seed = derive_stream_seed(base_seed, static_cast<std::uint64_t>(r));
                RngEngine rng = make_engine(local.seed);
                out[static_cast<std::size_t>(r)] = run_scenario(local, rng);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace polya
