// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/analysis.hpp"
#include "d2dsim/cdr.hpp"
#include "d2dsim/dynamics.hpp"
#include "d2dsim/mobility.hpp"
#include "d2dsim/stochastic.hpp"
#include "d2dsim/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace d2dsim {

/// Flat key=value scenario configuration ('#' comments). CLI flags override
/// file values; unknown keys are validation errors so typos surface.
struct ScenarioConfig {
    // paths
    std::filesystem::path cdr;
    std::filesystem::path communities;
    std::filesystem::path out;

    // extraction
    std::int64_t observation_minutes = 150LL * 24 * 60;
    std::string rate_mode = "per_device"; // per_device | aggregate
    std::string zeta_mode = "empirical";  // empirical | heterogeneous
    double chi = -0.5;
    double zeta_bar = 1.0 / 720.0;
    bool clean_no_return = false;
    std::int64_t density_slot_minutes = 60;

    // model
    std::string mode = "sir";          // sir | sir_latent
    std::string engine = "stochastic"; // stochastic | deterministic
    std::string origin = "0";          // index | capital | max_betweenness | min_population
    double epsilon = 100.0 / 18959.0;
    double radius_m = 100.0;
    double contact_prob = 0.25;
    double delta = 1.0 / 1440.0;
    double latent_fraction = 0.0;
    double wake_rate = 1.0 / 720.0;
    double gamma = 0.0;

    // run
    double tau = 1.0;
    double dt = 0.5;
    double horizon_minutes = 30.0 * 1440.0;
    double sample_every = 60.0;
    std::size_t replicas = 1;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string scenario_id = "scenario";

    // synth
    synth::SynthConfig synth;

    static ScenarioConfig from_file(const std::filesystem::path& p,
                                    const std::map<std::string, std::string>& overrides = {});
    static ScenarioConfig from_map(const std::map<std::string, std::string>& kv);

    std::map<std::string, std::string> to_map() const;
};

struct CommunityTable {
    std::vector<std::string> names;
    std::vector<double> lat, lon, area_km2, population;

    int size() const { return static_cast<int>(names.size()); }
};

CommunityTable load_communities(const std::filesystem::path& p);

/// Outcome of one CLI stage; `outputs` lists files written under cfg.out.
struct StageResult {
    std::vector<std::filesystem::path> outputs;
    std::vector<std::string> warnings;
};

StageResult cmd_synth(const ScenarioConfig& cfg);
StageResult cmd_ingest(const ScenarioConfig& cfg);
StageResult cmd_steady_state(const ScenarioConfig& cfg);

struct RunResult {
    StageResult stage;
    EpidemicSummary summary;
    double population = 0.0;
    std::vector<std::uint64_t> seeds;
};

RunResult cmd_run(const ScenarioConfig& cfg);
StageResult cmd_analyze(const ScenarioConfig& cfg, const std::filesystem::path& timeseries_csv);

/// Mobility parameters assembled the way cmd_run uses them: rate_mode
/// selects aggregate or per-device extraction, zeta_mode swaps in the
/// degree-dependent return rates, clean_no_return prunes flows without a
/// return path.
MobilityParameters scenario_mobility(const ScenarioConfig& cfg, const TrajectorySet& traj,
                                     const TransitionCounts& counts,
                                     std::vector<std::string>* warnings = nullptr);

/// TimeSeries CSV helpers (long per-community format plus global files).
void write_timeseries_csv(const std::filesystem::path& p, const TimeSeries& ts);
void write_global_csv(const std::filesystem::path& p, const TimeSeries& ts);
TimeSeries read_timeseries_csv(const std::filesystem::path& p);

} // namespace d2dsim
