#pragma once

#include "swarm/consensus.hpp"
#include "swarm/decmdp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace swarm {

enum class Mode { formation, tracking, fusion };

// Initial UAV placement: positions drawn in a square around `center` with a
// minimum pairwise separation.
struct StartGeometry {
    Vec2 center = Vec2(-100.0, -100.0);
    double extent = 100.0;   // square side [m]
    double min_sep = 15.0;   // [m]
    double speed = 5.0;      // [m/s]
    double heading = 0.785;  // [rad]
};

// Target spawning for tracking mode: target t heads outward at
// heading0 + 2*pi*t/n_targets from a ring of the given radius.
struct TargetSetup {
    double speed = 6.0;
    double spawn_radius = 10.0;
    double heading0 = 0.3;
    double process_intensity = 0.1;  // white-noise-acceleration intensity
};

// Fusion-mode world: static sensors in a square region, one target.
struct FusionSetup {
    TargetState truth0 = TargetState::Zero();
    double region = 500.0;  // [m]
    int graph_config = 2;   // 1 | 2 | 3
    int degree = 3;         // config 1
    double edge_prob = 0.5; // config 2
    long n_edges = 15;      // config 3
};

struct ScenarioConfig {
    Mode mode = Mode::formation;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int sim_steps = 80;
    int n_uavs = 9;
    int n_targets = 1;
    bool centralized = false;
    // <= 0 selects pure nearest-neighbor planning; +inf means every UAV.
    double neighborhood_threshold = -1.0;

    FormationShape shape;
    double dest_min_sep = 10.0;
    double arrival_tol = 2.0;

    CostWeights weights;
    UavLimits limits;
    SensorNoise sensor;

    int horizon = 7;
    int eval_mult = 150;  // planner budget = eval_mult * decision dim; 0 -> optimizer default
    double x_tol = 1e-4;
    double f_tol = 1e-7;
    int restarts = 1;

    StartGeometry start;
    TargetSetup targets;

    ScheduleConfig schedule;
    FusionAlgo algo = FusionAlgo::consensus;
    FusionSetup fusion;
};

struct ConfigError {
    std::string field;    // e.g. "[uav].v_max"
    std::string message;
};

struct ConfigResult {
    ScenarioConfig cfg;
    std::vector<ConfigError> errors;
    bool ok() const { return errors.empty(); }
};

// Baseline parameter sets per mode; config files override from these.
ScenarioConfig default_config(Mode mode);

// Parses the INI-style text (sections of key = value pairs, '#'/';'
// comments). All problems are collected with field paths, never thrown.
ConfigResult parse_config(const std::string& text);
ConfigResult load_config(const std::string& path);

// Exhaustive semantic validation of a config.
std::vector<ConfigError> validate_config(const ScenarioConfig& cfg);

std::string describe(const std::vector<ConfigError>& errors);

}  // namespace swarm
