#pragma once

#include "swarm/scenario.hpp"

#include <string>
#include <vector>

namespace swarm {

struct UavStepRow {
    int step = 0;       // 1-based
    double t = 0.0;     // simulated time [s]
    int uav = 0;
    UavState state;     // post-step state
    ControlInput control;
    double plan_ms = 0.0;
    bool fallback = false;
};

struct EstRow {
    int step = 0;
    int sensor = 0;
    int target = 0;
    Vec6 est = Vec6::Zero();
    double trace_P = 0.0;
    Vec6 truth = Vec6::Zero();
    double sq_err = 0.0;
};

struct StepSummary {
    int step = 0;
    double t = 0.0;
    double min_pairwise = 0.0;  // NaN when there are no UAV pairs
    double plan_ms = 0.0;       // decentralized: max across UAVs
    double mean_sq_err = 0.0;   // NaN in formation mode
};

struct RunRecord {
    Mode mode = Mode::formation;
    int sim_steps = 0;
    double T = 0.0;
    int n_uavs = 0;
    int n_targets = 0;
    bool centralized = false;

    std::vector<UavState> initial;   // states at t = 0
    std::vector<Vec2> destinations;  // formation mode
    std::vector<UavStepRow> uav_rows;
    std::vector<EstRow> est_rows;
    std::vector<double> plan_ms_per_step;
    std::vector<StepSummary> summary;  // one row per step
    SensorNetwork network;             // fusion mode

    // FNV-1a digest of the deterministic simulation content; wall-clock
    // fields are excluded (they are measurements, not state).
    std::uint64_t state_digest() const;
};

// Runs the configured scenario; deterministic given cfg.seed (modulo the
// recorded wall-clock timings). Throws std::invalid_argument with the full
// validation report when the config is invalid.
RunRecord run_scenario(const ScenarioConfig& cfg);

// Average tracking error: mean over all recorded (step, sensor[, target])
// estimates of the squared full-state error.
double metric_avg_tracking_error(const RunRecord& rec);

struct TcStats {
    double mean_ms = 0.0;
    double std_ms = 0.0;
    std::vector<double> per_uav_mean_ms;  // decentralized runs only
};

// Mean per-step planning time: max across UAVs per step for decentralized
// runs, the single planner's time for centralized runs.
TcStats metric_Tc(const RunRecord& rec);

// First simulated time at which every UAV sits within arrival_tol of its
// destination; +inf if that never happens.
double metric_Tf(const RunRecord& rec, double arrival_tol);

struct PairwiseStats {
    double min = 0.0;
    double mean = 0.0;
};

// Min and mean over all steps and all UAV pairs of the pairwise distance.
PairwiseStats metric_pairwise(const RunRecord& rec);

// Writes the per-run CSV set into out_dir (created if needed).
void write_run_csv(const RunRecord& rec, const std::string& out_dir);

// The experiment grids used by the sweep harness.
namespace paper_grids {
const std::vector<double>& duty_cycle_small();  // M in {1..9}
const std::vector<double>& duty_cycle_large();  // M in {3,6,...,24}
const std::vector<double>& edge_prob();         // Pe in {0.1,...,1.0}
const std::vector<double>& alpha();             // {0.0,0.1,...,1.0}
const std::vector<double>& threshold();         // through 240 m and beyond
const std::vector<double>& degree();            // D in {2,...,9} for n = 10
}  // namespace paper_grids

struct SweepPoint {
    double param_value = 0.0;
    int repeat = 0;
    double metric = 0.0;  // avg_err, Tc or Tf depending on the sweep
    double stddev = 0.0;  // within-run standard deviation of the metric
};

// Known sweep parameters: M, alpha, Pe, D, Ne, threshold.
bool sweep_param_known(const std::string& name);
ScenarioConfig apply_sweep_param(const ScenarioConfig& base,
                                 const std::string& name, double value);

// Runs |values| x repeats scenarios with derived seeds. Results in grid
// order; when out_dir is non-empty a summary CSV is written there.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& base,
                                  const std::string& param,
                                  const std::vector<double>& values,
                                  int repeats, const std::string& out_dir);

// Seed for repeat r of sweep value index v (also used for matched
// decentralized/centralized comparisons).
std::uint64_t sweep_seed(std::uint64_t root, std::uint64_t value_index,
                         std::uint64_t repeat);

}  // namespace swarm
