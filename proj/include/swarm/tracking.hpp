#pragma once

#include "swarm/motion.hpp"

namespace swarm {

// Kalman posterior over the target state. P is symmetrized after every
// update so the PSD invariant stays testable over long runs.
struct TrackerState {
    Vec6 xi = Vec6::Zero();   // posterior mean
    Mat6 P = Mat6::Identity();  // posterior covariance
};

// Weakly informative default: 100 m position, 10 m/s velocity, 1 m/s^2
// acceleration standard deviations.
Mat6 default_initial_covariance();

// xi0 = first measurement padded with zero velocity/acceleration.
TrackerState init_tracker(const Measurement& first, const Mat6& P0);

TrackerState kf_predict(const TrackerState& t, const TargetModel& model);

// Standard update with S solved as a linear system (no explicit inverse).
// Throws std::invalid_argument if the innovation covariance is singular.
TrackerState kf_update(const TrackerState& t, const Measurement& z,
                       const Mat26& H);

double trace_cov(const TrackerState& t);

}  // namespace swarm
