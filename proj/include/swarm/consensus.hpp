#pragma once

#include "swarm/graph.hpp"
#include "swarm/tracking.hpp"

#include <cstdint>
#include <vector>

namespace swarm {

// Tracker state flattened for consensus exchange: posterior mean followed by
// the row-major covariance, 6 + 36 entries.
using FusionVector = Eigen::Matrix<double, 42, 1>;

FusionVector encode_fusion(const TrackerState& t);
TrackerState decode_fusion(const FusionVector& y);

// Synchronous weighted-average update from the step-k snapshot:
//   y'_i = (alpha*y_i + (1-alpha)*sum_{j in N(i)} y_j) / (alpha + |N(i)|*(1-alpha)).
// Isolated nodes keep their value.
std::vector<FusionVector> consensus_step(const std::vector<FusionVector>& ys,
                                         const SensorNetwork& net, double alpha);

// Synchronous information-filter fusion with the neighbors:
//   P'_i = (P_i^-1 + sum_j P_j^-1)^-1,  x'_i = P'_i (P_i^-1 x_i + sum_j P_j^-1 x_j).
// Throws std::invalid_argument on a singular covariance.
std::vector<TrackerState> bayes_fuse_step(const std::vector<TrackerState>& ts,
                                          const SensorNetwork& net);

enum class FusionAlgo { consensus, bayes };

struct ScheduleConfig {
    int M = 3;           // duty-cycle phase length [steps]
    int Z = 300;         // total steps
    double alpha = 0.5;  // consensus weight
};

struct DutyCycleWorld {
    TargetState truth0 = TargetState::Zero();
    TargetModel model;
    SensorNoise noise;
    Mat6 P0;
    std::uint64_t seed = 0;  // root for the noise streams
};

struct DutyCycleRecord {
    std::vector<TargetState> truth;              // [Z]
    std::vector<std::vector<TrackerState>> est;  // [Z][n]
    std::vector<char> sensing;                   // [Z], 1 = sensing phase
};

// Alternates M-step phases: sensing (predict + local measurement update per
// sensor) and fusion (predict only, then one consensus or Bayes exchange per
// step). Trackers start from each sensor's own first measurement of truth0.
DutyCycleRecord run_duty_cycle(const DutyCycleWorld& world,
                               const SensorNetwork& net,
                               const ScheduleConfig& sched, FusionAlgo algo);

}  // namespace swarm
