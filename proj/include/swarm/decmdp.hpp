#pragma once

#include "swarm/motion.hpp"
#include "swarm/optimizer.hpp"
#include "swarm/tracking.hpp"

#include <optional>
#include <random>
#include <vector>

namespace swarm {

enum class ShapeKind { circle, rectangle, square };

// Geometric locus on whose boundary the swarm must arrive.
struct FormationShape {
    ShapeKind kind = ShapeKind::circle;
    Vec2 center = Vec2::Zero();
    double radius = 0.0;                 // circle
    double width = 0.0, height = 0.0;    // rectangle
    double side = 0.0;                   // square

    double perimeter() const;
    // Boundary point at the given arclength (wrapped modulo the perimeter).
    Vec2 point_at(double arclength) const;
};

struct CostWeights {
    double w1 = 1.0;
    double w2 = 100.0;
    double d_coll_thresh = 10.0;  // [m]
};

struct NeighborState {
    int id = -1;
    UavState state;
    Vec2 destination = Vec2::Zero();  // the neighbor's d^nn (formation mode)
};

// A UAV's decision context: everything its local planner sees.
struct LocalBelief {
    UavState own;
    std::vector<NeighborState> neighbors;  // excludes self
    Vec2 destination = Vec2::Zero();       // own d^i (formation mode)
    std::optional<TrackerState> tracker;   // assigned-target posterior (tracking mode)
    std::optional<int> assignment;         // assigned target id
};

enum class PlanMode { formation, tracking };

struct HorizonControls {
    std::vector<ControlInput> own;                    // length H
    std::vector<std::vector<ControlInput>> neighbor;  // [neighbor][k], length H each
};

struct RolloutModels {
    UavLimits limits;
    TargetModel target;  // tracking mode
    SensorNoise sensor;  // tracking mode: nominal measurement geometry
};

// Index of the closest other UAV; ties break to the lowest id.
// Throws std::invalid_argument for a single-UAV swarm.
int nearest_neighbor(int i, const std::vector<UavState>& states);

// All j != i within `threshold` meters of UAV i; falls back to the nearest
// neighbor when the set is empty. A single-UAV swarm yields the empty set.
std::vector<int> neighbors_within(int i, const std::vector<UavState>& states,
                                  double threshold);

// Inverse-distance collision penalty, active strictly below the threshold.
double collision_penalty(const Vec2& a, const Vec2& b, const CostWeights& w);

// Local stage costs. The destination and penalty sums run over every
// included neighbor; with the nearest neighbor alone they reduce to the
// single-neighbor form.
double formation_cost(const LocalBelief& b, const CostWeights& w);
double tracking_cost(const LocalBelief& b, const CostWeights& w);

// Nominal rollout: propagates own and neighbor kinematics with zero noise
// over the horizon and sums the stage cost of each post-step state. In
// tracking mode the assigned tracker is propagated alongside (predict, then
// update with the nominal measurement taken from the planned own position),
// so the covariance trace responds to the controls through geometry.
double nbo_rollout(const LocalBelief& b, const HorizonControls& hc,
                   PlanMode mode, const RolloutModels& models,
                   const CostWeights& w);

// Decision-vector layout: H (f, phi) pairs for the own UAV followed by H
// pairs per neighbor, in neighbor order.
Eigen::VectorXd pack_controls(const HorizonControls& hc);
HorizonControls unpack_controls(const Eigen::VectorXd& x, int H, int n_neighbors);
BoxBounds control_bounds(const UavLimits& lim, int H, int n_agents);

// Previous solution carried across steps for warm starting; neighbor blocks
// are matched by id and dropped when the neighbor set changes.
struct WarmStart {
    std::vector<int> neighbor_ids;
    Eigen::VectorXd x;
};

struct PlanResult {
    ControlInput control;          // first own control; neighbor controls are discarded
    Eigen::VectorXd solution;      // full optimized decision vector
    std::vector<int> neighbor_ids;
    double objective = 0.0;
    long evals = 0;
    bool fallback = false;         // optimizer failure -> zero-control fallback
};

PlanResult plan_local(const LocalBelief& b, int H, PlanMode mode,
                      const RolloutModels& models, const CostWeights& w,
                      const OptimizerOptions& opts,
                      const WarmStart* warm = nullptr);

// Joint state seen by the centralized baseline.
struct GlobalBelief {
    std::vector<UavState> uavs;
    std::vector<Vec2> destinations;             // formation mode
    std::vector<TrackerState> target_trackers;  // tracking mode, one per target
    std::vector<int> assignment;                // uav -> target id
};

struct CentralizedPlan {
    std::vector<ControlInput> controls;  // first-step control per UAV
    Eigen::VectorXd solution;
    double objective = 0.0;
    long evals = 0;
    bool fallback = false;
};

// Single optimization over all UAV controls with the global stage cost;
// in tracking mode every target tracker absorbs nominal measurements from
// every UAV each stage.
CentralizedPlan plan_centralized(const GlobalBelief& g, int H, PlanMode mode,
                                 const RolloutModels& models,
                                 const CostWeights& w,
                                 const OptimizerOptions& opts,
                                 const Eigen::VectorXd* warm = nullptr);

// n boundary points with pairwise separation >= min_sep, sampled uniformly
// by arclength; throws std::runtime_error when the shape cannot fit them.
std::vector<Vec2> assign_destinations(const FormationShape& shape, int n,
                                      double min_sep, std::mt19937_64& rng);

// Round-robin by id: UAV i -> target (i mod n_targets).
std::vector<int> assign_targets(int n_uavs, int n_targets);

}  // namespace swarm
