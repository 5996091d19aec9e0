#include "swarm/decmdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace swarm {

namespace {

double clamp(double v, double lo, double hi) {
    return std::max(lo, std::min(hi, v));
}

// Flat-vector rollout shared by the planner objective and nbo_rollout.
// Layout: H (f, phi) pairs for the own UAV, then H pairs per neighbor.
double rollout_flat(const LocalBelief& b, const double* x, int H,
                    PlanMode mode, const RolloutModels& models,
                    const CostWeights& w, std::vector<UavState>& nbs) {
    const int n_nb = static_cast<int>(b.neighbors.size());
    const Vec4 zero = Vec4::Zero();

    UavState own = b.own;
    nbs.resize(n_nb);
    for (int j = 0; j < n_nb; ++j) nbs[j] = b.neighbors[j].state;

    TrackerState trk;
    Mat26 Hobs;
    if (mode == PlanMode::tracking) {
        trk = *b.tracker;
        Hobs = position_observation();
    }

    double total = 0.0;
    for (int k = 0; k < H; ++k) {
        own = step_uav(own, {x[2 * k], x[2 * k + 1]}, models.limits, zero);
        for (int j = 0; j < n_nb; ++j) {
            const double* xj = x + 2 * H * (1 + j);
            nbs[j] = step_uav(nbs[j], {xj[2 * k], xj[2 * k + 1]}, models.limits, zero);
        }

        double stage = 0.0;
        if (mode == PlanMode::formation) {
            stage += w.w1 * (own.pos() - b.destination).norm();
            for (int j = 0; j < n_nb; ++j) {
                stage += w.w1 * (nbs[j].pos() - b.neighbors[j].destination).norm();
            }
        } else {
            trk = kf_predict(trk, models.target);
            Measurement nominal;
            nominal.z = Hobs * trk.xi;
            nominal.R = measurement_covariance(trk.xi.head<2>(), own.pos(),
                                               models.sensor.range_frac,
                                               models.sensor.angular_sigma,
                                               models.sensor.r_floor);
            trk = kf_update(trk, nominal, Hobs);
            stage += w.w1 * trk.P.trace();
        }
        for (int j = 0; j < n_nb; ++j) {
            stage += w.w2 * collision_penalty(own.pos(), nbs[j].pos(), w);
        }
        total += stage;
    }
    return total;
}

// Centralized variant over all UAVs; one tracker per target, each absorbing
// a nominal measurement from every UAV per stage.
double rollout_central_flat(const GlobalBelief& g, const double* x, int H,
                            PlanMode mode, const RolloutModels& models,
                            const CostWeights& w, std::vector<UavState>& us,
                            std::vector<TrackerState>& trks) {
    const int n = static_cast<int>(g.uavs.size());
    const Vec4 zero = Vec4::Zero();

    us = g.uavs;
    Mat26 Hobs;
    if (mode == PlanMode::tracking) {
        trks = g.target_trackers;
        Hobs = position_observation();
    }

    double total = 0.0;
    for (int k = 0; k < H; ++k) {
        for (int i = 0; i < n; ++i) {
            const double* xi = x + 2 * H * i;
            us[i] = step_uav(us[i], {xi[2 * k], xi[2 * k + 1]}, models.limits, zero);
        }

        double stage = 0.0;
        if (mode == PlanMode::formation) {
            for (int i = 0; i < n; ++i) {
                stage += w.w1 * (us[i].pos() - g.destinations[i]).norm();
            }
        } else {
            for (auto& trk : trks) {
                trk = kf_predict(trk, models.target);
                Measurement nominal;
                nominal.z = Hobs * trk.xi;
                for (int i = 0; i < n; ++i) {
                    nominal.R = measurement_covariance(
                        trk.xi.head<2>(), us[i].pos(), models.sensor.range_frac,
                        models.sensor.angular_sigma, models.sensor.r_floor);
                    trk = kf_update(trk, nominal, Hobs);
                }
            }
            for (int i = 0; i < n; ++i) {
                stage += w.w1 * trks[g.assignment[i]].P.trace();
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                stage += w.w2 * collision_penalty(us[i].pos(), us[j].pos(), w);
            }
        }
        total += stage;
    }
    return total;
}

ControlInput zero_control(const UavLimits& lim) {
    return {clamp(0.0, lim.f_min, lim.f_max), clamp(0.0, -lim.phi_max, lim.phi_max)};
}

}  // namespace

double FormationShape::perimeter() const {
    switch (kind) {
        case ShapeKind::circle:
            if (radius <= 0.0) throw std::invalid_argument("circle radius must be positive");
            return 2.0 * std::numbers::pi * radius;
        case ShapeKind::rectangle:
            if (width <= 0.0 || height <= 0.0) {
                throw std::invalid_argument("rectangle dimensions must be positive");
            }
            return 2.0 * (width + height);
        case ShapeKind::square:
            if (side <= 0.0) throw std::invalid_argument("square side must be positive");
            return 4.0 * side;
    }
    throw std::invalid_argument("unknown shape kind");
}

Vec2 FormationShape::point_at(double arclength) const {
    const double per = perimeter();
    double s = std::fmod(arclength, per);
    if (s < 0.0) s += per;

    if (kind == ShapeKind::circle) {
        double a = s / radius;
        return center + radius * Vec2(std::cos(a), std::sin(a));
    }
    const double w = kind == ShapeKind::square ? side : width;
    const double h = kind == ShapeKind::square ? side : height;
    const Vec2 corner = center + Vec2(-w / 2.0, -h / 2.0);
    if (s < w) return corner + Vec2(s, 0.0);
    s -= w;
    if (s < h) return corner + Vec2(w, s);
    s -= h;
    if (s < w) return corner + Vec2(w - s, h);
    s -= w;
    return corner + Vec2(0.0, h - s);
}

int nearest_neighbor(int i, const std::vector<UavState>& states) {
    const int n = static_cast<int>(states.size());
    if (n < 2) throw std::invalid_argument("nearest_neighbor: needs >= 2 UAVs");
    if (i < 0 || i >= n) throw std::invalid_argument("nearest_neighbor: bad index");

    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        double d = (states[j].pos() - states[i].pos()).norm();
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

std::vector<int> neighbors_within(int i, const std::vector<UavState>& states,
                                  double threshold) {
    if (threshold <= 0.0) throw std::invalid_argument("neighbors_within: threshold must be positive");
    const int n = static_cast<int>(states.size());
    if (n < 2) return {};

    std::vector<int> out;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if ((states[j].pos() - states[i].pos()).norm() <= threshold) out.push_back(j);
    }
    if (out.empty()) out.push_back(nearest_neighbor(i, states));
    return out;
}

double collision_penalty(const Vec2& a, const Vec2& b, const CostWeights& w) {
    double d = (a - b).norm();
    if (d >= w.d_coll_thresh) return 0.0;
    return 1.0 / d;
}

double formation_cost(const LocalBelief& b, const CostWeights& w) {
    double c = w.w1 * (b.own.pos() - b.destination).norm();
    for (const auto& nb : b.neighbors) {
        c += w.w1 * (nb.state.pos() - nb.destination).norm();
        c += w.w2 * collision_penalty(b.own.pos(), nb.state.pos(), w);
    }
    return c;
}

double tracking_cost(const LocalBelief& b, const CostWeights& w) {
    if (!b.tracker) throw std::invalid_argument("tracking_cost: tracker not set");
    double c = w.w1 * b.tracker->P.trace();
    for (const auto& nb : b.neighbors) {
        c += w.w2 * collision_penalty(b.own.pos(), nb.state.pos(), w);
    }
    return c;
}

Eigen::VectorXd pack_controls(const HorizonControls& hc) {
    const int H = static_cast<int>(hc.own.size());
    const int n_nb = static_cast<int>(hc.neighbor.size());
    Eigen::VectorXd x(2 * H * (1 + n_nb));
    for (int k = 0; k < H; ++k) {
        x(2 * k) = hc.own[k].f;
        x(2 * k + 1) = hc.own[k].phi;
    }
    for (int j = 0; j < n_nb; ++j) {
        if (static_cast<int>(hc.neighbor[j].size()) != H) {
            throw std::invalid_argument("pack_controls: ragged horizon");
        }
        const int base = 2 * H * (1 + j);
        for (int k = 0; k < H; ++k) {
            x(base + 2 * k) = hc.neighbor[j][k].f;
            x(base + 2 * k + 1) = hc.neighbor[j][k].phi;
        }
    }
    return x;
}

HorizonControls unpack_controls(const Eigen::VectorXd& x, int H, int n_neighbors) {
    if (x.size() != 2 * H * (1 + n_neighbors)) {
        throw std::invalid_argument("unpack_controls: size mismatch");
    }
    HorizonControls hc;
    hc.own.resize(H);
    for (int k = 0; k < H; ++k) hc.own[k] = {x(2 * k), x(2 * k + 1)};
    hc.neighbor.resize(n_neighbors);
    for (int j = 0; j < n_neighbors; ++j) {
        hc.neighbor[j].resize(H);
        const int base = 2 * H * (1 + j);
        for (int k = 0; k < H; ++k) {
            hc.neighbor[j][k] = {x(base + 2 * k), x(base + 2 * k + 1)};
        }
    }
    return hc;
}

BoxBounds control_bounds(const UavLimits& lim, int H, int n_agents) {
    const int d = 2 * H * n_agents;
    BoxBounds b;
    b.lower.resize(d);
    b.upper.resize(d);
    for (int i = 0; i < d; i += 2) {
        b.lower(i) = lim.f_min;
        b.upper(i) = lim.f_max;
        b.lower(i + 1) = -lim.phi_max;
        b.upper(i + 1) = lim.phi_max;
    }
    return b;
}

double nbo_rollout(const LocalBelief& b, const HorizonControls& hc,
                   PlanMode mode, const RolloutModels& models,
                   const CostWeights& w) {
    const int H = static_cast<int>(hc.own.size());
    if (H < 1) throw std::invalid_argument("nbo_rollout: empty horizon");
    if (hc.neighbor.size() != b.neighbors.size()) {
        throw std::invalid_argument("nbo_rollout: neighbor count mismatch");
    }
    if (mode == PlanMode::tracking && !b.tracker) {
        throw std::invalid_argument("nbo_rollout: tracker not set");
    }
    Eigen::VectorXd x = pack_controls(hc);
    std::vector<UavState> ws;
    return rollout_flat(b, x.data(), H, mode, models, w, ws);
}

PlanResult plan_local(const LocalBelief& b, int H, PlanMode mode,
                      const RolloutModels& models, const CostWeights& w,
                      const OptimizerOptions& opts, const WarmStart* warm) {
    if (H < 1) throw std::invalid_argument("plan_local: horizon must be >= 1");
    if (mode == PlanMode::tracking && !b.tracker) {
        throw std::invalid_argument("plan_local: tracker not set");
    }

    const int n_nb = static_cast<int>(b.neighbors.size());
    BoxBounds bounds = control_bounds(models.limits, H, 1 + n_nb);

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(bounds.dim());
    if (warm != nullptr &&
        warm->x.size() == 2 * H * (1 + static_cast<long>(warm->neighbor_ids.size()))) {
        // Shift the previous solution by one step; the final step and any
        // unmatched neighbor block stay at zero control.
        for (int k = 0; k + 1 < H; ++k) {
            x0(2 * k) = warm->x(2 * (k + 1));
            x0(2 * k + 1) = warm->x(2 * (k + 1) + 1);
        }
        for (int j = 0; j < n_nb; ++j) {
            auto it = std::find(warm->neighbor_ids.begin(), warm->neighbor_ids.end(),
                                b.neighbors[j].id);
            if (it == warm->neighbor_ids.end()) continue;
            const int pj = static_cast<int>(it - warm->neighbor_ids.begin());
            const int dst = 2 * H * (1 + j);
            const int src = 2 * H * (1 + pj);
            for (int k = 0; k + 1 < H; ++k) {
                x0(dst + 2 * k) = warm->x(src + 2 * (k + 1));
                x0(dst + 2 * k + 1) = warm->x(src + 2 * (k + 1) + 1);
            }
        }
    }
    x0 = bounds.project(x0);

    PlanResult r;
    r.neighbor_ids.reserve(n_nb);
    for (const auto& nb : b.neighbors) r.neighbor_ids.push_back(nb.id);

    std::vector<UavState> ws;
    Objective obj = [&](const Eigen::VectorXd& x) {
        return rollout_flat(b, x.data(), H, mode, models, w, ws);
    };

    try {
        MinimizeResult res = minimize(obj, x0, bounds, opts);
        r.control = {res.x(0), res.x(1)};
        r.solution = res.x;
        r.objective = res.f;
        r.evals = res.evals;
    } catch (const std::invalid_argument&) {
        r.fallback = true;
        r.control = zero_control(models.limits);
        r.solution = x0;
        r.objective = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

CentralizedPlan plan_centralized(const GlobalBelief& g, int H, PlanMode mode,
                                 const RolloutModels& models,
                                 const CostWeights& w,
                                 const OptimizerOptions& opts,
                                 const Eigen::VectorXd* warm) {
    const int n = static_cast<int>(g.uavs.size());
    if (n < 1) throw std::invalid_argument("plan_centralized: no UAVs");
    if (H < 1) throw std::invalid_argument("plan_centralized: horizon must be >= 1");
    if (mode == PlanMode::formation &&
        g.destinations.size() != static_cast<size_t>(n)) {
        throw std::invalid_argument("plan_centralized: destinations mismatch");
    }
    if (mode == PlanMode::tracking) {
        if (g.assignment.size() != static_cast<size_t>(n) || g.target_trackers.empty()) {
            throw std::invalid_argument("plan_centralized: assignment/trackers mismatch");
        }
        for (int a : g.assignment) {
            if (a < 0 || a >= static_cast<int>(g.target_trackers.size())) {
                throw std::invalid_argument("plan_centralized: assignment out of range");
            }
        }
    }

    BoxBounds bounds = control_bounds(models.limits, H, n);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(bounds.dim());
    if (warm != nullptr && warm->size() == x0.size()) {
        for (int i = 0; i < n; ++i) {
            const int base = 2 * H * i;
            for (int k = 0; k + 1 < H; ++k) {
                x0(base + 2 * k) = (*warm)(base + 2 * (k + 1));
                x0(base + 2 * k + 1) = (*warm)(base + 2 * (k + 1) + 1);
            }
        }
    }
    x0 = bounds.project(x0);

    std::vector<UavState> us;
    std::vector<TrackerState> trks;
    Objective obj = [&](const Eigen::VectorXd& x) {
        return rollout_central_flat(g, x.data(), H, mode, models, w, us, trks);
    };

    CentralizedPlan r;
    r.controls.resize(n);
    try {
        MinimizeResult res = minimize(obj, x0, bounds, opts);
        for (int i = 0; i < n; ++i) {
            r.controls[i] = {res.x(2 * H * i), res.x(2 * H * i + 1)};
        }
        r.solution = res.x;
        r.objective = res.f;
        r.evals = res.evals;
    } catch (const std::invalid_argument&) {
        r.fallback = true;
        for (int i = 0; i < n; ++i) r.controls[i] = zero_control(models.limits);
        r.solution = x0;
        r.objective = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

std::vector<Vec2> assign_destinations(const FormationShape& shape, int n,
                                      double min_sep, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("assign_destinations: n must be >= 1");
    if (min_sep <= 0.0) throw std::invalid_argument("assign_destinations: min_sep must be positive");
    const double per = shape.perimeter();
    if (static_cast<double>(n) * min_sep > per) {
        throw std::runtime_error(
            "assign_destinations: perimeter " + std::to_string(per) +
            " m cannot fit " + std::to_string(n) + " points " +
            std::to_string(min_sep) + " m apart");
    }

    std::uniform_real_distribution<double> u(0.0, per);
    std::vector<Vec2> pts;
    pts.reserve(n);
    long attempts = 0;
    const long cap = 20000 + 1000L * n;
    while (static_cast<int>(pts.size()) < n) {
        if (++attempts > cap) {
            throw std::runtime_error(
                "assign_destinations: gave up after " + std::to_string(cap) +
                " draws; min_sep " + std::to_string(min_sep) +
                " m is too tight for this shape");
        }
        Vec2 c = shape.point_at(u(rng));
        bool ok = true;
        for (const auto& p : pts) {
            if ((c - p).norm() < min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(c);
    }
    return pts;
}

std::vector<int> assign_targets(int n_uavs, int n_targets) {
    if (n_targets < 1 || n_uavs < 1 || n_targets > n_uavs) {
        throw std::invalid_argument("assign_targets: need 1 <= n_targets <= n_uavs");
    }
    std::vector<int> a(n_uavs);
    for (int i = 0; i < n_uavs; ++i) a[i] = i % n_targets;
    return a;
}

}  // namespace swarm
