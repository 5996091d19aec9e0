#include "swarm/experiments.hpp"

#include "swarm/rng.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace swarm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Vec2 normal2(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

Vec4 normal4(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec4 v;
    for (int i = 0; i < 4; ++i) v(i) = n(rng);
    return v;
}

Vec6 normal6(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec6 v;
    for (int i = 0; i < 6; ++i) v(i) = n(rng);
    return v;
}

std::vector<UavState> place_uavs(const StartGeometry& g, int n,
                                 std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(g.center.x() - g.extent / 2.0,
                                              g.center.x() + g.extent / 2.0);
    std::uniform_real_distribution<double> uy(g.center.y() - g.extent / 2.0,
                                              g.center.y() + g.extent / 2.0);
    std::vector<Vec2> pts;
    pts.reserve(n);
    long attempts = 0;
    const long cap = 20000 + 1000L * n;
    while (static_cast<int>(pts.size()) < n) {
        if (++attempts > cap) {
            throw std::runtime_error(
                "place_uavs: start region too small for " + std::to_string(n) +
                " UAVs " + std::to_string(g.min_sep) + " m apart");
        }
        Vec2 c(ux(rng), uy(rng));
        bool ok = true;
        for (const auto& p : pts) {
            if ((c - p).norm() < g.min_sep) {
                ok = false;
                break;
            }
        }
        if (ok) pts.push_back(c);
    }
    std::vector<UavState> states(n);
    for (int i = 0; i < n; ++i) {
        states[i].p = pts[i].x();
        states[i].q = pts[i].y();
        states[i].V = g.speed;
        states[i].theta = wrap_angle(g.heading);
    }
    return states;
}

std::vector<int> planning_neighbors(const ScenarioConfig& cfg, int i,
                                    const std::vector<UavState>& states) {
    if (states.size() < 2) return {};
    if (cfg.neighborhood_threshold > 0.0) {
        return neighbors_within(i, states, cfg.neighborhood_threshold);
    }
    return {nearest_neighbor(i, states)};
}

OptimizerOptions planner_options(const ScenarioConfig& cfg, int dim,
                                 std::uint64_t seed) {
    OptimizerOptions o;
    o.max_evals = cfg.eval_mult > 0 ? cfg.eval_mult * dim : 0;
    o.x_tol = cfg.x_tol;
    o.f_tol = cfg.f_tol;
    o.restarts = cfg.restarts;
    o.seed = seed;
    return o;
}

double min_pairwise_dist(const std::vector<UavState>& states) {
    const int n = static_cast<int>(states.size());
    if (n < 2) return kNaN;
    double best = kInf;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            best = std::min(best, (states[i].pos() - states[j].pos()).norm());
        }
    }
    return best;
}

// FNV-1a over the deterministic run content.
struct Digest {
    std::uint64_t h = 1469598103934665603ULL;
    void feed_bytes(const void* data, size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    }
    void feed(double v) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        feed_bytes(&bits, sizeof(bits));
    }
    void feed(int v) { feed_bytes(&v, sizeof(v)); }
};

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::string& header) {
        out_.open(path);
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        out_ << header << "\n";
    }
    void row(const std::vector<double>& nums) {
        char buf[32];
        for (size_t i = 0; i < nums.size(); ++i) {
            if (i) out_ << ',';
            std::snprintf(buf, sizeof(buf), "%.10g", nums[i]);
            out_ << buf;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

RunRecord run_formation(const ScenarioConfig& cfg) {
    const int n = cfg.n_uavs;
    const int H = cfg.horizon;
    RolloutModels models{cfg.limits,
                         TargetModel::constant_velocity(cfg.limits.T,
                                                        cfg.targets.process_intensity),
                         cfg.sensor};

    auto rng_place = make_rng(cfg.seed, RngDomain::placement);
    std::vector<UavState> states = place_uavs(cfg.start, n, rng_place);
    auto rng_dest = make_rng(cfg.seed, RngDomain::destinations);
    std::vector<Vec2> dests =
        assign_destinations(cfg.shape, n, cfg.dest_min_sep, rng_dest);

    std::vector<std::mt19937_64> wrng;
    wrng.reserve(n);
    for (int i = 0; i < n; ++i) {
        wrng.push_back(make_rng(cfg.seed, RngDomain::uav_process, i));
    }

    RunRecord rec;
    rec.mode = Mode::formation;
    rec.sim_steps = cfg.sim_steps;
    rec.T = cfg.limits.T;
    rec.n_uavs = n;
    rec.centralized = cfg.centralized;
    rec.initial = states;
    rec.destinations = dests;

    std::vector<WarmStart> warm(n);
    Eigen::VectorXd cwarm;
    bool has_cwarm = false;

    for (int step = 1; step <= cfg.sim_steps; ++step) {
        std::vector<ControlInput> controls(n);
        std::vector<double> per_uav_ms(n, 0.0);
        std::vector<char> fb(n, 0);
        double step_ms = 0.0;

        if (cfg.centralized) {
            GlobalBelief g;
            g.uavs = states;
            g.destinations = dests;
            auto opts = planner_options(cfg, 2 * H * n,
                                        derive_seed(cfg.seed, RngDomain::planner, 0, step));
            auto t0 = Clock::now();
            CentralizedPlan plan =
                plan_centralized(g, H, PlanMode::formation, models, cfg.weights,
                                 opts, has_cwarm ? &cwarm : nullptr);
            step_ms = ms_since(t0);
            controls = plan.controls;
            cwarm = plan.solution;
            has_cwarm = !plan.fallback;
            std::fill(per_uav_ms.begin(), per_uav_ms.end(), step_ms);
            std::fill(fb.begin(), fb.end(), plan.fallback ? 1 : 0);
        } else {
            for (int i = 0; i < n; ++i) {
                LocalBelief b;
                b.own = states[i];
                b.destination = dests[i];
                for (int j : planning_neighbors(cfg, i, states)) {
                    b.neighbors.push_back({j, states[j], dests[j]});
                }
                auto opts = planner_options(
                    cfg, 2 * H * (1 + static_cast<int>(b.neighbors.size())),
                    derive_seed(cfg.seed, RngDomain::planner, i, step));
                auto t0 = Clock::now();
                PlanResult r =
                    plan_local(b, H, PlanMode::formation, models, cfg.weights, opts,
                               warm[i].x.size() > 0 ? &warm[i] : nullptr);
                per_uav_ms[i] = ms_since(t0);
                controls[i] = r.control;
                fb[i] = r.fallback ? 1 : 0;
                warm[i] = {r.neighbor_ids, r.solution};
            }
            step_ms = *std::max_element(per_uav_ms.begin(), per_uav_ms.end());
        }

        for (int i = 0; i < n; ++i) {
            Vec4 w = normal4(wrng[i]);
            w(0) *= cfg.limits.sigma_speed;
            w(1) *= cfg.limits.sigma_heading;
            w(2) *= cfg.limits.sigma_xpos;
            w(3) *= cfg.limits.sigma_ypos;
            states[i] = step_uav(states[i], controls[i], cfg.limits, w);
        }

        const double t = step * cfg.limits.T;
        for (int i = 0; i < n; ++i) {
            rec.uav_rows.push_back(
                {step, t, i, states[i], controls[i], per_uav_ms[i], fb[i] != 0});
        }
        rec.plan_ms_per_step.push_back(step_ms);
        rec.summary.push_back({step, t, min_pairwise_dist(states), step_ms, kNaN});
    }
    return rec;
}

RunRecord run_tracking(const ScenarioConfig& cfg) {
    const int n = cfg.n_uavs;
    const int nt = cfg.n_targets;
    const int H = cfg.horizon;
    const Mat26 Hobs = position_observation();
    const Mat6 P0 = default_initial_covariance();
    TargetModel model = TargetModel::constant_velocity(cfg.limits.T,
                                                       cfg.targets.process_intensity);
    RolloutModels models{cfg.limits, model, cfg.sensor};

    auto rng_place = make_rng(cfg.seed, RngDomain::placement);
    std::vector<UavState> states = place_uavs(cfg.start, n, rng_place);

    std::vector<TargetState> truth(nt);
    for (int t = 0; t < nt; ++t) {
        double h = cfg.targets.heading0 + 2.0 * std::numbers::pi * t / nt;
        truth[t] = TargetState::Zero();
        truth[t](0) = cfg.targets.spawn_radius * std::cos(h);
        truth[t](1) = cfg.targets.spawn_radius * std::sin(h);
        truth[t](2) = cfg.targets.speed * std::cos(h);
        truth[t](3) = cfg.targets.speed * std::sin(h);
    }
    std::vector<int> assignment = assign_targets(n, nt);

    std::vector<std::mt19937_64> wrng, trng;
    for (int i = 0; i < n; ++i) wrng.push_back(make_rng(cfg.seed, RngDomain::uav_process, i));
    for (int t = 0; t < nt; ++t) trng.push_back(make_rng(cfg.seed, RngDomain::target_process, t));
    std::vector<std::vector<std::mt19937_64>> mrng(n);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < nt; ++t) {
            mrng[i].push_back(make_rng(cfg.seed, RngDomain::measurement, i, t));
        }
    }

    // Local trackers per (UAV, target); the centralized baseline instead
    // fuses every UAV's measurements into one tracker per target.
    std::vector<std::vector<TrackerState>> local(n, std::vector<TrackerState>(nt));
    std::vector<TrackerState> central(nt);
    if (cfg.centralized) {
        for (int t = 0; t < nt; ++t) {
            for (int i = 0; i < n; ++i) {
                Measurement m = measure(truth[t], states[i].pos(), cfg.sensor,
                                        normal2(mrng[i][t]));
                central[t] = i == 0 ? init_tracker(m, P0)
                                    : kf_update(central[t], m, Hobs);
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < nt; ++t) {
                Measurement m = measure(truth[t], states[i].pos(), cfg.sensor,
                                        normal2(mrng[i][t]));
                local[i][t] = init_tracker(m, P0);
            }
        }
    }

    RunRecord rec;
    rec.mode = Mode::tracking;
    rec.sim_steps = cfg.sim_steps;
    rec.T = cfg.limits.T;
    rec.n_uavs = n;
    rec.n_targets = nt;
    rec.centralized = cfg.centralized;
    rec.initial = states;

    std::vector<WarmStart> warm(n);
    Eigen::VectorXd cwarm;
    bool has_cwarm = false;

    for (int step = 1; step <= cfg.sim_steps; ++step) {
        std::vector<ControlInput> controls(n);
        std::vector<double> per_uav_ms(n, 0.0);
        std::vector<char> fb(n, 0);
        double step_ms = 0.0;

        if (cfg.centralized) {
            GlobalBelief g;
            g.uavs = states;
            g.target_trackers = central;
            g.assignment = assignment;
            auto opts = planner_options(cfg, 2 * H * n,
                                        derive_seed(cfg.seed, RngDomain::planner, 0, step));
            auto t0 = Clock::now();
            CentralizedPlan plan =
                plan_centralized(g, H, PlanMode::tracking, models, cfg.weights,
                                 opts, has_cwarm ? &cwarm : nullptr);
            step_ms = ms_since(t0);
            controls = plan.controls;
            cwarm = plan.solution;
            has_cwarm = !plan.fallback;
            std::fill(per_uav_ms.begin(), per_uav_ms.end(), step_ms);
            std::fill(fb.begin(), fb.end(), plan.fallback ? 1 : 0);
        } else {
            for (int i = 0; i < n; ++i) {
                LocalBelief b;
                b.own = states[i];
                b.tracker = local[i][assignment[i]];
                b.assignment = assignment[i];
                for (int j : planning_neighbors(cfg, i, states)) {
                    b.neighbors.push_back({j, states[j], Vec2::Zero()});
                }
                auto opts = planner_options(
                    cfg, 2 * H * (1 + static_cast<int>(b.neighbors.size())),
                    derive_seed(cfg.seed, RngDomain::planner, i, step));
                auto t0 = Clock::now();
                PlanResult r =
                    plan_local(b, H, PlanMode::tracking, models, cfg.weights, opts,
                               warm[i].x.size() > 0 ? &warm[i] : nullptr);
                per_uav_ms[i] = ms_since(t0);
                controls[i] = r.control;
                fb[i] = r.fallback ? 1 : 0;
                warm[i] = {r.neighbor_ids, r.solution};
            }
            step_ms = *std::max_element(per_uav_ms.begin(), per_uav_ms.end());
        }

        for (int t = 0; t < nt; ++t) {
            truth[t] = step_target(truth[t], model, process_noise(model, normal6(trng[t])));
        }
        for (int i = 0; i < n; ++i) {
            Vec4 w = normal4(wrng[i]);
            w(0) *= cfg.limits.sigma_speed;
            w(1) *= cfg.limits.sigma_heading;
            w(2) *= cfg.limits.sigma_xpos;
            w(3) *= cfg.limits.sigma_ypos;
            states[i] = step_uav(states[i], controls[i], cfg.limits, w);
        }

        if (cfg.centralized) {
            for (int t = 0; t < nt; ++t) {
                central[t] = kf_predict(central[t], model);
                for (int i = 0; i < n; ++i) {
                    Measurement m = measure(truth[t], states[i].pos(), cfg.sensor,
                                            normal2(mrng[i][t]));
                    central[t] = kf_update(central[t], m, Hobs);
                }
            }
        } else {
            for (int i = 0; i < n; ++i) {
                for (int t = 0; t < nt; ++t) {
                    Measurement m = measure(truth[t], states[i].pos(), cfg.sensor,
                                            normal2(mrng[i][t]));
                    local[i][t] = kf_update(kf_predict(local[i][t], model), m, Hobs);
                }
            }
        }

        const double t_now = step * cfg.limits.T;
        double err_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < nt; ++t) {
                const TrackerState& ts = cfg.centralized ? central[t] : local[i][t];
                double sq = (ts.xi - truth[t]).squaredNorm();
                err_sum += sq;
                rec.est_rows.push_back(
                    {step, i, t, ts.xi, ts.P.trace(), truth[t], sq});
            }
        }
        for (int i = 0; i < n; ++i) {
            rec.uav_rows.push_back(
                {step, t_now, i, states[i], controls[i], per_uav_ms[i], fb[i] != 0});
        }
        rec.plan_ms_per_step.push_back(step_ms);
        rec.summary.push_back({step, t_now, min_pairwise_dist(states), step_ms,
                               err_sum / (n * nt)});
    }
    return rec;
}

RunRecord run_fusion(const ScenarioConfig& cfg) {
    const int n = cfg.n_uavs;
    auto rng_graph = make_rng(cfg.seed, RngDomain::graph);
    SensorNetwork net;
    switch (cfg.fusion.graph_config) {
        case 1:
            net = gen_config1(n, cfg.fusion.degree, rng_graph);
            break;
        case 2:
            net = gen_config2(n, cfg.fusion.edge_prob, rng_graph);
            break;
        default:
            net = gen_config3(n, cfg.fusion.n_edges, rng_graph);
            break;
    }
    auto rng_pos = make_rng(cfg.seed, RngDomain::sensor_placement);
    std::uniform_real_distribution<double> u(0.0, cfg.fusion.region);
    for (int i = 0; i < n; ++i) net.positions[i] = Vec2(u(rng_pos), u(rng_pos));

    DutyCycleWorld world;
    world.truth0 = cfg.fusion.truth0;
    world.model = TargetModel::constant_velocity(cfg.limits.T,
                                                 cfg.targets.process_intensity);
    world.noise = cfg.sensor;
    world.P0 = default_initial_covariance();
    world.seed = cfg.seed;

    DutyCycleRecord drec = run_duty_cycle(world, net, cfg.schedule, cfg.algo);

    RunRecord rec;
    rec.mode = Mode::fusion;
    rec.sim_steps = cfg.schedule.Z;
    rec.T = cfg.limits.T;
    rec.n_uavs = n;
    rec.n_targets = 1;
    rec.network = net;

    for (int k = 0; k < cfg.schedule.Z; ++k) {
        const int step = k + 1;
        const double t = step * cfg.limits.T;
        double err_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const TrackerState& ts = drec.est[k][i];
            double sq = (ts.xi - drec.truth[k]).squaredNorm();
            err_sum += sq;
            rec.est_rows.push_back({step, i, 0, ts.xi, ts.P.trace(), drec.truth[k], sq});
        }
        rec.plan_ms_per_step.push_back(0.0);
        rec.summary.push_back({step, t, kNaN, 0.0, err_sum / n});
    }
    return rec;
}

}  // namespace

std::uint64_t RunRecord::state_digest() const {
    Digest d;
    d.feed(static_cast<int>(mode));
    d.feed(sim_steps);
    d.feed(n_uavs);
    d.feed(n_targets);
    d.feed(static_cast<int>(centralized));
    for (const auto& s : initial) {
        d.feed(s.p);
        d.feed(s.q);
        d.feed(s.V);
        d.feed(s.theta);
    }
    for (const auto& p : destinations) {
        d.feed(p.x());
        d.feed(p.y());
    }
    for (const auto& r : uav_rows) {
        d.feed(r.step);
        d.feed(r.uav);
        d.feed(r.state.p);
        d.feed(r.state.q);
        d.feed(r.state.V);
        d.feed(r.state.theta);
        d.feed(r.control.f);
        d.feed(r.control.phi);
    }
    for (const auto& r : est_rows) {
        d.feed(r.step);
        d.feed(r.sensor);
        d.feed(r.target);
        for (int i = 0; i < 6; ++i) d.feed(r.est(i));
        d.feed(r.trace_P);
        for (int i = 0; i < 6; ++i) d.feed(r.truth(i));
        d.feed(r.sq_err);
    }
    for (int i = 0; i < network.n; ++i) {
        for (int j : network.adj[i]) {
            if (i < j) {
                d.feed(i);
                d.feed(j);
            }
        }
    }
    return d.h;
}

RunRecord run_scenario(const ScenarioConfig& cfg) {
    auto errs = validate_config(cfg);
    if (!errs.empty()) {
        throw std::invalid_argument("invalid scenario config:\n" + describe(errs));
    }
    switch (cfg.mode) {
        case Mode::formation:
            return run_formation(cfg);
        case Mode::tracking:
            return run_tracking(cfg);
        case Mode::fusion:
            return run_fusion(cfg);
    }
    throw std::invalid_argument("run_scenario: unknown mode");
}

double metric_avg_tracking_error(const RunRecord& rec) {
    if (rec.est_rows.empty()) {
        throw std::invalid_argument("metric_avg_tracking_error: no estimates recorded");
    }
    double sum = 0.0;
    for (const auto& r : rec.est_rows) sum += r.sq_err;
    return sum / static_cast<double>(rec.est_rows.size());
}

TcStats metric_Tc(const RunRecord& rec) {
    TcStats s;
    if (rec.plan_ms_per_step.empty()) return s;
    double sum = 0.0, sq = 0.0;
    for (double v : rec.plan_ms_per_step) {
        sum += v;
        sq += v * v;
    }
    const double n = static_cast<double>(rec.plan_ms_per_step.size());
    s.mean_ms = sum / n;
    s.std_ms = std::sqrt(std::max(0.0, sq / n - s.mean_ms * s.mean_ms));

    s.per_uav_mean_ms.assign(rec.n_uavs, 0.0);
    std::vector<int> counts(rec.n_uavs, 0);
    for (const auto& r : rec.uav_rows) {
        s.per_uav_mean_ms[r.uav] += r.plan_ms;
        ++counts[r.uav];
    }
    for (int i = 0; i < rec.n_uavs; ++i) {
        if (counts[i] > 0) s.per_uav_mean_ms[i] /= counts[i];
    }
    return s;
}

double metric_Tf(const RunRecord& rec, double arrival_tol) {
    if (rec.destinations.size() != static_cast<size_t>(rec.n_uavs)) {
        throw std::invalid_argument("metric_Tf: formation run required");
    }
    auto all_within = [&](const std::vector<const UavState*>& states) {
        for (int i = 0; i < rec.n_uavs; ++i) {
            if ((states[i]->pos() - rec.destinations[i]).norm() > arrival_tol) {
                return false;
            }
        }
        return true;
    };

    std::vector<const UavState*> now(rec.n_uavs, nullptr);
    for (int i = 0; i < rec.n_uavs; ++i) now[i] = &rec.initial[i];
    if (all_within(now)) return 0.0;

    // Rows are grouped by step; scan step blocks in order.
    size_t idx = 0;
    while (idx < rec.uav_rows.size()) {
        const int step = rec.uav_rows[idx].step;
        int seen = 0;
        while (idx < rec.uav_rows.size() && rec.uav_rows[idx].step == step) {
            now[rec.uav_rows[idx].uav] = &rec.uav_rows[idx].state;
            ++seen;
            ++idx;
        }
        if (seen == rec.n_uavs && all_within(now)) {
            return step * rec.T;
        }
    }
    return kInf;
}

PairwiseStats metric_pairwise(const RunRecord& rec) {
    if (rec.n_uavs < 2) throw std::invalid_argument("metric_pairwise: needs >= 2 UAVs");
    PairwiseStats s;
    s.min = kInf;
    double sum = 0.0;
    long count = 0;

    std::vector<Vec2> pos(rec.n_uavs);
    size_t idx = 0;
    while (idx < rec.uav_rows.size()) {
        const int step = rec.uav_rows[idx].step;
        while (idx < rec.uav_rows.size() && rec.uav_rows[idx].step == step) {
            pos[rec.uav_rows[idx].uav] = rec.uav_rows[idx].state.pos();
            ++idx;
        }
        for (int i = 0; i < rec.n_uavs; ++i) {
            for (int j = i + 1; j < rec.n_uavs; ++j) {
                double d = (pos[i] - pos[j]).norm();
                s.min = std::min(s.min, d);
                sum += d;
                ++count;
            }
        }
    }
    if (count == 0) throw std::invalid_argument("metric_pairwise: no steps recorded");
    s.mean = sum / static_cast<double>(count);
    return s;
}

void write_run_csv(const RunRecord& rec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        CsvFile f(dir / "run_summary.csv",
                  "step,sim_time_s,min_pairwise_m,plan_ms,mean_sq_err");
        for (const auto& r : rec.summary) {
            f.row({static_cast<double>(r.step), r.t, r.min_pairwise, r.plan_ms,
                   r.mean_sq_err});
        }
    }

    if (rec.mode != Mode::fusion) {
        CsvFile f(dir / "uav_states.csv",
                  "step,sim_time_s,uav_id,p,q,V,theta,f,phi,plan_ms");
        for (const auto& r : rec.uav_rows) {
            f.row({static_cast<double>(r.step), r.t, static_cast<double>(r.uav),
                   r.state.p, r.state.q, r.state.V, r.state.theta, r.control.f,
                   r.control.phi, r.plan_ms});
        }
    }

    if (rec.mode == Mode::formation) {
        CsvFile f(dir / "destinations.csv", "uav_id,dest_x,dest_y");
        for (size_t i = 0; i < rec.destinations.size(); ++i) {
            f.row({static_cast<double>(i), rec.destinations[i].x(),
                   rec.destinations[i].y()});
        }
    }

    if (rec.mode == Mode::tracking) {
        CsvFile f(dir / "estimates.csv",
                  "step,sensor_id,target_id,est_x,est_y,est_vx,est_vy,est_ax,est_ay,"
                  "trace_P,truth_x,truth_y,truth_vx,truth_vy,truth_ax,truth_ay,sq_err");
        for (const auto& r : rec.est_rows) {
            std::vector<double> row{static_cast<double>(r.step),
                                    static_cast<double>(r.sensor),
                                    static_cast<double>(r.target)};
            for (int i = 0; i < 6; ++i) row.push_back(r.est(i));
            row.push_back(r.trace_P);
            for (int i = 0; i < 6; ++i) row.push_back(r.truth(i));
            row.push_back(r.sq_err);
            f.row(row);
        }
    } else if (rec.mode == Mode::fusion) {
        CsvFile f(dir / "estimates.csv",
                  "step,sensor_id,est_x,est_y,est_vx,est_vy,est_ax,est_ay,"
                  "trace_P,truth_x,truth_y,truth_vx,truth_vy,truth_ax,truth_ay,sq_err");
        for (const auto& r : rec.est_rows) {
            std::vector<double> row{static_cast<double>(r.step),
                                    static_cast<double>(r.sensor)};
            for (int i = 0; i < 6; ++i) row.push_back(r.est(i));
            row.push_back(r.trace_P);
            for (int i = 0; i < 6; ++i) row.push_back(r.truth(i));
            row.push_back(r.sq_err);
            f.row(row);
        }
        save_edge_list(rec.network, (dir / "network.edges").string());
    }
}

namespace paper_grids {

const std::vector<double>& duty_cycle_small() {
    static const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9};
    return v;
}
const std::vector<double>& duty_cycle_large() {
    static const std::vector<double> v{3, 6, 9, 12, 15, 18, 21, 24};
    return v;
}
const std::vector<double>& edge_prob() {
    static const std::vector<double> v{0.1, 0.2, 0.3, 0.4, 0.5,
                                       0.6, 0.7, 0.8, 0.9, 1.0};
    return v;
}
const std::vector<double>& alpha() {
    static const std::vector<double> v{0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                       0.6, 0.7, 0.8, 0.9, 1.0};
    return v;
}
const std::vector<double>& threshold() {
    static const std::vector<double> v{10, 50, 90, 130, 170, 210, 240, 290, 340};
    return v;
}
const std::vector<double>& degree() {
    static const std::vector<double> v{2, 3, 4, 5, 6, 7, 8, 9};
    return v;
}

}  // namespace paper_grids

bool sweep_param_known(const std::string& name) {
    return name == "M" || name == "alpha" || name == "Pe" || name == "D" ||
           name == "Ne" || name == "threshold";
}

ScenarioConfig apply_sweep_param(const ScenarioConfig& base,
                                 const std::string& name, double value) {
    ScenarioConfig cfg = base;
    if (name == "M") {
        cfg.schedule.M = static_cast<int>(std::lround(value));
    } else if (name == "alpha") {
        cfg.schedule.alpha = value;
    } else if (name == "Pe") {
        cfg.fusion.graph_config = 2;
        cfg.fusion.edge_prob = value;
    } else if (name == "D") {
        cfg.fusion.graph_config = 1;
        cfg.fusion.degree = static_cast<int>(std::lround(value));
    } else if (name == "Ne") {
        cfg.fusion.graph_config = 3;
        cfg.fusion.n_edges = std::lround(value);
    } else if (name == "threshold") {
        cfg.neighborhood_threshold = value;
    } else {
        throw std::invalid_argument("unknown sweep parameter: " + name);
    }
    return cfg;
}

std::uint64_t sweep_seed(std::uint64_t root, std::uint64_t value_index,
                         std::uint64_t repeat) {
    return derive_seed(root, RngDomain::sweep, value_index, repeat);
}

std::vector<SweepPoint> run_sweep(const ScenarioConfig& base,
                                  const std::string& param,
                                  const std::vector<double>& values,
                                  int repeats, const std::string& out_dir) {
    if (!sweep_param_known(param)) {
        throw std::invalid_argument("unknown sweep parameter: " + param);
    }
    if (repeats < 1) throw std::invalid_argument("run_sweep: repeats must be >= 1");

    std::vector<SweepPoint> out;
    std::vector<std::array<double, 2>> pairwise;  // formation: (mean, min)
    for (size_t vi = 0; vi < values.size(); ++vi) {
        ScenarioConfig cfg = apply_sweep_param(base, param, values[vi]);
        for (int r = 0; r < repeats; ++r) {
            cfg.seed = sweep_seed(base.seed, vi, r);
            cfg.seed_set = true;
            RunRecord rec = run_scenario(cfg);

            SweepPoint p;
            p.param_value = values[vi];
            p.repeat = r;
            if (cfg.mode == Mode::formation) {
                TcStats tc = metric_Tc(rec);
                p.metric = tc.mean_ms;
                p.stddev = tc.std_ms;
                PairwiseStats pw = metric_pairwise(rec);
                pairwise.push_back({pw.mean, pw.min});
            } else {
                double sum = 0.0, sq = 0.0;
                for (const auto& s : rec.summary) {
                    sum += s.mean_sq_err;
                    sq += s.mean_sq_err * s.mean_sq_err;
                }
                const double nsteps = static_cast<double>(rec.summary.size());
                p.metric = metric_avg_tracking_error(rec);
                p.stddev = std::sqrt(std::max(0.0, sq / nsteps - (sum / nsteps) * (sum / nsteps)));
            }
            out.push_back(p);
        }
    }

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        const char* metric_name = base.mode == Mode::formation ? "Tc_ms" : "avg_err";
        CsvFile f(fs::path(out_dir) / "sweep_summary.csv",
                  std::string("param_value,repeat,") + metric_name + ",std");
        for (const auto& p : out) {
            f.row({p.param_value, static_cast<double>(p.repeat), p.metric, p.stddev});
        }
        if (base.mode == Mode::formation) {
            CsvFile g(fs::path(out_dir) / "sweep_pairwise.csv",
                      "param_value,repeat,pairwise_mean_m,pairwise_min_m");
            for (size_t k = 0; k < out.size(); ++k) {
                g.row({out[k].param_value, static_cast<double>(out[k].repeat),
                       pairwise[k][0], pairwise[k][1]});
            }
        }
    }
    return out;
}

}  // namespace swarm
