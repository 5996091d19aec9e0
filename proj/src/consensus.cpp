#include "swarm/consensus.hpp"

#include "swarm/rng.hpp"

#include <stdexcept>

namespace swarm {

namespace {

Vec6 normal6(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec6 v;
    for (int i = 0; i < 6; ++i) v(i) = n(rng);
    return v;
}

Vec2 normal2(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

}  // namespace

FusionVector encode_fusion(const TrackerState& t) {
    FusionVector y;
    y.head<6>() = t.xi;
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) y(6 + 6 * r + c) = t.P(r, c);
    }
    return y;
}

TrackerState decode_fusion(const FusionVector& y) {
    TrackerState t;
    t.xi = y.head<6>();
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) t.P(r, c) = y(6 + 6 * r + c);
    }
    t.P = 0.5 * (t.P + t.P.transpose());
    return t;
}

std::vector<FusionVector> consensus_step(const std::vector<FusionVector>& ys,
                                         const SensorNetwork& net, double alpha) {
    if (static_cast<int>(ys.size()) != net.n) {
        throw std::invalid_argument("consensus_step: one vector per sensor required");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("consensus_step: alpha must be in [0, 1]");
    }

    std::vector<FusionVector> out(ys.size());
    for (int i = 0; i < net.n; ++i) {
        const auto& nbrs = net.neighbors(i);
        if (nbrs.empty()) {
            out[i] = ys[i];
            continue;
        }
        FusionVector sum = FusionVector::Zero();
        for (int j : nbrs) sum += ys[j];
        const double denom = alpha + static_cast<double>(nbrs.size()) * (1.0 - alpha);
        out[i] = (alpha * ys[i] + (1.0 - alpha) * sum) / denom;
    }
    return out;
}

std::vector<TrackerState> bayes_fuse_step(const std::vector<TrackerState>& ts,
                                          const SensorNetwork& net) {
    if (static_cast<int>(ts.size()) != net.n) {
        throw std::invalid_argument("bayes_fuse_step: one tracker per sensor required");
    }

    // Precompute each node's information matrix and vector once.
    std::vector<Mat6> info(ts.size());
    std::vector<Vec6> ivec(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        Eigen::LDLT<Mat6> ldlt(ts[i].P);
        if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
            throw std::invalid_argument("bayes_fuse_step: singular covariance");
        }
        info[i] = ldlt.solve(Mat6::Identity());
        ivec[i] = info[i] * ts[i].xi;
    }

    std::vector<TrackerState> out(ts.size());
    for (int i = 0; i < net.n; ++i) {
        const auto& nbrs = net.neighbors(i);
        if (nbrs.empty()) {
            out[i] = ts[i];
            continue;
        }
        Mat6 lambda = info[i];
        Vec6 eta = ivec[i];
        for (int j : nbrs) {
            lambda += info[j];
            eta += ivec[j];
        }
        Eigen::LDLT<Mat6> ldlt(lambda);
        out[i].P = ldlt.solve(Mat6::Identity());
        out[i].P = 0.5 * (out[i].P + out[i].P.transpose());
        out[i].xi = ldlt.solve(eta);
    }
    return out;
}

DutyCycleRecord run_duty_cycle(const DutyCycleWorld& world,
                               const SensorNetwork& net,
                               const ScheduleConfig& sched, FusionAlgo algo) {
    if (sched.M < 1 || sched.M > sched.Z) {
        throw std::invalid_argument("run_duty_cycle: need 1 <= M <= Z");
    }
    if (!(sched.alpha >= 0.0 && sched.alpha <= 1.0)) {
        throw std::invalid_argument("run_duty_cycle: alpha must be in [0, 1]");
    }

    const Mat26 H = position_observation();
    auto target_rng = make_rng(world.seed, RngDomain::target_process, 0);
    std::vector<std::mt19937_64> meas_rng;
    meas_rng.reserve(net.n);
    for (int i = 0; i < net.n; ++i) {
        meas_rng.push_back(make_rng(world.seed, RngDomain::measurement, i, 0));
    }

    TargetState truth = world.truth0;
    std::vector<TrackerState> trackers(net.n);
    for (int i = 0; i < net.n; ++i) {
        Measurement m =
            measure(truth, net.positions[i], world.noise, normal2(meas_rng[i]));
        trackers[i] = init_tracker(m, world.P0);
    }

    DutyCycleRecord rec;
    rec.truth.reserve(sched.Z);
    rec.est.reserve(sched.Z);
    rec.sensing.reserve(sched.Z);

    for (int k = 0; k < sched.Z; ++k) {
        const bool sensing = (k / sched.M) % 2 == 0;
        truth = step_target(truth, world.model,
                            process_noise(world.model, normal6(target_rng)));
        for (auto& t : trackers) t = kf_predict(t, world.model);

        if (sensing) {
            for (int i = 0; i < net.n; ++i) {
                Measurement m = measure(truth, net.positions[i], world.noise,
                                        normal2(meas_rng[i]));
                trackers[i] = kf_update(trackers[i], m, H);
            }
        } else if (algo == FusionAlgo::consensus) {
            std::vector<FusionVector> ys(trackers.size());
            for (size_t i = 0; i < trackers.size(); ++i) ys[i] = encode_fusion(trackers[i]);
            ys = consensus_step(ys, net, sched.alpha);
            for (size_t i = 0; i < trackers.size(); ++i) trackers[i] = decode_fusion(ys[i]);
        } else {
            trackers = bayes_fuse_step(trackers, net);
        }

        rec.truth.push_back(truth);
        rec.est.push_back(trackers);
        rec.sensing.push_back(sensing ? 1 : 0);
    }
    return rec;
}

}  // namespace swarm
