#include "swarm/tracking.hpp"

#include <stdexcept>

namespace swarm {

namespace {

Mat6 symmetrize(const Mat6& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Mat6 default_initial_covariance() {
    Vec6 d;
    d << 100.0 * 100.0, 100.0 * 100.0, 10.0 * 10.0, 10.0 * 10.0, 1.0, 1.0;
    return d.asDiagonal();
}

TrackerState init_tracker(const Measurement& first, const Mat6& P0) {
    TrackerState t;
    t.xi = Vec6::Zero();
    t.xi.head<2>() = first.z;
    t.P = symmetrize(P0);
    return t;
}

TrackerState kf_predict(const TrackerState& t, const TargetModel& model) {
    TrackerState out;
    out.xi = model.F * t.xi;
    out.P = symmetrize(model.F * t.P * model.F.transpose() + model.Q);
    return out;
}

TrackerState kf_update(const TrackerState& t, const Measurement& z,
                       const Mat26& H) {
    Mat2 S = H * t.P * H.transpose() + z.R;
    Eigen::LDLT<Mat2> ldlt(S);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
        throw std::invalid_argument("kf_update: singular innovation covariance");
    }
    // K = P H^T S^{-1}; S is symmetric, so K^T = S^{-1} H P.
    Eigen::Matrix<double, 6, 2> K = ldlt.solve(H * t.P).transpose();

    TrackerState out;
    out.xi = t.xi + K * (z.z - H * t.xi);
    out.P = symmetrize((Mat6::Identity() - K * H) * t.P);
    return out;
}

double trace_cov(const TrackerState& t) { return t.P.trace(); }

}  // namespace swarm
