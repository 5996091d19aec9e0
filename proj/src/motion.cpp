#include "swarm/motion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swarm {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

double wrap_angle(double theta) {
    double w = std::remainder(theta, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
    return w;
}

double clamp_speed(double v, const UavLimits& lim) {
    return std::max(lim.v_min, std::min(lim.v_max, v));
}

UavState step_uav(const UavState& s, const ControlInput& a,
                  const UavLimits& lim, const Vec4& noise) {
    if (!finite(s.p) || !finite(s.q) || !finite(s.V) || !finite(s.theta) ||
        !finite(a.f) || !finite(a.phi) || !noise.allFinite()) {
        throw std::invalid_argument("step_uav: non-finite input");
    }

    UavState next;
    double v = clamp_speed(s.V + a.f * lim.T, lim) + noise(0);
    next.V = lim.reclamp_speed ? clamp_speed(v, lim) : v;

    double turn = lim.g * lim.T * std::tan(a.phi) / std::max(s.V, kSpeedEpsilon);
    next.theta = wrap_angle(s.theta + turn + noise(1));

    next.p = s.p + s.V * lim.T * std::cos(s.theta) + noise(2);
    next.q = s.q + s.V * lim.T * std::sin(s.theta) + noise(3);
    return next;
}

TargetModel TargetModel::constant_velocity(double T, double process_intensity) {
    TargetModel m;
    m.F = Mat6::Identity();
    m.F(0, 2) = T;
    m.F(1, 3) = T;

    m.Q = Mat6::Zero();
    const double q = process_intensity;
    const double t3 = T * T * T / 3.0;
    const double t2 = T * T / 2.0;
    for (int axis = 0; axis < 2; ++axis) {
        int pi = axis;      // position index
        int vi = axis + 2;  // velocity index
        m.Q(pi, pi) = q * t3;
        m.Q(pi, vi) = q * t2;
        m.Q(vi, pi) = q * t2;
        m.Q(vi, vi) = q * T;
    }
    return m;
}

TargetState step_target(const TargetState& x, const TargetModel& m,
                        const Vec6& noise) {
    if (!x.allFinite() || !noise.allFinite()) {
        throw std::invalid_argument("step_target: non-finite input");
    }
    return m.F * x + noise;
}

Vec6 process_noise(const TargetModel& m, const Vec6& std_normal) {
    // Q is only PSD (the acceleration block is zero), so sample through the
    // eigendecomposition rather than a Cholesky factor.
    Eigen::SelfAdjointEigenSolver<Mat6> es(m.Q);
    Vec6 scale = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * scale.asDiagonal() * std_normal;
}

Mat2 measurement_covariance(const Vec2& target_pos, const Vec2& sensor_pos,
                            double range_frac, double angular_sigma,
                            double r_floor) {
    Vec2 d = target_pos - sensor_pos;
    double r = std::max(d.norm(), r_floor);
    double beta = std::atan2(d.y(), d.x());

    double sr = range_frac * r;      // along-range std
    double st = angular_sigma * r;   // cross-range std

    Mat2 G;
    G << std::cos(beta), -std::sin(beta), std::sin(beta), std::cos(beta);
    Mat2 D = Mat2::Zero();
    D(0, 0) = sr * sr;
    D(1, 1) = st * st;
    Mat2 R = G * D * G.transpose();
    return 0.5 * (R + R.transpose());
}

Mat26 position_observation() {
    Mat26 H = Mat26::Zero();
    H(0, 0) = 1.0;
    H(1, 1) = 1.0;
    return H;
}

Measurement measure(const TargetState& x, const Vec2& sensor_pos,
                    const SensorNoise& noise, const Vec2& std_normal_draw) {
    Measurement m;
    m.R = measurement_covariance(x.head<2>(), sensor_pos, noise.range_frac,
                                 noise.angular_sigma, noise.r_floor);
    Eigen::LLT<Mat2> llt(m.R);
    m.z = position_observation() * x + llt.matrixL() * std_normal_draw;
    return m;
}

}  // namespace swarm
