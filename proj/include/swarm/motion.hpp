#pragma once

#include <Eigen/Dense>

namespace swarm {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat26 = Eigen::Matrix<double, 2, 6>;

// 2D pose, speed and heading of one UAV.
struct UavState {
    double p = 0.0;      // x position [m]
    double q = 0.0;      // y position [m]
    double V = 0.0;      // speed [m/s]
    double theta = 0.0;  // heading [rad], wrapped to (-pi, pi]

    Vec2 pos() const { return {p, q}; }
};

// Kinematic controls: forward acceleration and bank angle.
struct ControlInput {
    double f = 0.0;    // [m/s^2]
    double phi = 0.0;  // [rad]
};

struct UavLimits {
    double v_min = 0.0;    // [m/s]
    double v_max = 30.0;   // [m/s]
    double f_min = -5.0;   // [m/s^2]
    double f_max = 5.0;    // [m/s^2]
    double phi_max = 0.6;  // [rad]
    double g = 9.8;        // [m/s^2]
    double T = 0.5;        // step length [s]
    double sigma_speed = 0.0;
    double sigma_heading = 0.0;
    double sigma_xpos = 0.0;
    double sigma_ypos = 0.0;
    // Re-clamp speed into [v_min, v_max] after additive noise; disabling this
    // lets the noise carry the speed slightly outside the box.
    bool reclamp_speed = true;
};

// Heading-rate singularity guard: the turn-rate equation divides by speed,
// and hovering (V = 0) is allowed.
inline constexpr double kSpeedEpsilon = 0.1;  // [m/s]

// Wraps an angle to (-pi, pi].
double wrap_angle(double theta);

double clamp_speed(double v, const UavLimits& lim);

// One discrete kinematic step. `noise` holds (w_speed, w_heading, w_xpos,
// w_ypos); pass zeros for nominal propagation. Position updates use the
// pre-step speed and heading. Throws std::invalid_argument on non-finite
// inputs.
UavState step_uav(const UavState& s, const ControlInput& a,
                  const UavLimits& lim, const Vec4& noise);

// Target ground-truth state: (x, y, vx, vy, ax, ay).
using TargetState = Vec6;

struct TargetModel {
    Mat6 F;
    Mat6 Q;

    // Constant-velocity realization: position/velocity coupled through T with
    // white-noise-acceleration process covariance of the given intensity; the
    // acceleration components are carried but not driven.
    static TargetModel constant_velocity(double T, double process_intensity);
};

// Returns F*x + noise. Throws std::invalid_argument on non-finite input.
TargetState step_target(const TargetState& x, const TargetModel& m,
                        const Vec6& noise);

// Transforms a standard-normal 6-vector into a draw from N(0, Q).
Vec6 process_noise(const TargetModel& m, const Vec6& std_normal);

struct SensorNoise {
    double range_frac = 0.1;              // fraction of range
    double angular_sigma = 0.031415927;   // [rad]
    double r_floor = 1.0;                 // [m]
};

// Geometry-dependent position-measurement covariance: the range/cross-range
// uncertainty ellipse rotated into world axes by the sensor-to-target bearing.
Mat2 measurement_covariance(const Vec2& target_pos, const Vec2& sensor_pos,
                            double range_frac, double angular_sigma,
                            double r_floor);

struct Measurement {
    Vec2 z;   // position measurement [m]
    Mat2 R;   // covariance used to generate it
};

// Observation matrix selecting (x, y) from the target state.
Mat26 position_observation();

// z = H*x + v with v = chol(R) * std_normal_draw, R from the true geometry.
Measurement measure(const TargetState& x, const Vec2& sensor_pos,
                    const SensorNoise& noise, const Vec2& std_normal_draw);

}  // namespace swarm
