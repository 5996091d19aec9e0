#include <doctest.h>

#include "swarm/motion.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace swarm;

namespace {

UavLimits basic_limits() {
    UavLimits lim;
    lim.v_min = 0.0;
    lim.v_max = 30.0;
    lim.f_min = -5.0;
    lim.f_max = 8.0;
    lim.phi_max = 0.6;
    lim.g = 9.8;
    lim.T = 0.5;
    return lim;
}

}  // namespace

TEST_CASE("step_uav: zero control flies straight") {
    UavLimits lim = basic_limits();
    UavState s{2.0, -1.0, 10.0, 0.0};
    UavState next = step_uav(s, {0.0, 0.0}, lim, Vec4::Zero());
    CHECK(next.V == doctest::Approx(10.0));
    CHECK(next.theta == doctest::Approx(0.0));
    CHECK(next.p == doctest::Approx(7.0));
    CHECK(next.q == doctest::Approx(-1.0));
}

TEST_CASE("step_uav: speed clamps at v_max") {
    UavLimits lim = basic_limits();
    lim.v_max = 12.0;
    UavState s{0.0, 0.0, 10.0, 0.0};
    UavState next = step_uav(s, {8.0, 0.0}, lim, Vec4::Zero());
    CHECK(next.V == doctest::Approx(12.0));
}

TEST_CASE("step_uav: heading update matches hand evaluation") {
    UavLimits lim = basic_limits();
    UavState s{0.0, 0.0, 10.0, 0.0};
    UavState next = step_uav(s, {0.0, 0.5236}, lim, Vec4::Zero());
    // 9.8 * 0.5 * tan(0.5236) / 10, evaluated by hand.
    CHECK(next.theta == doctest::Approx(0.282902).epsilon(1e-5));
}

TEST_CASE("step_uav: heading-rate guard at zero speed") {
    UavLimits lim = basic_limits();
    UavState s{0.0, 0.0, 0.0, 0.0};
    UavState next = step_uav(s, {0.0, 0.5}, lim, Vec4::Zero());
    CHECK(std::isfinite(next.theta));
    // Divisor is max(V, 0.1).
    CHECK(next.theta ==
          doctest::Approx(wrap_angle(9.8 * 0.5 * std::tan(0.5) / 0.1)));
}

TEST_CASE("step_uav: position update uses pre-step speed and heading") {
    UavLimits lim = basic_limits();
    UavState s{0.0, 0.0, 10.0, std::numbers::pi / 2.0};
    UavState next = step_uav(s, {4.0, 0.3}, lim, Vec4::Zero());
    CHECK(next.p == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(next.q == doctest::Approx(5.0));
}

TEST_CASE("step_uav: post-noise re-clamping keeps the speed invariant") {
    UavLimits lim = basic_limits();
    UavState s{0.0, 0.0, 29.9, 0.0};
    Vec4 noise(1.0, 0.0, 0.0, 0.0);

    UavState clamped = step_uav(s, {0.0, 0.0}, lim, noise);
    CHECK(clamped.V == doctest::Approx(lim.v_max));

    lim.reclamp_speed = false;
    UavState loose = step_uav(s, {0.0, 0.0}, lim, noise);
    CHECK(loose.V == doctest::Approx(30.9));
}

TEST_CASE("step_uav: heading noise applied before wrapping") {
    UavLimits lim = basic_limits();
    UavState s{0.0, 0.0, 10.0, 3.0};
    Vec4 noise(0.0, 0.5, 0.0, 0.0);
    UavState next = step_uav(s, {0.0, 0.0}, lim, noise);
    CHECK(next.theta == doctest::Approx(wrap_angle(3.5)));
    CHECK(next.theta <= std::numbers::pi);
    CHECK(next.theta > -std::numbers::pi);
}

TEST_CASE("step_uav: rejects non-finite inputs") {
    UavLimits lim = basic_limits();
    UavState s{0.0, 0.0, 10.0, 0.0};
    CHECK_THROWS_AS(step_uav({0.0, 0.0, std::nan(""), 0.0}, {0, 0}, lim, Vec4::Zero()),
                    std::invalid_argument);
    CHECK_THROWS_AS(step_uav(s, {std::numeric_limits<double>::infinity(), 0.0}, lim,
                             Vec4::Zero()),
                    std::invalid_argument);
    Vec4 bad = Vec4::Zero();
    bad(2) = std::nan("");
    CHECK_THROWS_AS(step_uav(s, {0, 0}, lim, bad), std::invalid_argument);
}

TEST_CASE("clamp_speed is idempotent") {
    UavLimits lim = basic_limits();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 200; ++i) {
        double v = u(rng);
        CHECK(clamp_speed(clamp_speed(v, lim), lim) == clamp_speed(v, lim));
    }
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        double w = wrap_angle(u(rng));
        CHECK(w > -std::numbers::pi);
        CHECK(w <= std::numbers::pi);
    }
    CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_angle(3.0 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("noise-free straight flight keeps q constant") {
    UavLimits lim = basic_limits();
    UavState s{0.0, 4.0, 12.0, 0.0};
    for (int k = 0; k < 25; ++k) s = step_uav(s, {0.3, 0.0}, lim, Vec4::Zero());
    CHECK(s.q == doctest::Approx(4.0));
    CHECK(s.theta == doctest::Approx(0.0));
}

TEST_CASE("step_target: identity and constant-velocity transitions") {
    TargetModel ident;
    ident.F = Mat6::Identity();
    ident.Q = Mat6::Zero();
    TargetState x;
    x << 1, 2, 3, 4, 5, 6;
    CHECK((step_target(x, ident, Vec6::Zero()) - x).norm() == 0.0);

    TargetModel cv = TargetModel::constant_velocity(1.0, 0.0);
    TargetState x0;
    x0 << 0, 0, 1, 2, 0, 0;
    TargetState x1 = step_target(x0, cv, Vec6::Zero());
    TargetState want;
    want << 1, 2, 1, 2, 0, 0;
    CHECK((x1 - want).norm() == doctest::Approx(0.0));
}

TEST_CASE("step_target: zero process noise commutes with itself") {
    TargetModel cv = TargetModel::constant_velocity(0.5, 0.0);
    TargetState x;
    x << 3, -4, 2, 1, 0, 0;
    TargetState twice = step_target(step_target(x, cv, Vec6::Zero()), cv, Vec6::Zero());
    TargetModel sq;
    sq.F = cv.F * cv.F;
    sq.Q = Mat6::Zero();
    CHECK((twice - step_target(x, sq, Vec6::Zero())).norm() < 1e-12);
}

TEST_CASE("process_noise: zero intensity is deterministic") {
    TargetModel cv = TargetModel::constant_velocity(0.5, 0.0);
    Vec6 draw;
    draw << 1, -2, 0.5, 3, -1, 2;
    CHECK(process_noise(cv, draw).norm() == doctest::Approx(0.0));
}

TEST_CASE("process_noise: sample covariance approaches Q") {
    TargetModel cv = TargetModel::constant_velocity(1.0, 0.8);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat6 acc = Mat6::Zero();
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        Vec6 draw;
        for (int k = 0; k < 6; ++k) draw(k) = nd(rng);
        Vec6 v = process_noise(cv, draw);
        acc += v * v.transpose();
    }
    acc /= n;
    CHECK((acc - cv.Q).norm() / cv.Q.norm() < 0.05);
}

TEST_CASE("measurement_covariance: axis-aligned hand case") {
    Mat2 R = measurement_covariance({100.0, 0.0}, {0.0, 0.0}, 0.1,
                                    0.01 * std::numbers::pi, 1.0);
    CHECK(R(0, 0) == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(R(1, 1) == doctest::Approx(9.8696).epsilon(1e-4));
    CHECK(R(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("measurement_covariance: floor engages at coincidence") {
    Mat2 R = measurement_covariance({5.0, 5.0}, {5.0, 5.0}, 0.1,
                                    0.01 * std::numbers::pi, 1.0);
    Eigen::SelfAdjointEigenSolver<Mat2> es(R);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // Eigenvalues of a 1 m-range target.
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(0.01));
}

TEST_CASE("measurement_covariance: rotational equivariance and spectrum") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    for (int it = 0; it < 50; ++it) {
        Vec2 sensor(u(rng), u(rng));
        Vec2 target(u(rng), u(rng));
        double fr = 0.1, as = 0.01 * std::numbers::pi, floor = 1.0;
        Mat2 R = measurement_covariance(target, sensor, fr, as, floor);

        Mat2 rot;
        rot << 0, -1, 1, 0;  // 90 degrees
        Vec2 target_rot = sensor + rot * (target - sensor);
        Mat2 R_rot = measurement_covariance(target_rot, sensor, fr, as, floor);
        CHECK((R_rot - rot * R * rot.transpose()).norm() < 1e-9 * (1.0 + R.norm()));

        double r = std::max((target - sensor).norm(), floor);
        Eigen::SelfAdjointEigenSolver<Mat2> es(R);
        Vec2 want((as * r) * (as * r), (fr * r) * (fr * r));
        if (want(0) > want(1)) std::swap(want(0), want(1));
        CHECK(es.eigenvalues()(0) == doctest::Approx(want(0)).epsilon(1e-9));
        CHECK(es.eigenvalues()(1) == doctest::Approx(want(1)).epsilon(1e-9));
    }
}

TEST_CASE("measure: zero draw recovers the target position") {
    TargetState x;
    x << 3, 4, 1, -1, 0, 0;
    Measurement m = measure(x, {50.0, -20.0}, SensorNoise{}, Vec2::Zero());
    CHECK(m.z(0) == doctest::Approx(3.0));
    CHECK(m.z(1) == doctest::Approx(4.0));
}

TEST_CASE("measure: H selects positions only") {
    Mat26 H = position_observation();
    TargetState x;
    x << 3, 4, 9, 9, 9, 9;
    Vec2 hx = H * x;
    CHECK(hx(0) == 3.0);
    CHECK(hx(1) == 4.0);
}

TEST_CASE("measure: empirical covariance matches R") {
    TargetState x;
    x << 120.0, 40.0, 0, 0, 0, 0;
    Vec2 sensor(10.0, -5.0);
    SensorNoise noise;
    Mat2 R = measurement_covariance(x.head<2>(), sensor, noise.range_frac,
                                    noise.angular_sigma, noise.r_floor);

    std::mt19937_64 rng(23);
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat2 acc = Mat2::Zero();
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        Measurement m = measure(x, sensor, noise, {nd(rng), nd(rng)});
        Vec2 e = m.z - x.head<2>();
        acc += e * e.transpose();
    }
    acc /= n;
    CHECK((acc - R).norm() / R.norm() < 0.05);
}
