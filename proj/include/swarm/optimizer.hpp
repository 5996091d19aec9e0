#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace swarm {

struct BoxBounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dim() const { return static_cast<int>(lower.size()); }
    Eigen::VectorXd project(const Eigen::VectorXd& x) const {
        return x.cwiseMax(lower).cwiseMin(upper);
    }
};

struct OptimizerOptions {
    int max_evals = 0;      // 0 selects the default budget of 500 * dim
    double x_tol = 1e-6;
    double f_tol = 1e-9;
    int restarts = 1;       // additional seeded restarts after the first run
    std::uint64_t seed = 0;
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double f = 0.0;
    long evals = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Derivative-free box-constrained local minimizer (Nelder-Mead simplex with
// projection onto the box, plus seeded restarts). Guarantees: the returned
// point is feasible, f(x_star) <= f(x0), and the result is deterministic for
// a fixed seed. Non-finite objective values during the search discard that
// candidate; a non-finite value at x0 throws std::invalid_argument.
MinimizeResult minimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const BoxBounds& bounds, const OptimizerOptions& opts);

}  // namespace swarm
