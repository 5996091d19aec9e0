#include "swarm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace swarm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nelder-Mead coefficients.
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

MinimizeResult minimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const BoxBounds& bounds, const OptimizerOptions& opts) {
    const int d = bounds.dim();
    if (bounds.upper.size() != d || x0.size() != d) {
        throw std::invalid_argument("minimize: dimension mismatch");
    }
    if (!bounds.lower.allFinite() || !bounds.upper.allFinite() ||
        (bounds.lower.array() > bounds.upper.array()).any()) {
        throw std::invalid_argument("minimize: invalid bounds");
    }
    if (((x0.array() < bounds.lower.array()) ||
         (x0.array() > bounds.upper.array()))
            .any()) {
        throw std::invalid_argument("minimize: x0 outside bounds");
    }

    const long budget = opts.max_evals > 0 ? opts.max_evals : 500L * std::max(d, 1);

    // Free dimensions; fixed ones (lower == upper) are pinned to lower.
    std::vector<int> free_dims;
    for (int i = 0; i < d; ++i) {
        if (bounds.upper(i) > bounds.lower(i)) free_dims.push_back(i);
    }
    const int m = static_cast<int>(free_dims.size());

    long evals = 0;
    Eigen::VectorXd range = bounds.upper - bounds.lower;

    auto from_unit = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd x = bounds.lower;
        for (int j = 0; j < m; ++j) {
            int i = free_dims[j];
            double uj = std::clamp(u(j), 0.0, 1.0);
            x(i) = bounds.lower(i) + uj * range(i);
        }
        return x;
    };
    auto to_unit = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd u(m);
        for (int j = 0; j < m; ++j) {
            int i = free_dims[j];
            u(j) = std::clamp((x(i) - bounds.lower(i)) / range(i), 0.0, 1.0);
        }
        return u;
    };

    Eigen::VectorXd best_x = bounds.project(x0);
    double best_f;
    {
        ++evals;
        best_f = objective(best_x);
        if (!std::isfinite(best_f)) {
            throw std::invalid_argument("minimize: objective non-finite at x0");
        }
    }

    auto eval_unit = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd x = from_unit(u);
        ++evals;
        double f = objective(x);
        if (!std::isfinite(f)) return kInf;
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        return f;
    };

    if (m == 0) return {best_x, best_f, evals};

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int run = 0; run <= std::max(opts.restarts, 0); ++run) {
        if (evals >= budget) break;

        // Initial simplex around the incumbent, reflected inward at the box
        // edge. Restarts jitter the edge length.
        double h = run == 0 ? 0.20 : 0.08 + 0.30 * unif(rng);
        Eigen::VectorXd u0 = to_unit(best_x);
        std::vector<Eigen::VectorXd> verts(m + 1, u0);
        std::vector<double> fv(m + 1);
        fv[0] = best_f;
        for (int j = 1; j <= m; ++j) {
            double step = h;
            if (run > 0 && unif(rng) < 0.5) step = -h;
            double vj = u0(j - 1) + step;
            if (vj > 1.0 || vj < 0.0) vj = u0(j - 1) - step;
            verts[j](j - 1) = std::clamp(vj, 0.0, 1.0);
            if (evals >= budget) break;
            fv[j] = eval_unit(verts[j]);
        }
        if (evals >= budget) break;

        std::vector<int> order(m + 1);
        while (evals < budget) {
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return fv[a] < fv[b]; });
            int lo = order[0], hi = order[m], second_hi = order[m - 1];

            // Convergence: simplex collapsed in both x and f.
            double fspread = fv[hi] - fv[lo];
            double xspread = 0.0;
            for (int j = 0; j <= m; ++j) {
                xspread = std::max(xspread, (verts[j] - verts[lo]).lpNorm<Eigen::Infinity>());
            }
            if (std::isfinite(fspread) && fspread <= opts.f_tol && xspread <= opts.x_tol) break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
            for (int j = 0; j <= m; ++j) {
                if (j != hi) centroid += verts[j];
            }
            centroid /= m;

            Eigen::VectorXd xr = centroid + kReflect * (centroid - verts[hi]);
            double fr = eval_unit(xr);

            if (fr < fv[lo]) {
                if (evals < budget) {
                    Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
                    double fe = eval_unit(xe);
                    if (fe < fr) {
                        verts[hi] = xe;
                        fv[hi] = fe;
                        continue;
                    }
                }
                verts[hi] = xr;
                fv[hi] = fr;
            } else if (fr < fv[second_hi]) {
                verts[hi] = xr;
                fv[hi] = fr;
            } else {
                Eigen::VectorXd xc;
                if (fr < fv[hi]) {
                    xc = centroid + kContract * (xr - centroid);
                } else {
                    xc = centroid + kContract * (verts[hi] - centroid);
                }
                if (evals >= budget) break;
                double fc = eval_unit(xc);
                if (fc < std::min(fr, fv[hi])) {
                    verts[hi] = xc;
                    fv[hi] = fc;
                } else {
                    // Shrink toward the best vertex.
                    for (int j = 0; j <= m; ++j) {
                        if (j == lo) continue;
                        verts[j] = verts[lo] + kShrink * (verts[j] - verts[lo]);
                        if (evals >= budget) break;
                        fv[j] = eval_unit(verts[j]);
                    }
                }
            }
        }
    }

    return {best_x, best_f, evals};
}

}  // namespace swarm
