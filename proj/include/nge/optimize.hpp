#pragma once

// Derivative-free minimization used by the witness searches: a Nelder-Mead
// simplex with restarts from many seeded starting points.  Objectives signal
// infeasible points (parameter box violations, truncation-leakage rejections)
// by returning +infinity; the simplex then simply contracts away from them.
//
// The global best is tracked across every evaluation of every start, so a
// caller that includes the identity start is guaranteed a result no worse
// than the unoptimized objective value.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "linalg.hpp"

namespace nge {

using Objective = std::function<double(const RVec&)>;

struct OptimizerConfig {
    int n_starts = 32;                 // random starts in addition to identity
    unsigned long long seed = 1234;
    int max_evals = 2000;              // per start
    double obj_tol = 1e-7;             // simplex value-spread stopping criterion
    double r_max = 2.0;                // squeezing box |r| <= r_max
    bool include_identity_start = true;
    std::vector<RVec> extra_starts;    // e.g. warm starts along a scan

    void validate() const {
        if (n_starts < 1) throw std::invalid_argument("OptimizerConfig: n_starts must be >= 1");
        if (max_evals < 1) throw std::invalid_argument("OptimizerConfig: max_evals must be >= 1");
    }
};

struct LocalResult {
    RVec x;
    double value = std::numeric_limits<double>::infinity();
    long evals = 0;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink
// 1/2).  `steps` sets the initial simplex edge along each coordinate.
inline LocalResult nelder_mead(const Objective& f, const RVec& x0, const RVec& steps,
                               int max_evals, double obj_tol) {
    const int n = int(x0.size());
    const double inf = std::numeric_limits<double>::infinity();
    long evals = 0;
    RVec best_x = x0;
    double best_v = inf;

    auto eval = [&](const RVec& x) {
        double v = f(x);
        ++evals;
        if (v < best_v) { best_v = v; best_x = x; }
        return v;
    };

    std::vector<RVec> xs(n + 1, x0);
    std::vector<double> vs(n + 1);
    vs[0] = eval(xs[0]);
    for (int i = 0; i < n; ++i) {
        xs[i + 1][i] += steps[i];
        vs[i + 1] = eval(xs[i + 1]);
    }

    std::vector<int> order(n + 1);
    while (evals < max_evals) {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return vs[a] < vs[b]; });
        const int lo = order[0], hi = order[n], next_hi = order[n - 1];

        // Converged once every vertex value sits within obj_tol of the best
        // (infinite vertices keep the simplex moving instead).
        if (std::isfinite(vs[hi]) && vs[hi] - vs[lo] <= obj_tol) break;

        RVec centroid = RVec::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != hi) centroid += xs[i];
        centroid /= double(n);

        RVec xr = centroid + (centroid - xs[hi]);
        double vr = eval(xr);
        if (vr < vs[lo]) {
            RVec xe = centroid + 2.0 * (centroid - xs[hi]);
            double ve = eval(xe);
            if (ve < vr) { xs[hi] = xe; vs[hi] = ve; }
            else         { xs[hi] = xr; vs[hi] = vr; }
        } else if (vr < vs[next_hi]) {
            xs[hi] = xr; vs[hi] = vr;
        } else {
            RVec xc = centroid + 0.5 * ((vr < vs[hi] ? xr : xs[hi]) - centroid);
            double vc = eval(xc);
            if (vc < std::min(vr, vs[hi])) {
                xs[hi] = xc; vs[hi] = vc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == lo) continue;
                    xs[i] = xs[lo] + 0.5 * (xs[i] - xs[lo]);
                    vs[i] = eval(xs[i]);
                    if (evals >= max_evals) break;
                }
            }
        }
    }
    return {best_x, best_v, evals};
}

struct MultiStartResult {
    RVec best_x;
    double best_value = std::numeric_limits<double>::infinity();
    long total_evals = 0;
    std::vector<double> per_start_values;  // converged value of each start
};

// Runs Nelder-Mead from the identity start (if enabled), any caller-supplied
// warm starts, and cfg.n_starts random draws, then polishes the winner with a
// tighter simplex.  `random_start(rng)` supplies the random draws so each
// objective can shape its own start distribution.
inline MultiStartResult
minimize_multistart(const Objective& f, int dim, const OptimizerConfig& cfg,
                    const std::function<RVec(std::mt19937_64&)>& random_start,
                    const RVec& steps) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);

    std::vector<RVec> starts;
    if (cfg.include_identity_start) starts.push_back(RVec::Zero(dim));
    for (const RVec& x : cfg.extra_starts) {
        if (x.size() != dim)
            throw std::invalid_argument("minimize_multistart: extra start has wrong dimension");
        starts.push_back(x);
    }
    for (int k = 0; k < cfg.n_starts; ++k) starts.push_back(random_start(rng));

    MultiStartResult out;
    out.best_x = RVec::Zero(dim);
    for (const RVec& x0 : starts) {
        LocalResult r = nelder_mead(f, x0, steps, cfg.max_evals, cfg.obj_tol);
        out.total_evals += r.evals;
        out.per_start_values.push_back(r.value);
        if (r.value < out.best_value) { out.best_value = r.value; out.best_x = r.x; }
    }
    if (!std::isfinite(out.best_value))
        throw std::runtime_error("minimize_multistart: every start was infeasible");

    LocalResult polish = nelder_mead(f, out.best_x, 0.2 * steps, cfg.max_evals, cfg.obj_tol);
    out.total_evals += polish.evals;
    if (polish.value < out.best_value) { out.best_value = polish.value; out.best_x = polish.x; }
    return out;
}

} // namespace nge
