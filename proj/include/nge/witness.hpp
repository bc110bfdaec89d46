#pragma once

// The core witness quantities: E (trace norm of the partial transpose), E_NG
// (minimum of E over the seven-parameter effective Gaussian-unitary family),
// the entanglement-dimension integer d, the state-learning parameter bound,
// and the NOON-type witness f with its Gaussian threshold f_G.
//
// EffectiveFamily applies the family unitary to pure-state coefficient
// matrices without ever materializing a D^2 x D^2 matrix: rotations are
// row/column phases, the single-mode squeeze is a pair of D x D products
// against a precomputed eigenbasis, and the beam splitters act block by
// block on the conserved total-photon-number sectors.  This is what makes
// the multi-start optimizations affordable for mixed states, where every
// objective evaluation transforms the full eigenvector stack of rho.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fock.hpp"
#include "gaussian.hpp"
#include "linalg.hpp"
#include "optimize.hpp"
#include "states.hpp"

namespace nge {

// Parameter vector layout shared with serialization:
// [theta_I0, theta_I, theta_I1, theta_I2, theta_II0, theta_II, r]
inline RVec params_to_vec(const GaussianParams7& p) {
    RVec v(7);
    v << p.theta_I0, p.theta_I, p.theta_I1, p.theta_I2, p.theta_II0, p.theta_II, p.r;
    return v;
}

inline GaussianParams7 vec_to_params(const RVec& v) {
    if (v.size() != 7) throw std::invalid_argument("vec_to_params: expected 7 entries");
    GaussianParams7 p;
    p.theta_I0 = v[0]; p.theta_I = v[1]; p.theta_I1 = v[2]; p.theta_I2 = v[3];
    p.theta_II0 = v[4]; p.theta_II = v[5]; p.r = v[6];
    return p;
}

class EffectiveFamily {
public:
    explicit EffectiveFamily(int dim) : dim_(dim) {
        if (dim < 2) throw std::invalid_argument("EffectiveFamily: dim must be >= 2");

        // Squeeze generator K = (a^2 - a^dag^2)/2; S(r) = exp(r K) is
        // recovered from the eigenbasis of the Hermitian matrix iK.
        CMat a = annihilation(dim);
        CMat a2 = a * a;
        CMat k = 0.5 * (a2 - a2.adjoint().eval());
        HermitianEigen ek = hermitian_eigensolve(Complex(0.0, 1.0) * k);
        squeeze_vecs_ = ek.vectors;
        squeeze_freqs_ = ek.values;

        // Beam-splitter generator G = a^dag b - a b^dag conserves the total
        // photon number s = n_a + n_b; within sector s (basis |n, s-n>,
        // n ascending) it is tridiagonal.  One Hermitian eigendecomposition
        // per sector, reused for every angle.
        const int d = dim;
        for (int s = 0; s <= 2 * (d - 1); ++s) {
            Block blk;
            blk.n_lo = std::max(0, s - (d - 1));
            const int n_hi = std::min(s, d - 1);
            const int m = n_hi - blk.n_lo + 1;
            CMat g = CMat::Zero(m, m);
            for (int kk = 0; kk + 1 < m; ++kk) {
                const int n = blk.n_lo + kk;   // a^dag b : |n, s-n> -> |n+1, s-n-1>
                double t = std::sqrt(double(n + 1) * double(s - n));
                g(kk + 1, kk) = t;
                g(kk, kk + 1) = -t;
            }
            HermitianEigen eg = hermitian_eigensolve(Complex(0.0, 1.0) * g);
            blk.vecs = eg.vectors;
            blk.freqs = eg.values;
            blocks_.push_back(std::move(blk));
        }
    }

    int dim() const { return dim_; }

    // U_eff(p) |psi>, acting on the D x D coefficient matrix.  Factor order
    // (rightmost acts first):
    //   U_BS(t_II) [R_A(t_II0) S_A(r) R_A(t_I1) (x) R_B(t_I2)] U_BS(t_I) R_A(t_I0)
    CMat apply(const GaussianParams7& p, const CMat& coeffs) const {
        CMat c = coeffs;
        phase_rows(c, p.theta_I0);
        apply_beam_splitter(c, p.theta_I);
        phase_rows(c, p.theta_I1);
        phase_cols(c, p.theta_I2);
        apply_squeeze_a(c, p.r);
        phase_rows(c, p.theta_II0);
        apply_beam_splitter(c, p.theta_II);
        return c;
    }

private:
    struct Block {
        int n_lo = 0;
        CMat vecs;
        RVec freqs;
    };

    int dim_;
    CMat squeeze_vecs_;
    RVec squeeze_freqs_;
    std::vector<Block> blocks_;

    // R_A(theta): C(n_a, n_b) *= exp(-i theta n_a)
    void phase_rows(CMat& c, double theta) const {
        if (theta == 0.0) return;
        for (int n = 0; n < dim_; ++n)
            c.row(n) *= std::exp(Complex(0.0, -theta * n));
    }

    void phase_cols(CMat& c, double theta) const {
        if (theta == 0.0) return;
        for (int n = 0; n < dim_; ++n)
            c.col(n) *= std::exp(Complex(0.0, -theta * n));
    }

    void apply_squeeze_a(CMat& c, double r) const {
        if (r == 0.0) return;
        CMat tmp = squeeze_vecs_.adjoint() * c;
        for (int k = 0; k < dim_; ++k)
            tmp.row(k) *= std::exp(Complex(0.0, -r * squeeze_freqs_[k]));
        c = squeeze_vecs_ * tmp;
    }

    void apply_beam_splitter(CMat& c, double theta) const {
        if (theta == 0.0) return;
        for (std::size_t sector_idx = 0; sector_idx < blocks_.size(); ++sector_idx) {
            const Block& blk = blocks_[sector_idx];
            const int sector = int(sector_idx);   // total photon number s
            const int m = int(blk.freqs.size());
            CVec x(m);
            for (int k = 0; k < m; ++k)
                x[k] = c(blk.n_lo + k, sector - blk.n_lo - k);
            CVec y = blk.vecs.adjoint() * x;
            for (int k = 0; k < m; ++k)
                y[k] *= std::exp(Complex(0.0, -theta * blk.freqs[k]));
            x = blk.vecs * y;
            for (int k = 0; k < m; ++k)
                c(blk.n_lo + k, sector - blk.n_lo - k) = x[k];
        }
    }
};

inline double witness_E(const MixedState& rho) {
    rho.validate(-1e-6);
    return trace_norm(partial_transpose(rho));
}

// Pure states: E = (sum of Schmidt coefficients)^2.
inline double witness_E(const PureState& psi) {
    psi.validate();
    Eigen::JacobiSVD<CMat> svd(psi.coeffs);
    double s = svd.singularValues().sum();
    return s * s;
}

inline int dimension_d(double value) {
    if (value < 1.0 - 1e-9)
        throw std::invalid_argument("dimension_d: witness value below 1");
    return std::max(1, int(std::ceil(value - 1e-6)));
}

// Minimum number of real parameters needed to learn a state whose
// entanglement dimension is at least d, in a D-level-per-mode space.
inline long learning_bound(int d, int dim) {
    if (d < 1 || d > dim)
        throw std::invalid_argument("learning_bound: need 1 <= d <= D");
    return 2L * d * (2L * dim - d) - 2L;
}

struct WitnessResult {
    double value = 1.0;
    GaussianParams7 best_params;
    int d = 1;
    long evals = 0;
    std::vector<double> per_start_values;
};

namespace detail {

inline RVec default_steps7() {
    RVec s(7);
    s << 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.2;
    return s;
}

inline std::function<RVec(std::mt19937_64&)> random_start7(double r_max) {
    return [r_max](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        std::uniform_real_distribution<double> squeeze(-0.5 * r_max, 0.5 * r_max);
        RVec x(7);
        for (int i = 0; i < 6; ++i) x[i] = angle(rng);
        x[6] = squeeze(rng);
        return x;
    };
}

inline WitnessResult finish_eng(const MultiStartResult& ms) {
    WitnessResult out;
    out.value = std::max(1.0, ms.best_value);   // E >= 1 for physical states
    out.best_params = vec_to_params(ms.best_x);
    out.d = dimension_d(out.value);
    out.evals = ms.total_evals;
    out.per_start_values = ms.per_start_values;
    return out;
}

} // namespace detail

// Minimize E over the effective Gaussian family for a pure state.  Candidate
// points whose transformed state leaks beyond trunc.leak_tol are infeasible.
inline WitnessResult witness_ENG(const PureState& psi, const OptimizerConfig& cfg) {
    psi.validate();
    EffectiveFamily family(psi.dim());
    const double leak_tol = psi.trunc.leak_tol;
    const double inf = std::numeric_limits<double>::infinity();

    Objective f = [&](const RVec& x) {
        if (std::abs(x[6]) > cfg.r_max) return inf;
        CMat c = family.apply(vec_to_params(x), psi.coeffs);
        if (leakage(c) > leak_tol) return inf;
        Eigen::JacobiSVD<CMat> svd(c);
        double s = svd.singularValues().sum();
        return s * s;
    };
    MultiStartResult ms;
    try {
        ms = minimize_multistart(f, 7, cfg, detail::random_start7(cfg.r_max),
                                 detail::default_steps7());
    } catch (const std::runtime_error&) {
        throw std::runtime_error("witness_ENG: every start failed the leakage screen");
    }
    return detail::finish_eng(ms);
}

// Mixed-state version.  rho is eigendecomposed once; each objective
// evaluation transforms the retained eigenvector stack, reassembles the
// transformed rho, and takes the trace norm of its partial transpose.
inline WitnessResult witness_ENG(const MixedState& rho, const OptimizerConfig& cfg) {
    rho.validate(-1e-6);
    const int d = rho.dim();
    EffectiveFamily family(d);
    const double leak_tol = rho.trunc.leak_tol;
    const double inf = std::numeric_limits<double>::infinity();

    HermitianEigen eig = hermitian_eigensolve(rho.rho);
    std::vector<int> keep;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        if (eig.values[k] > 1e-14) keep.push_back(int(k));
    if (keep.empty())
        throw std::invalid_argument("witness_ENG: state has no positive spectral weight");
    const int rank = int(keep.size());

    RVec weights(rank);
    std::vector<CMat> basis(rank);   // eigenvectors as coefficient matrices
    for (int j = 0; j < rank; ++j) {
        weights[j] = eig.values[keep[j]];
        basis[j] = unflatten(eig.vectors.col(keep[j]), d);
    }

    const Eigen::Index d2 = Eigen::Index(d) * d;
    Objective f = [&](const RVec& x) {
        if (std::abs(x[6]) > cfg.r_max) return inf;
        GaussianParams7 p = vec_to_params(x);
        CMat stack(d2, rank);
        for (int j = 0; j < rank; ++j)
            stack.col(j) = flatten(family.apply(p, basis[j]));

        // Leakage of the transformed rho from its diagonal, no assembly needed.
        double leak = 0.0;
        for (int i = 0; i < d; ++i)
            for (int jj = 0; jj < d; ++jj)
                if (i >= d - 2 || jj >= d - 2) {
                    const Eigen::Index idx = pair_index(i, jj, d);
                    for (int k = 0; k < rank; ++k)
                        leak += weights[k] * std::norm(stack(idx, k));
                }
        if (leak > leak_tol) return inf;

        for (int k = 0; k < rank; ++k)
            stack.col(k) *= std::sqrt(weights[k]);
        CMat rho_t = CMat::Zero(d2, d2);
        rho_t.selfadjointView<Eigen::Lower>().rankUpdate(stack);
        rho_t = rho_t.selfadjointView<Eigen::Lower>();
        return hermitian_eigenvalues(partial_transpose(rho_t, d)).cwiseAbs().sum();
    };
    MultiStartResult ms;
    try {
        ms = minimize_multistart(f, 7, cfg, detail::random_start7(cfg.r_max),
                                 detail::default_steps7());
    } catch (const std::runtime_error&) {
        throw std::runtime_error("witness_ENG: every start failed the leakage screen");
    }
    return detail::finish_eng(ms);
}

// f = <NOON_N| rho |NOON_N>, written out over the four relevant entries.
inline double noon_witness_f(const MixedState& rho, int n) {
    const int d = rho.dim();
    if (n < 1 || n > d - 1)
        throw std::invalid_argument("noon_witness_f: N out of range for truncation");
    const Eigen::Index ia = pair_index(n, 0, d);
    const Eigen::Index ib = pair_index(0, n, d);
    return 0.5 * (rho.rho(ia, ia).real() + rho.rho(ib, ib).real()) +
           rho.rho(ia, ib).real();
}

// Closed-form bracket for the NOON threshold:
// max{1/2, 2^{1-N} C(N, floor(N/2))} <= f_G <= 1.
inline std::pair<double, double> fG_bounds(int n) {
    if (n < 1) throw std::invalid_argument("fG_bounds: N must be >= 1");
    double binom = 1.0;
    const int k = n / 2;
    for (int j = 1; j <= k; ++j) binom *= double(n - k + j) / double(j);
    double lower = std::max(0.5, std::ldexp(binom, 1 - n));
    return {lower, 1.0};
}

struct ThresholdResult {
    double value = 0.0;      // clamped into fG_bounds
    double raw_best = 0.0;   // best-found maximum before clamping
    GaussianParams7 best_params;
    long evals = 0;
};

// f_G(N) = max over the effective family of the squared top Schmidt
// coefficient of U |NOON_N>.
inline ThresholdResult noon_threshold_fG_detail(int n, const OptimizerConfig& cfg,
                                                const TruncationPolicy& trunc) {
    PureState base = noon(n, trunc);
    EffectiveFamily family(trunc.dim_per_mode);
    const double leak_tol = trunc.leak_tol;
    const double inf = std::numeric_limits<double>::infinity();

    Objective f = [&](const RVec& x) {
        if (std::abs(x[6]) > cfg.r_max) return inf;
        CMat c = family.apply(vec_to_params(x), base.coeffs);
        if (leakage(c) > leak_tol) return inf;
        Eigen::JacobiSVD<CMat> svd(c);
        double top = svd.singularValues()[0];
        return -top * top;   // maximize
    };
    MultiStartResult ms;
    try {
        ms = minimize_multistart(f, 7, cfg, detail::random_start7(cfg.r_max),
                                 detail::default_steps7());
    } catch (const std::runtime_error&) {
        throw std::runtime_error("noon_threshold_fG: every start failed the leakage screen");
    }
    ThresholdResult out;
    out.raw_best = -ms.best_value;
    auto [lo, hi] = fG_bounds(n);
    out.value = std::clamp(out.raw_best, lo, hi);
    out.best_params = vec_to_params(ms.best_x);
    out.evals = ms.total_evals;
    return out;
}

inline double noon_threshold_fG(int n, const OptimizerConfig& cfg,
                                const TruncationPolicy& trunc) {
    return noon_threshold_fG_detail(n, cfg, trunc).value;
}

} // namespace nge
