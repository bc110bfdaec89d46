#pragma once

// Truncated two-mode Fock space: state containers, tensor structure, partial
// transpose, trace norm, Schmidt decomposition, partial trace, and the
// leakage diagnostic that tells us whether a truncation at D levels per mode
// is trustworthy.
//
// Index convention, shared by every module: the pair (n_a, n_b) maps to the
// flattened index n_a * D + n_b.  A two-mode density matrix is D^2 x D^2 and
// decomposes into D x D blocks, where block (n_a, m_a) carries the mode-B
// structure.

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "linalg.hpp"

namespace nge {

struct TruncationPolicy {
    int dim_per_mode = 2;     // Fock levels 0 .. D-1 in each mode
    double leak_tol = 1e-6;   // generators refuse states leaking beyond this

    void validate() const {
        if (dim_per_mode < 2)
            throw std::invalid_argument("TruncationPolicy: dim_per_mode must be >= 2");
        if (leak_tol < 0.0)
            throw std::invalid_argument("TruncationPolicy: leak_tol must be >= 0");
    }
};

inline int pair_index(int n_a, int n_b, int dim) { return n_a * dim + n_b; }

// Row-major flattening of the coefficient matrix: flat[n_a*D + n_b] = C(n_a, n_b).
inline CVec flatten(const CMat& coeffs) {
    const Eigen::Index d = coeffs.rows();
    CVec v(d * coeffs.cols());
    for (Eigen::Index i = 0; i < d; ++i)
        v.segment(i * coeffs.cols(), coeffs.cols()) = coeffs.row(i).transpose();
    return v;
}

inline CMat unflatten(const CVec& v, int dim) {
    if (v.size() != Eigen::Index(dim) * dim)
        throw std::invalid_argument("unflatten: vector length does not match dim^2");
    CMat c(dim, dim);
    for (int i = 0; i < dim; ++i)
        c.row(i) = v.segment(Eigen::Index(i) * dim, dim).transpose();
    return c;
}

struct PureState {
    CMat coeffs;             // C(n_a, n_b) = <n_a, n_b | psi>
    TruncationPolicy trunc;

    int dim() const { return trunc.dim_per_mode; }

    void validate() const {
        trunc.validate();
        if (coeffs.rows() != dim() || coeffs.cols() != dim())
            throw std::invalid_argument("PureState: coeffs shape does not match dim_per_mode");
        double norm_err = std::abs(coeffs.squaredNorm() - 1.0);
        if (norm_err > 1e-10)
            throw std::invalid_argument("PureState: not normalized, |<psi|psi> - 1| = " +
                                        std::to_string(norm_err));
    }

    CVec flat() const { return flatten(coeffs); }
};

struct MixedState {
    CMat rho;                // D^2 x D^2, flattened-pair indexing
    TruncationPolicy trunc;

    int dim() const { return trunc.dim_per_mode; }

    // psd_tol is configurable because Lindblad integration legitimately
    // produces slightly larger negative eigenvalues than exact constructions.
    void validate(double psd_tol = -1e-8) const {
        trunc.validate();
        const Eigen::Index d2 = Eigen::Index(dim()) * dim();
        if (rho.rows() != d2 || rho.cols() != d2)
            throw std::invalid_argument("MixedState: rho shape does not match dim_per_mode^2");
        double herm = hermiticity_defect(rho);
        if (herm > 1e-10)
            throw std::invalid_argument("MixedState: not Hermitian, defect = " +
                                        std::to_string(herm));
        double tr_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        if (tr_err > 1e-9)
            throw std::invalid_argument("MixedState: trace != 1, error = " +
                                        std::to_string(tr_err));
        double min_eig = hermitian_eigenvalues(rho).minCoeff();
        if (min_eig < psd_tol)
            throw std::invalid_argument("MixedState: negative eigenvalue " +
                                        std::to_string(min_eig));
    }
};

struct SchmidtDecomposition {
    RVec lambdas;     // descending, nonnegative
    CMat left_basis;  // columns u_i (mode A)
    CMat right_basis; // columns v_i (mode B); C = sum_i lambda_i u_i v_i^T
    int rank = 0;     // count of lambdas > rank_tol
};

inline PureState tensor_product(const CVec& psi_a, const CVec& psi_b,
                                const TruncationPolicy& trunc) {
    trunc.validate();
    if (psi_a.size() != trunc.dim_per_mode || psi_b.size() != trunc.dim_per_mode)
        throw std::invalid_argument("tensor_product: vector length does not match dim_per_mode");
    if (std::abs(psi_a.squaredNorm() - 1.0) > 1e-10 ||
        std::abs(psi_b.squaredNorm() - 1.0) > 1e-10)
        throw std::invalid_argument("tensor_product: inputs must be unit norm");
    PureState out;
    out.trunc = trunc;
    out.coeffs = psi_a * psi_b.transpose();
    return out;
}

inline MixedState to_density(const PureState& psi) {
    psi.validate();
    CVec v = psi.flat();
    MixedState out;
    out.trunc = psi.trunc;
    out.rho = v * v.adjoint();
    return out;
}

// <i,j| rho^{T_A} |k,l> = <k,j| rho |i,l>: swap the block indices (mode A)
// while leaving the within-block (mode B) structure alone.
inline CMat partial_transpose(const CMat& rho, int dim) {
    const Eigen::Index d2 = Eigen::Index(dim) * dim;
    if (rho.rows() != d2 || rho.cols() != d2)
        throw std::invalid_argument("partial_transpose: shape does not match dim^2");
    CMat out(d2, d2);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k)
            out.block(Eigen::Index(i) * dim, Eigen::Index(k) * dim, dim, dim) =
                rho.block(Eigen::Index(k) * dim, Eigen::Index(i) * dim, dim, dim);
    return out;
}

inline CMat partial_transpose(const MixedState& state) {
    return partial_transpose(state.rho, state.dim());
}

// Sum of |eigenvalue| of the symmetrized input.
inline double trace_norm(const CMat& h) {
    if (hermiticity_defect(h) > 1e-8)
        throw std::invalid_argument("trace_norm: input not Hermitian within 1e-8");
    return hermitian_eigenvalues(h).cwiseAbs().sum();
}

inline SchmidtDecomposition schmidt(const PureState& psi, double rank_tol = 1e-9) {
    psi.validate();
    Eigen::JacobiSVD<CMat> svd(psi.coeffs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    out.lambdas = svd.singularValues();
    out.left_basis = svd.matrixU();
    // SVD gives C = U S V^dag; with v_i = conj(V col i) this reads
    // C = sum_i lambda_i u_i v_i^T, matching |psi> = sum lambda_i |u_i>|v_i>.
    out.right_basis = svd.matrixV().conjugate();
    out.rank = 0;
    for (Eigen::Index i = 0; i < out.lambdas.size(); ++i)
        if (out.lambdas[i] > rank_tol) ++out.rank;
    return out;
}

enum class Mode { A, B };

inline CMat partial_trace(const MixedState& state, Mode keep) {
    const int d = state.dim();
    CMat out = CMat::Zero(d, d);
    if (keep == Mode::A) {
        // out(i,k) = sum_j rho[(i,j),(k,j)]
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                out(i, k) = state.rho
                                .block(Eigen::Index(i) * d, Eigen::Index(k) * d, d, d)
                                .trace();
    } else {
        // out(j,l) = sum_i rho[(i,j),(i,l)]
        for (int i = 0; i < d; ++i)
            out += state.rho.block(Eigen::Index(i) * d, Eigen::Index(i) * d, d, d);
    }
    return out;
}

// Population with either mode occupying one of its top two Fock levels.
// This is the truncation-health proxy: generators and optimizers refuse
// states whose leakage exceeds TruncationPolicy::leak_tol.
inline double leakage(const CMat& coeffs) {
    const int d = int(coeffs.rows());
    double total = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i >= d - 2 || j >= d - 2) total += std::norm(coeffs(i, j));
    return std::clamp(total, 0.0, 1.0);
}

inline double leakage(const PureState& psi) { return leakage(psi.coeffs); }

inline double leakage(const MixedState& state) {
    const int d = state.dim();
    double total = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i >= d - 2 || j >= d - 2)
                total += state.rho(pair_index(i, j, d), pair_index(i, j, d)).real();
    return std::clamp(total, 0.0, 1.0);
}

inline PureState apply_unitary(const CMat& u, const PureState& psi) {
    const Eigen::Index d2 = Eigen::Index(psi.dim()) * psi.dim();
    if (u.rows() != d2 || u.cols() != d2)
        throw std::invalid_argument("apply_unitary: unitary shape does not match state");
    PureState out;
    out.trunc = psi.trunc;
    out.coeffs = unflatten(u * psi.flat(), psi.dim());
    return out;
}

inline MixedState apply_unitary(const CMat& u, const MixedState& state) {
    if (u.rows() != state.rho.rows() || u.cols() != state.rho.cols())
        throw std::invalid_argument("apply_unitary: unitary shape does not match state");
    MixedState out;
    out.trunc = state.trunc;
    out.rho = u * state.rho * u.adjoint();
    return out;
}

} // namespace nge
