#pragma once

// Squeezed-Kerr dynamics: Hamiltonian construction, closed-system evolution
// through one Hermitian eigendecomposition, and open-system evolution with
// photon loss via fixed-step RK4 on the Lindblad master equation.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fock.hpp"
#include "gaussian.hpp"
#include "linalg.hpp"

namespace nge {

struct KerrParams {
    double delta_a = 0.0;   // local detuning on mode A
    Complex chi = 0.0;      // two-mode squeezing strength
    double kappa_a = 0.0;   // self-Kerr on mode A

    void validate() const {
        if (!std::isfinite(delta_a) || !std::isfinite(kappa_a) ||
            !std::isfinite(chi.real()) || !std::isfinite(chi.imag()))
            throw std::invalid_argument("KerrParams: non-finite parameter");
    }
};

struct LossParams {
    double gamma_a = 0.0;
    double gamma_b = 0.0;

    void validate() const {
        if (!(gamma_a >= 0.0) || !(gamma_b >= 0.0))
            throw std::invalid_argument("LossParams: rates must be >= 0");
    }
};

struct IntegratorConfig {
    double dt = 1e-3;
    double trace_tol = 1e-8;
    bool hermitize_each_step = true;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
    }
};

// H = delta_a a^dag a + chi a^dag b^dag + conj(chi) a b - kappa_a a^dag^2 a^2
inline CMat kerr_hamiltonian(const KerrParams& p, const TruncationPolicy& trunc) {
    p.validate();
    trunc.validate();
    const int d = trunc.dim_per_mode;
    CMat a = annihilation(d);
    CMat ab = embed_mode_a(a, d) * embed_mode_b(a, d);
    CMat n_a = embed_mode_a((a.adjoint() * a).eval(), d);
    CMat kerr = embed_mode_a((a.adjoint() * a.adjoint() * a * a).eval(), d);
    CMat h = p.delta_a * n_a + p.chi * ab.adjoint() + std::conj(p.chi) * ab -
             p.kappa_a * kerr;
    if (hermiticity_defect(h) > 1e-12)
        throw std::runtime_error("kerr_hamiltonian: construction lost Hermiticity");
    return h;
}

// exp(-i H t) |psi0> for each requested time, through a single
// eigendecomposition of H.
inline std::vector<PureState> evolve_pure_grid(const CMat& h, const std::vector<double>& times,
                                               const PureState& psi0) {
    psi0.validate();
    if (hermiticity_defect(h) > 1e-10)
        throw std::invalid_argument("evolve_pure: H not Hermitian");
    HermitianEigen eig = hermitian_eigensolve(h);
    CVec base = eig.vectors.adjoint() * psi0.flat();
    std::vector<PureState> out;
    out.reserve(times.size());
    for (double t : times) {
        CVec phased(base.size());
        for (Eigen::Index k = 0; k < base.size(); ++k)
            phased[k] = std::exp(Complex(0.0, -eig.values[k] * t)) * base[k];
        PureState s;
        s.trunc = psi0.trunc;
        s.coeffs = unflatten(eig.vectors * phased, psi0.dim());
        out.push_back(std::move(s));
    }
    return out;
}

inline PureState evolve_pure(const CMat& h, double t, const PureState& psi0) {
    return evolve_pure_grid(h, {t}, psi0).front();
}

namespace detail {

using SpMat = Eigen::SparseMatrix<Complex>;

struct LindbladContext {
    SpMat h;                      // Hamiltonian (sparse)
    std::vector<SpMat> jumps;     // L_k
    CVec damping;                 // diagonal of (1/2) sum_k L_k^dag L_k

    // -i[H, rho] + sum_k L_k rho L_k^dag - {damping, rho}
    CMat rhs(const CMat& rho) const {
        CMat out = Complex(0.0, -1.0) * (h * rho - rho * h);
        for (const SpMat& l : jumps)
            out += l * (rho * l.adjoint()).eval();
        out -= damping.asDiagonal() * rho;
        out -= rho * damping.asDiagonal();
        return out;
    }
};

inline LindbladContext make_lindblad_context(const CMat& h, const LossParams& loss, int dim) {
    LindbladContext ctx;
    ctx.h = h.sparseView(1e-15);
    const Eigen::Index d2 = Eigen::Index(dim) * dim;
    ctx.damping = CVec::Zero(d2);
    CMat a = annihilation(dim);
    auto add_jump = [&](double gamma, const CMat& op) {
        if (gamma <= 0.0) return;
        CMat l = std::sqrt(gamma) * op;
        ctx.jumps.push_back(l.sparseView(1e-15));
        CMat ldl = l.adjoint() * l;   // diagonal for photon-loss jumps
        ctx.damping += 0.5 * ldl.diagonal();
    };
    add_jump(loss.gamma_a, embed_mode_a(a, dim));
    add_jump(loss.gamma_b, embed_mode_b(a, dim));
    return ctx;
}

inline void rk4_step(const LindbladContext& ctx, CMat& rho, double dt, bool hermitize) {
    CMat k1 = ctx.rhs(rho);
    CMat k2 = ctx.rhs(rho + 0.5 * dt * k1);
    CMat k3 = ctx.rhs(rho + 0.5 * dt * k2);
    CMat k4 = ctx.rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (hermitize) rho = symmetrize(rho);
}

} // namespace detail

// Integrate to each requested time (ascending), continuing the same
// trajectory.  The master equation is
//   d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})
// with L_1 = sqrt(gamma_a) a and L_2 = sqrt(gamma_b) b.
inline std::vector<MixedState> lindblad_evolve_grid(const CMat& h, const LossParams& loss,
                                                    const MixedState& rho0,
                                                    const std::vector<double>& times,
                                                    const IntegratorConfig& cfg) {
    loss.validate();
    cfg.validate();
    rho0.validate();
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
            throw std::invalid_argument("lindblad_evolve: times must be ascending and >= 0");
    }
    detail::LindbladContext ctx = detail::make_lindblad_context(h, loss, rho0.dim());

    CMat rho = rho0.rho;
    double now = 0.0;
    std::vector<MixedState> out;
    out.reserve(times.size());
    for (double target : times) {
        double remaining = target - now;
        while (remaining > 1e-12) {
            double step = std::min(cfg.dt, remaining);
            detail::rk4_step(ctx, rho, step, cfg.hermitize_each_step);
            remaining -= step;
        }
        now = target;
        double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (tr_err > cfg.trace_tol)
            throw std::runtime_error("lindblad_evolve: trace drift " + std::to_string(tr_err) +
                                     " at t = " + std::to_string(target));
        MixedState snap;
        snap.trunc = rho0.trunc;
        snap.rho = rho;
        snap.validate(-1e-6);
        out.push_back(std::move(snap));
    }
    return out;
}

inline MixedState lindblad_evolve(const CMat& h, const LossParams& loss, const MixedState& rho0,
                                  double t, const IntegratorConfig& cfg) {
    return lindblad_evolve_grid(h, loss, rho0, {t}, cfg).front();
}

} // namespace nge
