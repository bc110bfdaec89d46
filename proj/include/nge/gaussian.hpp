#pragma once

// Gaussian primitive gates on the truncated Fock space and the
// seven-parameter effective two-mode Gaussian unitary family.  Every gate is
// built by truncating its generator first and then exponentiating via
// expm_antihermitian, so each matrix is exactly unitary on the computational
// space; the price is physics error near the truncation edge, which callers
// monitor through leakage().
//
// Conventions:
//   R(theta)    = exp(-i theta a^dag a)
//   S(r)        = exp((r/2)(a^2 - a^dag^2))
//   D(alpha)    = exp(alpha a^dag - conj(alpha) a)
//   U_BS(theta) = exp(theta (a^dag b - a b^dag))
//   S_AB(xi)    = exp(xi a^dag b^dag - conj(xi) a b)

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "fock.hpp"
#include "linalg.hpp"

namespace nge {

// a[n-1][n] = sqrt(n)
inline CMat annihilation(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation: dim must be >= 2");
    CMat a = CMat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

inline CMat number_operator(int dim) {
    CMat n = CMat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = double(k);
    return n;
}

struct UnitaryMatrix {
    CMat u;
    int n_modes = 1;
    int dim_per_mode = 0;

    UnitaryMatrix() = default;
    UnitaryMatrix(CMat m, int modes, int dim) : u(std::move(m)), n_modes(modes), dim_per_mode(dim) {
        Eigen::Index expect = 1;
        for (int k = 0; k < modes; ++k) expect *= dim;
        if (u.rows() != expect || u.cols() != expect)
            throw std::invalid_argument("UnitaryMatrix: shape does not match dim^modes");
        double defect = unitarity_defect(u);
        if (defect > 1e-10)
            throw std::runtime_error("UnitaryMatrix: not unitary, defect = " +
                                     std::to_string(defect));
    }
};

inline UnitaryMatrix rotation(double theta, int dim) {
    // Diagonal generator: write the phases directly.
    CMat u = CMat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) u(n, n) = std::exp(Complex(0.0, -theta * n));
    return UnitaryMatrix(std::move(u), 1, dim);
}

inline UnitaryMatrix squeeze_single(double r, int dim) {
    CMat a = annihilation(dim);
    CMat a2 = a * a;
    CMat g = 0.5 * r * (a2 - a2.adjoint().eval());
    return UnitaryMatrix(expm_antihermitian(g), 1, dim);
}

inline UnitaryMatrix displacement(Complex alpha, int dim) {
    CMat a = annihilation(dim);
    CMat g = alpha * a.adjoint() - std::conj(alpha) * a;
    return UnitaryMatrix(expm_antihermitian(g), 1, dim);
}

inline UnitaryMatrix beam_splitter(double theta, int dim) {
    CMat a = annihilation(dim);
    CMat id = CMat::Identity(dim, dim);
    CMat ab = Eigen::kroneckerProduct(a.adjoint().eval(), id).eval() *
              Eigen::kroneckerProduct(id, a).eval();   // a^dag b
    CMat g = theta * (ab - ab.adjoint().eval());
    return UnitaryMatrix(expm_antihermitian(g), 2, dim);
}

inline UnitaryMatrix two_mode_squeeze(Complex xi, int dim) {
    CMat a = annihilation(dim);
    CMat id = CMat::Identity(dim, dim);
    CMat ab = Eigen::kroneckerProduct(a, id).eval() *
              Eigen::kroneckerProduct(id, a).eval();   // a b
    CMat g = xi * ab.adjoint() - std::conj(xi) * ab;
    return UnitaryMatrix(expm_antihermitian(g), 2, dim);
}

inline CMat embed_mode_a(const CMat& op, int dim) {
    return Eigen::kroneckerProduct(op, CMat::Identity(dim, dim)).eval();
}

inline CMat embed_mode_b(const CMat& op, int dim) {
    return Eigen::kroneckerProduct(CMat::Identity(dim, dim), op).eval();
}

// Seven real parameters of the effective two-mode Gaussian unitary.
// Serialization order everywhere: [theta_I0, theta_I, theta_I1, theta_I2,
// theta_II0, theta_II, r].
struct GaussianParams7 {
    double theta_I0 = 0.0;
    double theta_I = 0.0;
    double theta_I1 = 0.0;
    double theta_I2 = 0.0;
    double theta_II0 = 0.0;
    double theta_II = 0.0;
    double r = 0.0;

    void validate(double r_max = 2.0) const {
        for (double v : {theta_I0, theta_I, theta_I1, theta_I2, theta_II0, theta_II, r})
            if (!std::isfinite(v))
                throw std::invalid_argument("GaussianParams7: non-finite parameter");
        if (std::abs(r) > r_max)
            throw std::invalid_argument("GaussianParams7: |r| exceeds r_max");
    }
};

// U = U_BS(theta_II) [R_A(theta_II0) S_A(r) R_A(theta_I1) (x) R_B(theta_I2)]
//     U_BS(theta_I) R_A(theta_I0)
inline UnitaryMatrix build_effective_unitary(const GaussianParams7& p, int dim,
                                             double r_max = 2.0) {
    p.validate(r_max);
    CMat local_a = rotation(p.theta_II0, dim).u * squeeze_single(p.r, dim).u *
                   rotation(p.theta_I1, dim).u;
    CMat local_b = rotation(p.theta_I2, dim).u;
    CMat u = beam_splitter(p.theta_II, dim).u *
             Eigen::kroneckerProduct(local_a, local_b).eval() *
             beam_splitter(p.theta_I, dim).u *
             embed_mode_a(rotation(p.theta_I0, dim).u, dim);
    return UnitaryMatrix(std::move(u), 2, dim);
}

// Entanglement-generating form U(theta1, theta2, xi) = U_BS(theta1) S_AB(xi) U_BS(theta2)^dag
inline UnitaryMatrix entangling_unitary(double theta1, double theta2, Complex xi, int dim) {
    for (double v : {theta1, theta2, xi.real(), xi.imag()})
        if (!std::isfinite(v))
            throw std::invalid_argument("entangling_unitary: non-finite parameter");
    CMat u = beam_splitter(theta1, dim).u * two_mode_squeeze(xi, dim).u *
             beam_splitter(theta2, dim).u.adjoint();
    return UnitaryMatrix(std::move(u), 2, dim);
}

} // namespace nge
