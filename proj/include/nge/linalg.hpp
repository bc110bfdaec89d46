#pragma once

// Dense complex linear algebra helpers shared by every module: Hermitian
// eigensolves, the anti-Hermitian matrix exponential used to build truncated
// Gaussian gates, and small defect/validation utilities.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nge {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Largest entry magnitude; zero for empty matrices.
inline double max_abs(const CMat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// || M - M^dag ||_max
inline double hermiticity_defect(const CMat& m) {
    return max_abs(m - m.adjoint().eval());
}

// || U^dag U - I ||_max
inline double unitarity_defect(const CMat& u) {
    CMat g = u.adjoint() * u;
    g.diagonal().array() -= 1.0;
    return max_abs(g);
}

// (M + M^dag)/2, evaluated without aliasing.
inline CMat symmetrize(const CMat& m) {
    CMat adj = m.adjoint();
    return 0.5 * (m + adj);
}

struct HermitianEigen {
    RVec values;  // ascending
    CMat vectors; // columns, orthonormal
};

// Eigenvalues of a Hermitian matrix, ascending.  The input is symmetrized
// first so that roundoff-level asymmetry cannot push the solver off the
// Hermitian branch.
inline RVec hermitian_eigenvalues(const CMat& h) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("hermitian_eigenvalues: matrix not square");
    Eigen::SelfAdjointEigenSolver<CMat> es(symmetrize(h), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
    return es.eigenvalues();
}

inline HermitianEigen hermitian_eigensolve(const CMat& h) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("hermitian_eigensolve: matrix not square");
    Eigen::SelfAdjointEigenSolver<CMat> es(symmetrize(h));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigensolve: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

// exp(G) for anti-Hermitian G via the eigendecomposition of the Hermitian
// matrix iG: exp(G) = V diag(exp(-i w)) V^dag.  This route is exactly
// unitary on the truncated space up to roundoff, which is what the gate
// builders rely on; generic scaling-and-squaring would not guarantee that.
inline CMat expm_antihermitian(const CMat& g, double defect_tol = 1e-10) {
    if (g.rows() != g.cols())
        throw std::invalid_argument("expm_antihermitian: matrix not square");
    double defect = max_abs(g + g.adjoint().eval());
    if (defect > defect_tol)
        throw std::invalid_argument(
            "expm_antihermitian: generator not anti-Hermitian, defect=" +
            std::to_string(defect));
    HermitianEigen eig = hermitian_eigensolve(Complex(0.0, 1.0) * g);
    CVec phases(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        phases[k] = std::exp(Complex(0.0, -eig.values[k]));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

} // namespace nge
