#pragma once

// Generators for the named two-mode states: NOON, superposed TMSV, 3-SPDC,
// two-mode cat, classical TMSV mixtures, and photon-subtracted pure Gaussian
// states.  Generators refuse (throw) whenever the requested state would leak
// past the truncation budget rather than silently renormalizing away the
// tail.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fock.hpp"
#include "gaussian.hpp"
#include "linalg.hpp"

namespace nge {

namespace detail {

inline void check_leakage(double leak, double leak_tol, const char* who) {
    if (leak > leak_tol)
        throw std::invalid_argument(std::string(who) + ": leakage " +
                                    std::to_string(leak) + " exceeds leak_tol " +
                                    std::to_string(leak_tol) +
                                    " — increase dim_per_mode");
}

inline PureState normalized_pure(CMat coeffs, const TruncationPolicy& trunc) {
    PureState out;
    out.trunc = trunc;
    out.coeffs = std::move(coeffs);
    out.coeffs /= std::sqrt(out.coeffs.squaredNorm());
    return out;
}

} // namespace detail

// (|N,0> + |0,N>)/sqrt(2)
inline PureState noon(int n, const TruncationPolicy& trunc) {
    trunc.validate();
    if (n < 1 || n > trunc.dim_per_mode - 1)
        throw std::invalid_argument("noon: N must satisfy 1 <= N <= D-1");
    PureState out;
    out.trunc = trunc;
    out.coeffs = CMat::Zero(trunc.dim_per_mode, trunc.dim_per_mode);
    out.coeffs(n, 0) = 1.0 / std::sqrt(2.0);
    out.coeffs(0, n) = 1.0 / std::sqrt(2.0);
    return out;
}

inline PureState tmsv(Complex xi, const TruncationPolicy& trunc) {
    trunc.validate();
    PureState branch = apply_unitary(two_mode_squeeze(xi, trunc.dim_per_mode).u,
                                     tensor_product(CVec::Unit(trunc.dim_per_mode, 0),
                                                    CVec::Unit(trunc.dim_per_mode, 0), trunc));
    detail::check_leakage(leakage(branch), trunc.leak_tol, "tmsv");
    return branch;
}

// c (S_AB(r) + S_AB(-r)) |0,0>: only even |2n,2n> components survive.
inline PureState stmsv(double r, const TruncationPolicy& trunc) {
    trunc.validate();
    PureState plus = tmsv(Complex(r, 0.0), trunc);
    PureState minus = tmsv(Complex(-r, 0.0), trunc);
    PureState out = detail::normalized_pure(plus.coeffs + minus.coeffs, trunc);
    detail::check_leakage(leakage(out), trunc.leak_tol, "stmsv");
    return out;
}

// exp(g (a^dag b^dag^2 - a b^2)) |0,0>: support on the |n,2n> ladder.
inline PureState three_spdc(double g, const TruncationPolicy& trunc) {
    trunc.validate();
    if (!std::isfinite(g)) throw std::invalid_argument("three_spdc: non-finite g");
    const int d = trunc.dim_per_mode;
    CMat a = annihilation(d);
    CMat ab2 = embed_mode_a(a, d) * embed_mode_b(a * a, d);   // a b^2
    CMat gen = g * (ab2.adjoint() - ab2).eval();
    PureState out = apply_unitary(expm_antihermitian(gen),
                                  tensor_product(CVec::Unit(d, 0), CVec::Unit(d, 0), trunc));
    detail::check_leakage(leakage(out), trunc.leak_tol, "three_spdc");
    return out;
}

inline CVec coherent_vector(Complex alpha, int dim) {
    CVec vac = CVec::Unit(dim, 0);
    return displacement(alpha, dim).u * vac;
}

// c (|alpha,alpha> + |-alpha,-alpha>), c = [2(1+e^{-4 alpha^2})]^{-1/2}
inline PureState two_mode_cat(double alpha, const TruncationPolicy& trunc) {
    trunc.validate();
    if (!std::isfinite(alpha)) throw std::invalid_argument("two_mode_cat: non-finite alpha");
    const int d = trunc.dim_per_mode;
    CVec plus = coherent_vector(Complex(alpha, 0.0), d);
    CVec minus = coherent_vector(Complex(-alpha, 0.0), d);
    CMat coeffs = plus * plus.transpose() + minus * minus.transpose();
    PureState out = detail::normalized_pure(std::move(coeffs), trunc);
    detail::check_leakage(leakage(out), trunc.leak_tol, "two_mode_cat");
    return out;
}

// p |TMSV(xi1)><TMSV(xi1)| + (1-p) |TMSV(xi2)><TMSV(xi2)|
inline MixedState tmsv_mixture(double p, Complex xi1, Complex xi2,
                               const TruncationPolicy& trunc) {
    trunc.validate();
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("tmsv_mixture: p must lie in [0,1]");
    PureState s1 = tmsv(xi1, trunc);
    PureState s2 = tmsv(xi2, trunc);
    CVec v1 = s1.flat(), v2 = s2.flat();
    MixedState out;
    out.trunc = trunc;
    out.rho = p * (v1 * v1.adjoint()) + (1.0 - p) * (v2 * v2.adjoint());
    return out;
}

// User-specified composition of Gaussian primitives, applied right-to-left
// (the first descriptor in the list acts first).  This is the extensibility
// point for "pure two-mode Gaussian state" inputs to photon subtraction.
struct GateDescriptor {
    std::string name;                 // rotation_a|rotation_b|squeeze_a|squeeze_b|
                                      // displace_a|displace_b|beam_splitter|two_mode_squeeze
    std::vector<double> params;       // 1 real, or 2 reals for complex (re, im)
};

struct GateProgram {
    std::vector<GateDescriptor> gates;
};

inline CMat compile_program(const GateProgram& prog, int dim) {
    auto real1 = [](const GateDescriptor& g) {
        if (g.params.size() != 1)
            throw std::invalid_argument("compile_program: gate '" + g.name +
                                        "' expects 1 real parameter");
        return g.params[0];
    };
    auto complex1 = [](const GateDescriptor& g) {
        if (g.params.size() == 1) return Complex(g.params[0], 0.0);
        if (g.params.size() == 2) return Complex(g.params[0], g.params[1]);
        throw std::invalid_argument("compile_program: gate '" + g.name +
                                    "' expects (re[, im]) parameters");
    };
    CMat u = CMat::Identity(Eigen::Index(dim) * dim, Eigen::Index(dim) * dim);
    for (const GateDescriptor& g : prog.gates) {
        CMat factor;
        if (g.name == "rotation_a")
            factor = embed_mode_a(rotation(real1(g), dim).u, dim);
        else if (g.name == "rotation_b")
            factor = embed_mode_b(rotation(real1(g), dim).u, dim);
        else if (g.name == "squeeze_a")
            factor = embed_mode_a(squeeze_single(real1(g), dim).u, dim);
        else if (g.name == "squeeze_b")
            factor = embed_mode_b(squeeze_single(real1(g), dim).u, dim);
        else if (g.name == "displace_a")
            factor = embed_mode_a(displacement(complex1(g), dim).u, dim);
        else if (g.name == "displace_b")
            factor = embed_mode_b(displacement(complex1(g), dim).u, dim);
        else if (g.name == "beam_splitter")
            factor = beam_splitter(real1(g), dim).u;
        else if (g.name == "two_mode_squeeze")
            factor = two_mode_squeeze(complex1(g), dim).u;
        else
            throw std::invalid_argument("compile_program: unknown gate '" + g.name + "'");
        u = factor * u;   // later descriptors act after earlier ones
    }
    return u;
}

// Normalized a^k U'_G |0,0> with U'_G given as a gate program on vacuum.
inline PureState photon_subtracted(int k, const GateProgram& prog,
                                   const TruncationPolicy& trunc) {
    trunc.validate();
    if (k < 0) throw std::invalid_argument("photon_subtracted: k must be >= 0");
    if (prog.gates.empty())
        throw std::invalid_argument("photon_subtracted: empty gate program");
    const int d = trunc.dim_per_mode;
    PureState base = apply_unitary(compile_program(prog, d),
                                   tensor_product(CVec::Unit(d, 0), CVec::Unit(d, 0), trunc));
    CMat coeffs = base.coeffs;
    CMat a = annihilation(d);
    for (int j = 0; j < k; ++j) coeffs = a * coeffs;   // a acts on the mode-A index
    double norm2 = coeffs.squaredNorm();
    if (norm2 <= 1e-12)
        throw std::invalid_argument("photon_subtracted: subtraction annihilated the state");
    return detail::normalized_pure(std::move(coeffs), trunc);
}

} // namespace nge
