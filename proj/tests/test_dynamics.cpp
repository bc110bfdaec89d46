#include <catch2/catch_amalgamated.hpp>

#include <nge/dynamics.hpp>
#include <nge/states.hpp>
#include <nge/witness.hpp>

using namespace nge;

namespace {

PureState vacuum(const TruncationPolicy& t) {
    return tensor_product(CVec::Unit(t.dim_per_mode, 0), CVec::Unit(t.dim_per_mode, 0), t);
}

} // namespace

TEST_CASE("kerr_hamiltonian structure", "[dynamics]") {
    TruncationPolicy t{6, 1e-2};
    CHECK(max_abs(kerr_hamiltonian(KerrParams{}, t)) == 0.0);

    CMat h_det = kerr_hamiltonian(KerrParams{1.0, Complex(0.0), 0.0}, t);
    for (int na = 0; na < 6; ++na)
        for (int nb = 0; nb < 6; ++nb)
            CHECK(h_det(pair_index(na, nb, 6), pair_index(na, nb, 6)).real() ==
                  Catch::Approx(double(na)));

    CMat h = kerr_hamiltonian(KerrParams{0.0, Complex(1.0), 1.0}, t);
    CHECK(hermiticity_defect(h) < 1e-12);
    for (int na = 0; na + 1 < 6; ++na)
        for (int nb = 0; nb + 1 < 6; ++nb)
            CHECK(h(pair_index(na + 1, nb + 1, 6), pair_index(na, nb, 6)).real() ==
                  Catch::Approx(std::sqrt(double(na + 1) * double(nb + 1))));
    // self-Kerr enters with a minus sign: diagonal -K n_a (n_a - 1)
    CHECK(h(pair_index(3, 0, 6), pair_index(3, 0, 6)).real() == Catch::Approx(-6.0));
}

TEST_CASE("evolve_pure conserves what it should", "[dynamics][property]") {
    TruncationPolicy t{16, 1e-2};
    CMat h = kerr_hamiltonian(KerrParams{0.0, Complex(1.0), 1.0}, t);
    PureState psi0 = vacuum(t);

    CHECK(max_abs(evolve_pure(h, 0.0, psi0).coeffs - psi0.coeffs) < 1e-13);

    std::vector<double> times{0.5, 1.0, 1.5, 2.0};
    std::vector<PureState> traj = evolve_pure_grid(h, times, psi0);
    for (const PureState& psi : traj) {
        CHECK(std::abs(psi.coeffs.squaredNorm() - 1.0) < 1e-10);
        CVec v = psi.flat();
        double energy = (v.adjoint() * h * v)(0).real();
        CHECK(std::abs(energy - 0.0) < 1e-8);   // <H> at t=0 is 0 for vacuum
    }
}

TEST_CASE("closed-system limit: K=0 evolution is Gaussian", "[dynamics]") {
    TruncationPolicy t{20, 1e-6};
    CMat h = kerr_hamiltonian(KerrParams{0.0, Complex(0.5), 0.0}, t);
    PureState psi = evolve_pure(h, 0.6, vacuum(t));
    OptimizerConfig cfg;
    cfg.n_starts = 8;
    cfg.seed = 5;
    WitnessResult w = witness_ENG(psi, cfg);
    CHECK(w.value <= 1.0 + 1e-3);
}

TEST_CASE("lindblad: closed-system limit matches evolve_pure", "[dynamics]") {
    TruncationPolicy t{10, 1e-2};
    CMat h = kerr_hamiltonian(KerrParams{0.0, Complex(1.0), 1.0}, t);
    PureState psi0 = vacuum(t);
    IntegratorConfig cfg;
    MixedState rho = lindblad_evolve(h, LossParams{0.0, 0.0}, to_density(psi0), 1.0, cfg);
    CHECK(max_abs(rho.rho - to_density(evolve_pure(h, 1.0, psi0)).rho) < 1e-6);
}

TEST_CASE("lindblad: amplitude-damping analytic solution", "[dynamics][oracle]") {
    TruncationPolicy t{6, 1e-2};
    CMat h = kerr_hamiltonian(KerrParams{}, t);
    PureState one = tensor_product(CVec::Unit(6, 1), CVec::Unit(6, 0), t);
    CMat a = annihilation(6);
    CMat n_a = embed_mode_a((a.adjoint() * a).eval(), 6);

    IntegratorConfig cfg;
    std::vector<double> times{0.25, 0.5, 1.0, 2.0};
    std::vector<MixedState> traj =
        lindblad_evolve_grid(h, LossParams{0.5, 0.0}, to_density(one), times, cfg);
    for (std::size_t i = 0; i < times.size(); ++i) {
        double mean_n = (n_a * traj[i].rho).trace().real();
        CHECK(std::abs(mean_n - std::exp(-0.5 * times[i])) < 1e-6);
    }
}

TEST_CASE("lindblad: trace, Hermiticity, positivity", "[dynamics][property]") {
    TruncationPolicy t{10, 1e-2};
    CMat h = kerr_hamiltonian(KerrParams{0.3, Complex(1.0), 1.0}, t);
    IntegratorConfig cfg;
    MixedState rho =
        lindblad_evolve(h, LossParams{0.2, 0.2}, to_density(vacuum(t)), 1.5, cfg);
    CHECK(std::abs(rho.rho.trace().real() - 1.0) < 1e-8);
    CHECK(hermiticity_defect(rho.rho) < 1e-14);   // exact by per-step Hermitization
    CHECK(hermitian_eigenvalues(rho.rho).minCoeff() > -1e-6);
}

TEST_CASE("lindblad: RK4 order", "[dynamics][property]") {
    TruncationPolicy t{6, 1e-2};
    CMat h = kerr_hamiltonian(KerrParams{0.0, Complex(1.0), 1.0}, t);
    MixedState rho0 = to_density(vacuum(t));
    LossParams loss{0.3, 0.3};

    auto run = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        return lindblad_evolve(h, loss, rho0, 1.0, cfg).rho;
    };
    CMat coarse = run(0.04);
    CMat mid = run(0.02);
    CMat fine = run(0.01);
    double e1 = max_abs(coarse - mid);
    double e2 = max_abs(mid - fine);
    // fourth order: halving dt should shrink the successive difference ~16x
    CHECK(e2 < e1 / 8.0);
    CHECK(e2 > e1 / 64.0);
}

TEST_CASE("lindblad input validation", "[dynamics]") {
    TruncationPolicy t{6, 1e-2};
    CMat h = kerr_hamiltonian(KerrParams{}, t);
    MixedState rho0 = to_density(vacuum(t));
    CHECK_THROWS_AS(lindblad_evolve_grid(h, LossParams{-0.1, 0.0}, rho0, {1.0},
                                         IntegratorConfig{}),
                    std::invalid_argument);
    IntegratorConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(lindblad_evolve(h, LossParams{}, rho0, 1.0, bad), std::invalid_argument);
    CHECK_THROWS_AS(lindblad_evolve_grid(h, LossParams{}, rho0, {1.0, 0.5},
                                         IntegratorConfig{}),
                    std::invalid_argument);
}
