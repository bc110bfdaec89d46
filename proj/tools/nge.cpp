// Command-line driver: exposes state generation, witness evaluation, NOON
// thresholds, squeezed-Kerr scans, and the two-copy distillation search as
// batch subcommands with reproducible seeds and JSON/CSV output.
//
// Exit codes: 0 success, 2 validation/usage error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nge/distill.hpp>
#include <nge/dynamics.hpp>
#include <nge/fock.hpp>
#include <nge/gaussian.hpp>
#include <nge/io.hpp>
#include <nge/optimize.hpp>
#include <nge/states.hpp>
#include <nge/witness.hpp>

namespace {

using nge::Json;

void emit_json(const Json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        nge::write_json_file(out_path, j);
}

void emit_csv(const nge::CsvWriter& csv, const std::string& out_path) {
    if (out_path.empty())
        std::cout << csv.str();
    else
        csv.write(out_path);
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("grid: steps must be >= 1");
    std::vector<double> g;
    if (steps == 1) { g.push_back(lo); return g; }
    for (int k = 0; k < steps; ++k)
        g.push_back(lo + (hi - lo) * double(k) / double(steps - 1));
    return g;
}

nge::GateDescriptor parse_gate(const std::string& text) {
    // "name:param[:param]" e.g. two_mode_squeeze:0.5
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(':', pos);
        parts.push_back(text.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (parts.size() < 2)
        throw std::invalid_argument("gate descriptor '" + text + "' needs name:params");
    nge::GateDescriptor g;
    g.name = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) g.params.push_back(std::stod(parts[i]));
    return g;
}

struct OptimizerFlags {
    unsigned long long seed = 1234;
    int starts = 32;
    int max_evals = 2000;
    double obj_tol = 1e-7;
    double r_max = 2.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed for optimizer starts");
        cmd->add_option("--starts", starts, "number of random optimizer starts");
        cmd->add_option("--max-evals", max_evals, "objective evaluations per start");
        cmd->add_option("--obj-tol", obj_tol, "simplex convergence tolerance");
        cmd->add_option("--r-max", r_max, "squeezing box |r| <= r_max");
    }

    nge::OptimizerConfig config() const {
        nge::OptimizerConfig cfg;
        cfg.seed = seed;
        cfg.n_starts = starts;
        cfg.max_evals = max_evals;
        cfg.obj_tol = obj_tol;
        cfg.r_max = r_max;
        return cfg;
    }

    Json to_json() const {
        return Json{{"seed", seed}, {"starts", starts}, {"max_evals", max_evals},
                    {"obj_tol", obj_tol}, {"r_max", r_max}};
    }
};

Json params7_json(const nge::GaussianParams7& p) { return nge::params_to_json(p); }

// ---------------------------------------------------------------- gen-state

struct GenStateArgs {
    int dim = 25;
    double leak_tol = 1e-6;
    std::string out;
    // generator-specific
    int n = 1;
    double r = 0.5, g = 0.2, alpha = 1.0, p = 0.5, xi1 = 0.4, xi2 = -0.4;
    int k = 1;
    std::vector<std::string> gates;
    double chi = 1.0, delta = 0.0, kappa = 1.0, t = 1.0;
    double gamma_a = -1.0, gamma_b = -1.0, gamma = 0.1;
    double dt = 1e-3;
};

void run_gen_state(const std::string& which, const GenStateArgs& a) {
    nge::TruncationPolicy trunc{a.dim, a.leak_tol};
    Json config{{"subcommand", "gen-state"}, {"generator", which}, {"dim", a.dim},
                {"leak_tol", a.leak_tol}};
    Json meta;
    std::optional<nge::PureState> pure;
    std::optional<nge::MixedState> mixed;

    if (which == "noon") {
        pure = nge::noon(a.n, trunc);
        config["n"] = a.n;
    } else if (which == "stmsv") {
        pure = nge::stmsv(a.r, trunc);
        config["r"] = a.r;
    } else if (which == "three-spdc") {
        pure = nge::three_spdc(a.g, trunc);
        config["g"] = a.g;
    } else if (which == "cat") {
        pure = nge::two_mode_cat(a.alpha, trunc);
        config["alpha"] = a.alpha;
    } else if (which == "tmsv-mixture") {
        mixed = nge::tmsv_mixture(a.p, nge::Complex(a.xi1, 0.0), nge::Complex(a.xi2, 0.0), trunc);
        config["p"] = a.p;
        config["xi1"] = a.xi1;
        config["xi2"] = a.xi2;
    } else if (which == "photon-sub") {
        nge::GateProgram prog;
        for (const std::string& s : a.gates) prog.gates.push_back(parse_gate(s));
        pure = nge::photon_subtracted(a.k, prog, trunc);
        config["k"] = a.k;
        config["gates"] = a.gates;
    } else if (which == "sq-kerr" || which == "sq-kerr-lossy") {
        nge::KerrParams kp{a.delta, nge::Complex(a.chi, 0.0), a.kappa};
        nge::CMat h = nge::kerr_hamiltonian(kp, trunc);
        nge::PureState vac = nge::tensor_product(nge::CVec::Unit(a.dim, 0),
                                                 nge::CVec::Unit(a.dim, 0), trunc);
        config["chi"] = a.chi;
        config["delta"] = a.delta;
        config["kappa"] = a.kappa;
        config["t"] = a.t;
        if (which == "sq-kerr") {
            pure = nge::evolve_pure(h, a.t, vac);
            if (nge::leakage(*pure) > a.leak_tol)
                throw std::invalid_argument("gen-state sq-kerr: leakage " +
                                            std::to_string(nge::leakage(*pure)) +
                                            " exceeds leak_tol");
        } else {
            double ga = a.gamma_a >= 0.0 ? a.gamma_a : a.gamma;
            double gb = a.gamma_b >= 0.0 ? a.gamma_b : a.gamma;
            nge::LossParams loss{ga, gb};
            nge::IntegratorConfig icfg;
            icfg.dt = a.dt;
            mixed = nge::lindblad_evolve(h, loss, nge::to_density(vac), a.t, icfg);
            if (nge::leakage(*mixed) > a.leak_tol)
                throw std::invalid_argument("gen-state sq-kerr-lossy: leakage " +
                                            std::to_string(nge::leakage(*mixed)) +
                                            " exceeds leak_tol");
            config["gamma_a"] = ga;
            config["gamma_b"] = gb;
            config["dt"] = a.dt;
        }
    } else {
        throw std::invalid_argument("gen-state: unknown generator " + which);
    }

    meta["config"] = config;
    Json out = pure ? nge::state_to_json(*pure, meta) : nge::state_to_json(*mixed, meta);
    emit_json(out, a.out);
}

void add_gen_state(CLI::App& app, GenStateArgs& a, std::vector<std::function<void()>>& actions) {
    CLI::App* gen = app.add_subcommand("gen-state", "generate a state JSON file");
    gen->require_subcommand(1);

    auto leaf = [&](const std::string& name, const std::string& desc) {
        CLI::App* c = gen->add_subcommand(name, desc);
        c->add_option("--dim", a.dim, "Fock levels per mode");
        c->add_option("--leak-tol", a.leak_tol, "refuse states leaking beyond this");
        c->add_option("--out", a.out, "output path (default: stdout)");
        c->callback([&a, name, &actions] {
            actions.push_back([&a, name] { run_gen_state(name, a); });
        });
        return c;
    };

    leaf("noon", "(|N,0> + |0,N>)/sqrt(2)")->add_option("--n", a.n, "photon number N")->required();
    leaf("stmsv", "superposed two-mode squeezed vacua")
        ->add_option("--r", a.r, "squeezing amplitude")->required();
    leaf("three-spdc", "three-photon SPDC state")
        ->add_option("--g", a.g, "interaction strength")->required();
    leaf("cat", "two-mode cat state")
        ->add_option("--alpha", a.alpha, "coherent amplitude")->required();
    {
        CLI::App* c = leaf("tmsv-mixture", "classical mixture of two TMSVs");
        c->add_option("--p", a.p, "weight of first branch");
        c->add_option("--xi1", a.xi1, "first squeezing");
        c->add_option("--xi2", a.xi2, "second squeezing");
    }
    {
        CLI::App* c = leaf("photon-sub", "photon-subtracted Gaussian state");
        c->add_option("--k", a.k, "photons subtracted from mode A");
        c->add_option("--gate", a.gates,
                      "gate descriptor name:params (repeatable), e.g. two_mode_squeeze:0.5")
            ->required();
    }
    {
        CLI::App* c = leaf("sq-kerr", "pure squeezed-Kerr state e^{-iHt}|0,0>");
        c->add_option("--chi", a.chi, "two-mode squeezing strength");
        c->add_option("--delta", a.delta, "detuning on mode A");
        c->add_option("--kappa", a.kappa, "self-Kerr on mode A");
        c->add_option("--t", a.t, "evolution time");
    }
    {
        CLI::App* c = leaf("sq-kerr-lossy", "squeezed-Kerr state with photon loss");
        c->add_option("--chi", a.chi, "two-mode squeezing strength");
        c->add_option("--delta", a.delta, "detuning on mode A");
        c->add_option("--kappa", a.kappa, "self-Kerr on mode A");
        c->add_option("--t", a.t, "evolution time");
        c->add_option("--gamma", a.gamma, "equal loss rate on both modes");
        c->add_option("--gamma-a", a.gamma_a, "loss rate on mode A (overrides --gamma)");
        c->add_option("--gamma-b", a.gamma_b, "loss rate on mode B (overrides --gamma)");
        c->add_option("--dt", a.dt, "integrator step");
    }
}

// ------------------------------------------------------------------ witness

struct WitnessArgs {
    std::string in;
    std::string out;
    int n = 1;
    OptimizerFlags opt;
};

void run_witness(const std::string& which, const WitnessArgs& a) {
    nge::LoadedState st = nge::state_from_json(nge::read_json_file(a.in));
    Json config{{"subcommand", "witness"}, {"quantity", which}, {"in", a.in},
                {"dim", st.dim()}};
    Json result{{"config", config}};

    if (which == "e") {
        double e = st.is_pure ? nge::witness_E(st.pure) : nge::witness_E(st.mixed);
        result["value"] = e;
    } else if (which == "e-ng") {
        result["config"]["optimizer"] = a.opt.to_json();
        nge::WitnessResult w = st.is_pure
                                   ? nge::witness_ENG(st.pure, a.opt.config())
                                   : nge::witness_ENG(st.mixed, a.opt.config());
        double e = st.is_pure ? nge::witness_E(st.pure) : nge::witness_E(st.mixed);
        result["value"] = w.value;
        result["d"] = w.d;
        result["learning_bound"] = nge::learning_bound(w.d, st.dim());
        result["E"] = e;
        result["best_params"] = params7_json(w.best_params);
        result["evals"] = w.evals;
        result["per_start_values"] = w.per_start_values;
    } else if (which == "noon-f") {
        result["config"]["n"] = a.n;
        result["value"] = nge::noon_witness_f(st.as_mixed(), a.n);
    } else {
        throw std::invalid_argument("witness: unknown quantity " + which);
    }
    emit_json(result, a.out);
}

void add_witness(CLI::App& app, WitnessArgs& a, std::vector<std::function<void()>>& actions) {
    CLI::App* wit = app.add_subcommand("witness", "evaluate entanglement witnesses");
    wit->require_subcommand(1);
    auto leaf = [&](const std::string& name, const std::string& desc, bool with_opt,
                    bool with_n) {
        CLI::App* c = wit->add_subcommand(name, desc);
        c->add_option("--in", a.in, "input state JSON")->required();
        c->add_option("--out", a.out, "output path (default: stdout)");
        if (with_opt) a.opt.attach(c);
        if (with_n) c->add_option("--n", a.n, "NOON photon number")->required();
        c->callback([&a, name, &actions] {
            actions.push_back([&a, name] { run_witness(name, a); });
        });
        return c;
    };
    leaf("e", "trace norm of the partial transpose", false, false);
    leaf("e-ng", "minimum E over the effective Gaussian family", true, false);
    leaf("noon-f", "NOON-type witness f = <NOON|rho|NOON>", false, true);
}

// ------------------------------------------------------------ noon-threshold

struct NoonThresholdArgs {
    int n_min = 1, n_max = 10;
    int dim = 20;
    double leak_tol = 1e-6;
    std::string out;
    OptimizerFlags opt;
};

void run_noon_threshold(const NoonThresholdArgs& a) {
    if (a.n_min < 1 || a.n_max < a.n_min)
        throw std::invalid_argument("noon-threshold: need 1 <= n-min <= n-max");
    nge::TruncationPolicy trunc{a.dim, a.leak_tol};
    Json config{{"subcommand", "noon-threshold"}, {"n_min", a.n_min}, {"n_max", a.n_max},
                {"dim", a.dim}, {"leak_tol", a.leak_tol}, {"optimizer", a.opt.to_json()}};
    nge::CsvWriter csv({"N", "f_G", "f_G_raw", "bound_lower", "bound_upper", "evals"});
    csv.add_comment("config: " + config.dump());
    for (int n = a.n_min; n <= a.n_max; ++n) {
        nge::ThresholdResult th = nge::noon_threshold_fG_detail(n, a.opt.config(), trunc);
        auto [lo, hi] = nge::fG_bounds(n);
        csv.add_row({double(n), th.value, th.raw_best, lo, hi, double(th.evals)});
    }
    emit_csv(csv, a.out);
}

// -------------------------------------------------------------------- scans

struct KerrScanArgs {
    double chi_min = 0.0, chi_max = 2.0;
    int chi_steps = 11;
    double delta_min = 0.0, delta_max = 2.0;
    int delta_steps = 11;
    double t = 1.0, kappa = 1.0;
    int dim = 20;
    double leak_tol = 1e-3;
    std::string out;
    OptimizerFlags opt;
};

void run_kerr_scan(const KerrScanArgs& a) {
    nge::TruncationPolicy trunc{a.dim, a.leak_tol};
    Json config{{"subcommand", "kerr-scan"},
                {"chi", Json::array({a.chi_min, a.chi_max, a.chi_steps})},
                {"delta", Json::array({a.delta_min, a.delta_max, a.delta_steps})},
                {"t", a.t}, {"kappa", a.kappa}, {"dim", a.dim}, {"leak_tol", a.leak_tol},
                {"optimizer", a.opt.to_json()}};
    nge::CsvWriter csv({"chi", "delta", "t", "E", "E_NG", "d", "leakage", "evals"});
    csv.add_comment("config: " + config.dump());

    nge::PureState vac = nge::tensor_product(nge::CVec::Unit(a.dim, 0),
                                             nge::CVec::Unit(a.dim, 0), trunc);
    for (double delta : linear_grid(a.delta_min, a.delta_max, a.delta_steps)) {
        nge::RVec warm;   // chain best params along the chi axis
        for (double chi : linear_grid(a.chi_min, a.chi_max, a.chi_steps)) {
            nge::KerrParams kp{delta, nge::Complex(chi, 0.0), a.kappa};
            nge::PureState psi = nge::evolve_pure(nge::kerr_hamiltonian(kp, trunc), a.t, vac);
            double leak = nge::leakage(psi);
            if (leak > a.leak_tol)
                throw std::runtime_error("kerr-scan: leakage " + std::to_string(leak) +
                                         " at chi=" + std::to_string(chi) +
                                         " delta=" + std::to_string(delta) +
                                         "; increase --dim");
            nge::OptimizerConfig cfg = a.opt.config();
            if (warm.size() == 7) cfg.extra_starts.push_back(warm);
            nge::WitnessResult w = nge::witness_ENG(psi, cfg);
            warm = nge::params_to_vec(w.best_params);
            csv.add_row({chi, delta, a.t, nge::witness_E(psi), w.value, double(w.d), leak,
                         double(w.evals)});
        }
    }
    emit_csv(csv, a.out);
}

struct LossScanArgs {
    std::vector<double> gammas;
    double t_max = 2.0, t_step = 0.1;
    double chi = 1.0, delta = 0.0, kappa = 1.0;
    int dim = 20;
    double dt = 1e-3;
    double leak_tol = 1e-3;
    std::string out;
    OptimizerFlags opt;
};

void run_loss_scan(const LossScanArgs& a) {
    std::vector<double> gammas = a.gammas.empty() ? std::vector<double>{0.0, 0.1, 0.5}
                                                  : a.gammas;
    nge::TruncationPolicy trunc{a.dim, a.leak_tol};
    Json config{{"subcommand", "loss-scan"}, {"gammas", gammas}, {"t_max", a.t_max},
                {"t_step", a.t_step}, {"chi", a.chi}, {"delta", a.delta},
                {"kappa", a.kappa}, {"dim", a.dim}, {"dt", a.dt}, {"leak_tol", a.leak_tol},
                {"optimizer", a.opt.to_json()}};
    nge::CsvWriter csv({"gamma", "t", "E", "E_NG", "d", "leakage", "evals"});
    csv.add_comment("config: " + config.dump());

    std::vector<double> times;
    for (double t = 0.0; t <= a.t_max + 1e-9; t += a.t_step) times.push_back(t);

    nge::KerrParams kp{a.delta, nge::Complex(a.chi, 0.0), a.kappa};
    nge::CMat h = nge::kerr_hamiltonian(kp, trunc);
    nge::PureState vac = nge::tensor_product(nge::CVec::Unit(a.dim, 0),
                                             nge::CVec::Unit(a.dim, 0), trunc);

    for (double gamma : gammas) {
        if (gamma < 0.0) throw std::invalid_argument("loss-scan: gamma must be >= 0");
        nge::RVec warm;
        if (gamma == 0.0) {
            std::vector<nge::PureState> traj = nge::evolve_pure_grid(h, times, vac);
            for (std::size_t i = 0; i < times.size(); ++i) {
                const nge::PureState& psi = traj[i];
                double leak = nge::leakage(psi);
                if (leak > a.leak_tol)
                    throw std::runtime_error("loss-scan: leakage exceeds tolerance at t=" +
                                             std::to_string(times[i]));
                nge::OptimizerConfig cfg = a.opt.config();
                if (warm.size() == 7) cfg.extra_starts.push_back(warm);
                nge::WitnessResult w = nge::witness_ENG(psi, cfg);
                warm = nge::params_to_vec(w.best_params);
                csv.add_row({gamma, times[i], nge::witness_E(psi), w.value, double(w.d),
                             leak, double(w.evals)});
            }
        } else {
            nge::LossParams loss{gamma, gamma};
            nge::IntegratorConfig icfg;
            icfg.dt = a.dt;
            std::vector<nge::MixedState> traj =
                nge::lindblad_evolve_grid(h, loss, nge::to_density(vac), times, icfg);
            for (std::size_t i = 0; i < times.size(); ++i) {
                const nge::MixedState& rho = traj[i];
                double leak = nge::leakage(rho);
                if (leak > a.leak_tol)
                    throw std::runtime_error("loss-scan: leakage exceeds tolerance at t=" +
                                             std::to_string(times[i]));
                nge::OptimizerConfig cfg = a.opt.config();
                if (warm.size() == 7) cfg.extra_starts.push_back(warm);
                nge::WitnessResult w = nge::witness_ENG(rho, cfg);
                warm = nge::params_to_vec(w.best_params);
                csv.add_row({gamma, times[i], nge::witness_E(rho), w.value, double(w.d),
                             leak, double(w.evals)});
            }
        }
    }
    emit_csv(csv, a.out);
}

// ------------------------------------------------------------------ distill

struct DistillArgs {
    std::string in;
    std::string out;
    double m_min = -3.0, m_max = 3.0, m_step = 0.5;
    OptimizerFlags opt;
};

void run_distill(const DistillArgs& a) {
    nge::LoadedState st = nge::state_from_json(nge::read_json_file(a.in));
    nge::MixedState rho = st.as_mixed();
    std::vector<double> m_grid;
    for (double m = a.m_min; m <= a.m_max + 1e-9; m += a.m_step) m_grid.push_back(m);
    Json config{{"subcommand", "distill"}, {"in", a.in}, {"dim", rho.dim()},
                {"m_grid", Json::array({a.m_min, a.m_max, a.m_step})},
                {"optimizer", a.opt.to_json()}};
    nge::DistillationResult r = nge::optimize_distillation(rho, a.opt.config(), m_grid);
    Json out{{"config", config},
             {"E_in", r.e_in},
             {"E_out", r.e_out},
             {"gain", r.gain},
             {"weight", r.weight},
             {"evals", r.evals},
             {"best_params", Json{{"theta1", r.best.theta1}, {"theta2", r.best.theta2},
                                  {"xi", r.best.xi}, {"phi_m", r.best.phi_m}, {"m", r.best.m}}}};
    emit_json(out, a.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-Gaussian entanglement toolkit"};
    app.require_subcommand(1);

    GenStateArgs gen_args;
    WitnessArgs wit_args;
    NoonThresholdArgs noon_args;
    KerrScanArgs kerr_args;
    LossScanArgs loss_args;
    DistillArgs distill_args;
    std::vector<std::function<void()>> actions;

    add_gen_state(app, gen_args, actions);
    add_witness(app, wit_args, actions);

    {
        CLI::App* c = app.add_subcommand("noon-threshold", "f_G over a range of N (CSV)");
        c->add_option("--n-min", noon_args.n_min, "smallest N");
        c->add_option("--n-max", noon_args.n_max, "largest N");
        c->add_option("--dim", noon_args.dim, "Fock levels per mode");
        c->add_option("--leak-tol", noon_args.leak_tol, "optimizer leakage screen");
        c->add_option("--out", noon_args.out, "output path (default: stdout)");
        noon_args.opt.attach(c);
        c->callback([&] { actions.push_back([&] { run_noon_threshold(noon_args); }); });
    }
    {
        CLI::App* c = app.add_subcommand("kerr-scan",
                                         "E and E_NG over a (chi, delta) grid at fixed t (CSV)");
        c->add_option("--chi-min", kerr_args.chi_min, "");
        c->add_option("--chi-max", kerr_args.chi_max, "");
        c->add_option("--chi-steps", kerr_args.chi_steps, "");
        c->add_option("--delta-min", kerr_args.delta_min, "");
        c->add_option("--delta-max", kerr_args.delta_max, "");
        c->add_option("--delta-steps", kerr_args.delta_steps, "");
        c->add_option("--t", kerr_args.t, "evolution time");
        c->add_option("--kappa", kerr_args.kappa, "self-Kerr strength");
        c->add_option("--dim", kerr_args.dim, "Fock levels per mode");
        c->add_option("--leak-tol", kerr_args.leak_tol, "leakage tolerance");
        c->add_option("--out", kerr_args.out, "output path (default: stdout)");
        kerr_args.opt.attach(c);
        c->callback([&] { actions.push_back([&] { run_kerr_scan(kerr_args); }); });
    }
    {
        CLI::App* c = app.add_subcommand("loss-scan",
                                         "E and E_NG vs time for each loss rate (CSV)");
        c->add_option("--gamma", loss_args.gammas, "loss rate (repeatable; default 0, 0.1, 0.5)");
        c->add_option("--t-max", loss_args.t_max, "");
        c->add_option("--t-step", loss_args.t_step, "");
        c->add_option("--chi", loss_args.chi, "two-mode squeezing strength");
        c->add_option("--delta", loss_args.delta, "detuning");
        c->add_option("--kappa", loss_args.kappa, "self-Kerr strength");
        c->add_option("--dim", loss_args.dim, "Fock levels per mode");
        c->add_option("--dt", loss_args.dt, "integrator step");
        c->add_option("--leak-tol", loss_args.leak_tol, "leakage tolerance");
        c->add_option("--out", loss_args.out, "output path (default: stdout)");
        loss_args.opt.starts = 6;   // warm-started scan needs fewer restarts
        loss_args.opt.attach(c);
        c->callback([&] { actions.push_back([&] { run_loss_scan(loss_args); }); });
    }
    {
        CLI::App* c = app.add_subcommand("distill", "two-copy distillation search");
        c->add_option("--in", distill_args.in, "input state JSON")->required();
        c->add_option("--out", distill_args.out, "output path (default: stdout)");
        c->add_option("--m-min", distill_args.m_min, "");
        c->add_option("--m-max", distill_args.m_max, "");
        c->add_option("--m-step", distill_args.m_step, "");
        distill_args.opt.starts = 4;
        distill_args.opt.max_evals = 400;
        distill_args.opt.attach(c);
        c->callback([&] { actions.push_back([&] { run_distill(distill_args); }); });
    }

    try {
        app.parse(argc, argv);
        for (auto& act : actions) act();
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
