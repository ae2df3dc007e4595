// erasure — command-line front end: ensemble simulation, analytic CGF
// curves, exact-propagation oracle tables and the invariant suite.

#include "erasure/lindblad.hpp"
#include "erasure/operators.hpp"
#include "erasure/protocol.hpp"
#include "erasure/slowdrive.hpp"
#include "erasure/stats.hpp"
#include "erasure/trajectories.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "qubit-erasure-fcs 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitValidation = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value experiment description.  Energies are in units of
// eps_tau = 1; temperature follows from beta_eps_tau.
struct ExperimentConfig {
    double alpha = 0.191;
    double beta_eps_tau = 20.0;
    double eps0_ratio = 0.02;
    double gammabar_tau = 250.0;
    int ntraj = 30000;
    std::uint64_t master_seed = 20260826;
    std::string mode = "quantum";
    int n_u = 41;
    int n_threads = 0;
    std::string out_dir = "out";

    double beta() const { return beta_eps_tau; }  // eps_tau == 1
    double temperature() const { return 1.0 / beta(); }

    void validate() const {
        if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
        if (!(beta_eps_tau > 0.0)) throw ConfigError("beta_eps_tau must be positive");
        if (!(eps0_ratio > 0.0 && eps0_ratio < 1.0)) {
            throw ConfigError("eps0_ratio must lie in (0, 1)");
        }
        if (!(gammabar_tau > 0.0)) throw ConfigError("gammabar_tau must be positive");
        if (ntraj < 1) throw ConfigError("ntraj must be >= 1");
        if (mode != "quantum" && mode != "classical") {
            throw ConfigError("mode must be quantum or classical");
        }
        if (n_u < 3) throw ConfigError("n_u must be >= 3");
    }
};

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        // [section] markers are allowed and carry no meaning.
        std::istringstream probe(line);
        probe >> trimmed;
        if (trimmed.empty() || trimmed.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::istringstream key_s(line.substr(0, eq)), val_s(line.substr(eq + 1));
        std::string key, val;
        key_s >> key;
        val_s >> val;
        if (key.empty() || val.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            if (key == "alpha") cfg.alpha = std::stod(val);
            else if (key == "beta_eps_tau") cfg.beta_eps_tau = std::stod(val);
            else if (key == "eps0_ratio") cfg.eps0_ratio = std::stod(val);
            else if (key == "gammabar_tau") cfg.gammabar_tau = std::stod(val);
            else if (key == "ntraj") cfg.ntraj = std::stoi(val);
            else if (key == "master_seed") cfg.master_seed = std::stoull(val);
            else if (key == "mode") cfg.mode = val;
            else if (key == "n_u") cfg.n_u = std::stoi(val);
            else if (key == "n_threads") cfg.n_threads = std::stoi(val);
            else if (key == "out_dir") cfg.out_dir = val;
            else throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad value for " + key);
        }
    }
}

std::string config_header(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "# " << kVersion << "\n"
       << "# alpha = " << cfg.alpha << "\n"
       << "# beta_eps_tau = " << cfg.beta_eps_tau << "\n"
       << "# eps0_ratio = " << cfg.eps0_ratio << "\n"
       << "# gammabar_tau = " << cfg.gammabar_tau << "\n"
       << "# ntraj = " << cfg.ntraj << "\n"
       << "# master_seed = " << cfg.master_seed << "\n"
       << "# mode = " << cfg.mode << "\n"
       << "# n_u = " << cfg.n_u << "\n";
    return os.str();
}

std::ofstream open_csv(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(17);
    out << config_header(cfg);
    return out;
}

// gammabar depends only on the rescaled schedule, so it can be computed at
// tau = 1 and the physical tau chosen to hit the requested gammabar * tau.
erasure::DrivingProtocol make_protocol(const ExperimentConfig& cfg) {
    using namespace erasure;
    const ThetaMode mode = (cfg.mode == "quantum") ? ThetaMode::quantum : ThetaMode::classical;
    const double eps0 = cfg.eps0_ratio;  // eps_tau = 1
    BathModel bath(cfg.alpha, cfg.beta());
    DrivingProtocol unit(eps0, 1.0, 1.0, mode);
    const double gammabar = mean_characteristic_rate(unit, bath);
    return DrivingProtocol(eps0, 1.0, cfg.gammabar_tau / gammabar, mode);
}

std::vector<double> u_grid(const ExperimentConfig& cfg) {
    std::vector<double> u(cfg.n_u);
    for (int i = 0; i < cfg.n_u; ++i) {
        u[i] = cfg.beta() * static_cast<double>(i) / (cfg.n_u - 1);
    }
    return u;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const ExperimentConfig& cfg) {
    using namespace erasure;
    BathModel bath(cfg.alpha, cfg.beta());
    const DrivingProtocol p = make_protocol(cfg);

    auto ensemble = run_ensemble(p, bath, cfg.ntraj, cfg.master_seed, {}, cfg.n_threads);

    auto traj_csv = open_csv(cfg, "trajectories.csv");
    traj_csv << "seed,n_events,heat,excess_heat\n";
    std::vector<double> excess;
    excess.reserve(ensemble.records.size());
    for (const auto& r : ensemble.records) {
        traj_csv << r.seed << ',' << r.events.size() << ',' << r.heat << ','
                 << r.excess_heat << '\n';
        excess.push_back(r.excess_heat);
    }

    const auto hist = stats::build_histogram(excess);
    auto hist_csv = open_csv(cfg, "histogram.csv");
    hist_csv << "bin_lo,bin_hi,count,density\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        hist_csv << hist.edges[i] << ',' << hist.edges[i + 1] << ',' << hist.counts[i]
                 << ',' << hist.density[i] << '\n';
    }

    const auto cum = stats::empirical_cumulants(excess, 1000, cfg.master_seed ^ 0xb007ull);
    auto cum_csv = open_csv(cfg, "cumulants.csv");
    cum_csv << "k1,k2,k3,k4,se1,se2,se3,se4,fano\n"
            << cum.k1 << ',' << cum.k2 << ',' << cum.k3 << ',' << cum.k4 << ',' << cum.se1
            << ',' << cum.se2 << ',' << cum.se3 << ',' << cum.se4 << ',';
    if (cum.fano) cum_csv << *cum.fano;
    cum_csv << '\n';

    const auto rare = stats::rare_event_scan(ensemble.records);
    auto rare_csv = open_csv(cfg, "rare_events.csv");
    rare_csv << "trajectory,event,time,kind,quantum\n";
    for (std::size_t idx : rare.repeated_kind_indices) {
        const auto& ev = ensemble.records[idx].events;
        for (std::size_t j = 0; j < ev.size(); ++j) {
            rare_csv << idx << ',' << j << ',' << ev[j].time << ','
                     << (ev[j].kind == JumpKind::emission ? "emission" : "absorption") << ','
                     << ev[j].quantum << '\n';
        }
    }

    const double landauer = std::log(2.0) / cfg.beta();
    const double rare_fraction =
        static_cast<double>(rare.n_repeated_kind) / static_cast<double>(cfg.ntraj);
    std::cout << "trajectories          : " << cfg.ntraj << " (" << cfg.mode << " mode)\n"
              << "mean excess heat      : " << cum.k1 << "  (" << cum.k1 / landauer
              << " T ln 2, SE " << cum.se1 / landauer << ")\n"
              << "variance              : " << cum.k2 << "\n"
              << "Fano factor (T units) : ";
    if (cum.fano) {
        std::cout << *cum.fano * cfg.beta() << " T\n";
    } else {
        std::cout << "mean not resolved\n";
    }
    std::cout << "rare-event fraction   : " << rare_fraction << "\n"
              << "max |heat| / (T ln 2) : " << rare.max_abs_heat / landauer << "\n"
              << "outputs in            : " << cfg.out_dir << "/\n";
    return kExitOk;
}

int cmd_cgf(const ExperimentConfig& cfg) {
    using namespace erasure;
    BathModel bath(cfg.alpha, cfg.beta());
    const DrivingProtocol p = make_protocol(cfg);

    const auto curve = cgf_curve(p, bath, u_grid(cfg));
    auto csv = open_csv(cfg, "cgf.csv");
    csv << "u,K_total,K_classical,K_coherent\n";
    for (std::size_t i = 0; i < curve.u_grid.size(); ++i) {
        csv << curve.u_grid[i] << ',' << curve.total[i] << ',' << curve.classical[i] << ','
            << curve.coherent[i] << '\n';
    }

    // Cumulant sweep over the x-axis of the paper-style comparison: lower
    // temperatures (larger beta_eps_tau) up to the configured value.
    auto sweep_csv = open_csv(cfg, "cgf_cumulants.csv");
    sweep_csv << "beta_eps_tau,k1_total,k2_total,k3_total,k4_total,"
                 "k1_classical,k2_classical,k3_classical,k4_classical,"
                 "k1_coherent,k2_coherent,k3_coherent,k4_coherent\n";
    const int n_sweep = 10;
    for (int i = 0; i < n_sweep; ++i) {
        const double beta_i =
            1.0 + (cfg.beta_eps_tau - 1.0) * static_cast<double>(i) / (n_sweep - 1);
        ExperimentConfig cfg_i = cfg;
        cfg_i.beta_eps_tau = beta_i;
        BathModel bath_i(cfg_i.alpha, cfg_i.beta());
        const DrivingProtocol p_i = make_protocol(cfg_i);
        const auto kt = extract_cumulants(
            [&](double u) { return cgf_slow_driving(p_i, bath_i, u); }, beta_i);
        const auto kd = extract_cumulants(
            [&](double u) { return cgf_classical(p_i, bath_i, u); }, beta_i);
        const auto kc = extract_cumulants(
            [&](double u) { return cgf_coherent(p_i, bath_i, u); }, beta_i);
        sweep_csv << beta_i;
        for (double v : kt) sweep_csv << ',' << v;
        for (double v : kd) sweep_csv << ',' << v;
        for (double v : kc) sweep_csv << ',' << v;
        sweep_csv << '\n';
    }
    std::cout << "wrote cgf.csv and cgf_cumulants.csv to " << cfg.out_dir << "/\n";
    return kExitOk;
}

int cmd_oracle(const ExperimentConfig& cfg) {
    using namespace erasure;
    BathModel bath(cfg.alpha, cfg.beta());
    const DrivingProtocol p = make_protocol(cfg);

    // Trajectory CGF estimate ln < e^{-u qtilde} > on the same grid.
    auto ensemble = run_ensemble(p, bath, cfg.ntraj, cfg.master_seed, {}, cfg.n_threads);

    auto csv = open_csv(cfg, "oracle.csv");
    csv << "u,K_exact,K_boundary,K_slow,K_trajectory,residual_slow,rel_residual_slow\n";
    for (double u : u_grid(cfg)) {
        const double exact = propagate_fcs(p, bath, u);
        const double boundary = cgf_quasistatic(p, bath, u);
        const double slow = cgf_slow_driving(p, bath, u);
        double acc = 0.0;
        for (const auto& r : ensemble.records) acc += std::exp(-u * r.excess_heat);
        const double traj = std::log(acc / static_cast<double>(cfg.ntraj));
        // The residual against boundary + slow-driving is the O(tau^-2) part.
        const double abs_err = std::abs(exact - boundary - slow);
        const double rel_err = (exact != 0.0) ? abs_err / std::abs(exact) : 0.0;
        csv << u << ',' << exact << ',' << boundary << ',' << slow << ',' << traj << ','
            << abs_err << ',' << rel_err << '\n';
    }

    const auto k_exact =
        extract_cumulants([&](double u) { return propagate_fcs(p, bath, u); }, cfg.beta());
    const auto k_slow =
        extract_cumulants([&](double u) { return cgf_slow_driving(p, bath, u); }, cfg.beta());
    auto kcsv = open_csv(cfg, "oracle_cumulants.csv");
    kcsv << "order,exact,slow_driving,fdr_residual\n";
    for (int i = 0; i < 4; ++i) {
        // FDR residual k1 - (beta/2) k2, meaningful for the classical mode.
        const double fdr = (i == 0) ? k_slow[0] - 0.5 * cfg.beta() * k_slow[1] : 0.0;
        kcsv << (i + 1) << ',' << k_exact[i] << ',' << k_slow[i] << ',';
        if (i == 0) kcsv << fdr;
        kcsv << '\n';
    }
    std::cout << "wrote oracle.csv and oracle_cumulants.csv to " << cfg.out_dir << "/\n";
    return kExitOk;
}

int cmd_validate(const ExperimentConfig& cfg) {
    using namespace erasure;
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        if (!ok) ++failures;
    };

    BathModel bath(cfg.alpha, cfg.beta());
    // Negative-control hook: flips the counting-field reflection point so
    // the Gallavotti-Cohen check must fail.
    const bool flip = std::getenv("ERASURE_VALIDATE_FLIP_SIGN") != nullptr;

    for (const char* mode : {"quantum", "classical"}) {
        ExperimentConfig mc = cfg;
        mc.mode = mode;
        const DrivingProtocol p = make_protocol(mc);

        double max_fixed = 0.0;
        for (int i = 0; i <= 50; ++i) {
            const double t = p.tau() * i / 50.0;
            const auto pi = ops::gibbs_state(hamiltonian_at(p, t), cfg.beta());
            const auto resid = unvectorize(liouvillian(p, bath, t) * vectorize(pi));
            max_fixed = std::max(max_fixed, resid.norm());
        }
        report(std::string("Gibbs fixed point (") + mode + ")", max_fixed < 1e-12);

        double max_sym = 0.0, max_split = 0.0;
        for (double u : {0.1 * cfg.beta(), 0.3 * cfg.beta(), 0.45 * cfg.beta()}) {
            const double mirror = flip ? cfg.beta() + u : cfg.beta() - u;
            max_sym = std::max(max_sym, std::abs(cgf_slow_driving(p, bath, u) -
                                                 cgf_slow_driving(p, bath, mirror)));
            max_split = std::max(max_split,
                                 std::abs(cgf_slow_driving(p, bath, u) -
                                          cgf_classical(p, bath, u) - cgf_coherent(p, bath, u)));
        }
        report(std::string("CGF symmetry K(u) = K(beta-u) (") + mode + ")", max_sym < 1e-9);
        report(std::string("CGF split total = classical + coherent (") + mode + ")",
               max_split < 1e-9);

        double max_drazin = 0.0;
        for (double t : {0.1 * p.tau(), 0.6 * p.tau()}) {
            const auto L = liouvillian(p, bath, t);
            const auto pi = ops::gibbs_state(hamiltonian_at(p, t), cfg.beta());
            const auto Lp = drazin_inverse(L, pi);
            Superoperator P = Superoperator::Zero();
            Eigen::Vector4cd tr_row;
            tr_row << 1, 0, 0, 1;
            P = vectorize(pi) * tr_row.transpose();
            max_drazin = std::max(max_drazin,
                                  ((L * Lp) - (Superoperator::Identity() - P)).norm());
        }
        report(std::string("Drazin identity L L+ = I - P (") + mode + ")", max_drazin < 1e-10);
    }

    {
        // Closed-form covariances against direct quadrature.
        CounterRng rng(cfg.master_seed, 0xc0f);
        double max_err = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double theta = (2.0 * rng.uniform() - 1.0) * M_PI;
            const double eps = 0.2 + 1.3 * rng.uniform();
            const double beta = 0.5 + 10.0 * rng.uniform();
            const double u = beta * rng.uniform();
            const auto cf = qubit_covariances_closed_form(theta, eps, beta, u);
            const ops::Matrix H =
                0.5 * eps * (std::cos(theta) * ops::sigma_z() + std::sin(theta) * ops::sigma_x());
            const auto pi = ops::gibbs_state(H, beta);
            auto avg = [&](const ops::Matrix& A, const ops::Matrix& B) {
                return double_average(
                    [&](double y) { return quantum_covariance(A, B, pi, y).real(); }, u,
                    1.0 / beta);
            };
            max_err = std::max(max_err, std::abs(cf.xx - avg(ops::sigma_x(), ops::sigma_x())));
            max_err = std::max(max_err, std::abs(cf.xz - avg(ops::sigma_x(), ops::sigma_z())));
            max_err = std::max(max_err, std::abs(cf.zz - avg(ops::sigma_z(), ops::sigma_z())));
        }
        report("closed-form covariances vs quadrature", max_err < 1e-8);
    }

    {
        ExperimentConfig qc = cfg;
        qc.mode = "quantum";
        const DrivingProtocol p = make_protocol(qc);
        const auto kc = extract_cumulants(
            [&](double u) { return cgf_coherent(p, bath, u); }, cfg.beta());
        bool ok = true;
        for (double v : kc) ok = ok && (v >= -1e-10);
        report("coherent cumulants non-negative", ok);

        const double ratio = slow_driving_ratio(p, bath);
        if (ratio > 0.2) {
            std::cerr << "warning: max v_t/gamma_t = " << ratio
                      << "; slow-driving expansion is questionable\n";
        }
        report("slow-driving scale separation evaluated", true);
    }

    if (failures > 0) {
        std::cerr << failures << " validation check(s) failed\n";
        return kExitValidation;
    }
    std::cout << "all validation checks passed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-time erasure heat statistics for a driven damped qubit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ExperimentConfig cfg;
    std::string config_path;
    std::string command;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--mode", cfg.mode, "quantum | classical");
        sub->add_option("--seed", cfg.master_seed, "master seed");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--ntraj", cfg.ntraj, "number of trajectories");
        sub->add_option("--gammabar-tau", cfg.gammabar_tau, "protocol duration in 1/gammabar");
        sub->add_option("--beta-eps-tau", cfg.beta_eps_tau, "final gap in units of k_B T");
        sub->add_option("--alpha", cfg.alpha, "bath coupling strength");
        sub->add_option("--eps0-ratio", cfg.eps0_ratio, "initial gap over final gap");
        sub->add_option("--n-u", cfg.n_u, "counting-field grid size");
        sub->add_option("--threads", cfg.n_threads, "worker threads (0 = hardware)");
        sub->callback([&, sub]() { command = sub->get_name(); });
    };
    for (const char* name : {"simulate", "cgf", "oracle", "validate"}) {
        add_common(app.add_subcommand(name));
    }

    try {
        // Parse twice so a config file provides defaults that explicit
        // command-line flags still override.
        app.parse(argc, argv);
        if (!config_path.empty()) {
            ExperimentConfig from_file;
            load_config_file(config_path, from_file);
            cfg = from_file;
            app.clear();
            app.parse(argc, argv);
        }
        cfg.validate();
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (command == "simulate") return cmd_simulate(cfg);
        if (command == "cgf") return cmd_cgf(cfg);
        if (command == "oracle") return cmd_oracle(cfg);
        if (command == "validate") return cmd_validate(cfg);
        std::cerr << "no subcommand selected\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
