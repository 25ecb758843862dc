#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dotforge/config.hpp"
#include "dotforge/dipole.hpp"
#include "dotforge/dynamics.hpp"
#include "dotforge/sweeps.hpp"
#include "dotforge/wells1d.hpp"

namespace {

using namespace dotforge;
using config::Config;
using config::Table;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_nonconverged = 3;

struct GlobalArgs {
    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    int threads = 0;
    double tol = 0;
    bool print_config = false;
    std::vector<std::string> overrides;
};

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("DOTFORGE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

void emit(const GlobalArgs& g, const std::string& payload) {
    if (g.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(g.out_path, std::ios::binary);
    if (!out) throw config::ConfigError("cannot open output file '" + g.out_path + "'");
    out << payload;
}

void emit_table(const GlobalArgs& g, const Table& t) {
    emit(g, g.format == "json" ? t.to_json() : t.to_csv());
}

Config load_config(const GlobalArgs& g) {
    Config cfg = g.config_path.empty() ? Config{} : Config::parse_file(g.config_path);
    for (const auto& ov : g.overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw config::ConfigError("--set expects section.key=value, got '" + ov + "'");
        cfg.set_override(ov.substr(0, eq), ov.substr(eq + 1));
    }
    return cfg;
}

sweeps::Engine engine_for(const Config& cfg, const GlobalArgs& g) {
    auto eng = sweeps::engine_from(cfg, resolve_threads(g.threads));
    if (g.tol > 0) eng.kspace.rel_tol = g.tol;
    eng.kspace.threads = eng.threads;
    return eng;
}

int cmd_wells(const GlobalArgs& g) {
    Config cfg = load_config(g);
    double width = cfg.get_double("well", "width_nm", 4.0);
    double depth = cfg.get_double("well", "depth_meV", 500.0);
    double mass = cfg.get_double("well", "mass_m0", 0.06);
    double box = cfg.get_double("well", "box_nm", 10.0 * width);
    int n_unbound = cfg.get_int("well", "n_unbound", 4);
    if (!(width > 0)) throw config::ConfigError("config: [well] width_nm must be > 0");
    if (!(depth > 0)) throw config::ConfigError("config: [well] depth_meV must be > 0");
    if (!(mass > 0)) throw config::ConfigError("config: [well] mass_m0 must be > 0");
    if (!(box > width)) throw config::ConfigError("config: [well] box_nm must exceed width_nm");
    if (n_unbound < 0) throw config::ConfigError("config: [well] n_unbound must be >= 0");
    cfg.reject_unknown();

    wells1d::Well1DParams p{width, depth, mass, box};
    auto states = wells1d::solve_bound(p);
    if (n_unbound > 0) {
        auto unb = wells1d::solve_unbound(p, n_unbound);
        states.insert(states.end(), unb.begin(), unb.end());
    }
    Table t;
    t.columns = {"n", "parity", "kind", "energy_meV"};
    for (size_t i = 0; i < states.size(); ++i)
        t.add_row({double(i + 1),
                   std::string(states[i].parity == wells1d::Parity::even ? "even" : "odd"),
                   std::string(states[i].kind == wells1d::Kind::bound ? "bound" : "unbound"),
                   states[i].energy});
    emit_table(g, t);
    if (g.print_config) std::cerr << cfg.effective();
    return exit_ok;
}

int cmd_figure(const GlobalArgs& g, const std::string& name) {
    Config cfg = load_config(g);
    auto eng = engine_for(cfg, g);
    auto result = sweeps::figure(name, cfg, eng);
    emit_table(g, result.table);
    if (g.print_config) std::cerr << cfg.effective();
    if (!result.converged) {
        std::cerr << "warning: some quadratures did not reach the requested tolerance; "
                     "partial results were written\n";
        return exit_nonconverged;
    }
    return exit_ok;
}

int cmd_design(const GlobalArgs& g, bool with_full) {
    Config cfg = load_config(g);
    auto eng = engine_for(cfg, g);
    MoleculeConfig mol = sweeps::molecule_from(cfg);
    auto rep = sweeps::design(mol, eng, with_full);
    emit(g, rep.to_json(cfg.effective()));
    if (g.print_config) std::cerr << cfg.effective();
    return rep.converged ? exit_ok : exit_nonconverged;
}

dynamics::State4 parse_start(const std::string& s) {
    dynamics::State4 psi = dynamics::State4::Zero();
    if (s == "00") psi(0) = 1;
    else if (s == "01") psi(1) = 1;
    else if (s == "10") psi(2) = 1;
    else if (s == "11") psi(3) = 1;
    else if (s == "hadamard") psi << 0.5, 0.5, 0.5, 0.5;
    else throw config::ConfigError("config: [dynamics] start must be 00|01|10|11|hadamard");
    return psi;
}

int cmd_dynamics(const GlobalArgs& g) {
    Config cfg = load_config(g);
    std::string protocol = cfg.get_string("dynamics", "protocol", "scheme1");
    double V_F = cfg.get_double("dynamics", "V_F_meV", 0.45);
    double V_XX = cfg.get_double("dynamics", "V_XX_meV", 0.0);
    double omega1 = cfg.get_double("dynamics", "omega1_meV", 0.0);
    double omega2 = cfg.get_double("dynamics", "omega2_meV", 0.0);
    double dt = cfg.get_double("dynamics", "dt_ps", 0.0);

    qubits::TwoQubitSystem sys{0.0, omega1, omega2, V_F, V_XX};
    dynamics::Trajectory traj;

    if (protocol == "scheme1") {
        double Delta0 = cfg.get_double("dynamics", "Delta0_meV", 0.0);
        double hold = cfg.get_double("dynamics", "hold_ps",
                                     constants::pi * constants::hbar / (4.0 * V_F));
        double trail = cfg.get_double("dynamics", "trail_ps", 20.0);
        cfg.reject_unknown();
        if (dt <= 0) dt = 0.02 * constants::hbar / (std::abs(V_F) + std::abs(Delta0) + 20.0 + 1e-3);
        traj = dynamics::forster_switch_protocol(V_F, Delta0, hold, trail, dt).trajectory;
    } else if (protocol == "cnot") {
        double Omega = cfg.get_double("dynamics", "Omega_meV", V_XX > 0 ? V_XX / 20.0 : 0.5);
        int control = cfg.get_int("dynamics", "control", 1);
        std::string start = cfg.get_string("dynamics", "start", "10");
        cfg.reject_unknown();
        auto eig = qubits::eigensystem(sys);
        dynamics::DriveSpec drive{control == 1 ? eig.eps12_exact : eig.eps21_exact, Omega, 0.0,
                                  {1, 1, 1, 1}};
        double scale = std::abs(V_XX) + std::abs(sys.delta0()) + std::abs(V_F) + Omega + 1e-3;
        if (dt <= 0) dt = 0.05 * constants::hbar / scale;
        double duration = constants::pi * constants::hbar / Omega;
        traj = dynamics::evolve(parse_start(start), {{duration, sys, drive}}, dt);
    } else if (protocol == "hadamard") {
        double wait = cfg.get_double("dynamics", "wait_ps",
                                     V_XX != 0 ? constants::pi * constants::hbar / std::abs(V_XX)
                                               : 1.0);
        cfg.reject_unknown();
        sys.V_F = 0.0;
        double scale = std::abs(V_XX) + std::abs(omega1) + std::abs(omega2) + 1e-3;
        if (dt <= 0) dt = 0.05 * constants::hbar / scale;
        traj = dynamics::hadamard_wait_protocol(sys, wait, dt).trajectory;
    } else if (protocol == "free") {
        double duration = cfg.get_double("dynamics", "duration_ps", 10.0);
        std::string start = cfg.get_string("dynamics", "start", "10");
        cfg.reject_unknown();
        double scale = std::abs(V_XX) + std::abs(omega1) + std::abs(omega2) + std::abs(V_F) + 1e-3;
        if (dt <= 0) dt = 0.05 * constants::hbar / scale;
        traj = dynamics::evolve(parse_start(start), {{duration, sys, std::nullopt}}, dt);
    } else {
        throw config::ConfigError("config: [dynamics] protocol must be scheme1|cnot|hadamard|free");
    }

    Table t;
    t.columns = {"t_ps", "re_00", "im_00", "re_01", "im_01", "re_10", "im_10",
                 "re_11", "im_11", "P00", "P01", "P10", "P11", "concurrence"};
    for (const auto& p : traj.points) {
        t.add_row({p.t, p.psi(0).real(), p.psi(0).imag(), p.psi(1).real(), p.psi(1).imag(),
                   p.psi(2).real(), p.psi(2).imag(), p.psi(3).real(), p.psi(3).imag(),
                   std::norm(p.psi(0)), std::norm(p.psi(1)), std::norm(p.psi(2)),
                   std::norm(p.psi(3)), dynamics::concurrence(p.psi)});
    }
    emit_table(g, t);
    if (g.print_config) std::cerr << cfg.effective();
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dotforge: coupled quantum-dot electrostatics and optical gate simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalArgs g;
    app.add_option("--config", g.config_path, "INI configuration file");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out_path, "output path (default stdout)");
    app.add_option("--threads", g.threads, "worker threads (env DOTFORGE_THREADS as fallback)");
    app.add_option("--tol", g.tol, "relative tolerance for K-space quadratures");
    app.add_flag("--print-config", g.print_config, "emit the merged effective configuration on stderr");
    app.add_option("--set", g.overrides, "override a config value: section.key=value")
        ->take_all();

    auto* wells = app.add_subcommand("wells", "1D finite-well levels ([well] section)");
    std::string figure_name;
    auto* figure = app.add_subcommand("figure", "named parameter sweep dataset");
    figure->add_option("name", figure_name, "dataset name (see --list)")->required(false);
    bool list_figures = false;
    figure->add_flag("--list", list_figures, "list available datasets");
    bool with_full = false;
    auto* design = app.add_subcommand("design", "end-to-end coupling report for a dot pair");
    design->add_flag("--full-forster", with_full, "also run the full K-space Forster integral");
    auto* dyn = app.add_subcommand("dynamics", "simulate an entanglement protocol ([dynamics])");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (wells->parsed()) return cmd_wells(g);
        if (figure->parsed()) {
            if (list_figures) {
                for (const auto& n : dotforge::sweeps::figure_names())
                    std::cout << n << ": " << dotforge::sweeps::figure_description(n) << "\n";
                return exit_ok;
            }
            if (figure_name.empty()) {
                std::string msg = "figure: missing dataset name; available:";
                for (const auto& n : dotforge::sweeps::figure_names()) msg += " " + n;
                throw dotforge::config::ConfigError(msg);
            }
            return cmd_figure(g, figure_name);
        }
        if (design->parsed()) return cmd_design(g, with_full);
        if (dyn->parsed()) return cmd_dynamics(g);
    } catch (const dotforge::config::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_nonconverged;
    }
    return exit_ok;
}
