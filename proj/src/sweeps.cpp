#include "dotforge/sweeps.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "json.hpp"

#include "dotforge/dipole.hpp"
#include "dotforge/parallel.hpp"
#include "dotforge/qubits.hpp"

namespace dotforge::sweeps {

using config::Config;
using config::Table;

MaterialParams material_from(const Config& cfg) {
    MaterialParams m;
    m.m_e_eff = cfg.get_double("material", "m_e_eff", m.m_e_eff);
    m.m_h_eff = cfg.get_double("material", "m_h_eff", m.m_h_eff);
    m.V_e = cfg.get_double("material", "V_e_meV", m.V_e);
    m.V_h = cfg.get_double("material", "V_h_meV", m.V_h);
    m.eps_r = cfg.get_double("material", "eps_r", m.eps_r);
    m.kp_halfwidth_x = cfg.get_double("material", "kp_halfwidth_x_nm", m.kp_halfwidth_x);
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw config::ConfigError(std::string("config: [material] ") + e.what());
    }
    return m;
}

DotGeometry dot_from(const Config& cfg, const std::string& section, double def_base_half,
                     double def_height) {
    DotGeometry d;
    d.base_half = cfg.get_double(section, "base_half_nm", def_base_half);
    d.height = cfg.get_double(section, "height_nm", def_height);
    try {
        d.validate();
    } catch (const std::exception& e) {
        throw config::ConfigError("config: [" + section + "] " + e.what());
    }
    return d;
}

MoleculeConfig molecule_from(const Config& cfg) {
    MoleculeConfig mol;
    mol.material = material_from(cfg);
    mol.dot_I = dot_from(cfg, "dot_I", 10.0, 2.0);
    mol.dot_II = dot_from(cfg, "dot_II", 8.0, 2.0);
    double R = cfg.get_double("molecule", "R_nm", 5.0);
    mol.R = Vec3{cfg.get_double("molecule", "Rx_nm", 0.0), cfg.get_double("molecule", "Ry_nm", 0.0),
                 cfg.get_double("molecule", "Rz_nm", R)};
    mol.field = Vec3{cfg.get_double("field", "Ex_kVcm", 0.0), cfg.get_double("field", "Ey_kVcm", 0.0),
                     cfg.get_double("field", "Ez_kVcm", 0.0)};
    try {
        mol.validate();
    } catch (const std::exception& e) {
        throw config::ConfigError(std::string("config: [molecule] ") + e.what());
    }
    return mol;
}

Engine engine_from(const Config& cfg, int threads) {
    Engine eng;
    eng.threads = threads;
    eng.solver.n_unbound = cfg.get_int("solver", "n_unbound", eng.solver.n_unbound);
    eng.solver.box_factor = cfg.get_double("solver", "box_factor", eng.solver.box_factor);
    eng.solver.field_box_factor =
        cfg.get_double("solver", "field_box_factor", eng.solver.field_box_factor);
    eng.kspace.rel_tol = cfg.get_double("kspace", "rel_tol", eng.kspace.rel_tol);
    eng.kspace.kmax_factor = cfg.get_double("kspace", "kmax_factor", eng.kspace.kmax_factor);
    eng.kspace.shells_direct = cfg.get_int("kspace", "shells_direct", eng.kspace.shells_direct);
    eng.kspace.shells_exchange = cfg.get_int("kspace", "shells_exchange", eng.kspace.shells_exchange);
    eng.kspace.shells_forster = cfg.get_int("kspace", "shells_forster", eng.kspace.shells_forster);
    return eng;
}

namespace {

std::vector<double> range_list(const Config& cfg, const std::string& prefix, double lo, double hi,
                               double step) {
    lo = cfg.get_double("sweep", prefix + "_min", lo);
    hi = cfg.get_double("sweep", prefix + "_max", hi);
    step = cfg.get_double("sweep", prefix + "_step", step);
    if (!(step > 0) || hi < lo)
        throw config::ConfigError("config: [sweep] " + prefix + "_min/max/step: bad range");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        double v = lo + i * step;
        if (v > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
        out.push_back(v);
    }
    return out;
}

DotGeometry shaped_dot(basis3d::Family family, double a) {
    return family == basis3d::Family::cube ? DotGeometry::cube(a) : DotGeometry::flat_cuboid(a);
}

const char* shape_name(basis3d::Family f) {
    return f == basis3d::Family::cube ? "cube" : "cuboid";
}

struct PointRunner {
    // evaluates `n` sweep points in parallel, emitting rows in index order
    template <class Fn>
    static void run(Table& table, int n, int threads, Fn&& compute) {
        std::vector<std::vector<std::vector<Table::Cell>>> rows(n);
        parallel_for(n, threads, [&](int i) { rows[i] = compute(i); });
        for (auto& r : rows)
            for (auto& cells : r) table.add_row(std::move(cells));
    }
};

FigureResult fig5(const Config& cfg, const Engine& eng) {
    auto sizes = cfg.get_list("sweep", "sizes_nm", {1, 1.5, 2, 3, 4, 5, 6, 8, 10, 12, 15});
    auto pots = cfg.get_list("sweep", "potentials_meV", {200, 500, 2000});
    auto masses = cfg.get_list("sweep", "masses_m0", {0.06, 0.6});

    FigureResult out;
    out.table.columns = {"a_nm", "shape", "mass_m0", "V_meV", "E_meV"};
    struct Point {
        basis3d::Family fam;
        double mass, V, a;
    };
    std::vector<Point> pts;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double mass : masses)
            for (double V : pots)
                for (double a : sizes) pts.push_back({fam, mass, V, a});

    PointRunner::run(out.table, (int)pts.size(), eng.threads,
                     [&](int i) -> std::vector<std::vector<Table::Cell>> {
                         const auto& p = pts[i];
                         MaterialParams mat;
                         mat.m_e_eff = p.mass;
                         mat.V_e = p.V;
                         double E = basis3d::ground_energy(shaped_dot(p.fam, p.a), mat,
                                                           Species::electron, eng.solver);
                         return {{p.a, std::string(shape_name(p.fam)), p.mass, p.V, E}};
                     });
    return out;
}

FigureResult fig_intra(const Config& cfg, const Engine& eng, bool exchange) {
    auto sizes = cfg.get_list("sweep", "sizes_nm", {2, 3, 4, 6, 8, 10, 15, 20, 30, 40});
    auto pots = cfg.get_list("sweep", "potentials_meV", {200, 500, 2000});
    FigureResult out;
    out.table.columns = {"a_nm", "shape", "V_meV",
                         exchange ? "M00K_triplet_meV" : "M00J_meV"};
    struct Point {
        basis3d::Family fam;
        double V, a;
    };
    std::vector<Point> pts;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double V : pots)
            for (double a : sizes) pts.push_back({fam, V, a});

    std::vector<bool> conv(pts.size(), true);
    PointRunner::run(out.table, (int)pts.size(), eng.threads,
                     [&](int i) -> std::vector<std::vector<Table::Cell>> {
                         const auto& p = pts[i];
                         MaterialParams mat;
                         mat.V_e = mat.V_h = p.V;
                         DotGeometry dot = shaped_dot(p.fam, p.a);
                         auto bloch = coulombk::BlochModel::from(mat);
                         coulombk::KResult r =
                             exchange ? coulombk::exchange_intra(dot, mat, bloch,
                                                                 coulombk::Spin::triplet, eng.kspace)
                                      : coulombk::direct_intra(dot, mat, bloch, eng.kspace);
                         conv[i] = r.converged;
                         return {{p.a, std::string(shape_name(p.fam)), p.V, r.value}};
                     });
    for (bool c : conv) out.converged = out.converged && c;
    return out;
}

FigureResult fig12(const Config& cfg, const Engine& eng) {
    auto rlist = range_list(cfg, "R_nm", 8.0, 40.0, 4.0);
    auto pots = cfg.get_list("sweep", "potentials_meV", {500, 2000});
    const double a = cfg.get_double("sweep", "a_nm", 2.0);
    MaterialParams base = material_from(cfg);

    FigureResult out;
    out.table.columns = {"R_nm", "shape", "V_meV", "VF_full_meV", "VF_dipole_meV"};
    struct Point {
        basis3d::Family fam;
        double V, R;
    };
    std::vector<Point> pts;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double V : pots)
            for (double R : rlist) pts.push_back({fam, V, R});

    // the envelope overlap O_i is R-independent; compute once per (shape, V)
    std::map<std::pair<int, double>, double> overlap;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double V : pots) {
            MaterialParams mat = base;
            mat.V_e = mat.V_h = V;
            overlap[{(int)fam, V}] =
                basis3d::overlap_integral_O(shaped_dot(fam, a), mat, {0, 0, 0}, eng.solver);
        }

    std::vector<bool> conv(pts.size(), true);
    PointRunner::run(out.table, (int)pts.size(), eng.threads,
                     [&](int i) -> std::vector<std::vector<Table::Cell>> {
                         const auto& p = pts[i];
                         MaterialParams mat = base;
                         mat.V_e = mat.V_h = p.V;
                         MoleculeConfig mol;
                         mol.material = mat;
                         mol.dot_I = mol.dot_II = shaped_dot(p.fam, a);
                         mol.R = {0, 0, p.R};
                         auto full = coulombk::forster_full(mol, coulombk::BlochModel::from(mat),
                                                            eng.kspace);
                         conv[i] = full.converged;
                         double O = overlap.at({(int)p.fam, p.V});
                         double vd = dipole::forster_dipole(O, O, mat.kp_halfwidth_x, mol.R, mat.eps_r);
                         return {{p.R, std::string(shape_name(p.fam)), p.V, full.value, vd}};
                     });
    for (bool c : conv) out.converged = out.converged && c;
    return out;
}

FigureResult fig_overlap_field(const Config& cfg, const Engine& eng, bool sweep_potentials) {
    auto fields = range_list(cfg, "field_kVcm", 0.0, 150.0, 10.0);
    std::vector<double> sizes =
        sweep_potentials ? std::vector<double>{cfg.get_double("sweep", "a_nm", 10.0)}
                         : cfg.get_list("sweep", "sizes_nm", {4, 8, 10, 12});
    std::vector<double> pots = sweep_potentials
                                   ? cfg.get_list("sweep", "potentials_meV", {200, 500, 1000, 2000})
                                   : std::vector<double>{cfg.get_double("sweep", "V_meV", 500.0)};
    MaterialParams base = material_from(cfg);

    FigureResult out;
    out.table.columns = sweep_potentials
                            ? std::vector<std::string>{"E_kVcm", "shape", "V_meV", "O_i"}
                            : std::vector<std::string>{"E_kVcm", "shape", "a_nm", "O_i"};
    struct Point {
        basis3d::Family fam;
        double a, V, E;
    };
    std::vector<Point> pts;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double a : sizes)
            for (double V : pots)
                for (double E : fields) pts.push_back({fam, a, V, E});

    PointRunner::run(out.table, (int)pts.size(), eng.threads,
                     [&](int i) -> std::vector<std::vector<Table::Cell>> {
                         const auto& p = pts[i];
                         MaterialParams mat = base;
                         mat.V_e = mat.V_h = p.V;
                         basis3d::SolverOptions so = eng.solver;
                         so.box_factor = so.field_box_factor; // one box for the whole field sweep
                         double O = basis3d::overlap_integral_O(shaped_dot(p.fam, p.a), mat,
                                                                {p.E, 0, 0}, so);
                         if (sweep_potentials)
                             return {{p.E, std::string(shape_name(p.fam)), p.V, O}};
                         return {{p.E, std::string(shape_name(p.fam)), p.a, O}};
                     });
    return out;
}

FigureResult fig15(const Config& cfg, const Engine& eng) {
    auto sizes = cfg.get_list("sweep", "sizes_nm", {2, 3, 4, 6, 8, 10, 12, 15});
    auto pots = cfg.get_list("sweep", "potentials_meV", {200, 500, 2000});
    FigureResult out;
    out.table.columns = {"a_nm", "shape", "V_meV", "O_i"};
    struct Point {
        basis3d::Family fam;
        double a, V;
    };
    std::vector<Point> pts;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double V : pots)
            for (double a : sizes) pts.push_back({fam, a, V});
    PointRunner::run(out.table, (int)pts.size(), eng.threads,
                     [&](int i) -> std::vector<std::vector<Table::Cell>> {
                         const auto& p = pts[i];
                         MaterialParams mat = material_from(cfg);
                         mat.V_e = mat.V_h = p.V;
                         double O = basis3d::overlap_integral_O(shaped_dot(p.fam, p.a), mat,
                                                                {0, 0, 0}, eng.solver);
                         return {{p.a, std::string(shape_name(p.fam)), p.V, O}};
                     });
    return out;
}

FigureResult fig16(const Config& cfg, const Engine& eng) {
    auto fields = range_list(cfg, "field_kVcm", 0.0, 150.0, 10.0);
    auto sizes = cfg.get_list("sweep", "sizes_nm", {4, 8});
    const double V = cfg.get_double("sweep", "V_meV", 500.0);
    MaterialParams base = material_from(cfg);

    FigureResult out;
    out.table.columns = {"E_kVcm", "shape", "a_nm", "p_enm", "VXX_R3_meVnm3"};
    struct Point {
        basis3d::Family fam;
        double a, E;
    };
    std::vector<Point> pts;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double a : sizes)
            for (double E : fields) pts.push_back({fam, a, E});

    PointRunner::run(out.table, (int)pts.size(), eng.threads,
                     [&](int i) -> std::vector<std::vector<Table::Cell>> {
                         const auto& p = pts[i];
                         MaterialParams mat = base;
                         mat.V_e = mat.V_h = V;
                         basis3d::SolverOptions so = eng.solver;
                         so.box_factor = so.field_box_factor;
                         Vec3 pdip = basis3d::induced_dipole(shaped_dot(p.fam, p.a), mat,
                                                             {p.E, 0, 0}, so);
                         // equal dots stacked along z with basal dipoles: V_XX R^3 = C p^2 / eps_r
                         double vxx_r3 =
                             dipole::vxx_dipole(pdip, pdip, {0, 0, 1.0}, mat.eps_r);
                         return {{p.E, std::string(shape_name(p.fam)), p.a, norm(pdip), vxx_r3}};
                     });
    return out;
}

FigureResult fig_delta0(const Config& cfg, const Engine& eng, bool scaled_c1) {
    auto ratios = range_list(cfg, "ratio", 1.0, 2.0, 0.125);
    const double b = cfg.get_double("sweep", "b_nm", 5.0);
    const double R = cfg.get_double("sweep", "R_nm_for_c1", 10.0);
    MaterialParams base = material_from(cfg);

    FigureResult out;
    out.table.columns = scaled_c1 ? std::vector<std::string>{"ratio_a_over_b", "shape", "delta0_meV",
                                                             "R3c1_over_x2OIOII", "quoted_37p1_over_delta0"}
                                  : std::vector<std::string>{"ratio_a_over_b", "shape", "delta0_meV",
                                                             "delta0_no_coulomb_meV"};
    struct Point {
        basis3d::Family fam;
        double ratio;
    };
    std::vector<Point> pts;
    for (auto fam : {basis3d::Family::cube, basis3d::Family::flat_cuboid})
        for (double r : ratios) pts.push_back({fam, r});

    std::vector<bool> conv(pts.size(), true);
    PointRunner::run(
        out.table, (int)pts.size(), eng.threads,
        [&](int i) -> std::vector<std::vector<Table::Cell>> {
            const auto& p = pts[i];
            MoleculeConfig mol;
            mol.material = base;
            mol.dot_I = shaped_dot(p.fam, p.ratio * b);
            mol.dot_II = shaped_dot(p.fam, b);
            mol.R = {0, 0, R};
            qubits::CreationEnergyOptions opts;
            opts.solver = eng.solver;
            opts.kspace = eng.kspace;
            bool point_conv = true;
            double d0 = qubits::delta0_from_molecule(mol, opts, &point_conv);
            conv[i] = point_conv;
            if (!scaled_c1) {
                opts.include_coulomb = false;
                double d0_free = qubits::delta0_from_molecule(mol, opts);
                return {{p.ratio, std::string(shape_name(p.fam)), d0, d0_free}};
            }
            double O_I = basis3d::overlap_integral_O(mol.dot_I, base, {0, 0, 0}, eng.solver);
            double O_II = basis3d::overlap_integral_O(mol.dot_II, base, {0, 0, 0}, eng.solver);
            double vf = dipole::forster_dipole(O_I, O_II, base.kp_halfwidth_x, mol.R, base.eps_r);
            qubits::TwoQubitSystem sys{0.0, d0, 0.0, std::abs(vf), 0.0};
            double c1 = qubits::eigensystem(sys).c1;
            double scaled = R * R * R * c1 /
                            (base.kp_halfwidth_x * base.kp_halfwidth_x * O_I * O_II);
            double quoted = d0 == 0.0 ? std::numeric_limits<double>::infinity()
                                      : qubits::c1_scaling_constant / std::abs(d0);
            return {{p.ratio, std::string(shape_name(p.fam)), d0, scaled, quoted}};
        });
    for (bool c : conv) out.converged = out.converged && c;
    return out;
}

} // namespace

std::vector<std::string> figure_names() {
    return {"fig5", "fig8", "fig10", "fig12", "fig13", "fig14", "fig15", "fig16", "fig17", "fig18"};
}

std::string figure_description(const std::string& name) {
    static const std::map<std::string, std::string> desc = {
        {"fig5", "single-particle ground energy vs dot size (cube and flat cuboid, both masses)"},
        {"fig8", "intra-dot direct Coulomb element M00_J vs dot size and confinement"},
        {"fig10", "intra-dot exchange element M00_K vs dot size and confinement"},
        {"fig12", "Forster strength vs interdot separation: full K-space vs dipole-dipole"},
        {"fig13", "electron-hole overlap O_i vs applied field for a range of dot sizes"},
        {"fig14", "electron-hole overlap O_i vs applied field for a range of confinements"},
        {"fig15", "electron-hole overlap O_i vs dot size and confinement at zero field"},
        {"fig16", "induced exciton dipole and biexciton coupling vs applied field"},
        {"fig17", "exciton energy splitting Delta0 vs dot size ratio, with/without Coulomb terms"},
        {"fig18", "scaled mixing coefficient R^3 c1 / (x^2 O_I O_II) vs dot size ratio"}};
    auto it = desc.find(name);
    return it == desc.end() ? std::string{} : it->second;
}

FigureResult figure(const std::string& name, const Config& cfg, const Engine& eng) {
    if (name == "fig5") return fig5(cfg, eng);
    if (name == "fig8") return fig_intra(cfg, eng, false);
    if (name == "fig10") return fig_intra(cfg, eng, true);
    if (name == "fig12") return fig12(cfg, eng);
    if (name == "fig13") return fig_overlap_field(cfg, eng, false);
    if (name == "fig14") return fig_overlap_field(cfg, eng, true);
    if (name == "fig15") return fig15(cfg, eng);
    if (name == "fig16") return fig16(cfg, eng);
    if (name == "fig17") return fig_delta0(cfg, eng, false);
    if (name == "fig18") return fig_delta0(cfg, eng, true);
    std::string msg = "unknown figure '" + name + "'; available:";
    for (const auto& n : figure_names()) msg += " " + n;
    throw config::ConfigError(msg);
}

DesignReport design(const MoleculeConfig& molecule, const Engine& eng, bool with_full_forster) {
    molecule.validate();
    DesignReport rep;

    auto pair_I = basis3d::solve_pair(molecule.dot_I, molecule.material, molecule.field, eng.solver);
    auto pair_II = basis3d::solve_pair(molecule.dot_II, molecule.material, molecule.field, eng.solver);
    rep.O_I = basis3d::overlap_integral_O(pair_I);
    rep.O_II = basis3d::overlap_integral_O(pair_II);

    rep.VF_dipole = dipole::forster_dipole(rep.O_I, rep.O_II, molecule.material.kp_halfwidth_x,
                                           molecule.R, molecule.material.eps_r);
    if (with_full_forster) {
        auto full = coulombk::forster_full(molecule, coulombk::BlochModel::from(molecule.material),
                                           eng.kspace);
        rep.VF_full = full.value;
        rep.has_full = true;
        rep.converged = rep.converged && full.converged;
    }

    Vec3 p_I = basis3d::induced_dipole(pair_I);
    Vec3 p_II = basis3d::induced_dipole(pair_II);
    rep.VXX = dipole::vxx_dipole(p_I, p_II, molecule.R, molecule.material.eps_r);

    qubits::CreationEnergyOptions copts;
    copts.solver = eng.solver;
    copts.kspace = eng.kspace;
    bool d0_converged = true;
    const double w1 = qubits::exciton_creation_energy(molecule.dot_I, molecule.material,
                                                      molecule.field, copts, &d0_converged);
    const double w2 = qubits::exciton_creation_energy(molecule.dot_II, molecule.material,
                                                      molecule.field, copts, &d0_converged);
    rep.Delta0 = w1 - w2;
    rep.converged = rep.converged && d0_converged;

    qubits::TwoQubitSystem sys{0.0, w1, w2, std::abs(rep.VF_dipole), rep.VXX};
    auto eig = qubits::eigensystem(sys);
    rep.c1 = eig.c1;
    rep.fidelity = qubits::gate_fidelity(sys);
    rep.eps12 = eig.eps12;
    rep.eps21 = eig.eps21;
    rep.transfer_time_ps = std::abs(rep.VF_dipole) > 0
                               ? dipole::transfer_time(std::abs(rep.VF_dipole))
                               : std::numeric_limits<double>::infinity();
    rep.gate_time_estimate_ps = std::abs(rep.VXX) > 0
                                    ? constants::pi * constants::hbar / (std::abs(rep.VXX) / 20.0)
                                    : std::numeric_limits<double>::infinity();

    // scheme policy: strong mixing favours Forster switching; weak mixing favours the
    // energy-selective routes, with the pulsed CNOT preferred when V_XX is usable
    if (rep.c1 > 0.5)
        rep.scheme = "1";
    else if (rep.c1 < 0.1)
        rep.scheme = std::abs(rep.VXX) >= 1.0 ? "2" : "3";
    else
        rep.scheme = "mixed";
    return rep;
}

std::string DesignReport::to_json(const std::string& effective_config) const {
    nlohmann::json j;
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return std::stod(config::format_g9(v));
        return nullptr;
    };
    j["O_I"] = num(O_I);
    j["O_II"] = num(O_II);
    j["VF_dipole_meV"] = num(VF_dipole);
    if (has_full) j["VF_full_meV"] = num(VF_full);
    j["VXX_meV"] = num(VXX);
    j["Delta0_meV"] = num(Delta0);
    j["c1"] = num(c1);
    j["fidelity"] = num(fidelity);
    j["eps12_meV"] = num(eps12);
    j["eps21_meV"] = num(eps21);
    j["transfer_time_ps"] = num(transfer_time_ps);
    j["gate_time_estimate_ps"] = num(gate_time_estimate_ps);
    j["scheme"] = scheme;
    j["converged"] = converged;
    j["effective_config"] = effective_config;
    return j.dump(2) + "\n";
}

} // namespace dotforge::sweeps
