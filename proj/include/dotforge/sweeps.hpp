#pragma once

#include <string>
#include <vector>

#include "dotforge/basis3d.hpp"
#include "dotforge/config.hpp"
#include "dotforge/core.hpp"
#include "dotforge/coulombk.hpp"

namespace dotforge::sweeps {

struct Engine {
    basis3d::SolverOptions solver;
    coulombk::KSpaceOptions kspace;
    int threads = 1;
};

// construct domain objects from a parsed configuration (with documented defaults)
MaterialParams material_from(const config::Config& cfg);
DotGeometry dot_from(const config::Config& cfg, const std::string& section, double def_base_half,
                     double def_height);
MoleculeConfig molecule_from(const config::Config& cfg);
Engine engine_from(const config::Config& cfg, int threads);

struct FigureResult {
    config::Table table;
    bool converged = true;
};

std::vector<std::string> figure_names();
std::string figure_description(const std::string& name);

// Deterministic dataset behind one named figure; sweep ranges may be overridden in [sweep].
FigureResult figure(const std::string& name, const config::Config& cfg, const Engine& eng);

struct DesignReport {
    double O_I = 0, O_II = 0;
    double VF_dipole = 0; // signed, meV
    double VF_full = 0;   // signed, meV (only when with_full_forster)
    bool has_full = false;
    double VXX = 0;    // meV
    double Delta0 = 0; // meV, Coulomb-corrected
    double c1 = 0, fidelity = 0;
    double eps12 = 0, eps21 = 0; // may be infinite at Delta0 = 0
    double transfer_time_ps = 0;
    double gate_time_estimate_ps = 0; // pi hbar / Omega_recommended, Omega = V_XX/20
    std::string scheme;               // "1", "2", "3" or "mixed"
    bool converged = true;
    std::string to_json(const std::string& effective_config) const;
};

DesignReport design(const MoleculeConfig& molecule, const Engine& eng, bool with_full_forster);

} // namespace dotforge::sweeps
