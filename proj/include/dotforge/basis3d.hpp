#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dotforge/core.hpp"
#include "dotforge/wells1d.hpp"

namespace dotforge::basis3d {

struct SolverOptions {
    int n_unbound = 4;             // unbound states per axis added to all bound states
    double box_factor = 10.0;      // box_L = box_factor * width on field-free axes
    double field_box_factor = 2.5; // tighter box on axes carrying a field, keeps the
                                   // tilted box from undercutting the dot region
    double prune_eps = 1e-10;      // canonical-orthogonalization eigenvalue cutoff
    int max_lanczos = 300;
};

// Product basis Xi = xi_x xi_y xi_z for one particle species in one dot.
struct ProductBasis {
    Species species;
    DotGeometry dot;
    MaterialParams material;
    std::array<std::vector<wells1d::Well1DState>, 3> axis_states;
    std::array<double, 3> box_L;
    bool flagged_unconverged = false; // set when zero unbound states were requested

    int count(int axis) const { return static_cast<int>(axis_states[axis].size()); }
    int dim() const { return count(0) * count(1) * count(2); }
    // flat index with z fastest
    int flat_index(int ix, int iy, int iz) const { return (ix * count(1) + iy) * count(2) + iz; }
    std::array<int, 3> unflatten(int idx) const {
        int nz = count(2), ny = count(1);
        return {idx / (ny * nz), (idx / nz) % ny, idx % nz};
    }
};

// 1D matrix blocks on one axis: overlap, kinetic form kappa <xi'|xi'>, in-well overlap,
// and position. 3D operators are Kronecker combinations of these.
struct Axis1DMatrices {
    Eigen::MatrixXd s, kin, inwell, pos;
};

ProductBasis build_basis(const DotGeometry& dot, const MaterialParams& material, Species species,
                         const SolverOptions& opts = {}, const Vec3& field = {0, 0, 0});

Axis1DMatrices axis_matrices(const ProductBasis& basis, int axis);

// Dense 3D overlap matrix (small bases / tests; production uses the separable path).
Eigen::MatrixXd overlap_matrix(const ProductBasis& basis);

struct Orthogonalizer {
    Eigen::MatrixXd X; // X^T S X = I on the kept directions
    int pruned = 0;
};
Orthogonalizer canonical_orthogonalize(const Eigen::MatrixXd& S, double eps = 1e-10);

Eigen::MatrixXd hamiltonian_matrix(const ProductBasis& basis, const Vec3& field = {0, 0, 0});

struct EnvelopeState {
    double energy = 0;          // meV
    Eigen::VectorXd coeffs;      // in the orthonormalized basis, unit norm
    Eigen::VectorXd orig_coeffs; // mapped back to the original product basis
    Species species = Species::electron;
    double dominant_amplitude = 0; // |coefficient| of the (1,1,1) product function
};

std::vector<EnvelopeState> solve_states(const Eigen::MatrixXd& H, const Orthogonalizer& orth,
                                        const ProductBasis& basis, int n_states);

// Ground state via the separable fast path (per-axis eigendecompositions + Lanczos);
// equivalent to solve_states on the dense matrices but usable at large basis dimensions.
EnvelopeState ground_state(const ProductBasis& basis, const Vec3& field = {0, 0, 0});

double ground_energy(const DotGeometry& dot, const MaterialParams& material, Species species,
                     const SolverOptions& opts = {}, const Vec3& field = {0, 0, 0});

// Electron and hole ground states of one dot under a common field.
struct GroundPair {
    EnvelopeState electron;
    EnvelopeState hole;
    ProductBasis basis_e;
    ProductBasis basis_h;
};
GroundPair solve_pair(const DotGeometry& dot, const MaterialParams& material, const Vec3& field,
                      const SolverOptions& opts = {});

// Envelope overlap O_i = integral of phi_e phi_h over the box, in [0, 1].
double overlap_integral_O(const DotGeometry& dot, const MaterialParams& material, const Vec3& field,
                          const SolverOptions& opts = {});
double overlap_integral_O(const GroundPair& pair);

// Exciton static dipole p_i = e(<r>_e - <r>_h), e*nm.
Vec3 induced_dipole(const DotGeometry& dot, const MaterialParams& material, const Vec3& field,
                    const SolverOptions& opts = {});
Vec3 induced_dipole(const GroundPair& pair);

Vec3 position_expectation(const EnvelopeState& state, const ProductBasis& basis);

enum class Family { cube, flat_cuboid };

struct GroundSweepRow {
    double a = 0;      // base half-side, nm
    Family family = Family::cube;
    double mass = 0;   // units of m0
    double V = 0;      // confinement depth, meV
    double energy = 0; // meV
};
std::vector<GroundSweepRow> ground_energy_sweep(Family family, const std::vector<double>& sizes,
                                                const std::vector<double>& potentials, double mass,
                                                const SolverOptions& opts = {});

} // namespace dotforge::basis3d
