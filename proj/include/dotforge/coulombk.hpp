#pragma once

#include <array>
#include <complex>

#include "dotforge/core.hpp"
#include "dotforge/cubature.hpp"

namespace dotforge::coulombk {

// Kronig-Penney atomic model: infinite-well cell of full width 2x, electron Bloch state
// with s symmetry, hole with p_z symmetry.
struct BlochModel {
    double halfwidth_x = 0.5; // nm

    static BlochModel from(const MaterialParams& m) { return BlochModel{m.kp_halfwidth_x}; }
    double cell_width() const { return 2.0 * halfwidth_x; }
    double reciprocal_step() const { return constants::pi / halfwidth_x; } // |G_1|
};

enum class PairKind { eh, ee, hh };
enum class Spin { singlet, triplet };

// Cell-averaged Bloch transforms (1/V_cell) int_cell U_a U_b e^{iqr} dr, per axis.
double bloch_ss(double q, double x);
double bloch_pp(double q, double x);
double bloch_sp_imag(double q, double x); // the s x p_z integral equals i * this
std::complex<double> bloch_ft(const BlochModel& model, PairKind pair, const Vec3& K);

// Ground 1D basis function per axis, normalized over the infinite line:
// B cos(kx) inside, A e^{-alpha|x|} outside.
struct GroundAxis {
    double k = 0, alpha = 0, B = 0, A = 0, w = 0;
};
GroundAxis ground_axis(double width, double depth, double mass);

// 1D Fourier transform of xi_a(x) xi_b(x); real and even in q.
double envelope_ft_1d(const GroundAxis& a, const GroundAxis& b, double q);

struct DotGroundBasis {
    std::array<GroundAxis, 3> e, h;
};
DotGroundBasis dot_ground_basis(const DotGeometry& dot, const MaterialParams& material);

// 3D envelope transform of the (1,1,1) pair density for the given species pair.
double envelope_ft(const DotGroundBasis& dot, PairKind pair, const Vec3& k);

struct KSpaceOptions {
    double rel_tol = 1e-3;    // in [1e-6, 1e-2] per the integration contract
    double kmax_factor = 3.0; // radial cutoff = factor * pi / (smallest dot half-width)
    // reciprocal shells |n|^2 <= N included beyond the central G = 0 peak
    int shells_direct = 0;   // the central peak carries essentially the whole direct term
    int shells_exchange = 1; // the s x p_z zero at K = 0 makes the neighbours count
    int shells_forster = 0;  // interdot phase kills the off-center peaks for separated dots
    long max_evals = 40000000;
    int threads = 1;
};

struct KResult {
    double value = 0; // meV
    double error = 0;
    bool converged = false;
    long evals = 0;
};

// Generic adaptive K-space integral driver (exposed for calibration tests): integrates
// f over the ball |K| <= radius in spherical coordinates, with the inversion symmetry
// K -> -K assumed (integrand must be even).
cubature::Result integrate_ball(const std::function<double(const Vec3&)>& f, double radius,
                                double rel_tol, double abs_tol, long max_evals, int threads);

// Intra-dot direct Coulomb element M00_J between the ground electron and hole densities.
KResult direct_intra(const DotGeometry& dot, const MaterialParams& material, const BlochModel& bloch,
                     const KSpaceOptions& opts = {});

// Intra-dot exchange element M00_K; positive for triplet, negative for singlet.
KResult exchange_intra(const DotGeometry& dot, const MaterialParams& material, const BlochModel& bloch,
                       Spin spin, const KSpaceOptions& opts = {});

// Full (non-dipole) Forster matrix element between the two dots of the molecule; signed.
KResult forster_full(const MoleculeConfig& molecule, const BlochModel& bloch,
                     const KSpaceOptions& opts = {});

} // namespace dotforge::coulombk
