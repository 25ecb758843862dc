#include "dotforge/coulombk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "dotforge/wells1d.hpp"

namespace dotforge::coulombk {

using constants::pi;

namespace {

// sin(z)/z; the removable singularities of every closed form below reduce to this
double j0(double z) {
    if (std::abs(z) < 1e-4) {
        double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

double min_halfwidth(const DotGeometry& g) { return std::min(g.base_half, g.height / 2.0); }

double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

} // namespace

double bloch_ss(double q, double x) {
    const double u = q * x;
    return j0(u) + 0.5 * (j0(u - pi) + j0(u + pi));
}

double bloch_pp(double q, double x) {
    const double u = q * x;
    return j0(u) - 0.5 * (j0(u - 2 * pi) + j0(u + 2 * pi));
}

double bloch_sp_imag(double q, double x) {
    const double u = q * x;
    return 0.5 * (j0(pi / 2 - u) - j0(pi / 2 + u) + j0(3 * pi / 2 - u) - j0(3 * pi / 2 + u));
}

std::complex<double> bloch_ft(const BlochModel& model, PairKind pair, const Vec3& K) {
    const double x = model.halfwidth_x;
    const double sx = bloch_ss(K[0], x), sy = bloch_ss(K[1], x);
    switch (pair) {
        case PairKind::ee: return {sx * sy * bloch_ss(K[2], x), 0.0};
        case PairKind::hh: return {sx * sy * bloch_pp(K[2], x), 0.0};
        default: return {0.0, sx * sy * bloch_sp_imag(K[2], x)};
    }
}

GroundAxis ground_axis(double width, double depth, double mass) {
    wells1d::Well1DParams p{width, depth, mass, 10.0 * width};
    auto states = wells1d::solve_bound(p);
    if (states.empty()) throw std::domain_error("ground_axis: well has no bound state");
    const auto& g = states.front();
    GroundAxis ax;
    ax.k = g.k_in;
    ax.alpha = g.k_out;
    ax.w = width;
    // renormalize over the infinite line
    const double edge = std::cos(ax.k * width / 2);
    const double nrm = width / 2 + std::sin(ax.k * width) / (2 * ax.k) + edge * edge / ax.alpha;
    ax.B = 1.0 / std::sqrt(nrm);
    ax.A = ax.B * edge * std::exp(ax.alpha * width / 2);
    return ax;
}

double envelope_ft_1d(const GroundAxis& a, const GroundAxis& b, double q) {
    const double h = a.w / 2;
    const double d = a.k - b.k, s = a.k + b.k;
    const double inside = 0.5 * a.B * b.B * h *
                          (j0((q - d) * h) + j0((q + d) * h) + j0((q - s) * h) + j0((q + s) * h));
    const double beta = a.alpha + b.alpha;
    const double tail = 2.0 * a.A * b.A * std::exp(-beta * h) *
                        (beta * std::cos(q * h) - q * std::sin(q * h)) / (beta * beta + q * q);
    return inside + tail;
}

DotGroundBasis dot_ground_basis(const DotGeometry& geom, const MaterialParams& material) {
    geom.validate();
    material.validate();
    DotGroundBasis g;
    for (int a = 0; a < 3; ++a) {
        g.e[a] = ground_axis(geom.width(a), material.V_e, material.m_e_eff);
        g.h[a] = ground_axis(geom.width(a), material.V_h, material.m_h_eff);
    }
    return g;
}

double envelope_ft(const DotGroundBasis& g, PairKind pair, const Vec3& k) {
    double out = 1.0;
    for (int a = 0; a < 3; ++a) {
        switch (pair) {
            case PairKind::ee: out *= envelope_ft_1d(g.e[a], g.e[a], k[a]); break;
            case PairKind::hh: out *= envelope_ft_1d(g.h[a], g.h[a], k[a]); break;
            default: out *= envelope_ft_1d(g.e[a], g.h[a], k[a]); break;
        }
    }
    return out;
}

namespace {

void check_opts(const KSpaceOptions& opts) {
    if (!(opts.rel_tol >= 1e-6 && opts.rel_tol <= 1e-2))
        throw std::invalid_argument("KSpaceOptions: rel_tol must lie in [1e-6, 1e-2]");
}

// G vectors of the simple-cubic reciprocal lattice with 0 < |n|^2 <= norm2, one per +-pair
std::vector<Vec3> half_shell_list(double G1, int norm2) {
    std::vector<Vec3> out;
    int m = norm2 > 0 ? (int)std::floor(std::sqrt((double)norm2)) : 0;
    for (int i = -m; i <= m; ++i)
        for (int j = -m; j <= m; ++j)
            for (int k = -m; k <= m; ++k) {
                int n2 = i * i + j * j + k * k;
                if (n2 == 0 || n2 > norm2) continue;
                if (std::tuple(i, j, k) < std::tuple(-i, -j, -k)) continue;
                out.push_back(Vec3{G1 * i, G1 * j, G1 * k});
            }
    return out;
}

struct Accumulated {
    double value = 0, error = 0;
    long evals = 0;
    bool converged = true;
};

double fold_to_bz(double K, double G1) { return K - G1 * std::round(K / G1); }

// integral over the G = 0 peak (spherical) plus the requested reciprocal shells (boxes)
Accumulated kspace_sum(const std::function<double(const Vec3&)>& f, const BlochModel& bloch,
                       double peak_extent, int shell_norm2, const KSpaceOptions& opts) {
    const double bz_half = bloch.reciprocal_step() / 2.0;
    const double radius = std::min(peak_extent, bz_half);

    Accumulated acc;
    auto central = integrate_ball(f, radius, opts.rel_tol, 0.0, opts.max_evals, opts.threads);
    acc.value += central.value;
    acc.error += central.error;
    acc.evals += central.evals;
    acc.converged = acc.converged && central.converged;

    const double scale = std::abs(central.value);
    auto shells = half_shell_list(bloch.reciprocal_step(), shell_norm2);
    for (const auto& G : shells) {
        const double half = std::min(peak_extent, bz_half);
        double lo[3], hi[3];
        for (int a = 0; a < 3; ++a) {
            lo[a] = G[a] - half;
            hi[a] = G[a] + half;
        }
        cubature::Options copts;
        copts.rel_tol = opts.rel_tol;
        copts.abs_tol = opts.rel_tol * std::max(scale, 1e-300) / (2.0 * shells.size() + 1.0);
        copts.max_evals = opts.max_evals;
        copts.threads = opts.threads;
        auto box = cubature::integrate(
            [&](std::span<const double> u) { return f(Vec3{u[0], u[1], u[2]}); }, lo, hi, copts);
        acc.value += 2.0 * box.value; // +-G pair
        acc.error += 2.0 * box.error;
        acc.evals += box.evals;
        acc.converged = acc.converged && box.converged;
    }
    return acc;
}

} // namespace

cubature::Result integrate_ball(const std::function<double(const Vec3&)>& f, double radius,
                                double rel_tol, double abs_tol, long max_evals, int threads) {
    // half ball (cos theta in [0,1]) doubled; valid for integrands even under K -> -K.
    // The r^2 Jacobian absorbs the 4 pi / K^2 Coulomb kernel singularity at the origin.
    auto spherical = [&](std::span<const double> u) {
        const double r = u[0], c = u[1], phi = u[2];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        Vec3 K{r * s * std::cos(phi), r * s * std::sin(phi), r * c};
        return r * r * f(K);
    };
    const double lo[3] = {0.0, 0.0, 0.0};
    const double hi[3] = {radius, 1.0, 2.0 * pi};
    cubature::Options copts;
    copts.rel_tol = rel_tol;
    copts.abs_tol = abs_tol / 2.0;
    copts.max_evals = max_evals;
    copts.threads = threads;
    auto res = cubature::integrate(spherical, lo, hi, copts);
    res.value *= 2.0;
    res.error *= 2.0;
    return res;
}

KResult direct_intra(const DotGeometry& geom, const MaterialParams& material, const BlochModel& bloch,
                     const KSpaceOptions& opts) {
    check_opts(opts);
    const auto g = dot_ground_basis(geom, material);
    const double x = bloch.halfwidth_x;
    const double G1 = bloch.reciprocal_step();

    auto integrand = [&](const Vec3& K) {
        const double K2 = norm2(K);
        if (K2 == 0.0) return 0.0; // removable in spherical coordinates
        Vec3 k{fold_to_bz(K[0], G1), fold_to_bz(K[1], G1), fold_to_bz(K[2], G1)};
        const double env = envelope_ft(g, PairKind::ee, k) * envelope_ft(g, PairKind::hh, k);
        const double sx = bloch_ss(K[0], x), sy = bloch_ss(K[1], x);
        const double bl = sx * sx * sy * sy * bloch_ss(K[2], x) * bloch_pp(K[2], x);
        return 4.0 * pi / K2 * env * bl;
    };

    const double extent = opts.kmax_factor * pi / min_halfwidth(geom);
    auto acc = kspace_sum(integrand, bloch, extent, opts.shells_direct, opts);
    const double pref = constants::coulomb_C / material.eps_r / std::pow(2.0 * pi, 3);
    return {pref * acc.value, pref * acc.error, acc.converged, acc.evals};
}

KResult exchange_intra(const DotGeometry& geom, const MaterialParams& material, const BlochModel& bloch,
                       Spin spin, const KSpaceOptions& opts) {
    check_opts(opts);
    const auto g = dot_ground_basis(geom, material);
    const double x = bloch.halfwidth_x;
    const double G1 = bloch.reciprocal_step();

    auto integrand = [&](const Vec3& K) {
        const double K2 = norm2(K);
        if (K2 == 0.0) return 0.0; // the s x p_z cell integral vanishes at K = 0 anyway
        Vec3 k{fold_to_bz(K[0], G1), fold_to_bz(K[1], G1), fold_to_bz(K[2], G1)};
        const double env = envelope_ft(g, PairKind::eh, k);
        const double sx = bloch_ss(K[0], x), sy = bloch_ss(K[1], x), m = bloch_sp_imag(K[2], x);
        return 4.0 * pi / K2 * env * env * sx * sx * sy * sy * m * m;
    };

    const double extent = opts.kmax_factor * pi / min_halfwidth(geom);
    auto acc = kspace_sum(integrand, bloch, extent, opts.shells_exchange, opts);
    const double pref = constants::coulomb_C / material.eps_r / std::pow(2.0 * pi, 3);
    const double sign = (spin == Spin::triplet) ? +1.0 : -1.0;
    return {sign * pref * acc.value, pref * acc.error, acc.converged, acc.evals};
}

KResult forster_full(const MoleculeConfig& molecule, const BlochModel& bloch,
                     const KSpaceOptions& opts) {
    check_opts(opts);
    molecule.validate();
    const auto gI = dot_ground_basis(molecule.dot_I, molecule.material);
    const auto gII = dot_ground_basis(molecule.dot_II, molecule.material);
    const double x = bloch.halfwidth_x;
    const double G1 = bloch.reciprocal_step();
    const Vec3 R = molecule.R;

    // around G != 0 the integral carries the autocorrelation of the two transition
    // densities at offset R, which vanishes for non-overlapping dots; shells_forster
    // stays available for overlap studies
    const double extent = opts.kmax_factor * pi /
                          std::min(min_halfwidth(molecule.dot_I), min_halfwidth(molecule.dot_II));
    const double radius = std::min(extent, 0.5 * G1);

    auto integrand = [&](const Vec3& K) {
        const double K2 = norm2(K);
        if (K2 == 0.0) return 0.0;
        Vec3 k{fold_to_bz(K[0], G1), fold_to_bz(K[1], G1), fold_to_bz(K[2], G1)};
        const double env = envelope_ft(gI, PairKind::eh, k) * envelope_ft(gII, PairKind::eh, k);
        const double sx = bloch_ss(K[0], x), sy = bloch_ss(K[1], x), m = bloch_sp_imag(K[2], x);
        // a smooth radial taper suppresses the stationary-phase artifact a hard cutoff
        // would generate against the interdot oscillation cos(K.R); the windowed-out
        // tail decays exponentially in R for separated dots
        double window = 1.0;
        const double r = std::sqrt(K2);
        if (r > 0.7 * radius) {
            double t = std::cos(pi / 2.0 * (r - 0.7 * radius) / (0.3 * radius));
            window = t * t;
        }
        return 4.0 * pi / K2 * std::cos(dotforge::dot(K, R)) * env * sx * sx * sy * sy * m * m *
               window;
    };
    auto acc = kspace_sum(integrand, bloch, extent, opts.shells_forster, opts);
    const double pref = constants::coulomb_C / molecule.material.eps_r / std::pow(2.0 * pi, 3);
    return {pref * acc.value, pref * acc.error, acc.converged, acc.evals};
}

} // namespace dotforge::coulombk
