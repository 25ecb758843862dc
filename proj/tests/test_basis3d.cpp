#include "doctest.h"

#include <cmath>
#include <functional>

#include "dotforge/basis3d.hpp"
#include "dotforge/quad.hpp"
#include "oracles/fd3d.hpp"

using namespace dotforge;
using namespace dotforge::basis3d;

namespace {
SolverOptions small_opts() {
    SolverOptions o;
    o.n_unbound = 2;
    o.box_factor = 8.0;
    return o;
}

MaterialParams mat_with(double me, double V) {
    MaterialParams m;
    m.m_e_eff = me;
    m.V_e = V;
    return m;
}

MaterialParams mat_depths(double V) {
    MaterialParams m;
    m.V_e = m.V_h = V;
    return m;
}

// fraction of [x-dx/2, x+dx/2] lying inside [-half, half]
double inside_fraction(double x, double dx, double half) {
    double lo = std::max(x - dx / 2, -half), hi = std::min(x + dx / 2, half);
    return std::max(0.0, hi - lo) / dx;
}

// cell-averaged cuboid confinement: removes the O(dx) staircase error of hard sampling
std::function<double(double, double, double)> averaged_potential(const DotGeometry& dot, double V,
                                                                 std::array<double, 3> dx,
                                                                 double slope_x = 0.0) {
    return [=](double x, double y, double z) {
        double f = inside_fraction(x, dx[0], dot.width(0) / 2) *
                   inside_fraction(y, dx[1], dot.width(1) / 2) *
                   inside_fraction(z, dx[2], dot.width(2) / 2);
        return V * (1.0 - f) + slope_x * x;
    };
}
} // namespace

TEST_CASE("build_basis contracts") {
    auto dot = DotGeometry::cube(10.0);
    MaterialParams mat;
    auto basis = build_basis(dot, mat, Species::electron, small_opts());
    for (int a = 0; a < 3; ++a) {
        CHECK(basis.count(a) >= 3); // at least one bound plus the requested unbound states
        bool has_bound = false;
        for (const auto& s : basis.axis_states[a])
            has_bound = has_bound || s.kind == wells1d::Kind::bound;
        CHECK(has_bound);
        for (int i = 0; i + 1 < basis.count(a); ++i)
            CHECK(basis.axis_states[a][i].energy < basis.axis_states[a][i + 1].energy);
    }
    CHECK_FALSE(basis.flagged_unconverged);

    SolverOptions none = small_opts();
    none.n_unbound = 0;
    CHECK(build_basis(dot, mat, Species::electron, none).flagged_unconverged);
}

TEST_CASE("overlap matrix structure") {
    // deep well: decayed tails make the basis essentially orthonormal
    auto deep = build_basis(DotGeometry::cube(1.0), mat_with(0.06, 5e4), Species::electron,
                            small_opts());
    auto S = overlap_matrix(deep);
    CHECK(S.rows() == deep.dim());
    for (int i = 0; i < S.rows(); ++i) {
        CHECK(S(i, i) == doctest::Approx(1.0).epsilon(1e-10));
        for (int j = 0; j < i; ++j) CHECK(std::abs(S(i, j)) < 1e-6);
    }

    // opposite 1D parity on any axis gives an exact zero
    auto shallow = build_basis(DotGeometry::cube(2.0), mat_with(0.06, 80.0), Species::electron,
                               small_opts());
    auto S2 = overlap_matrix(shallow);
    CHECK(S2.isApprox(S2.transpose(), 1e-12));
    for (int i = 0; i < S2.rows(); ++i)
        for (int j = 0; j < i; ++j) {
            auto ti = shallow.unflatten(i), tj = shallow.unflatten(j);
            bool parity_block = false;
            for (int a = 0; a < 3; ++a)
                parity_block = parity_block || (shallow.axis_states[a][ti[a]].parity !=
                                                shallow.axis_states[a][tj[a]].parity);
            if (parity_block) CHECK(std::abs(S2(i, j)) < 1e-13);
        }

    // Gram matrix of independent functions is positive definite
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S2);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("canonical orthogonalization") {
    Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
    auto o1 = canonical_orthogonalize(I3);
    CHECK(o1.pruned == 0);
    CHECK((o1.X.transpose() * I3 * o1.X).isApprox(I3, 1e-12));

    Eigen::MatrixXd S(2, 2);
    S << 1.0, 0.5, 0.5, 1.0;
    auto o2 = canonical_orthogonalize(S);
    CHECK((o2.X.transpose() * S * o2.X).isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-12));

    // an exactly repeated basis function drops exactly one direction
    Eigen::MatrixXd dup(3, 3);
    dup << 1, 1, 0.2, 1, 1, 0.2, 0.2, 0.2, 1;
    auto o3 = canonical_orthogonalize(dup);
    CHECK(o3.pruned == 1);
    Eigen::MatrixXd red = o3.X.transpose() * dup * o3.X;
    CHECK(red.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-10));

    // a real basis: X^T S X = I to 1e-10
    auto basis = build_basis(DotGeometry::cube(3.0), mat_with(0.1, 150.0), Species::electron,
                             small_opts());
    auto S3 = overlap_matrix(basis);
    auto orth = canonical_orthogonalize(S3);
    Eigen::MatrixXd test = orth.X.transpose() * S3 * orth.X;
    CHECK(test.isApprox(Eigen::MatrixXd::Identity(test.rows(), test.cols()), 1e-10));
}

TEST_CASE("hamiltonian diagonal against a 1D quadrature oracle") {
    auto dot = DotGeometry::cube(10.0);
    MaterialParams mat;
    SolverOptions opts = small_opts();
    auto basis = build_basis(dot, mat, Species::electron, opts);
    auto H = hamiltonian_matrix(basis);
    CHECK(H.isApprox(H.transpose(), 1e-12));

    // independent composite-Simpson quadrature of the (1,1,1) diagonal element
    const auto& gx = basis.axis_states[0][0];
    auto simpson = [&](const std::function<double(double)>& f, double a, double b) {
        const int n = 20001;
        double h = (b - a) / (n - 1), sum = f(a) + f(b);
        for (int i = 1; i + 1 < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return sum * h / 3.0;
    };
    const double hw = dot.width(0) / 2, hL = basis.box_L[0] / 2;
    const double kappa = constants::hbar2_over_2m0 / mat.m_e_eff;
    auto dphi2 = [&](double x) { double d = wells1d::eval_deriv(gx, x); return d * d; };
    auto phi2 = [&](double x) { double v = wells1d::eval(gx, x); return v * v; };
    double t1 = kappa * (simpson(dphi2, -hL, -hw) + simpson(dphi2, -hw, hw) + simpson(dphi2, hw, hL));
    double s1 = simpson(phi2, -hL, -hw) + simpson(phi2, -hw, hw) + simpson(phi2, hw, hL);
    double iw1 = simpson(phi2, -hw, hw);
    // cube: all axes share the same ground factor
    double expected = 3.0 * t1 * s1 * s1 + mat.V_e * (s1 * s1 * s1 - iw1 * iw1 * iw1);
    CHECK(H(0, 0) == doctest::Approx(expected).epsilon(1e-6));

    // bound-only deep well is nearly separable: diagonal ~ sum of 1D energies
    SolverOptions bound_only;
    bound_only.n_unbound = 0;
    bound_only.box_factor = 8.0;
    auto deepb = build_basis(DotGeometry::cube(1.0), mat_with(0.06, 5e4), Species::electron,
                             bound_only);
    auto Hd = hamiltonian_matrix(deepb);
    int checked = 0;
    for (int i = 0; i < deepb.dim(); ++i) {
        auto t = deepb.unflatten(i);
        double esum = 0;
        for (int a = 0; a < 3; ++a) esum += deepb.axis_states[a][t[a]].energy;
        if (esum > 0.2 * 5e4) continue; // near-threshold tails are not separable
        CHECK(Hd(i, i) == doctest::Approx(esum).epsilon(2e-3));
        ++checked;
    }
    CHECK(checked >= 4);
}

TEST_CASE("field sign flip leaves the spectrum invariant") {
    auto dot = DotGeometry::flat_cuboid(5.0);
    MaterialParams mat;
    auto basis = build_basis(dot, mat, Species::electron, small_opts(), {30.0, 0, 0});
    auto orth = canonical_orthogonalize(overlap_matrix(basis));
    auto up = solve_states(hamiltonian_matrix(basis, {30.0, 0, 0}), orth, basis, 6);
    auto down = solve_states(hamiltonian_matrix(basis, {-30.0, 0, 0}), orth, basis, 6);
    for (size_t i = 0; i < up.size(); ++i)
        CHECK(up[i].energy == doctest::Approx(down[i].energy).epsilon(1e-10));
}

TEST_CASE("ground-state dominance of the (1,1,1) product function") {
    MaterialParams mat;
    auto cube = build_basis(DotGeometry::cube(10.0), mat, Species::electron, small_opts());
    auto orth_c = canonical_orthogonalize(overlap_matrix(cube));
    auto states_c = solve_states(hamiltonian_matrix(cube), orth_c, cube, 3);
    CHECK(states_c[0].dominant_amplitude > 0.999);
    CHECK(states_c[0].coeffs.norm() == doctest::Approx(1.0).epsilon(1e-10));

    auto flat = build_basis(DotGeometry::flat_cuboid(10.0), mat, Species::hole, small_opts());
    auto orth_f = canonical_orthogonalize(overlap_matrix(flat));
    auto states_f = solve_states(hamiltonian_matrix(flat), orth_f, flat, 1);
    CHECK(states_f[0].dominant_amplitude > 0.99);
}

TEST_CASE("variational monotonicity under basis enlargement") {
    MaterialParams mat = mat_with(0.06, 300.0);
    auto dot = DotGeometry::cube(3.0);
    double prev = 1e300;
    for (int n_unb : {0, 2, 4}) {
        SolverOptions o;
        o.n_unbound = n_unb;
        o.box_factor = 8.0;
        double e = ground_energy(dot, mat, Species::electron, o);
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
}

TEST_CASE("x-y relabeling degeneracy for square-based dots") {
    auto dot = DotGeometry::flat_cuboid(6.0);
    MaterialParams mat;
    auto basis = build_basis(dot, mat, Species::electron, small_opts());
    auto orth = canonical_orthogonalize(overlap_matrix(basis));
    auto states = solve_states(hamiltonian_matrix(basis), orth, basis, 4);
    // the (2,1,1)/(1,2,1) pair must be degenerate
    CHECK(states[1].energy == doctest::Approx(states[2].energy).epsilon(1e-8));
    // deterministic ordering: dominant indices sort lexicographically within the pair
    int i1, i2;
    states[1].orig_coeffs.cwiseAbs().maxCoeff(&i1);
    states[2].orig_coeffs.cwiseAbs().maxCoeff(&i2);
    CHECK(basis.unflatten(i1) < basis.unflatten(i2));
}

TEST_CASE("separable fast path agrees with the dense path") {
    MaterialParams mat;
    for (Vec3 field : {Vec3{0, 0, 0}, Vec3{40.0, 0, 0}}) {
        auto dot = DotGeometry::flat_cuboid(4.0);
        auto basis = build_basis(dot, mat, Species::hole, small_opts(), field);
        auto orth = canonical_orthogonalize(overlap_matrix(basis));
        auto dense = solve_states(hamiltonian_matrix(basis, field), orth, basis, 1);
        auto fast = ground_state(basis, field);
        CHECK(fast.energy == doctest::Approx(dense[0].energy).epsilon(1e-9));
        CHECK(fast.dominant_amplitude == doctest::Approx(dense[0].dominant_amplitude).epsilon(1e-7));
    }
}

TEST_CASE("ground energy sweep properties") {
    SolverOptions o = small_opts();
    // bulk limit: large heavy-mass dot has a tiny ground energy
    CHECK(ground_energy(DotGeometry::cube(25.0), mat_with(0.6, 500.0), Species::electron, o) < 2.0);
    // saturation: a 2 nm cube at 500 meV confines within 15% of the well depth
    double e_small = ground_energy(DotGeometry::cube(2.0), mat_with(0.06, 500.0), Species::electron, o);
    CHECK(std::abs(e_small - 500.0) / 500.0 < 0.15);
    // at fixed a the cuboid always lies above the cube
    for (double a : {6.0, 10.0}) {
        double ec = ground_energy(DotGeometry::cube(a), mat_with(0.06, 500.0), Species::electron, o);
        double ef =
            ground_energy(DotGeometry::flat_cuboid(a), mat_with(0.06, 500.0), Species::electron, o);
        CHECK(ef > ec);
    }
    // monotone decreasing in size for bound states
    auto rows = ground_energy_sweep(Family::cube, {4.0, 6.0, 8.0, 10.0}, {500.0}, 0.06, o);
    for (size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows[i + 1].energy < rows[i].energy);
}

TEST_CASE("box size is a converged parameter") {
    MaterialParams mat;
    SolverOptions a = small_opts(), b = small_opts();
    a.box_factor = 5.0;
    b.box_factor = 10.0;
    double ea = ground_energy(DotGeometry::cube(4.0), mat, Species::electron, a);
    double eb = ground_energy(DotGeometry::cube(4.0), mat, Species::electron, b);
    CHECK(std::abs(ea - eb) / std::abs(eb) < 1e-3);
}

TEST_CASE("3D finite-difference oracle confirms the variational ground energy") {
    MaterialParams mat;
    auto dot = DotGeometry::cube(10.0);
    SolverOptions o;
    double e = ground_energy(dot, mat, Species::electron, o);

    const double kappa = constants::hbar2_over_2m0 / mat.m_e_eff;
    double X = 2.2 * dot.width(0);
    double dx = X / 65.0;
    oracles::FdBox3D fd(averaged_potential(dot, mat.V_e, {dx, dx, dx}), kappa, {X, X, X},
                        {64, 64, 64});
    auto g = fd.ground_state(1e-8, 48, 120);
    CHECK(std::abs(e - g.energy) / g.energy < 0.02);
    // the basis-expansion energy is a variational upper bound up to grid error
    CHECK(e > g.energy - 0.01 * g.energy);
}

TEST_CASE("envelope overlap O_i") {
    SolverOptions o = small_opts();
    // identical species parameters give O = 1
    MaterialParams same;
    same.m_h_eff = same.m_e_eff = 0.06;
    same.V_h = same.V_e = 500.0;
    double O_same = overlap_integral_O(DotGeometry::cube(6.0), same, {0, 0, 0}, o);
    CHECK(O_same == doctest::Approx(1.0).epsilon(1e-8));

    MaterialParams mat;
    double O0 = overlap_integral_O(DotGeometry::cube(10.0), mat, {0, 0, 0}, o);
    CHECK(O0 > 0.0);
    CHECK(O0 < 1.0);
    // field suppression at 50 kV/cm
    SolverOptions of = o;
    of.box_factor = of.field_box_factor;
    double O50 = overlap_integral_O(DotGeometry::cube(10.0), mat, {50.0, 0, 0}, of);
    CHECK(O50 < O0);
    // deeper confinement enhances the overlap at fixed large size and zero field
    double O_deep = overlap_integral_O(DotGeometry::cube(10.0), mat_depths(2000.0), {0, 0, 0}, o);
    double O_shallow = overlap_integral_O(DotGeometry::cube(10.0), mat_depths(200.0), {0, 0, 0}, o);
    CHECK(O_deep > O_shallow);
}

TEST_CASE("induced dipole symmetries and oracle check") {
    MaterialParams mat;
    SolverOptions o = small_opts();
    o.box_factor = o.field_box_factor;
    auto dot = DotGeometry::flat_cuboid(8.0);

    Vec3 p0 = induced_dipole(dot, mat, {0, 0, 0}, o);
    CHECK(norm(p0) < 1e-8);
    Vec3 pp = induced_dipole(dot, mat, {60.0, 0, 0}, o);
    Vec3 pm = induced_dipole(dot, mat, {-60.0, 0, 0}, o);
    for (int a = 0; a < 3; ++a) CHECK(pp[a] == doctest::Approx(-pm[a]).epsilon(1e-6));
    // electron runs against the field, hole along it: p_x = e(<x>_e - <x>_h) < 0 for E_x > 0
    CHECK(pp[0] < 0.0);

    // linear response at small field, hence quadratic V_XX
    auto small_dot = DotGeometry::cube(4.0);
    double p5 = induced_dipole(small_dot, mat, {5.0, 0, 0}, o)[0];
    double p10 = induced_dipole(small_dot, mat, {10.0, 0, 0}, o)[0];
    CHECK(p10 / p5 == doctest::Approx(2.0).epsilon(0.02));

    // finite-difference oracle for the dipole at 100 kV/cm (separate electron/hole solves)
    SolverOptions fine = o;
    fine.n_unbound = 8;
    Vec3 p = induced_dipole(dot, mat, {100.0, 0, 0}, fine);

    auto fd_expect = [&](Species sp) {
        const double kappa = constants::hbar2_over_2m0 / mat.mass(sp);
        const double slope = -MaterialParams::charge(sp) * constants::field_slope_per_kVcm * 100.0;
        std::array<double, 3> box{2.5 * dot.width(0), 2.0 * dot.width(1), 3.0 * dot.width(2)};
        std::array<int, 3> n{64, 40, 24};
        std::array<double, 3> dx{box[0] / (n[0] + 1), box[1] / (n[1] + 1), box[2] / (n[2] + 1)};
        oracles::FdBox3D fd(averaged_potential(dot, mat.depth(sp), dx, slope), kappa, box, n);
        auto g = fd.ground_state(1e-7, 48, 200);
        return fd.expectation_coord(g, 0);
    };
    double fd_px = fd_expect(Species::electron) - fd_expect(Species::hole);
    CHECK(std::abs(p[0] - fd_px) / std::abs(fd_px) < 0.05);
}
