#include "dotforge/basis3d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dotforge/quad.hpp"

namespace dotforge::basis3d {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using wells1d::Well1DState;

namespace {

double field_component(const Vec3& field, int axis) { return field[axis]; }

// potential-energy slope for a species in a field component, meV/nm
double tilt_slope(Species s, double E_kVcm) {
    return -MaterialParams::charge(s) * constants::field_slope_per_kVcm * E_kVcm;
}

// integral of f over [a, b] resolving oscillations up to kmax
template <class F>
double integrate(const F& f, double a, double b, double kmax) {
    if (b <= a) return 0.0;
    return quad::gauss16_panels(f, a, b, quad::panels_for(a, b, kmax, 2));
}

double pair_integral(const Well1DState& si, const Well1DState& sj, int which /*0=s,1=kin,2=iw,3=pos*/) {
    const double w = si.width_w, L = si.box_L;
    auto f = [&](double x) {
        switch (which) {
            case 1: return wells1d::eval_deriv(si, x) * wells1d::eval_deriv(sj, x);
            case 3: return x * wells1d::eval(si, x) * wells1d::eval(sj, x);
            default: return wells1d::eval(si, x) * wells1d::eval(sj, x);
        }
    };
    const double kin = si.k_in + sj.k_in;
    const double kout = si.k_out + sj.k_out;
    if (which == 2) return integrate(f, -w / 2, w / 2, kin);
    return integrate(f, -L / 2, -w / 2, kout) + integrate(f, -w / 2, w / 2, kin) +
           integrate(f, w / 2, L / 2, kout);
}

// Kronecker product with z fastest: element ((ix,iy,iz),(jx,jy,jz)) = X(ix,jx) Y(iy,jy) Z(iz,jz)
MatrixXd kron3(const MatrixXd& X, const MatrixXd& Y, const MatrixXd& Z) {
    const int nx = (int)X.rows(), ny = (int)Y.rows(), nz = (int)Z.rows();
    const int mx = (int)X.cols(), my = (int)Y.cols(), mz = (int)Z.cols();
    MatrixXd out(nx * ny * nz, mx * my * mz);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            for (int iz = 0; iz < nz; ++iz)
                for (int jx = 0; jx < mx; ++jx)
                    for (int jy = 0; jy < my; ++jy)
                        for (int jz = 0; jz < mz; ++jz)
                            out((ix * ny + iy) * nz + iz, (jx * my + jy) * mz + jz) =
                                X(ix, jx) * Y(iy, jy) * Z(iz, jz);
    return out;
}

// Apply matrix A along one tensor axis of v with dims (n0,n1,n2), z fastest.
VectorXd apply_axis(const MatrixXd& A, const VectorXd& v, int n0, int n1, int n2, int axis) {
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const int m = (int)A.rows();
    if (axis == 0) {
        Eigen::Map<const RowMat> V(v.data(), n0, n1 * n2);
        VectorXd out(m * n1 * n2);
        Eigen::Map<RowMat>(out.data(), m, n1 * n2) = A * V;
        return out;
    }
    if (axis == 2) {
        Eigen::Map<const RowMat> V(v.data(), n0 * n1, n2);
        VectorXd out(n0 * n1 * m);
        Eigen::Map<RowMat>(out.data(), n0 * n1, m) = V * A.transpose();
        return out;
    }
    VectorXd out(n0 * m * n2);
    for (int i = 0; i < n0; ++i) {
        Eigen::Map<const RowMat> B(v.data() + (size_t)i * n1 * n2, n1, n2);
        Eigen::Map<RowMat>(out.data() + (size_t)i * m * n2, m, n2) = A * B;
    }
    return out;
}

struct KronTerm {
    double coeff;
    const MatrixXd* m[3];
};

VectorXd apply_terms(const std::vector<KronTerm>& terms, const VectorXd& v, int n0, int n1, int n2) {
    VectorXd out = VectorXd::Zero(v.size());
    for (const auto& t : terms) {
        VectorXd tmp = apply_axis(*t.m[0], v, n0, n1, n2, 0);
        tmp = apply_axis(*t.m[1], tmp, n0, n1, n2, 1);
        tmp = apply_axis(*t.m[2], tmp, n0, n1, n2, 2);
        out += t.coeff * tmp;
    }
    return out;
}

std::vector<KronTerm> hamiltonian_terms(const ProductBasis& basis,
                                        const std::array<Axis1DMatrices, 3>& ax, const Vec3& field) {
    const double V = basis.material.depth(basis.species);
    std::vector<KronTerm> terms;
    terms.push_back({1.0, {&ax[0].kin, &ax[1].s, &ax[2].s}});
    terms.push_back({1.0, {&ax[0].s, &ax[1].kin, &ax[2].s}});
    terms.push_back({1.0, {&ax[0].s, &ax[1].s, &ax[2].kin}});
    // confinement: V outside the cuboid = V (1 - chi_x chi_y chi_z)
    terms.push_back({V, {&ax[0].s, &ax[1].s, &ax[2].s}});
    terms.push_back({-V, {&ax[0].inwell, &ax[1].inwell, &ax[2].inwell}});
    for (int a = 0; a < 3; ++a) {
        double slope = tilt_slope(basis.species, field_component(field, a));
        if (slope != 0.0) {
            KronTerm t{slope, {&ax[0].s, &ax[1].s, &ax[2].s}};
            t.m[a] = &ax[a].pos;
            terms.push_back(t);
        }
    }
    return terms;
}

// deterministic pseudo-random start vector for Lanczos
VectorXd seeded_vector(int n) {
    VectorXd v(n);
    uint64_t s = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        v[i] = (double)(s % 1000003) / 1000003.0 - 0.5;
    }
    v.normalize();
    return v;
}

// Lanczos with full reorthogonalization for the lowest eigenpair of a symmetric operator.
template <class Op>
std::pair<double, VectorXd> lanczos_ground(const Op& apply, int n, int max_iter, double tol = 1e-11) {
    max_iter = std::min(max_iter, n);
    std::vector<VectorXd> basis;
    std::vector<double> alpha, beta;
    VectorXd v = seeded_vector(n);
    basis.push_back(v);
    VectorXd w;
    double theta = 0.0;
    Eigen::SelfAdjointEigenSolver<MatrixXd> small;
    int m = 0;
    for (int it = 0; it < max_iter; ++it) {
        w = apply(basis[it]);
        double a = basis[it].dot(w);
        alpha.push_back(a);
        w -= a * basis[it];
        if (it > 0) w -= beta[it - 1] * basis[it - 1];
        for (const auto& q : basis) w -= q.dot(w) * q; // full reorthogonalization
        double b = w.norm();
        m = it + 1;
        bool breakdown = b < 1e-13;
        if ((it >= 8 && it % 4 == 0) || breakdown || it == max_iter - 1) {
            MatrixXd T = MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            small.compute(T);
            theta = small.eigenvalues()(0);
            double resid = breakdown ? 0.0 : std::abs(b * small.eigenvectors()(m - 1, 0));
            if (resid < tol * std::max(1.0, std::abs(theta)) || breakdown || it == max_iter - 1) {
                VectorXd y = VectorXd::Zero(n);
                for (int i = 0; i < m; ++i) y += small.eigenvectors()(i, 0) * basis[i];
                y.normalize();
                return {theta, y};
            }
        }
        beta.push_back(b);
        basis.push_back(w / b);
    }
    throw std::runtime_error("lanczos_ground: failed to converge");
}

} // namespace

ProductBasis build_basis(const DotGeometry& dot, const MaterialParams& material, Species species,
                         const SolverOptions& opts, const Vec3& field) {
    dot.validate();
    material.validate();
    if (opts.n_unbound < 0) throw std::invalid_argument("build_basis: n_unbound must be >= 0");

    ProductBasis basis;
    basis.species = species;
    basis.dot = dot;
    basis.material = material;
    basis.flagged_unconverged = (opts.n_unbound == 0);
    for (int a = 0; a < 3; ++a) {
        double factor = field_component(field, a) != 0.0 ? opts.field_box_factor : opts.box_factor;
        wells1d::Well1DParams p{dot.width(a), material.depth(species), material.mass(species),
                                factor * dot.width(a)};
        basis.box_L[a] = p.box_L;
        auto states = wells1d::solve_bound(p);
        if (opts.n_unbound > 0) {
            auto unb = wells1d::solve_unbound(p, opts.n_unbound);
            states.insert(states.end(), unb.begin(), unb.end());
        }
        std::sort(states.begin(), states.end(),
                  [](const auto& x, const auto& y) { return x.energy < y.energy; });
        basis.axis_states[a] = std::move(states);
    }
    return basis;
}

Axis1DMatrices axis_matrices(const ProductBasis& basis, int axis) {
    const auto& st = basis.axis_states[axis];
    const int n = (int)st.size();
    const double kappa = constants::hbar2_over_2m0 / basis.material.mass(basis.species);
    Axis1DMatrices m{MatrixXd(n, n), MatrixXd(n, n), MatrixXd(n, n), MatrixXd(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m.s(i, j) = m.s(j, i) = pair_integral(st[i], st[j], 0);
            m.kin(i, j) = m.kin(j, i) = kappa * pair_integral(st[i], st[j], 1);
            m.inwell(i, j) = m.inwell(j, i) = pair_integral(st[i], st[j], 2);
            m.pos(i, j) = m.pos(j, i) = pair_integral(st[i], st[j], 3);
        }
    return m;
}

Eigen::MatrixXd overlap_matrix(const ProductBasis& basis) {
    if (basis.dim() == 0) throw std::invalid_argument("overlap_matrix: empty basis");
    std::array<Axis1DMatrices, 3> ax = {axis_matrices(basis, 0), axis_matrices(basis, 1),
                                        axis_matrices(basis, 2)};
    return kron3(ax[0].s, ax[1].s, ax[2].s);
}

Orthogonalizer canonical_orthogonalize(const Eigen::MatrixXd& S, double eps) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("canonical_orthogonalize: eigendecomposition failed");
    const auto& lam = es.eigenvalues();
    int kept = 0;
    for (int i = 0; i < lam.size(); ++i)
        if (lam(i) > eps) ++kept;
    Orthogonalizer out;
    out.pruned = (int)lam.size() - kept;
    out.X.resize(S.rows(), kept);
    int c = 0;
    for (int i = 0; i < lam.size(); ++i)
        if (lam(i) > eps) out.X.col(c++) = es.eigenvectors().col(i) / std::sqrt(lam(i));
    return out;
}

Eigen::MatrixXd hamiltonian_matrix(const ProductBasis& basis, const Vec3& field) {
    std::array<Axis1DMatrices, 3> ax = {axis_matrices(basis, 0), axis_matrices(basis, 1),
                                        axis_matrices(basis, 2)};
    auto terms = hamiltonian_terms(basis, ax, field);
    MatrixXd H = MatrixXd::Zero(basis.dim(), basis.dim());
    for (const auto& t : terms) H += t.coeff * kron3(*t.m[0], *t.m[1], *t.m[2]);
    return H;
}

namespace {

EnvelopeState make_state(double energy, const VectorXd& y, const VectorXd& orig,
                         const ProductBasis& basis) {
    EnvelopeState st;
    st.energy = energy;
    st.coeffs = y;
    st.orig_coeffs = orig;
    st.species = basis.species;
    const int i0 = basis.flat_index(0, 0, 0);
    if (st.orig_coeffs(i0) < 0) {
        st.orig_coeffs = -st.orig_coeffs;
        st.coeffs = -st.coeffs;
    }
    st.dominant_amplitude = std::abs(st.orig_coeffs(i0));
    return st;
}

} // namespace

std::vector<EnvelopeState> solve_states(const Eigen::MatrixXd& H, const Orthogonalizer& orth,
                                        const ProductBasis& basis, int n_states) {
    if (H.rows() != orth.X.rows()) throw std::invalid_argument("solve_states: dimension mismatch");
    MatrixXd Hp = orth.X.transpose() * H * orth.X;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hp);
    if (es.info() != Eigen::Success) throw std::runtime_error("solve_states: eigensolve failed");
    n_states = std::min<int>(n_states, (int)Hp.rows());

    std::vector<EnvelopeState> out;
    for (int i = 0; i < n_states; ++i) {
        VectorXd y = es.eigenvectors().col(i);
        out.push_back(make_state(es.eigenvalues()(i), y, orth.X * y, basis));
    }
    // deterministic order for degenerate levels: energy, then lexicographic dominant index
    std::stable_sort(out.begin(), out.end(), [&](const EnvelopeState& a, const EnvelopeState& b) {
        if (std::abs(a.energy - b.energy) > 1e-9 * (1.0 + std::abs(a.energy))) return a.energy < b.energy;
        int ia, ib;
        a.orig_coeffs.cwiseAbs().maxCoeff(&ia);
        b.orig_coeffs.cwiseAbs().maxCoeff(&ib);
        return basis.unflatten(ia) < basis.unflatten(ib);
    });
    return out;
}

EnvelopeState ground_state(const ProductBasis& basis, const Vec3& field) {
    const int n0 = basis.count(0), n1 = basis.count(1), n2 = basis.count(2);
    std::array<Axis1DMatrices, 3> ax = {axis_matrices(basis, 0), axis_matrices(basis, 1),
                                        axis_matrices(basis, 2)};
    auto terms = hamiltonian_terms(basis, ax, field);

    // separable canonical orthogonalization: S = s_x (x) s_y (x) s_z
    std::array<Eigen::SelfAdjointEigenSolver<MatrixXd>, 3> es;
    for (int a = 0; a < 3; ++a) {
        es[a].compute(ax[a].s);
        if (es[a].info() != Eigen::Success)
            throw std::runtime_error("ground_state: axis overlap eigensolve failed");
    }
    const double eps = 1e-10;
    VectorXd invsqrt(basis.dim());
    VectorXd pruned_penalty = VectorXd::Zero(basis.dim());
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            for (int k = 0; k < n2; ++k) {
                double lam = es[0].eigenvalues()(i) * es[1].eigenvalues()(j) * es[2].eigenvalues()(k);
                int idx = (i * n1 + j) * n2 + k;
                invsqrt(idx) = lam > eps ? 1.0 / std::sqrt(lam) : 0.0;
                // pruned directions must not masquerade as zero-energy eigenstates
                if (!(lam > eps)) pruned_penalty(idx) = 1e9;
            }

    std::array<MatrixXd, 3> U = {es[0].eigenvectors(), es[1].eigenvectors(), es[2].eigenvectors()};
    std::array<MatrixXd, 3> Ut = {U[0].transpose(), U[1].transpose(), U[2].transpose()};

    auto to_orig = [&](const VectorXd& y) {
        VectorXd z = invsqrt.cwiseProduct(y);
        z = apply_axis(U[0], z, n0, n1, n2, 0);
        z = apply_axis(U[1], z, n0, n1, n2, 1);
        z = apply_axis(U[2], z, n0, n1, n2, 2);
        return z;
    };
    auto hprime = [&](const VectorXd& y) {
        VectorXd c = to_orig(y);
        VectorXd hc = apply_terms(terms, c, n0, n1, n2);
        hc = apply_axis(Ut[0], hc, n0, n1, n2, 0);
        hc = apply_axis(Ut[1], hc, n0, n1, n2, 1);
        hc = apply_axis(Ut[2], hc, n0, n1, n2, 2);
        return VectorXd(invsqrt.cwiseProduct(hc) + pruned_penalty.cwiseProduct(y));
    };

    auto [theta, y] = lanczos_ground(hprime, basis.dim(), 600);
    return make_state(theta, y, to_orig(y), basis);
}

double ground_energy(const DotGeometry& dot, const MaterialParams& material, Species species,
                     const SolverOptions& opts, const Vec3& field) {
    return ground_state(build_basis(dot, material, species, opts, field), field).energy;
}

GroundPair solve_pair(const DotGeometry& dot, const MaterialParams& material, const Vec3& field,
                      const SolverOptions& opts) {
    GroundPair pair{{}, {}, build_basis(dot, material, Species::electron, opts, field),
                    build_basis(dot, material, Species::hole, opts, field)};
    pair.electron = ground_state(pair.basis_e, field);
    pair.hole = ground_state(pair.basis_h, field);
    return pair;
}

namespace {

// overlap of electron and hole axis states over the common box
MatrixXd mixed_axis_overlap(const std::vector<Well1DState>& se, const std::vector<Well1DState>& sh) {
    MatrixXd m((int)se.size(), (int)sh.size());
    for (size_t i = 0; i < se.size(); ++i)
        for (size_t j = 0; j < sh.size(); ++j) {
            const auto &a = se[i], &b = sh[j];
            if (std::abs(a.box_L - b.box_L) > 1e-9)
                throw std::invalid_argument("mixed_axis_overlap: electron and hole boxes differ");
            auto f = [&](double x) { return wells1d::eval(a, x) * wells1d::eval(b, x); };
            const double w = a.width_w, L = a.box_L;
            double kin = a.k_in + b.k_in, kout = a.k_out + b.k_out;
            m((int)i, (int)j) = integrate(f, -L / 2, -w / 2, kout) + integrate(f, -w / 2, w / 2, kin) +
                                integrate(f, w / 2, L / 2, kout);
        }
    return m;
}

} // namespace

double overlap_integral_O(const GroundPair& pair) {
    const auto& be = pair.basis_e;
    const auto& bh = pair.basis_h;
    int d0 = bh.count(0), d1 = bh.count(1), d2 = bh.count(2);
    VectorXd v = pair.hole.orig_coeffs;
    for (int a = 0; a < 3; ++a) {
        MatrixXd m = mixed_axis_overlap(be.axis_states[a], bh.axis_states[a]);
        v = apply_axis(m, v, d0, d1, d2, a);
        (a == 0 ? d0 : a == 1 ? d1 : d2) = be.count(a);
    }
    double O = std::abs(pair.electron.orig_coeffs.dot(v));
    return std::min(O, 1.0 + 1e-9);
}

double overlap_integral_O(const DotGeometry& dot, const MaterialParams& material, const Vec3& field,
                          const SolverOptions& opts) {
    return overlap_integral_O(solve_pair(dot, material, field, opts));
}

Vec3 position_expectation(const EnvelopeState& state, const ProductBasis& basis) {
    std::array<Axis1DMatrices, 3> ax = {axis_matrices(basis, 0), axis_matrices(basis, 1),
                                        axis_matrices(basis, 2)};
    const int n0 = basis.count(0), n1 = basis.count(1), n2 = basis.count(2);
    Vec3 r{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
        KronTerm t{1.0, {&ax[0].s, &ax[1].s, &ax[2].s}};
        t.m[a] = &ax[a].pos;
        VectorXd v = apply_terms({t}, state.orig_coeffs, n0, n1, n2);
        r[a] = state.orig_coeffs.dot(v);
    }
    return r;
}

Vec3 induced_dipole(const GroundPair& pair) {
    Vec3 re = position_expectation(pair.electron, pair.basis_e);
    Vec3 rh = position_expectation(pair.hole, pair.basis_h);
    return {re[0] - rh[0], re[1] - rh[1], re[2] - rh[2]}; // p = e(<r>_e - <r>_h), e*nm
}

Vec3 induced_dipole(const DotGeometry& dot, const MaterialParams& material, const Vec3& field,
                    const SolverOptions& opts) {
    return induced_dipole(solve_pair(dot, material, field, opts));
}

std::vector<GroundSweepRow> ground_energy_sweep(Family family, const std::vector<double>& sizes,
                                                const std::vector<double>& potentials, double mass,
                                                const SolverOptions& opts) {
    std::vector<GroundSweepRow> rows;
    for (double V : potentials)
        for (double a : sizes) {
            DotGeometry dot =
                family == Family::cube ? DotGeometry::cube(a) : DotGeometry::flat_cuboid(a);
            MaterialParams mat;
            mat.m_e_eff = mass;
            mat.V_e = V;
            rows.push_back({a, family, mass, V,
                            ground_energy(dot, mat, Species::electron, opts)});
        }
    return rows;
}

} // namespace dotforge::basis3d
