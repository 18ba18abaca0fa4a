#ifndef QUADLIN_LAPLACE_HPP
#define QUADLIN_LAPLACE_HPP

// Massive Laplace-type operator on the black vertices,
//
//   (L x)(x0) = M(x0) x0 - sum_k w_k x_{k,k+1},
//   w_k = f(a_{k+1} - a_k),  M(x0) = sum_k g0(a_{k+1} - a_k),
//
// over the counterclockwise fan of the black star of x0, and the two per-quad
// Dirichlet energies whose Euler-Lagrange equations it is.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "coeffs.hpp"
#include "errors.hpp"
#include "quadeq.hpp"
#include "quadgraph.hpp"

namespace quadlin
{

template <std::floating_point Real>
struct LaplaceRow
{
    int vertex;
    Real mass;        ///< sum g0(a_{k+1} - a_k)
    Real mass_via_g;  ///< sum g(a_{k+1}, a_k); equals mass for every lambda0
    std::vector<std::pair<int, Real>> neighbors; ///< (opposite black vertex, weight)
};

template <std::floating_point Real>
struct LaplaceOperator
{
    std::vector<LaplaceRow<Real>> rows; ///< interior black vertices, by id
    std::vector<int> interior;
    std::vector<int> boundary;

    const LaplaceRow<Real>& row(int vertex) const
    {
        for (const auto& r : rows) {
            if (r.vertex == vertex) return r;
        }
        throw domain_error("vertex " + std::to_string(vertex) + " is not an interior black vertex");
    }

    bool is_interior(int vertex) const { return std::binary_search(interior.begin(), interior.end(), vertex); }

    /// Max |w(u -> v) - w(v -> u)| over pairs of interior rows.
    Real symmetry_defect() const
    {
        std::map<std::pair<int, int>, Real> w;
        for (const auto& r : rows) {
            for (auto [n, x] : r.neighbors) w[{r.vertex, n}] += x;
        }
        Real d = 0;
        for (const auto& [key, x] : w) {
            auto it = w.find({key.second, key.first});
            if (it != w.end()) d = std::max(d, std::abs(x - it->second));
        }
        return d;
    }
};

/// One row per interior black star; black vertices with incomplete stars are boundary.
template <CoefficientSource C>
LaplaceOperator<typename C::real_type> assemble(const QuadGraph& g, const C& fam)
{
    using Real = typename C::real_type;
    LaplaceOperator<Real> L;
    for (const auto& star : black_stars(g)) {
        LaplaceRow<Real> row{star.center, 0, 0, {}};
        std::map<int, Real> acc;
        for (const auto& e : star.fan) {
            const Real a0 = Real(e.alpha_k), a1 = Real(e.alpha_k1);
            acc[e.opposite] += std::real(fam.f(a1 - a0));
            row.mass += std::real(fam.g0(a1 - a0));
            row.mass_via_g += std::real(fam.g(a1, a0));
        }
        row.neighbors.assign(acc.begin(), acc.end());
        L.interior.push_back(star.center);
        L.rows.push_back(std::move(row));
    }
    for (const auto& v : g.vertices()) {
        if (v.color == Color::black && !std::binary_search(L.interior.begin(), L.interior.end(), v.id)) {
            L.boundary.push_back(v.id);
        }
    }
    std::sort(L.boundary.begin(), L.boundary.end());
    return L;
}

/// (L x)(v) = M x(v) - sum w x(opposite) at every interior black vertex.
template <std::floating_point Real>
std::map<int, std::complex<Real>> residual(const LaplaceOperator<Real>& L, const FieldAssignment<Real>& x)
{
    if (x.domain == FieldDomain::white) throw domain_error("Laplace residual needs values on black vertices");
    std::map<int, std::complex<Real>> out;
    for (const auto& r : L.rows) {
        std::complex<Real> s = r.mass * x.at(r.vertex);
        for (auto [n, w] : r.neighbors) s -= w * x.at(n);
        out.emplace(r.vertex, s);
    }
    return out;
}

template <std::floating_point Real>
Real max_abs(const std::map<int, std::complex<Real>>& m)
{
    Real best = 0;
    for (const auto& [id, v] : m) best = std::max(best, std::abs(v));
    return best;
}

enum class EnergyForm
{
    gg,
    g0
};

inline std::string_view to_string(EnergyForm f) { return f == EnergyForm::gg ? "gg" : "g0"; }

/// 2x2 symmetric matrix S of one quad, energy = [x0 x12] S [x0 x12]^T.
template <std::floating_point Real>
struct QuadForm
{
    Real s00, s01, s11;

    std::pair<Real, Real> eigenvalues() const
    {
        const Real mean = (s00 + s11) / 2;
        const Real rad = std::hypot((s00 - s11) / 2, s01);
        return {mean - rad, mean + rad};
    }
};

namespace detail
{

inline double black_angle(const Face& f, std::size_t index)
{
    const double phi = f.angle();
    if (!(phi > angle_tol && phi < std::numbers::pi - angle_tol)) {
        throw geometry_error("face " + std::to_string(index) + " is not positively oriented");
    }
    return phi;
}

} // namespace detail

/// Per-quad form in the black rhombus angle phi = beta - alpha:
///   g0: (1/2) g0(phi) (x0^2 + x12^2) - f(phi) x0 x12
///   gg: (1/2) g(beta, alpha) x0^2 + (1/2) g(beta + pi, alpha + pi) x12^2 - f(phi) x0 x12
template <CoefficientSource C>
QuadForm<typename C::real_type> quad_form(const C& fam, const Face& face, EnergyForm form, std::size_t index = 0)
{
    using Real = typename C::real_type;
    const Real pi = std::numbers::pi_v<Real>;
    const Real phi = Real(detail::black_angle(face, index));
    const Real a = Real(face.alpha), b = Real(face.beta);
    const Real cross = -std::real(fam.f(phi)) / 2;
    if (form == EnergyForm::g0) {
        const Real d = std::real(fam.g0(phi)) / 2;
        return {d, cross, d};
    }
    return {std::real(fam.g(b, a)) / 2, cross, std::real(fam.g(b + pi, a + pi)) / 2};
}

/// Sum of the per-quad forms; x must be known on every black corner.
template <CoefficientSource C>
std::complex<typename C::real_type> dirichlet_energy(const QuadGraph& g, const C& fam,
                                                     const FieldAssignment<typename C::real_type>& x,
                                                     EnergyForm form)
{
    using Real = typename C::real_type;
    std::complex<Real> e(0);
    for (std::size_t k = 0; k < g.faces().size(); ++k) {
        const auto& f = g.faces()[k];
        const auto q = quad_form(fam, f, form, k);
        const auto u = x.at(f.x0()), v = x.at(f.x12());
        e += q.s00 * u * u + Real(2) * q.s01 * u * v + q.s11 * v * v;
    }
    return e;
}

template <std::floating_point Real>
struct QuadSpectrum
{
    int face;
    Real min_eigenvalue;
    Real max_eigenvalue;
};

/// Eigenvalues of every per-quad 2x2 form.
template <CoefficientSource C>
std::vector<QuadSpectrum<typename C::real_type>> positivity_certificate(const QuadGraph& g, const C& fam,
                                                                        EnergyForm form)
{
    using Real = typename C::real_type;
    std::vector<QuadSpectrum<Real>> out;
    for (std::size_t k = 0; k < g.faces().size(); ++k) {
        const auto [lo, hi] = quad_form(fam, g.faces()[k], form, k).eigenvalues();
        out.push_back({int(k), lo, hi});
    }
    return out;
}

template <std::floating_point Real>
Real min_eigenvalue(const std::vector<QuadSpectrum<Real>>& cert)
{
    Real m = std::numeric_limits<Real>::infinity();
    for (const auto& q : cert) m = std::min(m, q.min_eigenvalue);
    return m;
}

// ---------------------------------------------------------------------------
// Dirichlet problem

enum class SolverKind
{
    conjugate_gradient,
    lu
};

template <std::floating_point Real>
struct DirichletSolution
{
    FieldAssignment<Real> interior; ///< black domain, interior vertices only
    SolverKind solver;
    int iterations;
    Real residual; ///< max |L x| over interior rows
};

/// Positive weights and mass dominating the weight sum in every row (symmetric positive
/// definite together with the Dirichlet boundary).
template <std::floating_point Real>
bool is_positive_operator(const LaplaceOperator<Real>& L)
{
    for (const auto& r : L.rows) {
        if (!(r.mass > 0)) return false;
        Real sum = 0;
        for (auto [n, w] : r.neighbors) {
            if (!(w > 0)) return false;
            sum += w;
        }
        if (r.mass < sum - Real(1e-12) * (1 + std::abs(sum))) return false;
    }
    return L.symmetry_defect() < Real(1e-10);
}

/// Interior values with (L x)(v) = 0 at interior v and x = boundary on boundary black vertices.
/// CG (diagonal preconditioner, tol 1e-12) for positive operators, dense LU otherwise.
template <std::floating_point Real>
DirichletSolution<Real> solve_dirichlet(const LaplaceOperator<Real>& L, const FieldAssignment<Real>& boundary)
{
    using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 2>;
    const int n = static_cast<int>(L.rows.size());
    std::map<int, int> index;
    for (int k = 0; k < n; ++k) index[L.rows[k].vertex] = k;

    std::vector<Eigen::Triplet<Real>> trip;
    Vec rhs = Vec::Zero(n, 2);
    for (int k = 0; k < n; ++k) {
        const auto& r = L.rows[k];
        trip.emplace_back(k, k, r.mass);
        for (auto [v, w] : r.neighbors) {
            auto it = index.find(v);
            if (it != index.end()) {
                trip.emplace_back(k, it->second, -w);
            } else {
                const auto b = boundary.at(v);
                rhs(k, 0) += w * b.real();
                rhs(k, 1) += w * b.imag();
            }
        }
    }
    Eigen::SparseMatrix<Real> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());

    DirichletSolution<Real> sol{{FieldDomain::black, {}}, SolverKind::lu, 0, 0};
    Vec x(n, 2);
    bool solved = false;
    if (n == 0) {
        solved = true;
    } else if (is_positive_operator(L)) {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<Real>, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<Real>>
            cg;
        cg.setTolerance(Real(1e-12));
        cg.setMaxIterations(10 * n);
        cg.compute(A);
        for (int c = 0; c < 2 && cg.info() == Eigen::Success; ++c) {
            x.col(c) = cg.solve(rhs.col(c));
            sol.iterations = std::max(sol.iterations, int(cg.iterations()));
        }
        if (cg.info() == Eigen::Success && x.allFinite()) {
            solved = true;
            sol.solver = SolverKind::conjugate_gradient;
        }
    }
    if (!solved) {
        const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> dense(A);
        Eigen::PartialPivLU<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> lu(dense);
        const Real rcond = lu.rcond();
        if (!(rcond > Real(1e-14))) {
            throw solver_error("Dirichlet system is singular", rcond > 0 ? double(1 / rcond) : std::numeric_limits<double>::infinity());
        }
        x = lu.solve(rhs);
        sol.solver = SolverKind::lu;
    }
    for (int k = 0; k < n; ++k) sol.interior.set(L.rows[k].vertex, {x(k, 0), x(k, 1)});

    FieldAssignment<Real> all = sol.interior;
    for (int v : L.boundary) {
        if (boundary.contains(v)) all.set(v, boundary.at(v));
    }
    sol.residual = max_abs(residual(L, all));
    const Real scale = boundary.max_abs();
    if (!std::isfinite(sol.residual)
        || (sol.residual > Real(1e-9) * std::max(scale, Real(1e-300)) && sol.residual > Real(1e-300))) {
        throw solver_error("Dirichlet residual above tolerance", double(sol.residual));
    }
    return sol;
}

} // namespace quadlin

#endif
