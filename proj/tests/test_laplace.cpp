#include "support.hpp"

#include <gtest/gtest.h>

using namespace quadlin;
using namespace testing_support;
using Field = FieldAssignment<double>;

namespace
{

Field black_field(const QuadGraph& g, Rng& rng)
{
    Field x;
    x.domain = FieldDomain::black;
    for (const auto& v : g.vertices()) {
        if (v.color == Color::black) x.set(v.id, rng.complex());
    }
    return x;
}

Field boundary_of(const LaplaceOperator<double>& L, const Field& x)
{
    Field b;
    b.domain = FieldDomain::black;
    for (int v : L.boundary) b.set(v, x.at(v));
    return b;
}

} // namespace

TEST(Laplace, SquareGridRowsAreSymmetric)
{
    const auto g = gen_square_grid(4, 0, pi / 2);
    const auto fam = Fam::rectangular(1.0);
    const auto L = assemble(g, fam);
    ASSERT_EQ(L.rows.size(), 5u);
    const double w = fam.f(pi / 2).real();
    for (const auto& r : L.rows) {
        ASSERT_EQ(r.neighbors.size(), 4u);
        for (auto [n, x] : r.neighbors) EXPECT_NEAR(x, w, 1e-15);
        EXPECT_NEAR(r.mass, 4 * fam.g0(pi / 2).real(), 1e-14);
    }
    EXPECT_LT(L.symmetry_defect(), 1e-15);
}

TEST(Laplace, MassViaGAgreesForEveryLambda0)
{
    const auto g = gen_square_grid(6, 0.3, 1.9);
    for (const auto& base : elliptic_families()) {
        const auto L1 = assemble(g, base.with_lambda0(0.1));
        const auto L2 = assemble(g, base.with_lambda0(-1.3));
        ASSERT_EQ(L1.rows.size(), L2.rows.size());
        for (std::size_t k = 0; k < L1.rows.size(); ++k) {
            EXPECT_NEAR(L1.rows[k].mass, L1.rows[k].mass_via_g, 1e-10);
            EXPECT_NEAR(L2.rows[k].mass, L2.rows[k].mass_via_g, 1e-10);
            EXPECT_NEAR(L1.rows[k].mass, L2.rows[k].mass, 1e-10);
            ASSERT_EQ(L1.rows[k].neighbors.size(), L2.rows[k].neighbors.size());
            for (std::size_t j = 0; j < L1.rows[k].neighbors.size(); ++j) {
                EXPECT_EQ(L1.rows[k].neighbors[j].first, L2.rows[k].neighbors[j].first);
                EXPECT_NEAR(L1.rows[k].neighbors[j].second, L2.rows[k].neighbors[j].second, 1e-10);
            }
        }
        EXPECT_LT(L1.symmetry_defect(), 1e-12);
    }
}

TEST(Laplace, DegenerateAnnihilatesConstants)
{
    const auto g = gen_square_grid(6, 0.2, 1.4);
    const auto L = assemble(g, Fam::degenerate());
    Field one;
    one.domain = FieldDomain::black;
    for (const auto& v : g.vertices()) {
        if (v.color == Color::black) one.set(v.id, 1.0);
    }
    EXPECT_LT(max_abs(residual(L, one)), 1e-12);
}

TEST(Laplace, RectangularIsMassive)
{
    const auto g = gen_square_grid(6, 0.2, 1.4);
    const auto L = assemble(g, Fam::rectangular(1.0));
    for (const auto& r : L.rows) {
        double sum = 0;
        for (auto [n, w] : r.neighbors) {
            EXPECT_GT(w, 0);
            sum += w;
        }
        EXPECT_GT(r.mass - sum, 1e-3);
    }
    EXPECT_TRUE(is_positive_operator(L));
}

TEST(Laplace, ResidualOfZeroRandomAndExponential)
{
    const auto g = gen_square_grid(8, 0.25, 1.7);
    Rng rng(41);
    for (const auto& fam : all_families(0.6)) {
        const auto L = assemble(g, fam);
        Field zero = black_field(g, rng);
        for (auto& [id, v] : zero.values) v = 0;
        EXPECT_EQ(max_abs(residual(L, zero)), 0.0);
        EXPECT_GT(max_abs(residual(L, black_field(g, rng))), 1e-3);
        for (double lambda : {0.9, 2.4}) {
            const auto e = discrete_exponential(g, fam, lambda, 0).restrict_to(g, Color::black);
            EXPECT_LT(max_abs(residual(L, e)), 1e-9 * (1 + e.max_abs())) << to_string(fam.regime());
        }
    }
    Field white;
    white.domain = FieldDomain::white;
    EXPECT_THROW(residual(assemble(g, Fam::rectangular(1.0)), white), domain_error);
}

TEST(Laplace, EnergyOfZeroAndConstantsAtZeroNome)
{
    const auto g = gen_square_grid(4, 0.2, 1.4);
    Rng rng(42);
    auto x = black_field(g, rng);
    for (auto& [id, v] : x.values) v = 0;
    EXPECT_EQ(dirichlet_energy(g, Fam::rectangular(1.0), x, EnergyForm::gg), Cx(0));
    EXPECT_EQ(dirichlet_energy(g, Fam::rectangular(1.0), x, EnergyForm::g0), Cx(0));
    for (auto& [id, v] : x.values) v = 2.5;
    EXPECT_LT(std::abs(dirichlet_energy(g, Fam::degenerate(), x, EnergyForm::gg)), 1e-12);
    // Complete square 1/2 f (x12 - x0)^2 per quad.
    const auto fam = Fam::degenerate();
    for (const auto& f : g.faces()) {
        const auto q = quad_form(fam, f, EnergyForm::gg);
        const double half_f = fam.f(f.angle()).real() / 2;
        EXPECT_NEAR(q.s00, half_f, 1e-14);
        EXPECT_NEAR(q.s11, half_f, 1e-14);
        EXPECT_NEAR(q.s01, -half_f, 1e-14);
    }
}

TEST(Laplace, EnergyGradientIsTheLaplaceRow)
{
    const auto g = gen_square_grid(5, 0.3, 1.6);
    Rng rng(43);
    for (const auto& fam : all_families(0.4)) {
        const auto L = assemble(g, fam);
        const auto x = black_field(g, rng);
        const auto row = residual(L, x);
        for (auto form : {EnergyForm::g0, EnergyForm::gg}) {
            for (int v : L.interior) {
                const double h = 1e-6;
                auto plus = x, minus = x;
                plus.values[v] += h;
                minus.values[v] -= h;
                const Cx fd = (dirichlet_energy(g, fam, plus, form) - dirichlet_energy(g, fam, minus, form)) / (2 * h);
                EXPECT_LT(std::abs(fd - row.at(v)), 1e-6 * std::max(1.0, std::abs(row.at(v))))
                    << to_string(fam.regime()) << " " << to_string(form);
            }
        }
    }
}

TEST(Laplace, FormsShareInteriorRows)
{
    // Exact gradients from the per-quad coefficients, compared at interior vertices.
    const auto g = gen_square_grid(5, 0.3, 1.6);
    Rng rng(44);
    for (const auto& fam : elliptic_families(0.9)) {
        const auto x = black_field(g, rng);
        std::map<int, Cx> grad[2];
        int slot = 0;
        for (auto form : {EnergyForm::g0, EnergyForm::gg}) {
            for (const auto& f : g.faces()) {
                const auto q = quad_form(fam, f, form);
                const Cx u = x.at(f.x0()), v = x.at(f.x12());
                grad[slot][f.x0()] += 2 * q.s00 * u + 2 * q.s01 * v;
                grad[slot][f.x12()] += 2 * q.s11 * v + 2 * q.s01 * u;
            }
            ++slot;
        }
        const auto L = assemble(g, fam);
        for (int v : L.interior) EXPECT_LT(std::abs(grad[0][v] - grad[1][v]), 1e-10);
    }
}

TEST(Laplace, PositivityRectangular)
{
    for (double tau0 : {0.5, 1.0, 2.0}) {
        const auto fam = Fam::rectangular(tau0, 0.35);
        for (double phi = 0.2; phi < pi - 0.2 + 1e-12; phi += 0.1) {
            const auto g = gen_square_grid(2, 0.1, 0.1 + phi);
            EXPECT_GT(min_eigenvalue(positivity_certificate(g, fam, EnergyForm::g0)), 0) << tau0 << " " << phi;
            // The gg-form is a complete square per quad: positive semidefinite of rank one.
            for (const auto& q : positivity_certificate(g, fam, EnergyForm::gg)) {
                EXPECT_GT(q.max_eigenvalue, 0);
                EXPECT_LT(std::abs(q.min_eigenvalue), 1e-12 * q.max_eigenvalue);
            }
        }
    }
}

TEST(Laplace, RhombicIsIndefinite)
{
    const auto g = gen_square_grid(4, 0.1, 1.6);
    EXPECT_LT(min_eigenvalue(positivity_certificate(g, Fam::rhombic(1.0), EnergyForm::g0)), 0);
    EXPECT_FALSE(is_positive_operator(assemble(g, Fam::rhombic(1.0))));
}

TEST(Laplace, DegenerateGgIsSemidefinite)
{
    const auto g = gen_square_grid(3, 0.1, 1.6);
    const auto cert = positivity_certificate(g, Fam::degenerate(), EnergyForm::gg);
    for (const auto& q : cert) {
        EXPECT_NEAR(q.min_eigenvalue, 0, 1e-14);
        EXPECT_GT(q.max_eigenvalue, 0);
    }
}

TEST(Laplace, OrientationViolation)
{
    auto g = gen_square_grid(1, 0, pi / 2);
    QuadGraph bad;
    for (const auto& v : g.vertices()) bad.add_vertex(v.pos, v.color, v.id);
    const auto& f = g.faces()[0];
    bad.add_face_labeled({f.x0(), f.x2(), f.x12(), f.x1()}, f.beta, f.alpha);
    EXPECT_THROW(quad_form(Fam::rectangular(1.0), bad.faces()[0], EnergyForm::g0), geometry_error);
}

TEST(Laplace, DirichletReproducesTheExponential)
{
    const auto g = gen_square_grid(8, 0.2, 1.5);
    for (const auto& fam : {Fam::rectangular(1.0, 0.3), Fam::rectangular(0.5), Fam::rhombic(1.0, 0.45)}) {
        const auto L = assemble(g, fam);
        const auto e = discrete_exponential(g, fam, 1.2, grid_id(8, 4, 4)).restrict_to(g, Color::black);
        const auto sol = solve_dirichlet(L, boundary_of(L, e));
        double err = 0;
        for (const auto& [id, v] : sol.interior.values) err = std::max(err, std::abs(v - e.at(id)));
        EXPECT_LT(err, 1e-8 * (1 + e.max_abs())) << to_string(fam.regime());
        EXPECT_EQ(sol.solver, fam.regime() == Regime::rectangular ? SolverKind::conjugate_gradient : SolverKind::lu);
    }
}

TEST(Laplace, DirichletZeroAndConstants)
{
    const auto g = gen_square_grid(8, 0.2, 1.5);
    const auto L = assemble(g, Fam::rectangular(1.0));
    Field b;
    b.domain = FieldDomain::black;
    for (int v : L.boundary) b.set(v, 0.0);
    const auto zero = solve_dirichlet(L, b);
    EXPECT_EQ(zero.interior.max_abs(), 0.0);

    const auto L0 = assemble(g, Fam::degenerate());
    for (int v : L0.boundary) b.set(v, 1.0);
    const auto one = solve_dirichlet(L0, b);
    for (const auto& [id, v] : one.interior.values) EXPECT_LT(std::abs(v - 1.0), 1e-10);
}

TEST(Laplace, NonnegativeBoundaryGivesNonnegativeSolution)
{
    const auto g = gen_square_grid(8, 0.4, 1.9);
    Rng rng(45);
    for (double tau0 : {0.5, 1.0, 2.0}) {
        const auto L = assemble(g, Fam::rectangular(tau0));
        for (int s = 0; s < 5; ++s) {
            Field b;
            b.domain = FieldDomain::black;
            for (int v : L.boundary) b.set(v, rng.uniform(0, 1));
            const auto sol = solve_dirichlet(L, b);
            for (const auto& [id, v] : sol.interior.values) {
                EXPECT_GE(v.real(), -1e-9);
                EXPECT_LE(v.real(), 1 + 1e-9);
            }
        }
    }
}

TEST(Laplace, SingularSystemReportsCondition)
{
    LaplaceOperator<double> L;
    L.rows.push_back({0, 0.0, 0.0, {{1, 0.0}}});
    L.interior = {0};
    L.boundary = {1};
    Field b;
    b.domain = FieldDomain::black;
    b.set(1, 1.0);
    try {
        solve_dirichlet(L, b);
        FAIL();
    } catch (const solver_error& e) {
        EXPECT_GT(e.condition_estimate(), 1e14);
    }
}
