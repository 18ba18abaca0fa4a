// Walk through the library on a small grid: coefficients, the discrete exponential, a Dirichlet
// problem with exponential boundary values, a star-triangle flip and the weight map.

#include <quadlin/quadlin.hpp>

#include <cstdio>

using namespace quadlin;

int main()
{
    constexpr double pi = std::numbers::pi;
    const auto fam = CoefficientFamily<double>::rectangular(1.0, 0.3);
    std::printf("f(1.0) = %.15f  g0(1.0) = %.15f  h(1.0) = %.15f\n", fam.f(1.0).real(), fam.g0(1.0).real(),
                fam.h(1.0).real());

    const int n = 8;
    const auto g = gen_square_grid(n, 0.2, 1.5);
    const auto e = discrete_exponential(g, fam, 0.9, 0);
    std::printf("exponential at the far corner: %.6e%+.6ei\n", e.at(grid_id(n, n, n)).real(),
                e.at(grid_id(n, n, n)).imag());

    // The black restriction is harmonic: recover it from its boundary values.
    const auto L = assemble(g, fam);
    const auto black = e.restrict_to(g, Color::black);
    FieldAssignment<double> boundary;
    boundary.domain = FieldDomain::black;
    for (int v : L.boundary) boundary.set(v, black.at(v));
    const auto sol = solve_dirichlet(L, boundary);
    double err = 0;
    for (const auto& [id, v] : sol.interior.values) err = std::max(err, std::abs(v - black.at(id)));
    std::printf("Dirichlet solve: %zu unknowns, %d CG iterations, max error %.2e\n", L.interior.size(),
                sol.iterations, err);

    // Flip the symmetric corner and map its weights.
    const auto corner = gen_from_stepped_surface({{{0, 0, 0}, 0, 1}, {{0, 0, 0}, 1, 2}, {{0, 0, 0}, 2, 0}},
                                                 {0, 2 * pi / 3, 4 * pi / 3});
    const auto flipped = star_triangle_flip(corner, *corner.vertex_at({0, 0}));
    std::printf("flipped corner valid: %s\n", validate(flipped).empty() ? "yes" : "no");

    const auto [w, expected] = elliptic_special_solution(std::array{2 * pi / 3, 2 * pi / 3, 2 * pi / 3}, fam);
    const auto image = two_field_F(w);
    std::printf("star-triangle image a = %.15f, expected f(pi/3) = %.15f\n", image.a(0).real(),
                expected.a(0).real());
    return 0;
}
