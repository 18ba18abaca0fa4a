#ifndef QUADLIN_PLURI_HPP
#define QUADLIN_PLURI_HPP

// Star-triangle maps on plaquette weights of an elementary cube.
//
// Slot p of a cube weight set refers to the plaquette ij (p = 0), jk (p = 1), ki (p = 2);
// indices are cyclic mod 3. On the star side plaquette p carries the form
//   (1/2) c_p (x^2 + x_p^2) - a_p x x_p
// between the base black point x and x_p = x_ij, x_jk, x_ki. On the flipped side slot p is
// the plaquette shifted by the remaining direction and couples x_{p+1} with x_{p+2}.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "coeffs.hpp"
#include "errors.hpp"
#include "laplace.hpp"
#include "quadgraph.hpp"

namespace quadlin
{

inline constexpr double zero_denominator_threshold = 1e-12;

template <std::floating_point Real>
struct PlaquetteWeights2
{
    std::complex<Real> a;
    std::complex<Real> c;

    /// Weights of the oppositely oriented plaquette.
    PlaquetteWeights2 reversed() const { return {-a, -c}; }
};

template <std::floating_point Real>
struct CubeWeights2
{
    std::array<PlaquetteWeights2<Real>, 3> w;
    bool black_base = true;

    std::complex<Real> a(int p) const { return w[((p % 3) + 3) % 3].a; }
    std::complex<Real> c(int p) const { return w[((p % 3) + 3) % 3].c; }
};

/// Star -> triangle: flipped weights from the weights at the base corner.
/// `half` is the 1/2 of the c-update, exposed for perturbation probes.
template <std::floating_point Real>
CubeWeights2<Real> two_field_F(const CubeWeights2<Real>& w, Real half = Real(0.5))
{
    using Cx = std::complex<Real>;
    const Cx S = w.c(0) + w.c(1) + w.c(2);
    if (std::abs(S) < Real(zero_denominator_threshold)) throw zero_denominator_error("c_ij + c_jk + c_ki vanishes");
    CubeWeights2<Real> out;
    out.black_base = !w.black_base;
    for (int p = 0; p < 3; ++p) {
        const Cx a1 = w.a(p + 1), a2 = w.a(p + 2), a0 = w.a(p);
        out.w[p].a = a1 * a2 / S;
        out.w[p].c = half * (w.c(p + 1) + w.c(p + 2) - w.c(p) - (a1 * a1 + a2 * a2 - a0 * a0) / S);
    }
    return out;
}

/// (a~0 a~1)^2 + (a~1 a~2)^2 + (a~2 a~0)^2 + 2 a~0 a~1 a~2 (c~0 + c~1 + c~2).
template <std::floating_point Real>
std::complex<Real> two_field_D2(const CubeWeights2<Real>& flipped)
{
    const auto a0 = flipped.a(0), a1 = flipped.a(1), a2 = flipped.a(2);
    return (a0 * a1) * (a0 * a1) + (a1 * a2) * (a1 * a2) + (a2 * a0) * (a2 * a0)
           + std::complex<Real>(2) * a0 * a1 * a2 * (flipped.c(0) + flipped.c(1) + flipped.c(2));
}

/// D^2 in the form a~0 a~1 a~2 (c_0 + c_1 + c_2), from both sides of the flip.
template <std::floating_point Real>
std::complex<Real> two_field_D2_left(const CubeWeights2<Real>& w, const CubeWeights2<Real>& flipped)
{
    return flipped.a(0) * flipped.a(1) * flipped.a(2) * (w.c(0) + w.c(1) + w.c(2));
}

/// Triangle -> star with D = sign * sqrt(D^2) (principal branch).
template <std::floating_point Real>
CubeWeights2<Real> two_field_G(const CubeWeights2<Real>& flipped, int sign = 1)
{
    using Cx = std::complex<Real>;
    if (sign != 1 && sign != -1) throw usage_error("square-root sign must be +1 or -1");
    for (int p = 0; p < 3; ++p) {
        if (std::abs(flipped.a(p)) < Real(zero_denominator_threshold)) {
            throw zero_denominator_error("inverse map needs nonzero flipped a-weights");
        }
    }
    const Cx D2 = two_field_D2(flipped);
    Real scale = 0;
    for (int p = 0; p < 3; ++p) scale = std::max(scale, std::norm(flipped.a(p) * flipped.a(p + 1)));
    if (std::abs(D2) < Real(zero_denominator_threshold) * std::max(scale, Real(1))) {
        throw branch_point_error("D^2 vanishes");
    }
    const Cx D = Real(sign) * std::sqrt(D2);
    CubeWeights2<Real> out;
    out.black_base = !flipped.black_base;
    for (int p = 0; p < 3; ++p) {
        out.w[p].c = flipped.c(p + 1) + flipped.c(p + 2) + flipped.a(p + 1) * flipped.a(p + 2) / flipped.a(p);
        out.w[p].a = D / flipped.a(p);
    }
    return out;
}

/// Classical star-triangle map A~_p = A_{p+1} A_{p+2} / (A_0 + A_1 + A_2).
template <std::floating_point Real>
std::array<std::complex<Real>, 3> classical_star_triangle(const std::array<std::complex<Real>, 3>& A)
{
    const auto S = A[0] + A[1] + A[2];
    if (std::abs(S) < Real(zero_denominator_threshold)) throw zero_denominator_error("weight sum vanishes");
    return {A[1] * A[2] / S, A[2] * A[0] / S, A[0] * A[1] / S};
}

/// Classical inverse A_p = (A~0 A~1 + A~1 A~2 + A~2 A~0) / A~_p.
template <std::floating_point Real>
std::array<std::complex<Real>, 3> classical_triangle_star(const std::array<std::complex<Real>, 3>& At)
{
    for (const auto& x : At) {
        if (std::abs(x) < Real(zero_denominator_threshold)) throw zero_denominator_error("zero triangle weight");
    }
    const auto num = At[0] * At[1] + At[1] * At[2] + At[2] * At[0];
    return {num / At[0], num / At[1], num / At[2]};
}

// ---------------------------------------------------------------------------
// 4D consistency

/// Index of the unordered pair {i, j} (i != j, both in 0..3) in the order 01, 02, 03, 12, 13, 23.
inline int pair_index(int i, int j)
{
    if (i > j) std::swap(i, j);
    static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return table[i][j];
}

template <std::floating_point Real>
using FourCubeWeights = std::array<PlaquetteWeights2<Real>, 6>;

template <std::floating_point Real>
using StarTriangleMap = std::function<CubeWeights2<Real>(const CubeWeights2<Real>&)>;

template <std::floating_point Real>
using TriangleStarMap = std::function<CubeWeights2<Real>(const CubeWeights2<Real>&, int)>;

template <std::floating_point Real>
struct Consistency4dResult
{
    Real max_discrepancy;
    int comparisons;
};

namespace detail
{

template <std::floating_point Real>
PlaquetteWeights2<Real> oriented(const FourCubeWeights<Real>& w, int i, int j)
{
    const auto x = w[pair_index(i, j)];
    return i < j ? x : x.reversed();
}

template <std::floating_point Real>
void store_oriented(FourCubeWeights<Real>& w, int i, int j, PlaquetteWeights2<Real> x)
{
    w[pair_index(i, j)] = i < j ? x : x.reversed();
}

template <std::floating_point Real>
Real relative_gap(std::complex<Real> x, std::complex<Real> y)
{
    return std::abs(x - y) / std::max({Real(1), std::abs(x), std::abs(y)});
}

} // namespace detail

/// Flips the four 3D cubes at the base vertex of a 4D cube, then the four cubes at the opposite
/// vertex, and compares the two values obtained for every plaquette at the far vertex.
/// Black base: star-triangle first; a compared up to sign (via a^2), c exactly.
/// White base: triangle-star first with signs[l] in the cube not containing direction l;
/// a and c compared exactly. initial[pair_index(i, j)] holds the weights of plaquette ij, i < j.
template <std::floating_point Real>
Consistency4dResult<Real> check_4d_consistency(const FourCubeWeights<Real>& initial, Color base,
                                               std::array<int, 4> signs = {1, 1, 1, 1},
                                               StarTriangleMap<Real> F = {}, TriangleStarMap<Real> G = {})
{
    if (!F) F = [](const CubeWeights2<Real>& w) { return two_field_F(w); };
    if (!G) G = [](const CubeWeights2<Real>& w, int s) { return two_field_G(w, s); };
    const bool black = base == Color::black;
    auto flip = [&](const CubeWeights2<Real>& w, bool forward, int sign) { return forward ? F(w) : G(w, sign); };

    try {
        // shifted[l] = weights of the plaquettes not containing l, based at e_l.
        std::array<FourCubeWeights<Real>, 4> shifted{};
        for (int l = 0; l < 4; ++l) {
            int dirs[3], n = 0;
            for (int d = 0; d < 4; ++d) {
                if (d != l) dirs[n++] = d;
            }
            const int i = dirs[0], j = dirs[1], k = dirs[2];
            CubeWeights2<Real> cube{{detail::oriented(initial, i, j), detail::oriented(initial, j, k),
                                     detail::oriented(initial, k, i)},
                                    black};
            const auto out = flip(cube, black, signs[l]);
            detail::store_oriented(shifted[k], i, j, out.w[0]);
            detail::store_oriented(shifted[i], j, k, out.w[1]);
            detail::store_oriented(shifted[j], k, i, out.w[2]);
        }
        // far[l][pair] = plaquette ij at e_l + e_k, computed in the cube at e_l.
        std::array<FourCubeWeights<Real>, 4> far{};
        for (int l = 0; l < 4; ++l) {
            int dirs[3], n = 0;
            for (int d = 0; d < 4; ++d) {
                if (d != l) dirs[n++] = d;
            }
            const int i = dirs[0], j = dirs[1], k = dirs[2];
            const auto& s = shifted[l];
            CubeWeights2<Real> cube{{detail::oriented(s, i, j), detail::oriented(s, j, k), detail::oriented(s, k, i)},
                                    !black};
            const auto out = flip(cube, !black, 1);
            detail::store_oriented(far[l], i, j, out.w[0]);
            detail::store_oriented(far[l], j, k, out.w[1]);
            detail::store_oriented(far[l], k, i, out.w[2]);
        }
        Consistency4dResult<Real> r{0, 0};
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                int rest[2], n = 0;
                for (int d = 0; d < 4; ++d) {
                    if (d != i && d != j) rest[n++] = d;
                }
                const auto x = far[rest[0]][pair_index(i, j)];
                const auto y = far[rest[1]][pair_index(i, j)];
                const Real da = black ? detail::relative_gap(x.a * x.a, y.a * y.a) : detail::relative_gap(x.a, y.a);
                r.max_discrepancy = std::max({r.max_discrepancy, da, detail::relative_gap(x.c, y.c)});
                ++r.comparisons;
            }
        }
        return r;
    } catch (const zero_denominator_error& e) {
        throw inconclusive_error(std::string("4D consistency check hit a singular cube: ") + e.what());
    } catch (const branch_point_error& e) {
        throw inconclusive_error(std::string("4D consistency check hit a branch point: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Corner equations and the action on a cube

template <std::floating_point Real>
using CornerRows = std::array<std::array<std::complex<Real>, 4>, 4>;

/// Gradient rows of the cube action in the unknowns (x, x_ij, x_jk, x_ki), black base point.
template <std::floating_point Real>
CornerRows<Real> corner_system(const CubeWeights2<Real>& w, const CubeWeights2<Real>& flipped)
{
    CornerRows<Real> rows{};
    rows[0] = {-(w.c(0) + w.c(1) + w.c(2)), w.a(0), w.a(1), w.a(2)};
    for (int p = 0; p < 3; ++p) {
        auto& r = rows[p + 1];
        r[0] = w.a(p);
        r[1 + p] = flipped.c(p + 1) + flipped.c(p + 2) - w.c(p);
        r[1 + (p + 1) % 3] = -flipped.a(p + 2);
        r[1 + (p + 2) % 3] = -flipped.a(p + 1);
    }
    return rows;
}

/// Largest 2x2 minor over all row pairs after scaling each row to unit max-abs entry;
/// zero iff the rows are proportional (rank 1).
template <std::floating_point Real>
Real proportionality_defect(CornerRows<Real> rows)
{
    for (auto& r : rows) {
        Real m = 0;
        for (const auto& x : r) m = std::max(m, std::abs(x));
        if (m > 0) {
            for (auto& x : r) x /= m;
        }
    }
    Real d = 0;
    for (int p = 0; p < 4; ++p) {
        for (int q = p + 1; q < 4; ++q) {
            for (int s = 0; s < 4; ++s) {
                for (int t = s + 1; t < 4; ++t) {
                    d = std::max(d, std::abs(rows[p][s] * rows[q][t] - rows[p][t] * rows[q][s]));
                }
            }
        }
    }
    return d;
}

template <std::floating_point Real>
struct BlackCubeValues
{
    std::complex<Real> x;
    std::array<std::complex<Real>, 3> xp; ///< x_ij, x_jk, x_ki
};

/// Action over the cube: flipped-side forms minus star-side forms.
template <std::floating_point Real>
std::complex<Real> action_Sijk(const CubeWeights2<Real>& w, const CubeWeights2<Real>& flipped,
                               const BlackCubeValues<Real>& v)
{
    using Cx = std::complex<Real>;
    const Cx half(Real(0.5));
    Cx s(0);
    for (int p = 0; p < 3; ++p) {
        const Cx u = v.xp[(p + 1) % 3], z = v.xp[(p + 2) % 3];
        s += half * flipped.c(p) * (u * u + z * z) - flipped.a(p) * u * z;
        s -= half * w.c(p) * (v.x * v.x + v.xp[p] * v.xp[p]) - w.a(p) * v.x * v.xp[p];
    }
    return s;
}

/// Cube weights a = f(phi_p), c = g0(phi_p) and their flipped partners f(pi - phi_p), g0(pi - phi_p).
template <CoefficientSource C>
std::pair<CubeWeights2<typename C::real_type>, CubeWeights2<typename C::real_type>> elliptic_special_solution(
    const std::array<typename C::real_type, 3>& phis, const C& fam)
{
    using Real = typename C::real_type;
    const Real pi = std::numbers::pi_v<Real>;
    const Real sum = phis[0] + phis[1] + phis[2];
    if (std::abs(sum - 2 * pi) > Real(1e-9)) throw domain_error("special solution needs phi_1 + phi_2 + phi_3 = 2 pi");
    CubeWeights2<Real> w, flipped;
    flipped.black_base = false;
    for (int p = 0; p < 3; ++p) {
        w.w[p] = {fam.f(phis[p]), fam.g0(phis[p])};
        flipped.w[p] = {fam.f(pi - phis[p]), fam.g0(pi - phis[p])};
    }
    return {w, flipped};
}

// ---------------------------------------------------------------------------
// Three-field map and gauge construction

template <std::floating_point Real>
struct PlaquetteWeights3
{
    std::complex<Real> a, b, c;

    Real square_defect() const { return std::abs(b * c - a * a); }
    bool is_complete_square() const { return square_defect() < Real(1e-10) * (std::norm(a) + 1); }
};

template <std::floating_point Real>
using CubeWeights3 = std::array<PlaquetteWeights3<Real>, 3>;

/// Slots p = 0, 1, 2 are plaquettes 12, 23, 31; requires bc = a^2 on input.
template <std::floating_point Real>
CubeWeights3<Real> three_field_map(const CubeWeights3<Real>& w)
{
    for (const auto& x : w) {
        if (!x.is_complete_square()) throw domain_error("three-field weights must satisfy b c = a^2");
    }
    const auto B = w[0].b + w[1].b + w[2].b;
    if (std::abs(B) < Real(zero_denominator_threshold)) throw zero_denominator_error("b_12 + b_23 + b_31 vanishes");
    CubeWeights3<Real> out;
    for (int p = 0; p < 3; ++p) {
        const auto& u = w[(p + 1) % 3];
        const auto& z = w[(p + 2) % 3];
        out[p] = {u.a * z.a / B, u.c * z.b / B, u.b * z.c / B};
    }
    return out;
}

/// b~_0 b~_1 b~_2 - c~_0 c~_1 c~_2; vanishes on the image of three_field_map.
template <std::floating_point Real>
std::complex<Real> image_condition_residual(const CubeWeights3<Real>& flipped)
{
    return flipped[0].b * flipped[1].b * flipped[2].b - flipped[0].c * flipped[1].c * flipped[2].c;
}

/// Corner rows of the three-field cube action in (x, x_12, x_23, x_31).
template <std::floating_point Real>
CornerRows<Real> three_field_corner_system(const CubeWeights3<Real>& w, const CubeWeights3<Real>& flipped)
{
    CornerRows<Real> rows{};
    rows[0] = {-(w[0].b + w[1].b + w[2].b), w[0].a, w[1].a, w[2].a};
    for (int p = 0; p < 3; ++p) {
        auto& r = rows[p + 1];
        r[0] = w[p].a;
        r[1 + p] = flipped[(p + 1) % 3].c + flipped[(p + 2) % 3].b - w[p].c;
        r[1 + (p + 1) % 3] = -flipped[(p + 2) % 3].a;
        r[1 + (p + 2) % 3] = -flipped[(p + 1) % 3].a;
    }
    return rows;
}

/// Gauge values at the base black point and at x_12, x_23, x_31.
template <std::floating_point Real>
struct GaugeField
{
    std::complex<Real> rho;
    std::array<std::complex<Real>, 3> rho_p;
};

template <std::floating_point Real>
struct GaugeTriples
{
    CubeWeights3<Real> star;
    CubeWeights3<Real> flipped;
};

/// a = A/(rho rho_p), b = A/rho^2, c = A/rho_p^2 on the star side; on the flipped side slot p couples
/// x_{p+1} (b) with x_{p+2} (c) and uses the classical image A~.
template <std::floating_point Real>
GaugeTriples<Real> gauge_construct(const std::array<std::complex<Real>, 3>& A, const GaugeField<Real>& rho)
{
    if (std::abs(rho.rho) == 0) throw domain_error("gauge values must be nonzero");
    for (const auto& r : rho.rho_p) {
        if (std::abs(r) == 0) throw domain_error("gauge values must be nonzero");
    }
    const auto At = classical_star_triangle(A);
    GaugeTriples<Real> out;
    for (int p = 0; p < 3; ++p) {
        const auto rp = rho.rho_p[p];
        out.star[p] = {A[p] / (rho.rho * rp), A[p] / (rho.rho * rho.rho), A[p] / (rp * rp)};
        const auto r1 = rho.rho_p[(p + 1) % 3], r2 = rho.rho_p[(p + 2) % 3];
        out.flipped[p] = {At[p] / (r1 * r2), At[p] / (r1 * r1), At[p] / (r2 * r2)};
    }
    return out;
}

/// Multiplicative 1-form b/c along a black diagonal, from the b-end to the c-end.
template <std::floating_point Real>
std::complex<Real> gauge_nu(const PlaquetteWeights3<Real>& w)
{
    return w.b / w.c;
}

/// Products of the 1-form around the three black triangles (x, x_p, x_{p+2}) of the cube.
template <std::floating_point Real>
std::array<std::complex<Real>, 3> nu_loop_products(const GaugeTriples<Real>& t)
{
    std::array<std::complex<Real>, 3> out;
    for (int p = 0; p < 3; ++p) {
        // x -> x_p (star p), x_p -> x_{p+2} (flipped p+1 traversed from its c-end), x_{p+2} -> x.
        const int q = (p + 2) % 3;
        out[p] = gauge_nu(t.star[p]) / gauge_nu(t.flipped[(p + 1) % 3]) / gauge_nu(t.star[q]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flip invariance of Dirichlet energies

template <std::floating_point Real>
struct FlipEnergyReport
{
    Real energy_before;
    Real energy_after;
    Real difference;       ///< |before - after|
    Real value_mismatch;   ///< max |x - x'| over black vertices common to both graphs
    QuadGraph flipped;
};

/// Solves the Dirichlet problem (g0-form weights) before and after flipping the black vertex v
/// with the same boundary data and compares the energies. `fam_after` defaults to `fam`.
template <CoefficientSource C>
FlipEnergyReport<typename C::real_type> flip_energy_invariance(const QuadGraph& g, int v, const C& fam,
                                                               const FieldAssignment<typename C::real_type>& boundary,
                                                               const C* fam_after = nullptr)
{
    using Real = typename C::real_type;
    if (g.vertex(v).color != Color::black) throw flip_error("energy invariance is stated for black flips");
    const C& fam2 = fam_after ? *fam_after : fam;
    auto flipped = star_triangle_flip(g, v);
    const auto L1 = assemble(g, fam);
    const auto L2 = assemble(flipped, fam2);
    if (L1.boundary != L2.boundary) throw flip_error("flip changed the black boundary");
    auto solve_all = [&](const LaplaceOperator<Real>& L) {
        auto x = solve_dirichlet(L, boundary).interior;
        for (int b : L.boundary) x.set(b, boundary.at(b));
        return x;
    };
    const auto x1 = solve_all(L1);
    const auto x2 = solve_all(L2);
    FlipEnergyReport<Real> r{};
    r.energy_before = std::real(dirichlet_energy(g, fam, x1, EnergyForm::g0));
    r.energy_after = std::real(dirichlet_energy(flipped, fam2, x2, EnergyForm::g0));
    r.difference = std::abs(r.energy_before - r.energy_after);
    for (const auto& [id, val] : x2.values) {
        if (x1.contains(id)) r.value_mismatch = std::max(r.value_mismatch, std::abs(val - x1.at(id)));
    }
    r.flipped = std::move(flipped);
    return r;
}

} // namespace quadlin

#endif
