#ifndef QUADLIN_QUADEQ_HPP
#define QUADLIN_QUADEQ_HPP

// The three-leg quad-equation on a face (x0, x1, x12, x2) with labels (alpha, beta):
//
//   f(alpha - beta) x12 - g(alpha, beta) x0 = i (h(beta) x2 - h(alpha) x1)

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "coeffs.hpp"
#include "errors.hpp"
#include "quadgraph.hpp"

namespace quadlin
{

enum class FieldDomain
{
    full,
    black,
    white
};

inline std::string_view to_string(FieldDomain d)
{
    switch (d) {
        case FieldDomain::full: return "full";
        case FieldDomain::black: return "black";
        case FieldDomain::white: return "white";
    }
    return "unknown";
}

/// Complex values on (a subset of) the vertices of a quad-graph, keyed by vertex id.
template <std::floating_point Real>
struct FieldAssignment
{
    using complex_type = std::complex<Real>;

    FieldDomain domain = FieldDomain::full;
    std::map<int, complex_type> values;

    bool contains(int id) const { return values.contains(id); }

    complex_type at(int id) const
    {
        auto it = values.find(id);
        if (it == values.end()) throw domain_error("field has no value at vertex " + std::to_string(id));
        return it->second;
    }

    void set(int id, complex_type v) { values[id] = v; }

    Real max_abs() const
    {
        Real m = 0;
        for (const auto& [id, v] : values) m = std::max(m, std::abs(v));
        return m;
    }

    /// Restriction to the vertices of one color.
    FieldAssignment restrict_to(const QuadGraph& g, Color c) const
    {
        FieldAssignment out;
        out.domain = c == Color::black ? FieldDomain::black : FieldDomain::white;
        for (const auto& [id, v] : values) {
            if (g.vertex(id).color == c) out.values.emplace(id, v);
        }
        return out;
    }

    /// Domain tag agrees with the colors of the populated ids.
    bool consistent_with(const QuadGraph& g) const
    {
        for (const auto& [id, v] : values) {
            if (!g.has_vertex(id)) return false;
            const Color c = g.vertex(id).color;
            if (domain == FieldDomain::black && c != Color::black) return false;
            if (domain == FieldDomain::white && c != Color::white) return false;
        }
        return true;
    }
};

template <std::floating_point Real>
FieldAssignment<Real> operator+(FieldAssignment<Real> a, const FieldAssignment<Real>& b)
{
    for (const auto& [id, v] : b.values) a.values[id] += v;
    return a;
}

template <std::floating_point Real>
FieldAssignment<Real> operator*(std::complex<Real> s, FieldAssignment<Real> a)
{
    for (auto& [id, v] : a.values) v *= s;
    return a;
}

enum class Corner
{
    x0,
    x1,
    x12,
    x2
};

/// Corner values in face order (x0, x1, x12, x2).
template <std::floating_point Real>
using QuadValues = std::array<std::complex<Real>, 4>;

namespace detail
{

inline int corner_index(Corner c)
{
    switch (c) {
        case Corner::x0: return 0;
        case Corner::x1: return 1;
        case Corner::x12: return 2;
        case Corner::x2: return 3;
    }
    return 0;
}

// Coefficients of (x0, x1, x12, x2) in the residual.
template <CoefficientSource C>
std::array<std::complex<typename C::real_type>, 4> quad_coefficients(const C& fam, typename C::real_type alpha,
                                                                     typename C::real_type beta)
{
    using Cx = std::complex<typename C::real_type>;
    const Cx i(0, 1);
    return {-Cx(fam.g(alpha, beta)), i * Cx(fam.h(alpha)), Cx(fam.f(alpha - beta)), -i * Cx(fam.h(beta))};
}

} // namespace detail

template <CoefficientSource C>
std::complex<typename C::real_type> quad_residual(const C& fam, typename C::real_type alpha,
                                                  typename C::real_type beta,
                                                  const QuadValues<typename C::real_type>& x)
{
    const auto k = detail::quad_coefficients(fam, alpha, beta);
    return k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + k[3] * x[3];
}

/// The same equation written with another corner as the base vertex. Each variant is a nonzero
/// multiple of quad_residual when f, g, h are the symmetric families.
template <CoefficientSource C>
std::complex<typename C::real_type> quad_residual_centered(const C& fam, typename C::real_type alpha,
                                                           typename C::real_type beta,
                                                           const QuadValues<typename C::real_type>& x,
                                                           Corner center)
{
    using Real = typename C::real_type;
    using Cx = std::complex<Real>;
    const Real pi = std::numbers::pi_v<Real>;
    const Cx i(0, 1);
    const Cx x0 = x[0], x1 = x[1], x12 = x[2], x2 = x[3];
    switch (center) {
        case Corner::x0: return quad_residual(fam, alpha, beta, x);
        case Corner::x12:
            return Cx(fam.f(alpha - beta)) * x0 - Cx(fam.g(alpha + pi, beta + pi)) * x12
                   - i * (Cx(fam.h(beta + pi)) * x1 - Cx(fam.h(alpha + pi)) * x2);
        case Corner::x1:
            return Cx(fam.f(beta + pi - alpha)) * x2 - Cx(fam.g(beta + pi, alpha)) * x1
                   - i * (Cx(fam.h(alpha)) * x0 - Cx(fam.h(beta + pi)) * x12);
        case Corner::x2:
            return Cx(fam.f(alpha + pi - beta)) * x1 - Cx(fam.g(alpha + pi, beta)) * x2
                   - i * (Cx(fam.h(beta)) * x0 - Cx(fam.h(alpha + pi)) * x12);
    }
    return Cx(0);
}

inline constexpr double singular_face_threshold = 1e-12;

/// Value at `target` that makes the face residual vanish; the entry of x at `target` is ignored.
template <CoefficientSource C>
std::complex<typename C::real_type> solve_for_vertex(const C& fam, typename C::real_type alpha,
                                                     typename C::real_type beta,
                                                     QuadValues<typename C::real_type> x, Corner target)
{
    using Cx = std::complex<typename C::real_type>;
    const auto k = detail::quad_coefficients(fam, alpha, beta);
    const int t = detail::corner_index(target);
    if (std::abs(k[t]) < singular_face_threshold) {
        throw singular_face_error("leading coefficient of the target corner vanishes");
    }
    Cx rest(0);
    for (int j = 0; j < 4; ++j) {
        if (j != t) rest += k[j] * x[j];
    }
    return -rest / k[t];
}

/// Residual of every face of g, in face order.
template <CoefficientSource C>
std::vector<std::complex<typename C::real_type>> face_residuals(const QuadGraph& g, const C& fam,
                                                                const FieldAssignment<typename C::real_type>& x)
{
    using Real = typename C::real_type;
    std::vector<std::complex<Real>> out;
    out.reserve(g.faces().size());
    for (const auto& f : g.faces()) {
        QuadValues<Real> v{x.at(f.x0()), x.at(f.x1()), x.at(f.x12()), x.at(f.x2())};
        out.push_back(quad_residual(fam, Real(f.alpha), Real(f.beta), v));
    }
    return out;
}

template <CoefficientSource C>
typename C::real_type max_face_residual(const QuadGraph& g, const C& fam,
                                        const FieldAssignment<typename C::real_type>& x)
{
    typename C::real_type m = 0;
    for (const auto& r : face_residuals(g, fam, x)) m = std::max(m, std::abs(r));
    return m;
}

/// Fills the whole graph from Cauchy data by repeatedly solving faces with exactly three known
/// corners. Faces are processed in rounds, within a round by face id.
template <CoefficientSource C>
FieldAssignment<typename C::real_type> propagate(const QuadGraph& g, const C& fam,
                                                 const FieldAssignment<typename C::real_type>& data)
{
    using Real = typename C::real_type;
    FieldAssignment<Real> x;
    for (const auto& [id, v] : data.values) {
        if (!g.has_vertex(id)) throw propagation_error("Cauchy data on unknown vertex " + std::to_string(id));
        x.set(id, v);
    }
    const auto& faces = g.faces();
    for (;;) {
        std::vector<std::pair<int, Corner>> round;
        for (std::size_t k = 0; k < faces.size(); ++k) {
            int unknown = -1, count = 0;
            for (int c = 0; c < 4; ++c) {
                if (!x.contains(faces[k].ids[c])) {
                    unknown = c;
                    ++count;
                }
            }
            if (count == 1) round.emplace_back(int(k), static_cast<Corner>(unknown));
        }
        if (round.empty()) break;
        for (auto [k, corner] : round) {
            const auto& f = faces[k];
            const int target = f.ids[detail::corner_index(corner)];
            if (x.contains(target)) continue;
            QuadValues<Real> v{};
            for (int c = 0; c < 4; ++c) {
                if (f.ids[c] != target) v[c] = x.at(f.ids[c]);
            }
            x.set(target, solve_for_vertex(fam, Real(f.alpha), Real(f.beta), v, corner));
        }
    }
    if (x.values.size() != g.vertices().size()) {
        throw propagation_error("Cauchy data does not determine the field on all "
                                + std::to_string(g.vertices().size()) + " vertices ("
                                + std::to_string(x.values.size()) + " reached)");
    }
    return x;
}

/// Zig-zag staircase (0,0), (1,0), (1,1), (2,1), ... of gen_square_grid(n, ...); Cauchy data on it
/// determines the field on the whole grid.
inline std::vector<int> grid_staircase(int n)
{
    std::vector<int> ids;
    for (int k = 0; k <= n; ++k) {
        ids.push_back(grid_id(n, k, k));
        if (k < n) ids.push_back(grid_id(n, k + 1, k));
    }
    return ids;
}

// ---------------------------------------------------------------------------
// 3D consistency

template <std::floating_point Real>
struct CubeLabels
{
    Real alpha;
    Real beta;
    Real gamma;
};

template <std::floating_point Real>
struct CubeValues
{
    std::complex<Real> x0, x1, x2, x3;
};

template <std::floating_point Real>
struct ConsistencyResult
{
    std::complex<Real> x12, x23, x13;
    std::array<std::complex<Real>, 3> x123; ///< via the faces at x1, x2, x3
    Real discrepancy;                        ///< max pairwise |difference| of x123
};

namespace detail
{

// Black corner opposite the base, from the base and its two white neighbours.
template <CoefficientSource C>
std::complex<typename C::real_type> solve_opposite(const C& fam, typename C::real_type a, typename C::real_type b,
                                                   std::complex<typename C::real_type> base,
                                                   std::complex<typename C::real_type> wa,
                                                   std::complex<typename C::real_type> wb)
{
    return solve_for_vertex(fam, a, b, {base, wa, {}, wb}, Corner::x12);
}

// White corner on the b-edge, from the base, the a-neighbour and the opposite black corner.
template <CoefficientSource C>
std::complex<typename C::real_type> solve_white(const C& fam, typename C::real_type a, typename C::real_type b,
                                                std::complex<typename C::real_type> base,
                                                std::complex<typename C::real_type> wa,
                                                std::complex<typename C::real_type> opp)
{
    return solve_for_vertex(fam, a, b, {base, wa, opp, {}}, Corner::x2);
}

} // namespace detail

/// Black x0, white x1, x2, x3 with edge labels alpha, beta, gamma. Opposite cube edges carry
/// label + pi. x123 (white) is computed from each of the three upper faces.
template <CoefficientSource C>
ConsistencyResult<typename C::real_type> check_3d_consistency(const C& fam,
                                                              const CubeLabels<typename C::real_type>& l,
                                                              const CubeValues<typename C::real_type>& x)
{
    using Real = typename C::real_type;
    const Real pi = std::numbers::pi_v<Real>;
    ConsistencyResult<Real> r{};
    r.x12 = detail::solve_opposite(fam, l.alpha, l.beta, x.x0, x.x1, x.x2);
    r.x23 = detail::solve_opposite(fam, l.beta, l.gamma, x.x0, x.x2, x.x3);
    r.x13 = detail::solve_opposite(fam, l.alpha, l.gamma, x.x0, x.x1, x.x3);
    // Face at x1 (directions 2, 3), black corners x12, x13.
    r.x123[0] = detail::solve_white(fam, l.beta + pi, l.gamma, r.x12, x.x1, r.x13);
    // Face at x2 (directions 1, 3), black corners x12, x23.
    r.x123[1] = detail::solve_white(fam, l.alpha + pi, l.gamma, r.x12, x.x2, r.x23);
    // Face at x3 (directions 1, 2), black corners x13, x23.
    r.x123[2] = detail::solve_white(fam, l.alpha + pi, l.beta, r.x13, x.x3, r.x23);
    r.discrepancy = std::max({std::abs(r.x123[0] - r.x123[1]), std::abs(r.x123[1] - r.x123[2]),
                              std::abs(r.x123[0] - r.x123[2])});
    return r;
}

template <std::floating_point Real>
struct TetrahedronResult
{
    std::complex<Real> residual;
    Real x0_dependence; ///< |x123(x0) - x123(x0 + shift)|
};

/// f(b-c) x1 + f(c-a) x2 + f(a-b) x3 - f(a-b) f(b-c) f(c-a) x123, with x123 from check_3d_consistency,
/// plus the change of x123 when only x0 is moved by x0_shift.
template <CoefficientSource C>
TetrahedronResult<typename C::real_type> tetrahedron_check(const C& fam, const CubeLabels<typename C::real_type>& l,
                                                           const CubeValues<typename C::real_type>& x,
                                                           std::complex<typename C::real_type> x0_shift = {1, 0})
{
    using Cx = std::complex<typename C::real_type>;
    const auto r = check_3d_consistency(fam, l, x);
    const Cx fab = fam.f(l.alpha - l.beta), fbc = fam.f(l.beta - l.gamma), fca = fam.f(l.gamma - l.alpha);
    const Cx x123 = r.x123[0];
    auto moved = x;
    moved.x0 += x0_shift;
    const auto r2 = check_3d_consistency(fam, l, moved);
    return {fbc * x.x1 + fca * x.x2 + fab * x.x3 - fab * fbc * fca * x123, std::abs(r2.x123[0] - x123)};
}

// ---------------------------------------------------------------------------
// Baecklund transform and discrete exponential

enum class Traversal
{
    breadth_first,
    depth_first
};

namespace detail
{

// Spanning tree of the edge graph as (parent, child) pairs in visiting order.
inline std::vector<std::pair<int, int>> spanning_tree(const QuadGraph& g, int root, Traversal order)
{
    std::map<int, std::vector<int>> adj;
    for (const auto& e : g.edges()) {
        adj[e.from].push_back(e.to);
        adj[e.to].push_back(e.from);
    }
    for (auto& [v, n] : adj) std::sort(n.begin(), n.end());
    std::vector<std::pair<int, int>> out;
    std::map<int, bool> seen{{root, true}};
    if (order == Traversal::breadth_first) {
        std::deque<int> queue{root};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int w : adj[v]) {
                if (seen[w]) continue;
                seen[w] = true;
                out.emplace_back(v, w);
                queue.push_back(w);
            }
        }
    } else {
        std::vector<std::pair<int, int>> stack;
        for (auto it = adj[root].rbegin(); it != adj[root].rend(); ++it) stack.emplace_back(root, *it);
        while (!stack.empty()) {
            auto [p, v] = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = true;
            out.emplace_back(p, v);
            for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
                if (!seen[*it]) stack.emplace_back(v, *it);
            }
        }
    }
    return out;
}

template <class Fn>
auto with_edge_context(int from, int to, Fn&& fn)
{
    try {
        return fn();
    } catch (const pole_error& e) {
        throw pole_error(std::string(e.what()) + " on edge " + std::to_string(from) + "-" + std::to_string(to),
                         e.location());
    }
}

} // namespace detail

/// Residuals of the vertical faces (b, w, w+, b+) with labels (alpha, lambda), one per edge:
/// f(alpha - lambda) x+(w) - g(alpha, lambda) x(b) - i (h(lambda) x+(b) - h(alpha) x(w)).
template <CoefficientSource C>
std::vector<std::complex<typename C::real_type>> backlund_vertical_residuals(
    const QuadGraph& g, const C& fam, const FieldAssignment<typename C::real_type>& x,
    const FieldAssignment<typename C::real_type>& xplus, typename C::real_type lambda)
{
    using Real = typename C::real_type;
    std::vector<std::complex<Real>> out;
    for (const auto& e : g.edges()) {
        const Real a = Real(e.alpha);
        out.push_back(quad_residual(fam, a, lambda,
                                    {x.at(e.from), x.at(e.to), xplus.at(e.to), xplus.at(e.from)}));
    }
    return out;
}

inline constexpr double backlund_input_tol = 1e-9;

/// New solution x+ from the vertical quad-equations with parameter lambda, normalized by
/// x+(seed_vertex) = seed_value. x+ lives on the upper layer of the Baecklund cube and solves the
/// quad-equation on recolored(g). The traversal order only selects the spanning tree.
template <CoefficientSource C>
FieldAssignment<typename C::real_type> backlund(const QuadGraph& g, const C& fam,
                                                const FieldAssignment<typename C::real_type>& x,
                                                typename C::real_type lambda, int seed_vertex,
                                                std::complex<typename C::real_type> seed_value,
                                                Traversal order = Traversal::breadth_first)
{
    using Real = typename C::real_type;
    using Cx = std::complex<Real>;
    const Real scale = 1 + x.max_abs();
    if (max_face_residual(g, fam, x) > Real(backlund_input_tol) * scale) {
        throw residual_error("input field does not solve the quad-equation");
    }
    FieldAssignment<Real> xp;
    xp.set(seed_vertex, seed_value);
    for (auto [p, v] : detail::spanning_tree(g, seed_vertex, order)) {
        const bool down = g.vertex(p).color == Color::black;
        const int b = down ? p : v;
        const int w = down ? v : p;
        const auto e = g.edge(b, w);
        if (!e) throw geometry_error("tree edge is not a black -> white edge");
        const Real a = Real(e->alpha);
        // Vertical face (b, w, w+, b+), labels (alpha, lambda).
        const QuadValues<Real> vals{x.at(b), x.at(w), down ? Cx{} : xp.at(w), down ? xp.at(b) : Cx{}};
        const Cx value = detail::with_edge_context(b, w, [&] {
            return solve_for_vertex(fam, a, lambda, vals, down ? Corner::x12 : Corner::x2);
        });
        xp.set(v, value);
    }
    const Real out_scale = 1 + x.max_abs() + xp.max_abs();
    for (const auto& r : backlund_vertical_residuals(g, fam, x, xp, lambda)) {
        if (std::abs(r) > Real(backlund_input_tol) * out_scale) {
            throw residual_error("vertical quad-equations are not consistent along cycles");
        }
    }
    return xp;
}

/// Product formula i^m {1 | h(lambda)} prod 1/f(a_k - lambda) along a vertex path starting at a
/// black vertex; a_k is the angle of the k-th step vector.
template <CoefficientSource C>
std::complex<typename C::real_type> exponential_along_path(const QuadGraph& g, const C& fam,
                                                           typename C::real_type lambda,
                                                           const std::vector<int>& path)
{
    using Real = typename C::real_type;
    using Cx = std::complex<Real>;
    if (path.empty() || g.vertex(path.front()).color != Color::black) {
        throw domain_error("exponential path must start at a black vertex");
    }
    Cx value(1);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const Point step = g.vertex(path[k]).pos - g.vertex(path[k - 1]).pos;
        if (std::abs(std::abs(step) - 1) > geometry_tol) throw geometry_error("exponential path leaves the edges");
        const Real a = Real(std::arg(step));
        value *= detail::with_edge_context(path[k - 1], path[k], [&] { return Cx(0, 1) / Cx(fam.f(a - lambda)); });
    }
    if (g.vertex(path.back()).color == Color::white) value *= Cx(fam.h(lambda));
    return value;
}

/// Discrete exponential e(.; lambda) with e(v0) = 1, evaluated by the product formula along a
/// breadth-first tree. Equals backlund() of the zero field; solves the quad-equation on recolored(g).
template <CoefficientSource C>
FieldAssignment<typename C::real_type> discrete_exponential(const QuadGraph& g, const C& fam,
                                                            typename C::real_type lambda, int v0)
{
    using Real = typename C::real_type;
    using Cx = std::complex<Real>;
    if (g.vertex(v0).color != Color::black) throw domain_error("exponential base vertex must be black");
    const Cx hl = fam.h(lambda);
    FieldAssignment<Real> e;
    e.set(v0, Cx(1));
    for (auto [p, v] : detail::spanning_tree(g, v0, Traversal::breadth_first)) {
        const Real a = Real(std::arg(g.vertex(v).pos - g.vertex(p).pos));
        Cx step = detail::with_edge_context(p, v, [&] { return Cx(0, 1) / Cx(fam.f(a - lambda)); });
        step *= g.vertex(v).color == Color::white ? hl : Cx(1) / hl;
        e.set(v, e.at(p) * step);
    }
    return e;
}

} // namespace quadlin

#endif
