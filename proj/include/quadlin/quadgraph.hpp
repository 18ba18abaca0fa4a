#ifndef QUADLIN_QUADGRAPH_HPP
#define QUADLIN_QUADGRAPH_HPP

// Bipartite rhombically embedded quad-graphs.
//
// Edges are directed black -> white and labelled by the angle alpha of
// pos(white) - pos(black) = exp(i alpha). A face is stored as
// (x0, x1, x12, x2) with x0, x12 black and labels (alpha, beta) such that
// x1 - x0 = exp(i alpha), x2 - x0 = exp(i beta) and beta - alpha in (0, pi)
// mod 2 pi, i.e. the face is positively oriented.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace quadlin
{

using Point = std::complex<double>;

inline constexpr double angle_tol = 1e-9;
inline constexpr double geometry_tol = 1e-9;
inline constexpr double two_pi = 2 * std::numbers::pi;

/// Angle reduced to [0, 2 pi).
inline double normalize_angle(double a)
{
    double r = std::fmod(a, two_pi);
    if (r < 0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

/// a == b mod 2 pi within tol.
inline bool same_angle(double a, double b, double tol = angle_tol)
{
    const double d = normalize_angle(a - b);
    return d < tol || two_pi - d < tol;
}

inline Point unit(double alpha) { return std::polar(1.0, alpha); }

enum class Color : std::uint8_t
{
    black,
    white
};

inline Color opposite(Color c) { return c == Color::black ? Color::white : Color::black; }

struct Vertex
{
    int id;
    Point pos;
    Color color;
};

struct Edge
{
    int from; // black
    int to;   // white
    double alpha;
};

struct Face
{
    std::array<int, 4> ids; // x0, x1, x12, x2
    double alpha;
    double beta;

    int x0() const { return ids[0]; }
    int x1() const { return ids[1]; }
    int x12() const { return ids[2]; }
    int x2() const { return ids[3]; }
    /// Black angle beta - alpha in (0, pi).
    double angle() const { return normalize_angle(beta - alpha); }
};

class QuadGraph
{
public:
    /// Adds a vertex; id < 0 picks the next free id.
    int add_vertex(Point pos, Color color, int id = -1)
    {
        if (id < 0) id = next_id_;
        if (index_.contains(id)) throw geometry_error("duplicate vertex id " + std::to_string(id));
        index_.emplace(id, vertices_.size());
        vertices_.push_back({id, pos, color});
        next_id_ = std::max(next_id_, id + 1);
        return id;
    }

    /// Adds the face with black corners b0, b1 and white corners w0, w1 (any order of the whites).
    /// Labels are read off the embedding and the face is stored positively oriented.
    int add_face(int b0, int w0, int b1, int w1)
    {
        const Point p0 = vertex(b0).pos;
        double alpha = normalize_angle(std::arg(vertex(w0).pos - p0));
        double beta = normalize_angle(std::arg(vertex(w1).pos - p0));
        if (normalize_angle(beta - alpha) > std::numbers::pi) {
            std::swap(alpha, beta);
            std::swap(w0, w1);
        }
        return add_face_labeled({b0, w0, b1, w1}, alpha, beta);
    }

    /// Adds a face record verbatim (labels are not recomputed); edges are added when missing.
    int add_face_labeled(std::array<int, 4> ids, double alpha, double beta)
    {
        for (int id : ids) (void)vertex(id);
        faces_.push_back({ids, normalize_angle(alpha), normalize_angle(beta)});
        ensure_edge(ids[0], ids[1]);
        ensure_edge(ids[0], ids[3]);
        ensure_edge(ids[2], ids[1]);
        ensure_edge(ids[2], ids[3]);
        return static_cast<int>(faces_.size()) - 1;
    }

    /// Adds an edge with an explicit label; no-op if the edge exists.
    void add_edge(int black, int white, double alpha)
    {
        const auto key = std::make_pair(black, white);
        if (edge_index_.contains(key)) return;
        edge_index_.emplace(key, edges_.size());
        edges_.push_back({black, white, normalize_angle(alpha)});
    }

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Face>& faces() const noexcept { return faces_; }

    // Direct access for tooling and corruption tests; invariants are not re-checked.
    std::vector<Vertex>& mutable_vertices() noexcept { return vertices_; }
    std::vector<Edge>& mutable_edges() noexcept { return edges_; }

    bool has_vertex(int id) const { return index_.contains(id); }

    const Vertex& vertex(int id) const
    {
        auto it = index_.find(id);
        if (it == index_.end()) throw geometry_error("unknown vertex id " + std::to_string(id));
        return vertices_[it->second];
    }

    std::optional<int> vertex_at(Point pos, double tol = geometry_tol) const
    {
        for (const auto& v : vertices_) {
            if (std::abs(v.pos - pos) < tol) return v.id;
        }
        return std::nullopt;
    }

    std::optional<Edge> edge(int black, int white) const
    {
        auto it = edge_index_.find({black, white});
        if (it == edge_index_.end()) return std::nullopt;
        return edges_[it->second];
    }

    /// Indices of faces containing the vertex.
    std::vector<int> faces_of(int id) const
    {
        std::vector<int> out;
        for (std::size_t k = 0; k < faces_.size(); ++k) {
            const auto& ids = faces_[k].ids;
            if (std::find(ids.begin(), ids.end(), id) != ids.end()) out.push_back(static_cast<int>(k));
        }
        return out;
    }

    /// Vertices joined to id by an edge, sorted.
    std::vector<int> neighbors(int id) const
    {
        std::vector<int> out;
        for (const auto& e : edges_) {
            if (e.from == id) out.push_back(e.to);
            if (e.to == id) out.push_back(e.from);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    int next_id() const noexcept { return next_id_; }

private:
    void ensure_edge(int black, int white)
    {
        add_edge(black, white, std::arg(vertex(white).pos - vertex(black).pos));
    }

    struct PairHash
    {
        std::size_t operator()(const std::pair<int, int>& p) const noexcept
        {
            return std::hash<long long>()((static_cast<long long>(p.first) << 32) ^ static_cast<unsigned>(p.second));
        }
    };

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;
    std::unordered_map<int, std::size_t> index_;
    std::unordered_map<std::pair<int, int>, std::size_t, PairHash> edge_index_;
    int next_id_ = 0;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation
{
    enum class Kind
    {
        bipartite,
        embedding,
        opposite_labels,
        orientation
    };
    Kind kind;
    std::string message;
};

inline std::string to_string(Violation::Kind k)
{
    switch (k) {
        case Violation::Kind::bipartite: return "bipartite";
        case Violation::Kind::embedding: return "embedding";
        case Violation::Kind::opposite_labels: return "opposite_labels";
        case Violation::Kind::orientation: return "orientation";
    }
    return "unknown";
}

/// Empty iff every QuadGraph invariant holds within geometry_tol.
inline std::vector<Violation> validate(const QuadGraph& g)
{
    std::vector<Violation> out;
    auto add = [&](Violation::Kind k, std::string msg) { out.push_back({k, std::move(msg)}); };
    for (const auto& e : g.edges()) {
        const auto& b = g.vertex(e.from);
        const auto& w = g.vertex(e.to);
        const std::string name = "edge " + std::to_string(e.from) + "->" + std::to_string(e.to);
        if (b.color != Color::black || w.color != Color::white) {
            add(Violation::Kind::bipartite, name + " does not run black -> white");
        }
        if (std::abs(w.pos - b.pos - unit(e.alpha)) > geometry_tol) {
            add(Violation::Kind::embedding, name + " is not the unit vector of its label");
        }
    }
    for (std::size_t k = 0; k < g.faces().size(); ++k) {
        const auto& f = g.faces()[k];
        const std::string name = "face " + std::to_string(k);
        const auto& x0 = g.vertex(f.x0());
        const auto& x1 = g.vertex(f.x1());
        const auto& x12 = g.vertex(f.x12());
        const auto& x2 = g.vertex(f.x2());
        if (x0.color != Color::black || x12.color != Color::black || x1.color != Color::white
            || x2.color != Color::white) {
            add(Violation::Kind::bipartite, name + " corners are not black/white/black/white");
        }
        if (std::abs(x1.pos - x0.pos - unit(f.alpha)) > geometry_tol
            || std::abs(x2.pos - x0.pos - unit(f.beta)) > geometry_tol) {
            add(Violation::Kind::embedding, name + " labels do not match the embedding");
        }
        // Opposite edges carry alpha + pi and beta + pi.
        if (std::abs(x2.pos - x12.pos - unit(f.alpha + std::numbers::pi)) > geometry_tol
            || std::abs(x1.pos - x12.pos - unit(f.beta + std::numbers::pi)) > geometry_tol) {
            add(Violation::Kind::opposite_labels, name + " is not a rhombus with opposite labels alpha, alpha + pi");
        }
        const double phi = f.angle();
        if (!(phi > angle_tol && phi < std::numbers::pi - angle_tol)) {
            add(Violation::Kind::orientation, name + " is not positively oriented");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Black stars

struct FanEntry
{
    int opposite;     ///< black vertex x_{k,k+1}
    double alpha_k;   ///< label of the edge to white_k
    double alpha_k1;  ///< label of the edge to white_k1
    int white_k;
    int white_k1;
    int face;
};

struct BlackStar
{
    int center;
    std::vector<FanEntry> fan; ///< counterclockwise, alpha_k1 of entry k equals alpha_k of entry k+1
};

namespace detail
{

// Sectors of the faces around a vertex of either color, seen from that vertex.
struct Sector
{
    double start;
    double end;
    int first;
    int second;
    int opposite;
    int face;
};

inline std::vector<Sector> sectors_at(const QuadGraph& g, int id)
{
    std::vector<Sector> out;
    const auto& faces = g.faces();
    const double pi = std::numbers::pi;
    for (int k : g.faces_of(id)) {
        const auto& f = faces[k];
        // Corners in counterclockwise order: x0, x1, x12, x2.
        const auto& ids = f.ids;
        int pos = 0;
        while (ids[pos] != id) ++pos;
        const int next = ids[(pos + 1) % 4];
        const int prev = ids[(pos + 3) % 4];
        const int opp = ids[(pos + 2) % 4];
        const Point c = g.vertex(id).pos;
        out.push_back({normalize_angle(std::arg(g.vertex(next).pos - c)),
                       normalize_angle(std::arg(g.vertex(prev).pos - c)), next, prev, opp, k});
        (void)pi;
    }
    return out;
}

// Orders sectors counterclockwise into a chain; returns the chain and whether it closes with total 2 pi.
inline std::pair<std::vector<Sector>, bool> chain_sectors(std::vector<Sector> sectors)
{
    if (sectors.empty()) return {{}, false};
    std::sort(sectors.begin(), sectors.end(), [](const Sector& a, const Sector& b) { return a.start < b.start; });
    // Start at a sector that no other sector ends at, if any (boundary vertex).
    std::size_t start = 0;
    for (std::size_t k = 0; k < sectors.size(); ++k) {
        bool preceded = false;
        for (const auto& s : sectors) preceded = preceded || (s.second == sectors[k].first);
        if (!preceded) {
            start = k;
            break;
        }
    }
    std::vector<Sector> chain{sectors[start]};
    std::vector<bool> used(sectors.size(), false);
    used[start] = true;
    for (;;) {
        bool extended = false;
        for (std::size_t k = 0; k < sectors.size(); ++k) {
            if (!used[k] && sectors[k].first == chain.back().second) {
                chain.push_back(sectors[k]);
                used[k] = true;
                extended = true;
                break;
            }
        }
        if (!extended) break;
    }
    double total = 0;
    for (const auto& s : chain) total += normalize_angle(s.end - s.start);
    const bool closed = chain.size() == sectors.size() && chain.back().second == chain.front().first
                        && std::abs(total - two_pi) < 1e-7;
    return {chain, closed};
}

} // namespace detail

/// True iff the faces around the vertex close up into a full 2 pi fan.
inline bool is_interior(const QuadGraph& g, int id)
{
    return detail::chain_sectors(detail::sectors_at(g, id)).second;
}

/// One star per interior black vertex, ordered by vertex id.
inline std::vector<BlackStar> black_stars(const QuadGraph& g)
{
    std::vector<BlackStar> out;
    std::vector<int> ids;
    for (const auto& v : g.vertices()) {
        if (v.color == Color::black) ids.push_back(v.id);
    }
    std::sort(ids.begin(), ids.end());
    for (int id : ids) {
        auto [chain, closed] = detail::chain_sectors(detail::sectors_at(g, id));
        if (!closed) continue;
        // Start the fan at the smallest label for determinism.
        auto it = std::min_element(chain.begin(), chain.end(),
                                   [](const auto& a, const auto& b) { return a.start < b.start; });
        std::rotate(chain.begin(), it, chain.end());
        BlackStar star{id, {}};
        for (const auto& s : chain) star.fan.push_back({s.opposite, s.start, s.end, s.first, s.second, s.face});
        out.push_back(std::move(star));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators

/// Row-major id of lattice point (i, j) in gen_square_grid(n, ...).
inline int grid_id(int n, int i, int j) { return j * (n + 1) + i; }

/// (n+1)^2 vertices i e^{i alpha} + j e^{i beta}, checkerboard colored with (0,0) black.
inline QuadGraph gen_square_grid(int n, double alpha, double beta)
{
    if (n < 1) throw geometry_error("grid size must be at least 1");
    const double phi = normalize_angle(beta - alpha);
    if (!(phi > angle_tol && phi < std::numbers::pi - angle_tol)) {
        throw geometry_error("grid needs beta - alpha in (0, pi)");
    }
    QuadGraph g;
    const Point ea = unit(alpha), eb = unit(beta);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            g.add_vertex(double(i) * ea + double(j) * eb, (i + j) % 2 == 0 ? Color::black : Color::white,
                         grid_id(n, i, j));
        }
    }
    const double pi = std::numbers::pi;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if ((i + j) % 2 == 0) {
                g.add_face_labeled({grid_id(n, i, j), grid_id(n, i + 1, j), grid_id(n, i + 1, j + 1),
                                    grid_id(n, i, j + 1)},
                                   alpha, beta);
            } else {
                g.add_face_labeled({grid_id(n, i + 1, j), grid_id(n, i + 1, j + 1), grid_id(n, i, j + 1),
                                    grid_id(n, i, j)},
                                   beta, alpha + pi);
            }
        }
    }
    return g;
}

/// Elementary square sigma^{ij} = (n, n + e_i, n + e_i + e_j, n + e_j) of Z^m.
struct Plaquette
{
    std::vector<int> base;
    int i;
    int j;
};

/// Realizes a monotone quad-surface in Z^m as a rhombic quad-graph with positions sum n_k exp(i alpha_k).
/// Vertex ids follow first appearance in the plaquette list.
inline QuadGraph gen_from_stepped_surface(const std::vector<Plaquette>& plaquettes, const std::vector<double>& alphas)
{
    const std::size_t m = alphas.size();
    if (m < 2) throw geometry_error("stepped surface needs at least two directions");
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const double d = normalize_angle(alphas[a] - alphas[b]);
            if (d < angle_tol || two_pi - d < angle_tol || std::abs(d - std::numbers::pi) < angle_tol) {
                throw geometry_error("direction angles must differ by neither 0 nor pi");
            }
        }
    }
    QuadGraph g;
    std::map<std::vector<int>, int> ids;
    auto position = [&](const std::vector<int>& n) {
        Point p(0, 0);
        for (std::size_t k = 0; k < m; ++k) p += double(n[k]) * unit(alphas[k]);
        return p;
    };
    auto vertex_for = [&](const std::vector<int>& n) {
        auto it = ids.find(n);
        if (it != ids.end()) return it->second;
        int parity = 0;
        for (int c : n) parity += c;
        const Point p = position(n);
        if (g.vertex_at(p)) throw topology_error("stepped surface projects two lattice points to one position");
        const int id = g.add_vertex(p, (parity % 2 + 2) % 2 == 0 ? Color::black : Color::white);
        ids.emplace(n, id);
        return id;
    };
    std::set<std::tuple<std::vector<int>, int, int>> seen;
    for (const auto& pl : plaquettes) {
        if (pl.base.size() != m) throw geometry_error("plaquette base has the wrong dimension");
        if (pl.i == pl.j || pl.i < 0 || pl.j < 0 || std::size_t(pl.i) >= m || std::size_t(pl.j) >= m) {
            throw topology_error("plaquette must span two distinct directions");
        }
        const auto key = std::make_tuple(pl.base, std::min(pl.i, pl.j), std::max(pl.i, pl.j));
        if (!seen.insert(key).second) throw topology_error("duplicate plaquette");
        auto ni = pl.base, nj = pl.base, nij = pl.base;
        ni[pl.i] += 1;
        nj[pl.j] += 1;
        nij[pl.i] += 1;
        nij[pl.j] += 1;
        const int v0 = vertex_for(pl.base), vi = vertex_for(ni), vij = vertex_for(nij), vj = vertex_for(nj);
        if (g.vertex(v0).color == Color::black) {
            g.add_face(v0, vi, vij, vj);
        } else {
            g.add_face(vi, v0, vj, vij);
        }
    }
    // Monotone surfaces project injectively: faces around a vertex must not overlap,
    // and no edge may be shared by more than two faces.
    std::map<std::pair<int, int>, int> edge_use;
    for (const auto& f : g.faces()) {
        for (auto [a, b] : {std::pair{f.x0(), f.x1()}, {f.x0(), f.x2()}, {f.x12(), f.x1()}, {f.x12(), f.x2()}}) {
            if (++edge_use[{a, b}] > 2) throw topology_error("edge shared by more than two plaquettes");
        }
    }
    for (const auto& v : g.vertices()) {
        auto sectors = detail::sectors_at(g, v.id);
        double total = 0;
        for (const auto& s : sectors) total += normalize_angle(s.end - s.start);
        if (total > two_pi + 1e-7) throw topology_error("stepped surface is not monotone (overlapping faces)");
        for (std::size_t a = 0; a < sectors.size(); ++a) {
            for (std::size_t b = a + 1; b < sectors.size(); ++b) {
                // Two sectors overlap iff the start of one lies strictly inside the other.
                auto inside = [](double x, const detail::Sector& s) {
                    const double w = normalize_angle(s.end - s.start);
                    const double d = normalize_angle(x - s.start);
                    return d > angle_tol && d < w - angle_tol;
                };
                if (inside(sectors[a].start, sectors[b]) || inside(sectors[b].start, sectors[a])
                    || same_angle(sectors[a].start, sectors[b].start)) {
                    throw topology_error("stepped surface is not monotone (overlapping faces)");
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Star-triangle flip

/// Replaces the three rhombi around an interior degree-3 vertex c by the three rhombi around
/// c' = c + d1 + d2 + d3 (d_k the edge vectors at c). Works for either color; for a black
/// center the black angles phi_k become pi - phi_k.
inline QuadGraph star_triangle_flip(const QuadGraph& g, int center)
{
    const auto& cv = g.vertex(center);
    const auto incident = g.faces_of(center);
    if (incident.size() != 3) throw flip_error("flip needs a vertex with exactly three faces");
    auto [chain, closed] = detail::chain_sectors(detail::sectors_at(g, center));
    if (!closed) throw flip_error("flip needs an interior vertex with angle sum 2 pi");
    const auto nbrs = g.neighbors(center);
    if (nbrs.size() != 3) throw flip_error("flip needs a vertex of degree 3");
    for (const auto& s : chain) {
        if (!(normalize_angle(s.end - s.start) < std::numbers::pi)) throw flip_error("face angle at the center is not below pi");
    }
    Point shift(0, 0);
    for (int n : nbrs) shift += g.vertex(n).pos - cv.pos;
    const Point new_pos = cv.pos + shift;
    // Symmetric stars (edge vectors summing to zero) flip in place.
    if (auto hit = g.vertex_at(new_pos); hit && *hit != center) throw flip_error("flip target position already occupied");

    QuadGraph out;
    for (const auto& v : g.vertices()) {
        if (v.id != center) out.add_vertex(v.pos, v.color, v.id);
    }
    const int fresh = out.add_vertex(new_pos, opposite(cv.color), g.next_id());
    for (const auto& e : g.edges()) {
        if (e.from != center && e.to != center) out.add_edge(e.from, e.to, e.alpha);
    }
    for (std::size_t k = 0; k < g.faces().size(); ++k) {
        if (std::find(incident.begin(), incident.end(), int(k)) != incident.end()) continue;
        const auto& f = g.faces()[k];
        out.add_face_labeled(f.ids, f.alpha, f.beta);
    }
    // New face k: neighbor n_k, the two opposite vertices sharing n_k, and the fresh vertex.
    for (int nk : nbrs) {
        std::vector<int> opp;
        for (const auto& s : chain) {
            if (s.first == nk || s.second == nk) opp.push_back(s.opposite);
        }
        if (opp.size() != 2) throw flip_error("malformed star around flip center");
        if (cv.color == Color::black) {
            out.add_face(opp[0], nk, opp[1], fresh);
        } else {
            out.add_face(nk, opp[0], fresh, opp[1]);
        }
    }
    return out;
}

/// Same embedding with the colors exchanged: edges reversed with label + pi and every face
/// re-rooted at its former white corner x1. This is the upper layer of a Baecklund cube, on which
/// Baecklund transforms (and discrete exponentials) solve the quad-equation.
inline QuadGraph recolored(const QuadGraph& g)
{
    QuadGraph out;
    for (const auto& v : g.vertices()) out.add_vertex(v.pos, opposite(v.color), v.id);
    for (const auto& e : g.edges()) out.add_edge(e.to, e.from, e.alpha + std::numbers::pi);
    for (const auto& f : g.faces()) {
        out.add_face_labeled({f.x1(), f.x12(), f.x2(), f.x0()}, f.beta, f.alpha + std::numbers::pi);
    }
    return out;
}

/// Compares two graphs up to vertex ids: same colored positions and same faces as position sets.
inline bool same_embedding(const QuadGraph& a, const QuadGraph& b, double tol = 1e-12)
{
    if (a.vertices().size() != b.vertices().size() || a.faces().size() != b.faces().size()) return false;
    std::map<int, int> match;
    for (const auto& v : a.vertices()) {
        auto w = b.vertex_at(v.pos, tol);
        if (!w || b.vertex(*w).color != v.color) return false;
        match[v.id] = *w;
    }
    std::set<std::array<int, 4>> fb;
    for (const auto& f : b.faces()) {
        auto ids = f.ids;
        std::sort(ids.begin(), ids.end());
        fb.insert(ids);
    }
    for (const auto& f : a.faces()) {
        std::array<int, 4> ids{};
        for (int k = 0; k < 4; ++k) ids[k] = match.at(f.ids[k]);
        std::sort(ids.begin(), ids.end());
        if (!fb.contains(ids)) return false;
    }
    return true;
}

} // namespace quadlin

#endif
