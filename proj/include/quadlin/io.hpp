#ifndef QUADLIN_IO_HPP
#define QUADLIN_IO_HPP

// JSON / CSV / SVG / Matrix Market exchange formats.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coeffs.hpp"
#include "errors.hpp"
#include "laplace.hpp"
#include "pluri.hpp"
#include "quadeq.hpp"
#include "quadgraph.hpp"

namespace quadlin
{

using json = nlohmann::ordered_json;

namespace detail
{

template <class T>
T json_get(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw usage_error(std::string("missing JSON field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw usage_error(std::string("bad JSON field '") + key + "': " + e.what());
    }
}

template <std::floating_point Real>
json complex_json(std::complex<Real> z)
{
    return {{"re", double(z.real())}, {"im", double(z.imag())}};
}

template <std::floating_point Real>
std::complex<Real> complex_from_json(const json& j)
{
    return {Real(json_get<double>(j, "re")), Real(json_get<double>(j, "im"))};
}

} // namespace detail

// --- coefficient family ----------------------------------------------------

template <std::floating_point Real>
json to_json(const CoefficientFamily<Real>& fam)
{
    return {{"regime", std::string(to_string(fam.regime()))},
            {"tau0", fam.regime() == Regime::degenerate ? 0.0 : double(fam.tau0())},
            {"lambda0", double(fam.lambda0())}};
}

template <std::floating_point Real>
CoefficientFamily<Real> family_from_json(const json& j)
{
    const auto regime = parse_regime(detail::json_get<std::string>(j, "regime"));
    const Real lambda0 = j.contains("lambda0") ? Real(detail::json_get<double>(j, "lambda0")) : Real(0);
    if (regime == Regime::degenerate) return CoefficientFamily<Real>::degenerate(lambda0);
    return CoefficientFamily<Real>::make(regime, Real(detail::json_get<double>(j, "tau0")), lambda0);
}

// --- graph -----------------------------------------------------------------

inline json to_json(const QuadGraph& g)
{
    json vs = json::array(), es = json::array(), fs = json::array();
    for (const auto& v : g.vertices()) {
        vs.push_back({{"id", v.id},
                      {"pos", {v.pos.real(), v.pos.imag()}},
                      {"color", v.color == Color::black ? "b" : "w"}});
    }
    for (const auto& e : g.edges()) es.push_back({{"from", e.from}, {"to", e.to}, {"alpha", e.alpha}});
    for (const auto& f : g.faces()) fs.push_back(f.ids);
    return {{"vertices", vs}, {"edges", es}, {"faces", fs}};
}

/// Edges are read verbatim; face labels are taken from the edges x0 -> x1 and x0 -> x2.
inline QuadGraph graph_from_json(const json& j)
{
    QuadGraph g;
    try {
        for (const auto& v : j.at("vertices")) {
            const auto pos = v.at("pos");
            const std::string color = v.at("color").get<std::string>();
            if (color != "b" && color != "w") throw usage_error("vertex color must be \"b\" or \"w\"");
            g.add_vertex({pos.at(0).get<double>(), pos.at(1).get<double>()},
                         color == "b" ? Color::black : Color::white, v.at("id").get<int>());
        }
        if (j.contains("edges")) {
            for (const auto& e : j.at("edges")) {
                g.add_edge(e.at("from").get<int>(), e.at("to").get<int>(), e.at("alpha").get<double>());
            }
        }
        for (const auto& f : j.at("faces")) {
            const auto ids = f.get<std::array<int, 4>>();
            auto label = [&](int b, int w) {
                if (auto e = g.edge(b, w)) return e->alpha;
                return std::arg(g.vertex(w).pos - g.vertex(b).pos);
            };
            g.add_face_labeled(ids, label(ids[0], ids[1]), label(ids[0], ids[3]));
        }
    } catch (const json::exception& e) {
        throw usage_error(std::string("malformed graph JSON: ") + e.what());
    }
    return g;
}

// --- fields ----------------------------------------------------------------

template <std::floating_point Real>
json to_json(const FieldAssignment<Real>& x)
{
    json vals = json::array();
    for (const auto& [id, v] : x.values) vals.push_back({{"id", id}, {"re", double(v.real())}, {"im", double(v.imag())}});
    return {{"domain", std::string(to_string(x.domain))}, {"values", vals}};
}

template <std::floating_point Real>
FieldAssignment<Real> field_from_json(const json& j)
{
    FieldAssignment<Real> x;
    const auto d = j.contains("domain") ? detail::json_get<std::string>(j, "domain") : std::string("full");
    if (d == "full") x.domain = FieldDomain::full;
    else if (d == "black") x.domain = FieldDomain::black;
    else if (d == "white") x.domain = FieldDomain::white;
    else throw usage_error("unknown field domain '" + d + "'");
    if (!j.contains("values")) throw usage_error("missing JSON field 'values'");
    for (const auto& v : j.at("values")) {
        x.set(detail::json_get<int>(v, "id"), detail::complex_from_json<Real>(v));
    }
    return x;
}

template <std::floating_point Real>
void write_csv(std::ostream& os, const FieldAssignment<Real>& x)
{
    os << "id,re,im\n" << std::setprecision(17);
    for (const auto& [id, v] : x.values) os << id << ',' << double(v.real()) << ',' << double(v.imag()) << '\n';
}

template <std::floating_point Real>
FieldAssignment<Real> read_csv(std::istream& is)
{
    FieldAssignment<Real> x;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || (lineno == 1 && line.rfind("id", 0) == 0)) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
            throw usage_error("malformed CSV line " + std::to_string(lineno));
        }
        try {
            x.set(std::stoi(a), {Real(std::stod(b)), Real(std::stod(c))});
        } catch (const std::exception&) {
            throw usage_error("malformed CSV line " + std::to_string(lineno));
        }
    }
    return x;
}

// --- SVG -------------------------------------------------------------------

struct SvgOptions
{
    double scale = 60;
    double margin = 0.5;
    const QuadGraph* overlay = nullptr; ///< drawn dashed on top
};

namespace detail
{

// Blue (low) to red (high).
inline std::string ramp(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    const int r = int(std::lround(255 * t)), b = int(std::lround(255 * (1 - t)));
    std::ostringstream os;
    os << "rgb(" << r << ",64," << b << ")";
    return os.str();
}

} // namespace detail

/// Black vertices filled, white vertices hollow, edges as unit segments. With a field the vertices
/// are colored by the real part of the value.
template <std::floating_point Real = double>
void write_svg(std::ostream& os, const QuadGraph& g, const FieldAssignment<Real>* field = nullptr,
               const SvgOptions& opt = {})
{
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    auto extend = [&](const QuadGraph& h) {
        for (const auto& v : h.vertices()) {
            if (first) {
                xmin = xmax = v.pos.real();
                ymin = ymax = v.pos.imag();
                first = false;
            }
            xmin = std::min(xmin, v.pos.real());
            xmax = std::max(xmax, v.pos.real());
            ymin = std::min(ymin, v.pos.imag());
            ymax = std::max(ymax, v.pos.imag());
        }
    };
    extend(g);
    if (opt.overlay) extend(*opt.overlay);
    const double s = opt.scale, m = opt.margin;
    auto X = [&](Point p) { return (p.real() - xmin + m) * s; };
    auto Y = [&](Point p) { return (ymax - p.imag() + m) * s; };
    os << std::fixed << std::setprecision(3);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (xmax - xmin + 2 * m) * s << "\" height=\""
       << (ymax - ymin + 2 * m) * s << "\">\n";
    auto edges = [&](const QuadGraph& h, const char* style) {
        for (const auto& e : h.edges()) {
            const Point a = h.vertex(e.from).pos, b = h.vertex(e.to).pos;
            os << "  <line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\" "
               << style << "/>\n";
        }
    };
    edges(g, "stroke=\"#444\" stroke-width=\"2\"");
    if (opt.overlay) edges(*opt.overlay, "stroke=\"#c33\" stroke-width=\"2\" stroke-dasharray=\"6,4\"");
    double lo = 0, hi = 0;
    if (field && !field->values.empty()) {
        lo = hi = double(field->values.begin()->second.real());
        for (const auto& [id, v] : field->values) {
            lo = std::min(lo, double(v.real()));
            hi = std::max(hi, double(v.real()));
        }
    }
    for (const auto& v : g.vertices()) {
        std::string fill = v.color == Color::black ? "black" : "white";
        if (field && field->contains(v.id)) {
            const double t = hi > lo ? (double(field->at(v.id).real()) - lo) / (hi - lo) : 0.5;
            fill = detail::ramp(t);
        }
        os << "  <circle cx=\"" << X(v.pos) << "\" cy=\"" << Y(v.pos) << "\" r=\"" << 0.12 * s << "\" fill=\"" << fill
           << "\" stroke=\"black\" stroke-width=\"" << (v.color == Color::black ? 1.0 : 2.5) << "\"/>\n";
    }
    os << "</svg>\n";
}

// --- Laplace operator export ------------------------------------------------

/// Interior system matrix (mass on the diagonal, -weight off it) in Matrix Market coordinate format.
template <std::floating_point Real>
void write_matrix_market(std::ostream& os, const LaplaceOperator<Real>& L)
{
    std::map<int, int> index;
    for (std::size_t k = 0; k < L.rows.size(); ++k) index[L.rows[k].vertex] = int(k) + 1;
    std::vector<std::tuple<int, int, double>> entries;
    for (std::size_t k = 0; k < L.rows.size(); ++k) {
        const auto& r = L.rows[k];
        entries.emplace_back(int(k) + 1, int(k) + 1, double(r.mass));
        for (auto [v, w] : r.neighbors) {
            if (auto it = index.find(v); it != index.end()) entries.emplace_back(int(k) + 1, it->second, -double(w));
        }
    }
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << L.rows.size() << ' ' << L.rows.size() << ' ' << entries.size() << '\n' << std::setprecision(17);
    for (auto [i, j, v] : entries) os << i << ' ' << j << ' ' << v << '\n';
}

/// Sidecar for write_matrix_market: 1-based matrix index -> vertex id, boundary coupling.
template <std::floating_point Real>
json matrix_sidecar(const LaplaceOperator<Real>& L)
{
    json rows = json::array(), coupling = json::array();
    std::vector<int> interior;
    for (const auto& r : L.rows) interior.push_back(r.vertex);
    for (std::size_t k = 0; k < L.rows.size(); ++k) {
        rows.push_back({{"index", k + 1}, {"vertex", L.rows[k].vertex}});
        for (auto [v, w] : L.rows[k].neighbors) {
            if (!std::binary_search(L.interior.begin(), L.interior.end(), v)) {
                coupling.push_back({{"index", k + 1}, {"boundary_vertex", v}, {"weight", double(w)}});
            }
        }
    }
    return {{"rows", rows}, {"boundary", L.boundary}, {"boundary_coupling", coupling}};
}

// --- weights and reports ----------------------------------------------------

template <std::floating_point Real>
json to_json(const CubeWeights2<Real>& w)
{
    json arr = json::array();
    for (const auto& p : w.w) arr.push_back({{"a", detail::complex_json(p.a)}, {"c", detail::complex_json(p.c)}});
    return arr;
}

template <std::floating_point Real>
CubeWeights2<Real> cube_weights2_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 3) throw usage_error("cube weights must be an array of three {a, c} entries");
    CubeWeights2<Real> w;
    for (int p = 0; p < 3; ++p) {
        w.w[p] = {detail::complex_from_json<Real>(detail::json_get<json>(j[p], "a")),
                  detail::complex_from_json<Real>(detail::json_get<json>(j[p], "c"))};
    }
    return w;
}

template <std::floating_point Real>
json to_json(const CubeWeights3<Real>& w)
{
    json arr = json::array();
    for (const auto& p : w) {
        arr.push_back({{"a", detail::complex_json(p.a)}, {"b", detail::complex_json(p.b)}, {"c", detail::complex_json(p.c)}});
    }
    return arr;
}

template <std::floating_point Real>
json consistency_report(const std::string& name, int draws, Real max_discrepancy)
{
    return {{"case", name}, {"draws", draws}, {"max_discrepancy", double(max_discrepancy)}};
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw usage_error("invalid JSON in '" + path + "': " + e.what());
    }
}

} // namespace quadlin

#endif
