// quadlin: batch front end for the identity suites, graph generation, solvers and weight maps.
//
// Exit status: 0 pass, 1 check failure, 2 usage or configuration error.

#include <quadlin/quadlin.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

namespace
{

using namespace quadlin;
using Cx = std::complex<double>;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr double pi = std::numbers::pi;

struct Options
{
    std::string regime = "rectangular";
    double tau0 = 1.0;
    double lambda0 = 0.0;
    std::uint64_t seed = 1;
    int samples = 500;
    std::optional<double> tol;
    std::string out;
    std::string format = "json";

    double tolerance(double fallback) const { return tol.value_or(fallback); }
};

void add_common(CLI::App* app, Options& o)
{
    app->add_option("--regime", o.regime, "rectangular | rhombic | degenerate")->capture_default_str();
    app->add_option("--tau0", o.tau0, "imaginary part of the period ratio")->capture_default_str();
    app->add_option("--lambda0", o.lambda0, "spectral origin of h")->capture_default_str();
    app->add_option("--seed", o.seed, "seed of the random draws")->capture_default_str();
    app->add_option("--samples", o.samples, "random samples per check")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--tol", o.tol, "pass threshold (per-command default)");
    app->add_option("--out", o.out, "output file (stdout when absent)");
    app->add_option("--format", o.format, "json | csv | svg")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv", "svg"}));
}

/// Independent stream per suite, derived from the run seed.
std::mt19937_64 suite_rng(std::uint64_t seed, std::uint32_t suite)
{
    std::seed_seq s{std::uint32_t(seed), std::uint32_t(seed >> 32), suite};
    return std::mt19937_64(s);
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Cx random_complex(std::mt19937_64& rng, double lo, double hi)
{
    return std::polar(uniform(rng, lo, hi), uniform(rng, 0, 2 * pi));
}

template <std::floating_point Real>
CoefficientFamily<Real> family(const Options& o)
{
    const auto r = parse_regime(o.regime);
    if (r == Regime::degenerate) return CoefficientFamily<Real>::degenerate(Real(o.lambda0));
    if (!(o.tau0 > 0)) throw usage_error("--tau0 must be positive");
    return CoefficientFamily<Real>::make(r, Real(o.tau0), Real(o.lambda0));
}

double pole_distance(double a) { return std::abs(std::remainder(a - pi, 2 * pi)); }

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw usage_error("cannot write '" + path + "'");
    f << text;
}

void print(const json& report) { std::cout << report.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// identities

template <std::floating_point Real>
double rel(std::complex<Real> a, std::complex<Real> b)
{
    return double(std::abs(a - b) / std::max({Real(1), std::abs(a), std::abs(b)}));
}

template <std::floating_point Real>
json theta_suite(const Options& o, std::mt19937_64& rng)
{
    using C = std::complex<Real>;
    const auto p = family<Real>(o).params();
    const auto k = theta_constants(p);
    double worst = rel(theta_deriv(1, C(0), p), k.theta2 * k.theta3 * k.theta4);
    const C q = p.nome();
    for (int s = 0; s < o.samples; ++s) {
        const C z(Real(uniform(rng, -3, 3)), Real(uniform(rng, -0.3, 0.3)));
        worst = std::max(worst, rel(theta(1, -z, p), -theta(1, z, p)));
        for (int j = 2; j <= 4; ++j) worst = std::max(worst, rel(theta(j, -z, p), theta(j, z, p)));
        const C w = z + std::numbers::pi_v<Real> / 2;
        worst = std::max({worst, rel(theta(1, w, p), theta(2, z, p)), rel(theta(2, w, p), -theta(1, z, p)),
                          rel(theta(3, w, p), theta(4, z, p)), rel(theta(4, w, p), theta(3, z, p))});
        // Fourier series of the logarithmic derivative of theta_2.
        const Real a = Real(uniform(rng, 0.05, 1.5));
        C series = std::tan(a);
        C q2n(1);
        for (int n = 1; n < 200 && std::abs(q2n) > 0; ++n) {
            q2n *= q * q;
            series += Real(4 * ((n % 2) ? 1 : -1)) * q2n / (Real(1) - q2n) * std::sin(Real(2 * n) * a);
        }
        worst = std::max(worst, rel(C(-theta_deriv(2, C(a), p) / theta(2, C(a), p)), series));
    }
    return {{"suite", "theta"}, {"samples", o.samples}, {"max_residual", worst}};
}

template <std::floating_point Real>
json functional_suite(const Options& o, std::mt19937_64& rng)
{
    using C = std::complex<Real>;
    const auto fam = family<Real>(o);
    const bool rhombic = fam.regime() == Regime::rhombic;
    auto clear = [&](double x) { return !rhombic || pole_distance(x - o.lambda0) > 0.05; };
    double worst = 0;
    for (int s = 0; s < o.samples;) {
        std::array<double, 4> x;
        for (auto& v : x) v = uniform(rng, 0, 2 * pi);
        bool ok = clear(x[0]) && clear(x[1]) && clear(x[2]) && clear(x[0] + pi);
        for (int i = 0; i < 4 && ok; ++i) {
            for (int j = i + 1; j < 4 && ok; ++j) ok = pole_distance(x[i] - x[j]) > 0.05;
        }
        ok = ok && pole_distance(x[0]) > 0.05 && pole_distance(x[0] + pi) > 0.05;
        if (!ok) continue;
        ++s;
        const Real a = Real(x[0]), b = Real(x[1]), c = Real(x[2]), d = Real(x[3]);
        const Real l = Real(o.lambda0), api = a + std::numbers::pi_v<Real>;
        worst = std::max({worst, double(std::abs(check_fff<Real>(a, b, c, d, fam))),
                          double(std::abs(check_fhh(a, b, c, fam))), double(std::abs(check_gsum<Real>(a, b, c, fam))),
                          double(std::abs(fam.f(a) * fam.f(api) + Real(1))),
                          double(std::abs(fam.h(a) * fam.h(api) - Real(1)))});
        C additive = fam.f(a - b);
        if (fam.regime() == Regime::rectangular) additive = fam.g0(a - b) + fam.g1(b - l) - fam.g1(a - l);
        if (rhombic) additive = fam.g0(a - b) + fam.g0(b - l) - fam.g0(a - l);
        worst = std::max(worst, double(std::abs(fam.g(a, b) - additive)));
    }
    return {{"suite", "functional"}, {"samples", o.samples}, {"max_residual", worst}};
}

template <std::floating_point Real>
json lemmas_suite(const Options& o, std::mt19937_64& rng)
{
    const auto fam = family<Real>(o);
    double worst = 0, min_margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < o.samples; ++s) {
        const Real a = Real(uniform(rng, 0.05, pi - 0.05));
        if (fam.regime() == Regime::degenerate) {
            // No mass at q = 0: g0 and f coincide.
            worst = std::max(worst, double(std::abs(fam.g0(a) - fam.f(a))));
            continue;
        }
        const Real m = lemma_margin(a, fam);
        min_margin = std::min(min_margin, double(m));
        worst = std::max(worst, double(std::abs(m - lemma_margin_closed_form(a, fam))));
    }
    json r{{"suite", "lemmas"}, {"samples", o.samples}, {"max_residual", worst}};
    if (std::isfinite(min_margin)) r["min_margin"] = min_margin;
    return r;
}

template <std::floating_point Real>
int run_identities(const std::string& suite, const Options& o)
{
    const double tol = o.tolerance(1e-10);
    const std::vector<std::string> names{"theta", "functional", "lemmas"};
    std::vector<json> reports;
    for (std::uint32_t k = 0; k < names.size(); ++k) {
        if (suite != "all" && suite != names[k]) continue;
        auto rng = suite_rng(o.seed, k);
        json r = k == 0 ? theta_suite<Real>(o, rng) : k == 1 ? functional_suite<Real>(o, rng) : lemmas_suite<Real>(o, rng);
        bool pass = r["max_residual"].get<double>() < tol;
        if (r.contains("min_margin")) pass = pass && r["min_margin"].get<double>() > 0;
        r["pass"] = pass;
        reports.push_back(std::move(r));
    }
    json report;
    if (reports.size() == 1) {
        report = reports[0];
    } else {
        double worst = 0;
        bool pass = true;
        for (const auto& r : reports) {
            worst = std::max(worst, r["max_residual"].get<double>());
            pass = pass && r["pass"].get<bool>();
        }
        report = {{"suite", "all"}, {"samples", o.samples}, {"max_residual", worst}, {"pass", pass}, {"suites", reports}};
    }
    report["regime"] = o.regime;
    report["tol"] = tol;
    report["precision"] = sizeof(Real) == sizeof(double) ? "double" : "extended";
    print(report);
    if (!o.out.empty()) write_text(o.out, report.dump(2) + "\n");
    return report["pass"].get<bool>() ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------
// graph

struct GraphSource
{
    std::string input;
    int n = 8;
    double alpha = 0;
    double beta = pi / 2;
};

void add_graph_source(CLI::App* app, GraphSource& s)
{
    app->add_option("--input", s.input, "graph JSON (a square grid is generated when absent)");
    app->add_option("--n", s.n, "grid size")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--alpha", s.alpha, "first grid label")->capture_default_str();
    app->add_option("--beta", s.beta, "second grid label")->capture_default_str();
}

QuadGraph load_graph(const GraphSource& s)
{
    if (!s.input.empty()) return graph_from_json(read_json_file(s.input));
    return gen_square_grid(s.n, s.alpha, s.beta);
}

std::vector<Plaquette> read_plaquettes(const std::string& path)
{
    std::vector<Plaquette> out;
    for (const auto& p : read_json_file(path)) {
        try {
            out.push_back({p.at("base").get<std::vector<int>>(), p.at("i").get<int>(), p.at("j").get<int>()});
        } catch (const json::exception& e) {
            throw usage_error(std::string("malformed plaquette entry: ") + e.what());
        }
    }
    return out;
}

void write_graph(const QuadGraph& g, const Options& o, const QuadGraph* overlay = nullptr)
{
    if (o.format == "csv") throw usage_error("graphs are written as json or svg");
    if (o.format == "svg") {
        std::ostringstream os;
        write_svg<double>(os, g, nullptr, {.overlay = overlay});
        write_text(o.out, os.str());
    } else {
        write_text(o.out, to_json(g).dump() + "\n");
    }
}

json graph_summary(const QuadGraph& g)
{
    return {{"vertices", g.vertices().size()}, {"edges", g.edges().size()}, {"faces", g.faces().size()},
            {"black_stars", black_stars(g).size()}};
}

int run_graph_gen(const std::string& shape, int n, const GraphSource& s, const std::vector<double>& dirs,
                  const std::string& plaquettes, const Options& o)
{
    QuadGraph g;
    if (shape == "square") {
        g = gen_square_grid(n, s.alpha, s.beta);
    } else if (shape == "corner") {
        g = gen_from_stepped_surface({{{0, 0, 0}, 0, 1}, {{0, 0, 0}, 1, 2}, {{0, 0, 0}, 2, 0}}, dirs);
    } else {
        if (plaquettes.empty()) throw usage_error("stepped surfaces need --plaquettes");
        g = gen_from_stepped_surface(read_plaquettes(plaquettes), dirs);
    }
    write_graph(g, o);
    if (!o.out.empty()) print(graph_summary(g));
    return exit_pass;
}

int run_graph_flip(const GraphSource& s, int vertex, const std::string& svg, const Options& o)
{
    if (s.input.empty()) throw usage_error("flip needs --input");
    const auto g = load_graph(s);
    const auto f = star_triangle_flip(g, vertex);
    write_graph(f, o, o.format == "svg" ? &g : nullptr);
    if (!svg.empty()) {
        std::ostringstream os;
        write_svg<double>(os, f, nullptr, {.overlay = &g});
        write_text(svg, os.str());
    }
    if (!o.out.empty()) {
        auto r = graph_summary(f);
        r["flipped_vertex"] = vertex;
        r["new_vertex"] = f.next_id() - 1;
        print(r);
    }
    return exit_pass;
}

int run_graph_validate(const GraphSource& s)
{
    if (s.input.empty()) throw usage_error("validate needs --input");
    json violations = json::array();
    try {
        for (const auto& v : validate(load_graph(s))) {
            violations.push_back({{"kind", to_string(v.kind)}, {"message", v.message}});
        }
    } catch (const usage_error&) {
        throw;
    } catch (const quadlin::error& e) {
        violations.push_back({{"kind", "load"}, {"message", e.what()}});
    }
    const bool valid = violations.empty();
    print({{"valid", valid}, {"violations", violations}});
    return valid ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------
// solve

using Field = FieldAssignment<double>;

Field read_field(const std::string& path)
{
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream in(path);
        if (!in) throw usage_error("cannot open '" + path + "'");
        return read_csv<double>(in);
    }
    return field_from_json<double>(read_json_file(path));
}

void write_field(const QuadGraph& g, const Field& x, const Options& o)
{
    std::ostringstream os;
    if (o.format == "csv") {
        write_csv(os, x);
    } else if (o.format == "svg") {
        write_svg(os, g, &x);
    } else {
        os << to_json(x).dump() << '\n';
    }
    write_text(o.out.empty() ? std::string() : o.out, os.str());
}

int first_black(const QuadGraph& g)
{
    for (const auto& v : g.vertices()) {
        if (v.color == Color::black) return v.id;
    }
    throw usage_error("graph has no black vertex");
}

/// Largest deviation of the product formula along random edge walks from the tree value.
double walk_spread(const QuadGraph& g, const CoefficientFamily<double>& fam, double lambda, int v0, const Field& e,
                   int walks, std::mt19937_64& rng)
{
    const int length = 2 * int(std::sqrt(double(g.vertices().size()))) + 2;
    double spread = 0;
    for (int w = 0; w < walks; ++w) {
        std::vector<int> path{v0};
        for (int k = 0; k < length; ++k) {
            const auto nb = g.neighbors(path.back());
            if (nb.empty()) break;
            path.push_back(nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)]);
        }
        const Cx v = exponential_along_path(g, fam, lambda, path);
        spread = std::max(spread, std::abs(v - e.at(path.back())) / std::max(1.0, std::abs(v)));
    }
    return spread;
}

int run_solve(const std::string& what, const GraphSource& s, double lambda, std::optional<int> base,
              const std::string& data, const std::string& matrix, const Options& o)
{
    const auto g = load_graph(s);
    const auto fam = family<double>(o);
    json r{{"command", what}, {"regime", o.regime}, {"vertices", g.vertices().size()}};
    bool pass = true;
    auto rng = suite_rng(o.seed, 0);

    if (what == "exp") {
        const double tol = o.tolerance(1e-9);
        const int v0 = base.value_or(first_black(g));
        const auto e = discrete_exponential(g, fam, lambda, v0);
        const double scale = 1 + e.max_abs();
        const double face = max_face_residual(recolored(g), fam, e) / scale;
        const double spread = walk_spread(g, fam, lambda, v0, e, o.samples, rng);
        const double harmonic = max_abs(residual(assemble(g, fam), e.restrict_to(g, Color::black))) / scale;
        r.update({{"lambda", lambda}, {"base", v0}, {"face_residual", face}, {"path_spread", spread},
                  {"laplace_residual", harmonic}});
        pass = face < tol && spread < tol && harmonic < tol;
        write_field(g, e, o);
    } else if (what == "laplace") {
        const double tol = o.tolerance(1e-8);
        const auto L = assemble(g, fam);
        Field b;
        b.domain = FieldDomain::black;
        std::optional<Field> reference;
        if (data.empty()) {
            const int v0 = base.value_or(first_black(g));
            reference = discrete_exponential(g, fam, lambda, v0).restrict_to(g, Color::black);
            r.update({{"boundary", "exponential"}, {"lambda", lambda}, {"base", v0}});
        } else {
            const auto d = read_field(data);
            r["boundary"] = data;
            for (int v : L.boundary) {
                if (!d.contains(v)) throw usage_error("boundary data misses vertex " + std::to_string(v));
            }
            for (const auto& [id, v] : d.values) {
                if (g.vertex(id).color == Color::black) b.set(id, v);
            }
        }
        for (int v : L.boundary) {
            if (reference) b.set(v, reference->at(v));
        }
        const auto sol = solve_dirichlet(L, b);
        r.update({{"solver", sol.solver == SolverKind::conjugate_gradient ? "cg" : "lu"},
                  {"iterations", sol.iterations}, {"residual", sol.residual}, {"interior", L.interior.size()}});
        if (reference) {
            double err = 0;
            for (const auto& [id, v] : sol.interior.values) err = std::max(err, std::abs(v - reference->at(id)));
            err /= 1 + reference->max_abs();
            r["max_error"] = err;
            pass = err < tol;
        }
        Field all = sol.interior;
        for (int v : L.boundary) all.set(v, b.at(v));
        write_field(g, all, o);
        if (!matrix.empty()) {
            std::ostringstream mm;
            write_matrix_market(mm, L);
            write_text(matrix + ".mtx", mm.str());
            write_text(matrix + ".json", matrix_sidecar(L).dump(2) + "\n");
        }
    } else {
        const double tol = o.tolerance(1e-9);
        Field d;
        if (!data.empty()) {
            d = read_field(data);
        } else if (s.input.empty()) {
            for (int id : grid_staircase(s.n)) d.set(id, 0);
            r["data"] = "zero staircase";
        } else {
            throw usage_error("quad propagation on an input graph needs --data");
        }
        const auto x = propagate(g, fam, d);
        const double face = max_face_residual(g, fam, x) / (1 + x.max_abs());
        r.update({{"face_residual", face}, {"max_abs", x.max_abs()}});
        pass = face < tol;
        write_field(g, x, o);
    }
    r["pass"] = pass;
    (o.out.empty() ? std::cerr : std::cout) << r.dump(2) << '\n';
    return pass ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------
// startriangle

CubeWeights2<double> read_weights(const std::string& path, const std::vector<double>& a, const std::vector<double>& c)
{
    if (!path.empty()) return cube_weights2_from_json<double>(read_json_file(path));
    if (a.size() != 3 || c.size() != 3) throw usage_error("--a and --c take three values each");
    CubeWeights2<double> w;
    for (int p = 0; p < 3; ++p) w.w[p] = {Cx(a[p]), Cx(c[p])};
    return w;
}

int run_startriangle(const std::string& what, const std::string& weights, const std::vector<double>& a,
                     const std::vector<double>& c, int sign, int draws, const std::vector<double>& phis,
                     const Options& o)
{
    json r{{"command", what}};
    bool pass = true;
    if (what == "apply" || what == "invert") {
        const auto w = read_weights(weights, a, c);
        r["input"] = to_json(w);
        if (what == "apply") {
            const auto t = two_field_F(w);
            r["output"] = to_json(t);
            const Cx d2 = two_field_D2(t);
            r["D2"] = {{"re", d2.real()}, {"im", d2.imag()}};
        } else {
            r["sign"] = sign;
            r["output"] = to_json(two_field_G(w, sign));
        }
    } else if (what == "consistency4d") {
        const double tol = o.tolerance(1e-9);
        json reports = json::array();
        for (std::uint32_t k = 0; k < 2; ++k) {
            auto rng = suite_rng(o.seed, k);
            const Color base = k == 0 ? Color::black : Color::white;
            double worst = 0;
            int skipped = 0;
            for (int s = 0; s < draws; ++s) {
                FourCubeWeights<double> init;
                for (auto& x : init) x = {random_complex(rng, 0.5, 2.0), random_complex(rng, 0.0, 2.0)};
                try {
                    if (base == Color::black) {
                        worst = std::max(worst, check_4d_consistency(init, base).max_discrepancy);
                    } else {
                        for (int mask = 0; mask < 16; ++mask) {
                            std::array<int, 4> signs;
                            for (int l = 0; l < 4; ++l) signs[l] = (mask >> l) & 1 ? -1 : 1;
                            worst = std::max(worst, check_4d_consistency(init, base, signs).max_discrepancy);
                        }
                    }
                } catch (const inconclusive_error&) {
                    ++skipped;
                }
            }
            auto rep = consistency_report(k == 0 ? "black_base" : "white_base_all_signs", draws - skipped, worst);
            pass = pass && worst < tol;
            reports.push_back(std::move(rep));
        }
        r.update({{"seed", o.seed}, {"tol", tol}, {"reports", reports}});
    } else {
        const double tol = o.tolerance(1e-10);
        if (phis.size() != 3) throw usage_error("--phis takes three angles");
        const auto fam = family<double>(o);
        const auto [w, flipped] = elliptic_special_solution<CoefficientFamily<double>>({phis[0], phis[1], phis[2]}, fam);
        const auto image = two_field_F(w);
        double gap = 0;
        for (int p = 0; p < 3; ++p) {
            gap = std::max({gap, std::abs(image.a(p) - flipped.a(p)), std::abs(image.c(p) - flipped.c(p))});
        }
        r.update({{"regime", o.regime}, {"phis", phis}, {"weights", to_json(w)}, {"image", to_json(image)},
                  {"expected", to_json(flipped)}, {"max_gap", gap}});
        pass = gap < tol;
    }
    r["pass"] = pass;
    print(r);
    if (!o.out.empty()) write_text(o.out, r.dump(2) + "\n");
    return pass ? exit_pass : exit_fail;
}

bool extended_precision()
{
    const char* env = std::getenv("QUADLIN_PRECISION");
    const std::string p = env ? env : "double";
    if (p == "double") return false;
    if (p == "extended") return true;
    throw usage_error("QUADLIN_PRECISION must be 'double' or 'extended'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Integrable linear quad-equations: identities, graphs, solvers, star-triangle maps"};
    app.require_subcommand(1);
    Options o;

    auto* ident = app.add_subcommand("identities", "run the theta and coefficient identity suites");
    std::string suite = "all";
    ident->add_option("suite", suite, "theta | functional | lemmas | all")
        ->capture_default_str()
        ->check(CLI::IsMember({"theta", "functional", "lemmas", "all"}));
    add_common(ident, o);

    auto* graph = app.add_subcommand("graph", "generate, flip or validate quad-graphs");
    std::string graph_action, shape = "square", plaquettes, svg;
    int shape_n = 8, vertex = -1;
    std::vector<double> dirs{0, 2 * pi / 3, 4 * pi / 3};
    GraphSource src;
    graph->add_option("action", graph_action, "gen | flip | validate")
        ->required()
        ->check(CLI::IsMember({"gen", "flip", "validate"}));
    graph->add_option("shape", shape, "square | corner | stepped (gen)")
        ->capture_default_str()
        ->check(CLI::IsMember({"square", "corner", "stepped"}));
    graph->add_option("size", shape_n, "grid size (gen square)")->capture_default_str()->check(CLI::PositiveNumber);
    graph->add_option("--dirs", dirs, "edge directions of the lattice steps")->delimiter(',');
    graph->add_option("--plaquettes", plaquettes, "JSON list of {base, i, j} (gen stepped)");
    graph->add_option("--vertex", vertex, "vertex to flip");
    graph->add_option("--svg", svg, "SVG overlay of the flip");
    add_graph_source(graph, src);
    add_common(graph, o);

    auto* solve = app.add_subcommand("solve", "quad propagation, Dirichlet problem, discrete exponential");
    std::string solve_action, data, matrix;
    double lambda = 0.9;
    std::optional<int> base;
    solve->add_option("action", solve_action, "quad | laplace | exp")
        ->required()
        ->check(CLI::IsMember({"quad", "laplace", "exp"}));
    solve->add_option("--lambda", lambda, "spectral parameter of the exponential")->capture_default_str();
    solve->add_option("--base", base, "black base vertex of the exponential");
    solve->add_option("--data", data, "Cauchy data (quad) or boundary values (laplace), JSON or CSV");
    solve->add_option("--matrix", matrix, "write the Laplace system to PREFIX.mtx and PREFIX.json");
    add_graph_source(solve, src);
    add_common(solve, o);

    auto* st = app.add_subcommand("startriangle", "two-field star-triangle map and its checks");
    std::string st_action, weights;
    std::vector<double> wa{1, 1, 1}, wc{1, 1, 1}, phis{2 * pi / 3, 2 * pi / 3, 2 * pi / 3};
    int sign = 1, draws = 100;
    st->add_option("action", st_action, "apply | invert | consistency4d | special")
        ->required()
        ->check(CLI::IsMember({"apply", "invert", "consistency4d", "special"}));
    st->add_option("--weights", weights, "JSON array of three {a, c} complex weights");
    st->add_option("--a", wa, "real a-weights")->delimiter(',');
    st->add_option("--c", wc, "real c-weights")->delimiter(',');
    st->add_option("--sign", sign, "square-root sign of the inverse map")->check(CLI::IsMember({-1, 1}));
    st->add_option("--draws", draws, "random 4D cubes")->capture_default_str()->check(CLI::PositiveNumber);
    st->add_option("--phis", phis, "black angles summing to 2 pi")->delimiter(',');
    add_common(st, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }

    try {
        if (ident->parsed()) {
            return extended_precision() ? run_identities<long double>(suite, o) : run_identities<double>(suite, o);
        }
        if (graph->parsed()) {
            if (graph_action == "gen") return run_graph_gen(shape, shape_n, src, dirs, plaquettes, o);
            if (graph_action == "flip") {
                if (vertex < 0) throw usage_error("flip needs --vertex");
                return run_graph_flip(src, vertex, svg, o);
            }
            return run_graph_validate(src);
        }
        if (solve->parsed()) return run_solve(solve_action, src, lambda, base, data, matrix, o);
        return run_startriangle(st_action, weights, wa, wc, sign, draws, phis, o);
    } catch (const usage_error& e) {
        std::cerr << "quadlin: " << e.what() << '\n';
        return exit_usage;
    } catch (const regime_error& e) {
        std::cerr << "quadlin: " << e.what() << '\n';
        return exit_usage;
    } catch (const domain_error& e) {
        std::cerr << "quadlin: " << e.what() << '\n';
        return exit_usage;
    } catch (const quadlin::error& e) {
        std::cerr << "quadlin: " << e.what() << '\n';
        return exit_fail;
    }
}
