#include "support.hpp"

#include <quadlin/io.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace quadlin;
using namespace testing_support;

TEST(Io, FamilyRoundTrip)
{
    for (const auto& fam : all_families(0.35)) {
        const auto j = to_json(fam);
        EXPECT_EQ(j.at("regime").get<std::string>(), std::string(to_string(fam.regime())));
        const auto back = family_from_json<double>(j);
        EXPECT_EQ(back.regime(), fam.regime());
        EXPECT_DOUBLE_EQ(back.lambda0(), fam.lambda0());
        EXPECT_LT(std::abs(back.f(1.1) - fam.f(1.1)), 1e-15);
        EXPECT_LT(std::abs(back.h(0.4) - fam.h(0.4)), 1e-15);
    }
    EXPECT_THROW(family_from_json<double>(json{{"regime", "square"}, {"tau0", 1.0}}), usage_error);
    EXPECT_THROW(family_from_json<double>(json{{"regime", "rectangular"}}), usage_error);
    EXPECT_THROW(family_from_json<double>(json{{"regime", "generic"}, {"tau0", 1.0}}), regime_error);
}

TEST(Io, GraphRoundTrip)
{
    const auto g = gen_square_grid(4, 0.3, 1.9);
    const auto j = to_json(g);
    EXPECT_EQ(j.at("vertices").size(), 25u);
    EXPECT_EQ(j.at("faces").size(), 16u);
    EXPECT_EQ(j.at("vertices")[0].at("color"), "b");
    const auto back = graph_from_json(json::parse(j.dump()));
    EXPECT_TRUE(same_embedding(back, g));
    EXPECT_TRUE(validate(back).empty());
    for (std::size_t k = 0; k < g.faces().size(); ++k) {
        EXPECT_EQ(back.faces()[k].ids, g.faces()[k].ids);
        EXPECT_TRUE(same_angle(back.faces()[k].alpha, g.faces()[k].alpha));
        EXPECT_TRUE(same_angle(back.faces()[k].beta, g.faces()[k].beta));
    }

    auto broken = j;
    broken["vertices"][0]["color"] = "red";
    EXPECT_THROW(graph_from_json(broken), usage_error);
    broken = j;
    broken.erase("faces");
    EXPECT_THROW(graph_from_json(broken), usage_error);
}

TEST(Io, GraphWithoutEdgesTakesLabelsFromPositions)
{
    const auto g = gen_square_grid(2, 0.3, 1.9);
    auto j = to_json(g);
    j.erase("edges");
    const auto back = graph_from_json(j);
    EXPECT_TRUE(validate(back).empty());
    EXPECT_TRUE(same_embedding(back, g));
}

TEST(Io, FieldJsonAndCsv)
{
    const auto g = gen_square_grid(3, 0.3, 1.9);
    const auto e = discrete_exponential(g, Fam::rectangular(1.0, 0.2), 0.9, 0);
    const auto j = to_json(e);
    EXPECT_EQ(j.at("domain"), "full");
    const auto back = field_from_json<double>(json::parse(j.dump()));
    ASSERT_EQ(back.values.size(), e.values.size());
    for (const auto& [id, v] : e.values) EXPECT_EQ(back.at(id), v);

    std::stringstream csv;
    write_csv(csv, e);
    EXPECT_EQ(csv.str().substr(0, 9), "id,re,im\n");
    const auto from_csv = read_csv<double>(csv);
    for (const auto& [id, v] : e.values) EXPECT_EQ(from_csv.at(id), v);

    std::stringstream bad("id,re,im\n1,2\n");
    EXPECT_THROW(read_csv<double>(bad), usage_error);
    EXPECT_THROW(field_from_json<double>(json{{"domain", "grey"}, {"values", json::array()}}), usage_error);
    EXPECT_THROW(field_from_json<double>(json{{"domain", "full"}}), usage_error);
}

TEST(Io, Svg)
{
    const auto g = gen_square_grid(2, 0, pi / 2);
    std::ostringstream plain;
    write_svg(plain, g);
    const auto s = plain.str();
    EXPECT_EQ(s.rfind("<svg", 0), 0u);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
    auto count = [](const std::string& text, const std::string& what) {
        std::size_t n = 0;
        for (auto p = text.find(what); p != std::string::npos; p = text.find(what, p + 1)) ++n;
        return n;
    };
    EXPECT_EQ(count(s, "<circle"), 9u);
    EXPECT_EQ(count(s, "<line"), 12u);
    EXPECT_EQ(count(s, "fill=\"white\""), 4u);

    const auto e = discrete_exponential(g, Fam::rectangular(1.0), 0.9, 0);
    std::ostringstream colored;
    write_svg(colored, g, &e);
    EXPECT_NE(colored.str().find("rgb("), std::string::npos);

    const auto star = gen_from_stepped_surface({{{0, 0, 0}, 0, 1}, {{0, 0, 0}, 1, 2}, {{0, 0, 0}, 2, 0}},
                                               {0, 2 * pi / 3, 4 * pi / 3});
    const auto flipped = star_triangle_flip(star, *star.vertex_at({0, 0}));
    std::ostringstream overlay;
    write_svg<double>(overlay, star, nullptr, {.overlay = &flipped});
    EXPECT_NE(overlay.str().find("stroke-dasharray"), std::string::npos);
}

TEST(Io, MatrixMarketAndSidecar)
{
    const auto g = gen_square_grid(4, 0, pi / 2);
    const auto fam = Fam::rectangular(1.0);
    const auto L = assemble(g, fam);
    std::ostringstream os;
    write_matrix_market(os, L);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    EXPECT_EQ(header, "%%MatrixMarket matrix coordinate real general");
    int rows, cols, nnz;
    is >> rows >> cols >> nnz;
    EXPECT_EQ(rows, 5);
    EXPECT_EQ(cols, 5);
    // Interior blacks of the 5x5 grid: the centre couples to the four others.
    EXPECT_EQ(nnz, 5 + 8);
    double diag_sum = 0;
    for (int k = 0; k < nnz; ++k) {
        int i, j;
        double v;
        is >> i >> j >> v;
        if (i == j) diag_sum += v;
        else EXPECT_NEAR(v, -fam.f(pi / 2).real(), 1e-15);
    }
    EXPECT_NEAR(diag_sum, 5 * 4 * fam.g0(pi / 2).real(), 1e-13);

    const auto side = matrix_sidecar(L);
    ASSERT_EQ(side.at("rows").size(), 5u);
    EXPECT_EQ(side.at("rows")[0].at("index"), 1);
    EXPECT_EQ(side.at("rows")[0].at("vertex"), L.rows[0].vertex);
    EXPECT_EQ(side.at("boundary").size(), L.boundary.size());
    EXPECT_EQ(side.at("boundary_coupling").size(), 5u * 4 - 8);
}

TEST(Io, WeightsAndReports)
{
    CubeWeights2<double> w;
    w.w = {{{Cx(1, 2), Cx(3, 4)}, {Cx(-1, 0.5), Cx(0, 1)}, {Cx(2), Cx(-3)}}};
    const auto j = to_json(w);
    ASSERT_EQ(j.size(), 3u);
    EXPECT_EQ(j[0].at("a").at("re"), 1.0);
    EXPECT_EQ(j[0].at("c").at("im"), 4.0);
    const auto back = cube_weights2_from_json<double>(json::parse(j.dump()));
    for (int p = 0; p < 3; ++p) {
        EXPECT_EQ(back.a(p), w.a(p));
        EXPECT_EQ(back.c(p), w.c(p));
    }
    EXPECT_THROW(cube_weights2_from_json<double>(json::array()), usage_error);

    CubeWeights3<double> t;
    t.fill({Cx(1), Cx(2), Cx(0.5)});
    EXPECT_EQ(to_json(t)[2].at("b").at("re"), 2.0);

    const auto r = consistency_report("4d-black", 100, 3e-12);
    EXPECT_EQ(r.dump(), R"({"case":"4d-black","draws":100,"max_discrepancy":3e-12})");
    EXPECT_THROW(read_json_file("/nonexistent/quadlin.json"), usage_error);
}
