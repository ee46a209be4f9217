#include <doctest.h>

#include <random>

#include "nnph/distances.hpp"
#include "nnph/error.hpp"
#include "nnph/pipeline.hpp"
#include "oracles.hpp"

using namespace nnph;

namespace {

CleanDiagram random_clean(std::mt19937_64& rng, std::size_t degrees = 2) {
    CleanDiagram d;
    for (std::size_t k = 0; k < degrees; ++k) d.degrees.push_back(oracle::random_diagram(rng, 8));
    return d;
}

VectorParams params(VectorKind kind) {
    VectorParams p;
    p.kind = kind;
    p.grid = {0.0, 1.0, 40};
    p.landscape_layers = 4;
    return p;
}

}  // namespace

TEST_CASE("vector_distance basics") {
    std::mt19937_64 rng(10);
    for (auto kind : {VectorKind::Landscape, VectorKind::Silhouette, VectorKind::Heat}) {
        CAPTURE(to_string(kind));
        const auto d = random_clean(rng);
        const auto a = vectorize(d, params(kind));
        CHECK(vector_distance(a, a) == 0.0);

        auto other = params(kind);
        other.grid.resolution = 41;
        CHECK_THROWS_AS(vector_distance(a, vectorize(d, other)), InputError);
        const auto wrong_kind = vectorize(d, params(kind == VectorKind::Heat ? VectorKind::Silhouette : VectorKind::Heat));
        CHECK_THROWS_AS(vector_distance(a, wrong_kind), InputError);
    }
}

TEST_CASE("vector_distance is a pseudometric on random triples") {
    std::mt19937_64 rng(11);
    for (auto kind : {VectorKind::Landscape, VectorKind::Silhouette, VectorKind::Heat}) {
        for (double p : {1.0, 2.0, 3.0}) {
            for (int trial = 0; trial < 100; ++trial) {
                const auto a = vectorize(random_clean(rng), params(kind));
                const auto b = vectorize(random_clean(rng), params(kind));
                const auto c = vectorize(random_clean(rng), params(kind));
                const double ab = vector_distance(a, b, p), bc = vector_distance(b, c, p), ac = vector_distance(a, c, p);
                CHECK(ab >= 0.0);
                CHECK(ab == doctest::Approx(vector_distance(b, a, p)).epsilon(1e-12));
                CHECK(ac <= ab + bc + 1e-9);
            }
        }
    }
}

TEST_CASE("landscape vector distance delegates to landscape_distance per degree") {
    std::mt19937_64 rng(12);
    const auto p = params(VectorKind::Landscape);
    const auto d1 = random_clean(rng), d2 = random_clean(rng);
    double expected = 0.0;
    for (std::size_t k = 0; k < 2; ++k)
        expected += landscape_distance(landscape(d1.degree(k), p.landscape_layers, p.grid),
                                       landscape(d2.degree(k), p.landscape_layers, p.grid));
    CHECK(vector_distance(vectorize(d1, p), vectorize(d2, p)) == doctest::Approx(expected).epsilon(1e-14));

    const std::vector<double> only_h1{0.0, 1.0};
    const double h1 = landscape_distance(landscape(d1.degree(1), p.landscape_layers, p.grid),
                                         landscape(d2.degree(1), p.landscape_layers, p.grid));
    CHECK(vector_distance(vectorize(d1, p), vectorize(d2, p), 2.0, only_h1) == doctest::Approx(h1));
}

TEST_CASE("heat distance is continuous in the diagram points") {
    CleanDiagram a, b;
    a.degrees = {{{0.2, 0.6}, {0.1, 0.4}}};
    b.degrees = {{{0.2 + 1e-4, 0.6}, {0.1, 0.4}}};
    const auto p = params(VectorKind::Heat);
    CHECK(vector_distance(vectorize(a, p), vectorize(b, p)) < 1e-2);
}

TEST_CASE("baseline_norm_distance") {
    Matrix a(2, 2), b(2, 2);
    CHECK(baseline_norm_distance(a, b, Measure::Norm1) == 0.0);
    a(0, 0) = 1.0;
    a(0, 1) = -1.0;
    CHECK(baseline_norm_distance(a, b, Measure::Norm1) == 2.0);
    CHECK(baseline_norm_distance(a, b, Measure::Frobenius) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(baseline_norm_distance(a, Matrix(3, 2), Measure::Norm1), InputError);
    CHECK_THROWS_AS(baseline_norm_distance(a, b, Measure::Heat), InputError);
}

TEST_CASE("permuted networks: baselines see a difference, diagrams do not") {
    std::mt19937_64 rng(13);
    const std::vector<std::size_t> widths{6, 5, 3};
    const auto g = build_graph(oracle::random_mlp(rng, widths));
    const auto h = permute_neurons(g, oracle::random_layer_perms(rng, widths));
    CHECK(baseline_norm_distance(g.adjacency(), h.adjacency(), Measure::Norm1) > 0.1);
    PipelineConfig cfg;
    const auto dg = clean(graph_persistence(g, cfg), cfg);
    const auto dh = clean(graph_persistence(h, cfg), cfg);
    for (auto kind : {VectorKind::Landscape, VectorKind::Silhouette, VectorKind::Heat})
        CHECK(vector_distance(vectorize(dg, cfg.vector_params(kind)), vectorize(dh, cfg.vector_params(kind))) <= 1e-9);
}

TEST_CASE("assemble_matrix") {
    std::mt19937_64 rng(14);
    const auto p = params(VectorKind::Silhouette);

    SUBCASE("single experiment with identical runs") {
        const auto v = vectorize(random_clean(rng), p);
        const auto m = assemble_matrix({"base"}, {{v, v, v}}, Measure::Silhouette);
        CHECK(m.mean.rows == 1);
        CHECK(m.mean(0, 0) == 0.0);
        CHECK(m.std(0, 0) == 0.0);
        CHECK(assemble_matrix({"one"}, {{v}}, Measure::Silhouette).mean(0, 0) == 0.0);
    }
    SUBCASE("19 experiments with 5 runs") {
        std::vector<std::vector<PersistenceVectorization>> runs(19);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < 19; ++i) {
            labels.push_back("exp" + std::to_string(i + 1));
            for (int r = 0; r < 5; ++r) runs[i].push_back(vectorize(random_clean(rng), p));
        }
        const auto m = assemble_matrix(labels, runs, Measure::Silhouette, {2.0, {}, 3});
        REQUIRE(m.mean.rows == 19);
        REQUIRE(m.mean.cols == 19);
        CHECK(m.std.rows == 19);
        for (std::size_t i = 0; i < 19; ++i)
            for (std::size_t j = 0; j < 19; ++j) {
                CHECK(m.mean(i, j) == m.mean(j, i));
                CHECK(m.std(i, j) >= 0.0);
            }
        // thread count does not change the numbers
        const auto serial = assemble_matrix(labels, runs, Measure::Silhouette);
        CHECK(serial.mean.data == m.mean.data);
        CHECK(serial.std.data == m.std.data);

        // reordering runs within an experiment
        auto shuffled = runs;
        for (auto& r : shuffled) std::reverse(r.begin(), r.end());
        const auto re = assemble_matrix(labels, shuffled, Measure::Silhouette);
        for (std::size_t i = 0; i < m.mean.data.size(); ++i) {
            CHECK(re.mean.data[i] == doctest::Approx(m.mean.data[i]).epsilon(1e-12));
            CHECK(re.std.data[i] == doctest::Approx(m.std.data[i]).epsilon(1e-9));
        }
    }
    SUBCASE("mean and std over cross-run pairs") {
        const auto a = vectorize(random_clean(rng), p), b = vectorize(random_clean(rng), p);
        const auto c = vectorize(random_clean(rng), p);
        const auto m = assemble_matrix({"x", "y"}, {{a, b}, {c}}, Measure::Silhouette);
        const double ac = vector_distance(a, c), bc = vector_distance(b, c);
        CHECK(m.mean(0, 1) == doctest::Approx((ac + bc) / 2.0));
        CHECK(m.std(0, 1) == doctest::Approx(std::abs(ac - bc) / 2.0));
        CHECK(m.mean(0, 0) == doctest::Approx(vector_distance(a, b)));
    }
    SUBCASE("errors") {
        const auto v = vectorize(random_clean(rng), p);
        auto q = p;
        q.silhouette_power = 2.0;
        const auto w = vectorize(random_clean(rng), q);
        CHECK_THROWS_AS(assemble_matrix({"a", "b"}, {{v}, {w}}, Measure::Silhouette), InputError);
        CHECK_THROWS_AS(assemble_matrix({"a"}, {{}}, Measure::Silhouette), InputError);
        CHECK_THROWS_AS(assemble_matrix({"a"}, {{v}}, Measure::Heat), InputError);
        CHECK_THROWS_AS(assemble_matrix({"a"}, {{v}}, Measure::Norm1), InputError);
    }
}

TEST_CASE("assemble_baseline_matrix") {
    Matrix a(2, 2), b(2, 2, 1.0);
    const auto m = assemble_baseline_matrix({"a", "b"}, {{a}, {b}}, Measure::Frobenius);
    CHECK(m.mean(0, 1) == doctest::Approx(2.0));
    CHECK(m.mean(1, 0) == m.mean(0, 1));
    CHECK_THROWS_AS(assemble_baseline_matrix({"a", "b"}, {{a}, {Matrix(3, 3)}}, Measure::Norm1), InputError);
}
