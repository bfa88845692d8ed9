#include <doctest.h>

#include <smds/error.hpp>
#include <smds/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace smds;
using std::numbers::pi;

TEST_CASE("distortion examples") {
    const Embedding oct{Geometry::spherical(),
                        {{pi / 2, 0}, {-pi / 2, 0}, {0, 0}, {0, pi / 2}, {0, pi}, {0, 3 * pi / 2}},
                        {}};
    // Octahedron targets scaled by pi / diameter.
    const DistanceMatrix targets = apsp(generate_polytope(Polytope::octahedron)).scaled(pi / 2);
    // The generator's vertex order may differ from the placement; match by
    // mapping each vertex to the antipode of its non-neighbor.
    const Graph g = generate_polytope(Polytope::octahedron);
    std::vector<bool> used(6, false);
    // Pairs of non-adjacent vertices go to antipodal slots (0,1), (2,4), (3,5).
    const std::size_t slots[3][2] = {{0, 1}, {2, 4}, {3, 5}};
    Embedding placed{Geometry::spherical(), std::vector<Coord>(6), {}};
    int pair = 0;
    for (Vertex u = 0; u < 6; ++u) {
        if (used[u]) continue;
        Vertex v = 0;
        for (Vertex w = 0; w < 6; ++w)
            if (w != u && !g.has_edge(u, w)) v = w;
        used[u] = used[v] = true;
        placed.coords[u] = oct.coords[slots[pair][0]];
        placed.coords[v] = oct.coords[slots[pair][1]];
        ++pair;
    }
    CHECK(distortion(placed, targets) == doctest::Approx(0.0).scale(1.0));

    const Embedding two{Geometry::spherical(), {{0, 0}, {0, pi / 2}}, {}};
    DistanceMatrix dm(2);
    dm.set(0, 1, pi);
    CHECK(distortion(two, dm) == doctest::Approx(0.5));
}

TEST_CASE("distortion is invariant under relabeling and isometries") {
    std::mt19937_64 rng(5);
    const Embedding e = sample_uniform(Geometry::spherical(), 9, 1.0, 6);
    const DistanceMatrix dm = apsp(generate_cycle(9)).scaled(0.6);
    const double base = distortion(e, dm);

    std::vector<std::size_t> perm(9);
    for (std::size_t i = 0; i < 9; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Embedding pe{e.geometry, std::vector<Coord>(9), {}};
    DistanceMatrix pdm(9);
    for (std::size_t i = 0; i < 9; ++i) {
        pe.coords[perm[i]] = e.coords[i];
        for (std::size_t j = i + 1; j < 9; ++j) pdm.set(perm[i], perm[j], dm(i, j));
    }
    CHECK(distortion(pe, pdm) == doctest::Approx(base).epsilon(1e-12));

    Embedding rot = e;
    for (Coord& c : rot.coords) c[1] = std::fmod(c[1] + 1.234, 2 * pi);
    CHECK(std::abs(distortion(rot, dm) - base) < 1e-12);
}

TEST_CASE("distortion is zero exactly on realized targets") {
    for (GeometryKind kind : all_geometries) {
        const Embedding e = sample_uniform({kind, 1.0}, 12, 2.0, 8);
        CHECK(distortion(e, pairwise_distances(e)) < 1e-14);
    }
}

TEST_CASE("distortion errors") {
    const Embedding two{Geometry::euclidean(), {{0, 0}, {1, 0}}, {}};
    CHECK_THROWS_AS((void)distortion(two, DistanceMatrix(2)), InputError);
    CHECK_THROWS_AS((void)distortion(two, DistanceMatrix(3)), InputError);
    const Embedding one{Geometry::euclidean(), {{0, 0}}, {}};
    CHECK_THROWS_AS((void)distortion(one, DistanceMatrix(1)), InputError);
}

TEST_CASE("evaluate scores against the dilated targets") {
    const DistanceMatrix dm = apsp(generate_cycle(12));
    LayoutConfig cfg;
    cfg.dilation = DilationMode::heuristic;
    const LayoutResult r = sgd_layout(dm, cfg);
    const QualityReport q = evaluate(r, dm, cfg.weights);
    CHECK(q.dilation == doctest::Approx(pi / 6));
    CHECK(q.distortion == doctest::Approx(distortion(r.embedding, dm.scaled(pi / 6))));
    CHECK(q.stress == doctest::Approx(r.trace.final_stress()).epsilon(1e-9));
    CHECK(q.n == 12);
    CHECK(q.geometry == GeometryKind::spherical);
}

TEST_CASE("compare_geometries") {
    const DistanceMatrix dm = apsp(generate_polytope(Polytope::icosahedron));
    std::vector<LayoutConfig> cfgs(3);
    for (std::size_t k = 0; k < 3; ++k) cfgs[k].geometry = {all_geometries[k], 1.0};
    cfgs[0].dilation = DilationMode::heuristic;

    const auto one = compare_geometries(dm, std::span(cfgs).first(1), 1);
    REQUIRE(one.size() == 1);
    const QualityReport single = evaluate(sgd_layout(dm, cfgs[0]), dm, cfgs[0].weights);
    CHECK(one[0].mean_distortion == single.distortion);
    CHECK(one[0].mean_stress == single.stress);
    CHECK(one[0].sd_distortion == 0.0);

    const auto all = compare_geometries(dm, cfgs, 5);
    REQUIRE(all.size() == 3);
    for (const auto& s : all) CHECK(s.runs.size() == 5);
    CHECK(all[0].mean_distortion < all[1].mean_distortion);
    CHECK(all[0].mean_distortion < all[2].mean_distortion);

    CHECK_THROWS_AS((void)compare_geometries(dm, cfgs, 0), InputError);
}
