#include <doctest.h>

#include <smds/embedder.hpp>
#include <smds/error.hpp>
#include <smds/metrics.hpp>
#include <smds/schedule.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace smds;
using std::numbers::pi;

namespace {

DistanceMatrix two_points(double d) {
    DistanceMatrix dm(2);
    dm.set(0, 1, d);
    return dm;
}

// Octahedron on the unit sphere: poles plus four equatorial points.
Embedding octahedron_placement() {
    return {Geometry::spherical(), {{pi / 2, 0}, {-pi / 2, 0}, {0, 0}, {0, pi / 2}, {0, pi}, {0, 3 * pi / 2}}, {}};
}

// The same placement in g's vertex order: each vertex and its one
// non-neighbor take an antipodal pair of slots.
Embedding octahedron_placement(const Graph& g) {
    const Embedding slots = octahedron_placement();
    const std::size_t pairs[3][2] = {{0, 1}, {2, 4}, {3, 5}};
    Embedding placed{Geometry::spherical(), std::vector<Coord>(6), {}};
    std::vector<bool> used(6, false);
    int k = 0;
    for (Vertex u = 0; u < 6; ++u) {
        if (used[u]) continue;
        Vertex v = u;
        for (Vertex w = 0; w < 6; ++w)
            if (w != u && !g.has_edge(u, w)) v = w;
        used[u] = used[v] = true;
        placed.coords[u] = slots.coords[pairs[k][0]];
        placed.coords[v] = slots.coords[pairs[k][1]];
        ++k;
    }
    return placed;
}

DistanceMatrix octahedron_targets(double scale = 1.0) {
    return pairwise_distances(octahedron_placement()).scaled(scale);
}

Embedding random_embedding(GeometryKind kind, std::size_t n, std::uint64_t seed, double radius = 1.0) {
    Embedding e = sample_uniform({kind, 1.0}, n, 2.0, seed);
    e.geometry.radius = radius;
    return e;
}

DistanceMatrix random_targets(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.3, 2.5);
    DistanceMatrix dm(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dm.set(i, j, u(rng));
    return dm;
}

// d delta / d coords of point p toward q, with the embedding's radius.
Coord pair_distance_gradient(const Embedding& e, std::size_t p, std::size_t q) {
    switch (e.geometry.kind) {
    case GeometryKind::spherical: {
        const auto g = spherical_distance_gradient(e.spherical(p), e.spherical(q));
        return {e.geometry.radius * g.dphi, e.geometry.radius * g.dlambda};
    }
    case GeometryKind::euclidean: {
        const auto g = euclidean_distance_gradient(e.euclidean(p), e.euclidean(q));
        return {g.dx, g.dy};
    }
    case GeometryKind::hyperbolic: {
        const auto g = hyperbolic_distance_gradient(e.hyperbolic(p), e.hyperbolic(q));
        return {g.dr, g.dtheta};
    }
    }
    return {};
}

} // namespace

TEST_CASE("schedule examples") {
    const Schedule fixed{ScheduleKind::fixed};
    for (std::size_t t : {0u, 1u, 50u, 999u}) CHECK(schedule_eta(fixed, 0.1, t) == 0.05);
    CHECK(schedule_eta({ScheduleKind::frac_t}, 0.1, 0) == doctest::Approx(0.1));
    CHECK(schedule_eta({ScheduleKind::frac_t}, 0.1, 9) == doctest::Approx(0.01));
    CHECK(schedule_eta({ScheduleKind::frac_sqrt_t}, 0.1, 3) == doctest::Approx(0.05));

    const Schedule piecewise{};
    double prev = schedule_eta(piecewise, 0.1, 0);
    CHECK(prev == doctest::Approx(0.1));
    bool reached_tail = false;
    for (std::size_t t = 1; t <= 1000; ++t) {
        const double eta = schedule_eta(piecewise, 0.1, t);
        CHECK(eta <= prev);
        reached_tail |= eta < piecewise.switch_threshold;
        prev = eta;
    }
    CHECK(reached_tail);
    // The tail decays like 1/t.
    const double a = schedule_eta(piecewise, 0.1, 500), b = schedule_eta(piecewise, 0.1, 1000);
    CHECK(a / b == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("every schedule respects the cap") {
    for (ScheduleKind kind :
         {ScheduleKind::fixed, ScheduleKind::piecewise, ScheduleKind::frac_t, ScheduleKind::frac_sqrt_t}) {
        for (double cap : {0.01, 0.04, 0.1, 1.0})
            for (std::size_t t = 0; t < 400; ++t) CHECK(schedule_eta({kind}, cap, t) <= cap);
        CHECK(parse_schedule_kind(to_string(kind)) == kind);
    }
    CHECK(parse_schedule_kind("frac_sqrt_t") == ScheduleKind::frac_sqrt_t);
    CHECK_THROWS_AS((void)parse_schedule_kind("cosine"), InputError);
}

TEST_CASE("stress examples") {
    const Embedding ant{Geometry::spherical(), {{0, 0}, {0, pi}}, {}};
    CHECK(stress(ant, two_points(pi), WeightPolicy::inverse_square) == doctest::Approx(0.0));
    // (2/pi)^2 (pi - pi/2)^2 = 1
    CHECK(stress(ant, two_points(pi / 2), WeightPolicy::inverse_square) == doctest::Approx(1.0));
    CHECK(stress(ant, two_points(pi / 2), WeightPolicy::binary) == doctest::Approx(pi * pi / 4));

    const Embedding e = random_embedding(GeometryKind::euclidean, 6, 3);
    const DistanceMatrix dm = random_targets(6, 4);
    const Embedding sub{e.geometry, {e.coords.begin(), e.coords.begin() + 4}, {}};
    DistanceMatrix dsub(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) dsub.set(i, j, dm(i, j));
    CHECK(stress(e, dm, WeightPolicy::binary) >= stress(sub, dsub, WeightPolicy::binary));

    CHECK_THROWS_AS((void)stress(e, dsub, WeightPolicy::binary), InputError);
}

TEST_CASE("stress uses the embedding's own metric") {
    const DistanceMatrix dm = random_targets(7, 5);
    for (GeometryKind kind : all_geometries) {
        Embedding e = random_embedding(kind, 7, 6, kind == GeometryKind::spherical ? 1.7 : 1.0);
        double want = 0.0;
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = i + 1; j < 7; ++j) {
                const double r = e.distance(i, j) - dm(i, j);
                want += r * r / (dm(i, j) * dm(i, j));
            }
        CHECK(stress(e, dm, WeightPolicy::inverse_square) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("heuristic dilation") {
    DistanceMatrix ten(3);
    ten.set(0, 1, 10);
    ten.set(0, 2, 4);
    ten.set(1, 2, 7);
    CHECK(heuristic_dilation_factor(ten) == doctest::Approx(pi / 10));
    const DistanceMatrix d = dilate_heuristic(ten);
    CHECK(d.max_value() == pi);
    CHECK(d.dilation() == doctest::Approx(pi / 10));

    CHECK(heuristic_dilation_factor(two_points(pi)) == 1.0);

    DistanceMatrix p3(3);
    p3.set(0, 1, 1);
    p3.set(1, 2, 1);
    p3.set(0, 2, 2);
    const DistanceMatrix s = dilate_heuristic(p3);
    CHECK(s(0, 1) == doctest::Approx(pi / 2));
    CHECK(s(1, 2) == doctest::Approx(pi / 2));
    CHECK(s(0, 2) == pi);

    CHECK_THROWS_AS((void)heuristic_dilation_factor(DistanceMatrix(3)), InputError);
}

TEST_CASE("full gradient equals the sum of pair gradients") {
    for (GeometryKind kind : all_geometries) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const std::size_t n = 6;
            const Embedding e = random_embedding(kind, n, 100 + seed, kind == GeometryKind::spherical ? 1.3 : 1.0);
            const DistanceMatrix dm = random_targets(n, 200 + seed);
            const StressGradient g = stress_gradient(e, dm, WeightPolicy::inverse_square);
            std::vector<Coord> want(n, Coord{0, 0});
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const double w = 1.0 / (dm(i, j) * dm(i, j));
                    const double coef = 2.0 * w * (e.distance(i, j) - dm(i, j));
                    const Coord dg = pair_distance_gradient(e, i, j);
                    want[i][0] += coef * dg[0];
                    want[i][1] += coef * dg[1];
                }
            for (std::size_t i = 0; i < n; ++i)
                for (int c = 0; c < 2; ++c)
                    CHECK(g.coords[i][c] ==
                          doctest::Approx(want[i][c]).epsilon(1e-10).scale(1e-10 * std::abs(want[i][c]) + 1e-12));
        }
    }
}

TEST_CASE("full gradient matches finite differences of stress") {
    const double h = 1e-6;
    for (GeometryKind kind : all_geometries) {
        for (WeightPolicy weights : {WeightPolicy::inverse_square, WeightPolicy::binary}) {
            Embedding e = random_embedding(kind, 8, 300, kind == GeometryKind::spherical ? 1.4 : 1.0);
            const DistanceMatrix dm = random_targets(8, 301);
            const StressGradient g = stress_gradient(e, dm, weights);
            for (std::size_t i = 0; i < 8; ++i)
                for (int c = 0; c < 2; ++c) {
                    Embedding plus = e, minus = e;
                    plus.coords[i][c] += h;
                    minus.coords[i][c] -= h;
                    const double fd = (stress(plus, dm, weights) - stress(minus, dm, weights)) / (2 * h);
                    CHECK(std::abs(g.coords[i][c] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
                }
            if (kind == GeometryKind::spherical) {
                Embedding plus = e, minus = e;
                plus.geometry.radius += h;
                minus.geometry.radius -= h;
                const double fd = (stress(plus, dm, weights) - stress(minus, dm, weights)) / (2 * h);
                CHECK(std::abs(g.radius - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST_CASE("sgd on two vertices finds an antipodal pair") {
    LayoutConfig cfg;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = seed;
        // The default stopping rule halts once the stress change is below
        // 1e-7, a few 1e-3 rad short of the antipode.
        cfg.convergence_eps = 1e-7;
        CHECK(std::abs(sgd_layout(two_points(pi), cfg).embedding.distance(0, 1) - pi) < 5e-3);
        cfg.convergence_eps = 1e-10;
        CHECK(std::abs(sgd_layout(two_points(pi), cfg).embedding.distance(0, 1) - pi) < 1e-3);
    }
}

TEST_CASE("sgd recovers exactly realizable layouts") {
    LayoutConfig cfg;
    cfg.dilation = DilationMode::heuristic;
    // Closed-form oracle: the octahedral placement fits the dilated targets.
    const Graph octahedron = generate_polytope(Polytope::octahedron);
    CHECK(distortion(octahedron_placement(octahedron), dilate_heuristic(apsp(octahedron))) < 1e-12);

    for (const Graph& g : {generate_polytope(Polytope::octahedron), generate_cycle(10)}) {
        const DistanceMatrix dm = apsp(g);
        int good = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            cfg.seed = seed;
            const LayoutResult r = sgd_layout(dm, cfg);
            good += evaluate(r, dm, cfg.weights).distortion < 0.02;
        }
        CHECK(good >= 4);
    }
}

TEST_CASE("sgd is reproducible and never worse than its start") {
    const DistanceMatrix dm = apsp(subdivide(generate_polytope(Polytope::cube), 1));
    for (GeometryKind kind : all_geometries) {
        LayoutConfig cfg;
        cfg.geometry = {kind, 1.0};
        cfg.seed = 42;
        cfg.dilation = kind == GeometryKind::spherical ? DilationMode::heuristic : DilationMode::none;
        const LayoutResult a = sgd_layout(dm, cfg);
        const LayoutResult b = sgd_layout(dm, cfg);
        CHECK(a.embedding.coords == b.embedding.coords);
        CHECK(a.trace.stress == b.trace.stress);
        CHECK(a.trace.final_stress() <= a.trace.initial_stress);
        CHECK(a.trace.stress.size() == a.trace.epochs);
        for (double s : a.trace.stress) {
            CHECK(std::isfinite(s));
            CHECK(s >= 0.0);
        }
        if (a.trace.terminated_by == Termination::converged) {
            const auto& s = a.trace.stress;
            REQUIRE(s.size() >= 2);
            CHECK(std::abs(s[s.size() - 1] - s[s.size() - 2]) < cfg.convergence_eps);
        } else {
            CHECK(a.trace.epochs == cfg.max_epochs);
        }
        cfg.seed = 43;
        CHECK(sgd_layout(dm, cfg).embedding.coords != a.embedding.coords);
    }
}

TEST_CASE("dilated spherical layouts stay within pi R") {
    const DistanceMatrix dm = apsp(generate_grid(6, 6));
    LayoutConfig cfg;
    cfg.dilation = DilationMode::heuristic;
    const LayoutResult r = sgd_layout(dm, cfg);
    CHECK(r.applied_dilation == doctest::Approx(pi / 10));
    for (std::size_t i = 0; i < dm.size(); ++i)
        for (std::size_t j = 0; j < dm.size(); ++j) CHECK(r.embedding.distance(i, j) <= pi + 1e-12);
    for (const Coord& c : r.embedding.coords) {
        CHECK(std::abs(c[0]) <= pi / 2);
        CHECK(c[1] >= 0.0);
        CHECK(c[1] < 2 * pi);
    }
}

TEST_CASE("gd on two vertices converges to an antipodal pair") {
    LayoutConfig cfg;
    const LayoutResult r = gd_layout(two_points(pi), cfg);
    CHECK(r.embedding.distance(0, 1) == doctest::Approx(pi).epsilon(1e-3));
}

TEST_CASE("gd with a small fixed step never increases stress") {
    LayoutConfig cfg;
    cfg.schedule = {ScheduleKind::fixed, 0.001};
    cfg.max_epochs = 200;
    cfg.convergence_eps = 1e-12;
    cfg.dilation = DilationMode::heuristic;
    const LayoutResult r = gd_layout(apsp(generate_cycle(10)), cfg);
    double prev = r.trace.initial_stress;
    for (double s : r.trace.stress) {
        CHECK(s <= prev + 1e-12);
        prev = s;
    }
    CHECK(r.trace.final_stress() < r.trace.initial_stress);
}

TEST_CASE("radius fitting") {
    LayoutConfig cfg;
    cfg.dilation = DilationMode::optimize_radius;
    const LayoutResult one = sgd_layout_with_radius(octahedron_targets(), cfg);
    CHECK(one.embedding.geometry.radius == doctest::Approx(1.0).epsilon(0.05));
    const LayoutResult two = sgd_layout_with_radius(octahedron_targets(2.0), cfg);
    CHECK(two.embedding.geometry.radius == doctest::Approx(2.0).epsilon(0.05));
    // sgd_layout delegates on optimize_radius.
    CHECK(sgd_layout(octahedron_targets(2.0), cfg).embedding.geometry.radius == two.embedding.geometry.radius);

    const LayoutResult r3 = sgd_layout_with_radius(two_points(3.0), cfg);
    CHECK(stress(r3.embedding, two_points(3.0), cfg.weights) < 1e-6);
    CHECK(r3.embedding.geometry.radius >= 1e-3);

    LayoutConfig flat = cfg;
    flat.geometry = Geometry::euclidean();
    CHECK_THROWS_AS((void)sgd_layout_with_radius(octahedron_targets(), flat), InputError);
    CHECK_THROWS_AS((void)gd_layout(octahedron_targets(), cfg), InputError);
}

TEST_CASE("layout input and config validation") {
    LayoutConfig cfg;
    CHECK_THROWS_AS((void)sgd_layout(DistanceMatrix(1), cfg), InputError);
    DistanceMatrix zero(3);
    zero.set(0, 1, 1);
    zero.set(0, 2, 1);
    CHECK_THROWS_AS((void)sgd_layout(zero, cfg), InputError);
    DistanceMatrix inf = two_points(INFINITY);
    CHECK_THROWS_AS((void)sgd_layout(inf, cfg), InputError);

    LayoutConfig bad = cfg;
    bad.lr_cap = 0;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = cfg;
    bad.convergence_eps = -1;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = cfg;
    bad.max_epochs = 0;
    CHECK_THROWS_AS(bad.validate(), InputError);

    CHECK(parse_weight_policy("binary") == WeightPolicy::binary);
    CHECK(parse_weight_policy(to_string(WeightPolicy::inverse_square)) == WeightPolicy::inverse_square);
    CHECK(parse_dilation_mode("optimize-radius") == DilationMode::optimize_radius);
    CHECK_THROWS_AS((void)parse_dilation_mode("double"), InputError);
}

TEST_CASE("coincident starting points are separated") {
    // All targets equal on a tiny graph; the random start may place points
    // close together, and the optimizer must not produce NaN.
    const DistanceMatrix dm = apsp(generate_polytope(Polytope::tetrahedron));
    for (GeometryKind kind : all_geometries) {
        LayoutConfig cfg;
        cfg.geometry = {kind, 1.0};
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            cfg.seed = seed;
            const LayoutResult r = sgd_layout(dm, cfg);
            for (const Coord& c : r.embedding.coords) CHECK((std::isfinite(c[0]) && std::isfinite(c[1])));
        }
    }
}
