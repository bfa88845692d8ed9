#include <doctest.h>

#include <smds/error.hpp>
#include <smds/geometry.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace smds;
using std::numbers::pi;

namespace {

using Vec3 = std::array<double, 3>;

Vec3 to_xyz(SphericalPoint p) {
    return {std::cos(p.phi) * std::cos(p.lambda), std::cos(p.phi) * std::sin(p.lambda), std::sin(p.phi)};
}

// Great-circle distance through the chord length, independent of the law of
// cosines used by the library.
double chord_distance(SphericalPoint p, SphericalPoint q) {
    const Vec3 a = to_xyz(p), b = to_xyz(q);
    const double c = std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
    return 2.0 * std::asin(std::min(1.0, c / 2.0));
}

// Hyperboloid model: d = acosh(-<x, y>) with the Minkowski product.
double hyperboloid_distance(HyperbolicPoint p, HyperbolicPoint q) {
    auto lift = [](HyperbolicPoint h) {
        return Vec3{std::cosh(h.r), std::sinh(h.r) * std::cos(h.theta), std::sinh(h.r) * std::sin(h.theta)};
    };
    const Vec3 a = lift(p), b = lift(q);
    return std::acosh(std::max(1.0, a[0] * b[0] - a[1] * b[1] - a[2] * b[2]));
}

// Length of the Poincare-disk image of the straight segment between two
// points, integrated with the disk metric 2|dz| / (1 - |z|^2). For points on
// a diameter this segment is the geodesic.
double disk_segment_length(HyperbolicPoint p, HyperbolicPoint q) {
    auto disk = [](HyperbolicPoint h) {
        const double s = std::tanh(h.r / 2.0);
        return std::array<double, 2>{s * std::cos(h.theta), s * std::sin(h.theta)};
    };
    const auto a = disk(p), b = disk(q);
    const int steps = 200000;
    double total = 0.0;
    const double seg = std::hypot(b[0] - a[0], b[1] - a[1]) / steps;
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) / steps;
        const double x = a[0] + t * (b[0] - a[0]), y = a[1] + t * (b[1] - a[1]);
        total += 2.0 * seg / (1.0 - (x * x + y * y));
    }
    return total;
}

template <class F>
double central(F f, double h = 1e-6) {
    return (f(h) - f(-h)) / (2.0 * h);
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

TEST_CASE("spherical distance examples") {
    CHECK(spherical_distance({0.3, 1.2}, {0.3, 1.2}) == doctest::Approx(0.0));
    CHECK(spherical_distance({0, 0}, {0, pi / 2}) == doctest::Approx(pi / 2));
    CHECK(spherical_distance({pi / 2, 0}, {-pi / 2, 0}, 2.0) == doctest::Approx(2 * pi));
}

TEST_CASE("spherical distance properties") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lat(-pi / 2, pi / 2), lon(0, 2 * pi);
    for (int k = 0; k < 500; ++k) {
        const SphericalPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)}, c{lat(rng), lon(rng)};
        const double ab = spherical_distance(a, b), ba = spherical_distance(b, a);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(ab <= pi);
        CHECK(ab == doctest::Approx(chord_distance(a, b)).epsilon(1e-9));
        CHECK(ab <= spherical_distance(a, c) + spherical_distance(c, b) + 1e-12);
        CHECK(spherical_distance(a, b, 3.5) == doctest::Approx(3.5 * ab).epsilon(1e-14));
    }
}

TEST_CASE("euclidean distance examples") {
    CHECK(euclidean_distance({0, 0}, {3, 4}) == 5.0);
    CHECK(euclidean_distance({1, 1}, {1, 1}) == 0.0);
    CHECK(euclidean_distance({1, 1}, {2, 2}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("hyperbolic distance examples") {
    CHECK(hyperbolic_distance({0.7, 2.0}, {0.7, 2.0}) == doctest::Approx(0.0));
    CHECK(hyperbolic_distance({1.3, 0.4}, {0.0, 5.0}) == doctest::Approx(1.3));

    // (1, 0) and (1, pi) sit on a diameter, so the geodesic runs through the
    // origin and the distance is 1 + 1. The closed form and a numerical
    // integration of the disk metric agree.
    const double d = hyperbolic_distance({1, 0}, {1, pi});
    CHECK(d == doctest::Approx(std::acosh(std::cosh(1) * std::cosh(1) + std::sinh(1) * std::sinh(1))));
    CHECK(d == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(disk_segment_length({1, 0}, {1, pi}) == doctest::Approx(d).epsilon(1e-6));
}

TEST_CASE("hyperbolic and euclidean distance properties") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> rad(0, 4), ang(0, 2 * pi), coord(-5, 5);
    for (int k = 0; k < 500; ++k) {
        const HyperbolicPoint a{rad(rng), ang(rng)}, b{rad(rng), ang(rng)}, c{rad(rng), ang(rng)};
        const double ab = hyperbolic_distance(a, b);
        CHECK(ab == doctest::Approx(hyperbolic_distance(b, a)).epsilon(1e-12));
        CHECK(ab == doctest::Approx(hyperboloid_distance(a, b)).epsilon(1e-7));
        CHECK(ab <= hyperbolic_distance(a, c) + hyperbolic_distance(c, b) + 1e-9);

        const EuclideanPoint x{coord(rng), coord(rng)}, y{coord(rng), coord(rng)}, z{coord(rng), coord(rng)};
        CHECK(euclidean_distance(x, y) == euclidean_distance(y, x));
        CHECK(euclidean_distance(x, y) <= euclidean_distance(x, z) + euclidean_distance(z, y) + 1e-12);
    }
}

TEST_CASE("spherical gradient examples") {
    // Increasing lambda_1 from 0 toward q at pi/2 shortens the arc at unit
    // rate, so the derivative is -1. Finite differences settle the sign.
    const SphericalPoint p{0, 0}, q{0, pi / 2};
    const SphericalGradient g = spherical_distance_gradient(p, q);
    const double fd_lambda = central([&](double h) { return spherical_distance({p.phi, p.lambda + h}, q); });
    CHECK(fd_lambda == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(g.dlambda == doctest::Approx(-1.0));
    CHECK(g.dphi == doctest::Approx(0.0));

    const SphericalGradient m = spherical_distance_gradient({0, 0}, {pi / 4, 0});
    CHECK(m.dphi == doctest::Approx(-1.0));
    CHECK(m.dlambda == doctest::Approx(0.0));
}

TEST_CASE("spherical gradient is not antisymmetric") {
    const SphericalPoint p{0, 0.3}, q{0.2, 1.0};
    const SphericalGradient gp = spherical_distance_gradient(p, q);
    const SphericalGradient gq = spherical_distance_gradient(q, p);
    CHECK(std::abs(gp.dphi + gq.dphi) > 1e-3);
}

TEST_CASE("distance gradients match central differences") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> lat(-1.4, 1.4), lon(0, 2 * pi), rad(0.05, 3), coord(-3, 3);
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
        const SphericalPoint p{lat(rng), lon(rng)}, q{lat(rng), lon(rng)};
        const double d = spherical_distance(p, q);
        if (d < 1e-2 || d > pi - 1e-2) continue;
        const SphericalGradient g = spherical_distance_gradient(p, q);
        CHECK(close_rel(g.dphi, central([&](double h) { return spherical_distance({p.phi + h, p.lambda}, q); }),
                        1e-5));
        CHECK(close_rel(g.dlambda,
                        central([&](double h) { return spherical_distance({p.phi, p.lambda + h}, q); }), 1e-5));

        const HyperbolicPoint a{rad(rng), lon(rng)}, b{rad(rng), lon(rng)};
        if (hyperbolic_distance(a, b) > 1e-2) {
            const HyperbolicGradient hg = hyperbolic_distance_gradient(a, b);
            CHECK(close_rel(hg.dr, central([&](double h) { return hyperbolic_distance({a.r + h, a.theta}, b); }),
                            1e-5));
            CHECK(close_rel(hg.dtheta,
                            central([&](double h) { return hyperbolic_distance({a.r, a.theta + h}, b); }), 1e-5));
        }

        const EuclideanPoint x{coord(rng), coord(rng)}, y{coord(rng), coord(rng)};
        const EuclideanGradient eg = euclidean_distance_gradient(x, y);
        CHECK(close_rel(eg.dx, central([&](double h) { return euclidean_distance({x.x + h, x.y}, y); }), 1e-5));
        CHECK(close_rel(eg.dy, central([&](double h) { return euclidean_distance({x.x, x.y + h}, y); }), 1e-5));
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("singular gradients throw") {
    CHECK_THROWS_AS((void)spherical_distance_gradient({0.1, 0.2}, {0.1, 0.2}), NumericalError);
    CHECK_THROWS_AS((void)spherical_distance_gradient({0, 0}, {0, pi}), NumericalError);
    CHECK_THROWS_AS((void)euclidean_distance_gradient({1, 2}, {1, 2}), NumericalError);
    CHECK_THROWS_AS((void)hyperbolic_distance_gradient({1, 2}, {1, 2}), NumericalError);
}

TEST_CASE("normalization") {
    const SphericalPoint over = normalized(SphericalPoint{2.0, 0.3});
    CHECK(over.phi == doctest::Approx(pi - 2.0));
    CHECK(over.lambda == doctest::Approx(0.3 + pi));

    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> wild(-20, 20);
    for (int k = 0; k < 200; ++k) {
        const SphericalPoint raw{wild(rng), wild(rng)};
        const SphericalPoint n = normalized(raw);
        CHECK(n.phi >= -pi / 2);
        CHECK(n.phi <= pi / 2);
        CHECK(n.lambda >= 0.0);
        CHECK(n.lambda < 2 * pi);
        const SphericalPoint twice = normalized(n);
        CHECK(twice.phi == doctest::Approx(n.phi));
        CHECK(twice.lambda == doctest::Approx(n.lambda));
        // Same point of the sphere.
        const Vec3 a = to_xyz(raw), b = to_xyz(n);
        CHECK(std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]) < 1e-9);
    }

    const HyperbolicPoint neg = normalized(HyperbolicPoint{-1.5, 0.5});
    CHECK(neg.r == doctest::Approx(1.5));
    CHECK(neg.theta == doctest::Approx(0.5 + pi));
    const HyperbolicPoint origin = normalized(HyperbolicPoint{0.0, 4.0});
    CHECK(origin.theta == 0.0);
}

TEST_CASE("geometry parsing and validation") {
    CHECK(parse_geometry_kind("hyperbolic") == GeometryKind::hyperbolic);
    CHECK(to_string(GeometryKind::euclidean) == "euclidean");
    CHECK_THROWS_AS((void)parse_geometry_kind("flat"), InputError);
    CHECK_THROWS_AS((void)Geometry::spherical(0.0), InputError);
}

TEST_CASE("uniform sampling") {
    const Embedding s = sample_uniform(Geometry::spherical(), 10000, 1.0, 21);
    double mean_sin = 0.0;
    for (const Coord& c : s.coords) mean_sin += std::sin(c[0]) / 10000.0;
    CHECK(std::abs(mean_sin) < 0.03);

    const Embedding e = sample_uniform(Geometry::euclidean(), 10000, 1.0, 22);
    double inner = 0.0;
    for (const Coord& c : e.coords) inner += (std::hypot(c[0], c[1]) <= 0.5) / 10000.0;
    CHECK(std::abs(inner - 0.25) < 0.02);

    // Hyperbolic area inside radius a is proportional to cosh(a) - 1.
    const Embedding h = sample_uniform(Geometry::hyperbolic(), 10000, 3.0, 23);
    double within = 0.0;
    for (const Coord& c : h.coords) within += (c[0] <= 2.0) / 10000.0;
    CHECK(std::abs(within - (std::cosh(2.0) - 1) / (std::cosh(3.0) - 1)) < 0.02);

    const Embedding again = sample_uniform(Geometry::spherical(), 10000, 1.0, 21);
    CHECK(again.coords == s.coords);
    CHECK(sample_uniform(Geometry::euclidean(), 0, 1.0, 1).coords.empty());
}

TEST_CASE("pairwise distances") {
    Embedding ant{Geometry::spherical(), {{0.3, 0.1}, {-0.3, 0.1 + pi}}, {}};
    CHECK(pairwise_distances(ant)(0, 1) == doctest::Approx(pi));

    Embedding line{Geometry::euclidean(), {{0, 0}, {1, 0}, {2, 0}}, {}};
    const DistanceMatrix d = pairwise_distances(line);
    CHECK(d(0, 2) == 2.0);
    CHECK(d(1, 2) == 1.0);
    CHECK(d.dilation() == 1.0);

    for (GeometryKind kind : all_geometries) {
        const DistanceMatrix r = pairwise_distances(sample_uniform({kind, 1.0}, 5, 2.0, 31));
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(r(i, i) == 0.0);
            for (std::size_t j = 0; j < 5; ++j) CHECK(r(i, j) == r(j, i));
        }
    }

    Embedding big{Geometry::spherical(2.0), {{0, 0}, {0, 1}}, {}};
    CHECK(big.distance(0, 1) == doctest::Approx(2.0));
}
