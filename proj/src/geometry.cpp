#include <smds/geometry.hpp>

#include <smds/error.hpp>
#include <smds/kernels.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace smds {

SphericalPoint normalized(SphericalPoint p) noexcept {
    Coord c{p.phi, p.lambda};
    kernel::Sphere::normalize(c);
    return {c[0], c[1]};
}

HyperbolicPoint normalized(HyperbolicPoint p) noexcept {
    Coord c{p.r, p.theta};
    kernel::Hyperbolic::normalize(c);
    return {c[0], c[1]};
}

Geometry Geometry::spherical(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("sphere radius must be positive");
    return {GeometryKind::spherical, radius};
}

std::string_view to_string(GeometryKind kind) noexcept {
    switch (kind) {
    case GeometryKind::spherical: return "spherical";
    case GeometryKind::euclidean: return "euclidean";
    case GeometryKind::hyperbolic: return "hyperbolic";
    }
    return "spherical";
}

GeometryKind parse_geometry_kind(std::string_view name) {
    for (GeometryKind k : all_geometries)
        if (to_string(k) == name) return k;
    throw InputError("unknown geometry '" + std::string(name) + "'");
}

double spherical_distance(SphericalPoint p, SphericalPoint q, double radius) noexcept {
    return radius * kernel::Sphere::distance({p.phi, p.lambda}, {q.phi, q.lambda});
}

double euclidean_distance(EuclideanPoint p, EuclideanPoint q) noexcept {
    return kernel::Plane::distance({p.x, p.y}, {q.x, q.y});
}

double hyperbolic_distance(HyperbolicPoint p, HyperbolicPoint q) noexcept {
    return kernel::Hyperbolic::distance({p.r, p.theta}, {q.r, q.theta});
}

SphericalGradient spherical_distance_gradient(SphericalPoint p, SphericalPoint q) {
    kernel::PairEval e{};
    if (!kernel::Sphere::evaluate({p.phi, p.lambda}, {q.phi, q.lambda}, e))
        throw NumericalError("spherical distance gradient is singular for coincident or antipodal points");
    return {e.grad_first[0], e.grad_first[1]};
}

EuclideanGradient euclidean_distance_gradient(EuclideanPoint p, EuclideanPoint q) {
    kernel::PairEval e{};
    if (!kernel::Plane::evaluate({p.x, p.y}, {q.x, q.y}, e))
        throw NumericalError("euclidean distance gradient is singular for coincident points");
    return {e.grad_first[0], e.grad_first[1]};
}

HyperbolicGradient hyperbolic_distance_gradient(HyperbolicPoint p, HyperbolicPoint q) {
    kernel::PairEval e{};
    if (!kernel::Hyperbolic::evaluate({p.r, p.theta}, {q.r, q.theta}, e))
        throw NumericalError("hyperbolic distance gradient is singular for coincident points");
    return {e.grad_first[0], e.grad_first[1]};
}

double Embedding::distance(std::size_t i, std::size_t j) const noexcept {
    return kernel::dispatch(geometry.kind, [&](auto k) {
        double d = decltype(k)::distance(coords[i], coords[j]);
        return geometry.kind == GeometryKind::spherical ? geometry.radius * d : d;
    });
}

Embedding sample_uniform(Geometry geometry, std::size_t n, double extent, std::uint64_t seed) {
    if (geometry.kind != GeometryKind::spherical && !(extent > 0.0))
        throw InputError("sampling extent must be positive");
    constexpr double tau = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Embedding out{geometry, {}, {}};
    out.coords.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = unit(rng);
        const double angle = tau * unit(rng);
        switch (geometry.kind) {
        case GeometryKind::spherical: {
            Coord c{std::asin(2.0 * u - 1.0), angle};
            kernel::Sphere::normalize(c);
            out.coords.push_back(c);
            break;
        }
        case GeometryKind::euclidean: {
            const double r = extent * std::sqrt(u);
            out.coords.push_back({r * std::cos(angle), r * std::sin(angle)});
            break;
        }
        case GeometryKind::hyperbolic: {
            Coord c{std::acosh(1.0 + u * (std::cosh(extent) - 1.0)), angle};
            kernel::Hyperbolic::normalize(c);
            out.coords.push_back(c);
            break;
        }
        }
    }
    return out;
}

DistanceMatrix pairwise_distances(const Embedding& points) {
    DistanceMatrix dm(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) dm.set(i, j, points.distance(i, j));
    if (!points.labels.empty()) dm.set_labels(points.labels);
    return dm;
}

} // namespace smds
