#pragma once

#include <smds/graph.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smds {

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// Latitude phi in [-pi/2, pi/2], longitude lambda in [0, 2pi) once normalized.
struct SphericalPoint {
    double phi = 0.0;
    double lambda = 0.0;
};

struct EuclideanPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Native polar coordinates of the hyperbolic plane (curvature -1).
struct HyperbolicPoint {
    double r = 0.0;
    double theta = 0.0;
};

[[nodiscard]] SphericalPoint normalized(SphericalPoint p) noexcept;
[[nodiscard]] HyperbolicPoint normalized(HyperbolicPoint p) noexcept;

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

enum class GeometryKind { spherical, euclidean, hyperbolic };

inline constexpr std::array<GeometryKind, 3> all_geometries{GeometryKind::spherical, GeometryKind::euclidean,
                                                            GeometryKind::hyperbolic};

struct Geometry {
    GeometryKind kind = GeometryKind::spherical;
    double radius = 1.0; // spherical only

    static Geometry spherical(double radius = 1.0);
    static Geometry euclidean() { return {GeometryKind::euclidean, 1.0}; }
    static Geometry hyperbolic() { return {GeometryKind::hyperbolic, 1.0}; }
};

[[nodiscard]] std::string_view to_string(GeometryKind kind) noexcept;
/// Accepts "spherical", "euclidean", "hyperbolic". Throws InputError.
[[nodiscard]] GeometryKind parse_geometry_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Distances and gradients
// ---------------------------------------------------------------------------

/// Great-circle distance by the spherical law of cosines, in [0, pi R].
[[nodiscard]] double spherical_distance(SphericalPoint p, SphericalPoint q, double radius = 1.0) noexcept;
[[nodiscard]] double euclidean_distance(EuclideanPoint p, EuclideanPoint q) noexcept;
[[nodiscard]] double hyperbolic_distance(HyperbolicPoint p, HyperbolicPoint q) noexcept;

struct SphericalGradient {
    double dphi;
    double dlambda;
};

struct EuclideanGradient {
    double dx;
    double dy;
};

struct HyperbolicGradient {
    double dr;
    double dtheta;
};

/// Partial derivatives of the unit-sphere distance with respect to the first
/// point. Not antisymmetric in (p, q), unlike the Euclidean case.
/// Throws NumericalError when p and q coincide or are antipodal.
[[nodiscard]] SphericalGradient spherical_distance_gradient(SphericalPoint p, SphericalPoint q);
/// Throws NumericalError when p == q.
[[nodiscard]] EuclideanGradient euclidean_distance_gradient(EuclideanPoint p, EuclideanPoint q);
/// Throws NumericalError when p == q.
[[nodiscard]] HyperbolicGradient hyperbolic_distance_gradient(HyperbolicPoint p, HyperbolicPoint q);

// ---------------------------------------------------------------------------
// Embedding
// ---------------------------------------------------------------------------

/// (phi, lambda), (x, y) or (r, theta) depending on the geometry.
using Coord = std::array<double, 2>;

struct Embedding {
    Geometry geometry;
    std::vector<Coord> coords;
    std::vector<std::string> labels; // empty or one per point

    [[nodiscard]] std::size_t size() const noexcept { return coords.size(); }

    [[nodiscard]] SphericalPoint spherical(std::size_t i) const { return {coords[i][0], coords[i][1]}; }
    [[nodiscard]] EuclideanPoint euclidean(std::size_t i) const { return {coords[i][0], coords[i][1]}; }
    [[nodiscard]] HyperbolicPoint hyperbolic(std::size_t i) const { return {coords[i][0], coords[i][1]}; }

    /// Realized geodesic distance, including the spherical radius.
    [[nodiscard]] double distance(std::size_t i, std::size_t j) const noexcept;
};

/// Area-uniform random points: the whole sphere (extent ignored), a Euclidean
/// disk of radius extent, or a hyperbolic disk of radius extent.
[[nodiscard]] Embedding sample_uniform(Geometry geometry, std::size_t n, double extent, std::uint64_t seed);

/// Matrix of realized distances, dilation 1.
[[nodiscard]] DistanceMatrix pairwise_distances(const Embedding& points);

} // namespace smds
