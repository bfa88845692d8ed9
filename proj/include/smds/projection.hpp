#pragma once

#include <smds/geometry.hpp>
#include <smds/graph.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace smds {

enum class ProjectionKind { orthographic, stereographic, mercator, equal_earth };

struct Projection {
    ProjectionKind kind = ProjectionKind::orthographic;
    // Point of tangency for the azimuthal projections; only the longitude
    // (central meridian) matters for mercator and equal_earth.
    SphericalPoint center{};
};

/// "ortho", "stereo", "mercator", "equal-earth".
[[nodiscard]] std::string_view to_string(ProjectionKind kind) noexcept;
/// Also accepts the long names and underscores. Throws InputError.
[[nodiscard]] ProjectionKind parse_projection_kind(std::string_view name);

using Point2 = std::array<double, 2>;

struct Projected {
    Point2 xy;
    bool visible;
};

/// Planar image of p in the projection's natural units: the unit disk for
/// orthographic, radius 2 at the center's horizon for stereographic, radians
/// for mercator. Throws NumericalError for the stereographic projection of
/// the center's antipode.
[[nodiscard]] Projected project(SphericalPoint p, const Projection& proj);

/// segments + 1 points on the minor arc from p to q, endpoints exact.
/// Throws InputError for segments == 0 or antipodal endpoints.
[[nodiscard]] std::vector<SphericalPoint> sample_geodesic(SphericalPoint p, SphericalPoint q, std::size_t segments);

struct ScenePolyline {
    std::vector<Point2> points; // at least two
    bool visible = true;
};

struct ProjectionScene {
    std::vector<Point2> vertices;
    std::vector<bool> vertex_visible;
    std::vector<ScenePolyline> edges;
    // Drawing frame. Disk-shaped views (orthographic, hyperbolic) frame the
    // unit disk, the world maps frame their full extent, the rest frame the
    // data.
    Point2 min{0.0, 0.0};
    Point2 max{0.0, 0.0};
    bool disk_outline = false;
};

struct RenderOptions {
    Projection projection{};
    double width = 800.0;
    double vertex_radius = 3.0;
    std::size_t edge_segments = 16;
    // Opacity of hidden orthographic segments and vertices; 0 omits them.
    double hidden_opacity = 0.15;
    bool labels = false;
};

/// Projects a spherical embedding (or lays out a planar one; hyperbolic
/// points go to the Poincare disk at radius tanh(r / 2)) with sampled
/// geodesic edges. Polylines split where visibility changes and where a
/// world map's seam cuts an edge.
[[nodiscard]] ProjectionScene build_scene(const Embedding& emb, const Graph& g, const RenderOptions& opts);

/// Standalone SVG 1.1 document. Deterministic for equal inputs.
[[nodiscard]] std::string render_svg(const Embedding& emb, const Graph& g, const RenderOptions& opts);

} // namespace smds
