#include <smds/projection.hpp>

#include <smds/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace smds {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double mercator_limit = 85.0 * pi / 180.0;

// Equal Earth polynomial coefficients.
constexpr double ee_a1 = 1.340264;
constexpr double ee_a2 = -0.081106;
constexpr double ee_a3 = 0.000893;
constexpr double ee_a4 = 0.003796;

using Vec3 = std::array<double, 3>;

Vec3 to_vec(SphericalPoint p) {
    return {std::cos(p.phi) * std::cos(p.lambda), std::cos(p.phi) * std::sin(p.lambda), std::sin(p.phi)};
}

SphericalPoint to_point(const Vec3& v) {
    SphericalPoint p{std::atan2(v[2], std::hypot(v[0], v[1])), std::atan2(v[1], v[0])};
    if (p.lambda < 0.0) p.lambda += 2.0 * pi;
    return p;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Longitude relative to the central meridian, in [-pi, pi).
double relative_longitude(double lambda, double center) {
    double d = std::remainder(lambda - center, 2.0 * pi);
    if (d >= pi) d -= 2.0 * pi;
    return d;
}

// Slerp from u to v. Antipodal endpoints take the arc through a fixed
// perpendicular so rendering never fails on a legal layout.
std::vector<SphericalPoint> arc(SphericalPoint p, SphericalPoint q, std::size_t segments) {
    const Vec3 u = to_vec(p), v = to_vec(q);
    const double c = std::clamp(dot(u, v), -1.0, 1.0);
    std::vector<SphericalPoint> out;
    out.reserve(segments + 1);
    out.push_back(p);
    if (c < -1.0 + 1e-12) {
        // Half turn about an axis perpendicular to u.
        Vec3 w = std::abs(u[2]) < 0.9 ? Vec3{-u[1], u[0], 0.0} : Vec3{0.0, -u[2], u[1]};
        const double len = std::sqrt(dot(w, w));
        for (double& x : w) x /= len;
        for (std::size_t k = 1; k < segments; ++k) {
            const double t = pi * static_cast<double>(k) / static_cast<double>(segments);
            out.push_back(to_point({u[0] * std::cos(t) + w[0] * std::sin(t), u[1] * std::cos(t) + w[1] * std::sin(t),
                                    u[2] * std::cos(t) + w[2] * std::sin(t)}));
        }
    } else {
        const double omega = std::acos(c);
        const double s = std::sin(omega);
        for (std::size_t k = 1; k < segments; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(segments);
            Vec3 m;
            if (s < 1e-12) {
                for (int i = 0; i < 3; ++i) m[i] = u[i] + t * (v[i] - u[i]);
            } else {
                const double a = std::sin((1.0 - t) * omega) / s, b = std::sin(t * omega) / s;
                for (int i = 0; i < 3; ++i) m[i] = a * u[i] + b * v[i];
            }
            out.push_back(to_point(m));
        }
    }
    out.push_back(q);
    return out;
}

// Poincare disk image of a native polar point.
Point2 disk_point(const Coord& p) {
    const double rho = std::tanh(0.5 * p[0]);
    return {rho * std::cos(p[1]), rho * std::sin(p[1])};
}

// Hyperbolic geodesic sampled on the hyperboloid, mapped to the disk.
std::vector<Point2> hyperbolic_arc(const Coord& p, const Coord& q, std::size_t segments) {
    const Vec3 a{std::cosh(p[0]), std::sinh(p[0]) * std::cos(p[1]), std::sinh(p[0]) * std::sin(p[1])};
    const Vec3 b{std::cosh(q[0]), std::sinh(q[0]) * std::cos(q[1]), std::sinh(q[0]) * std::sin(q[1])};
    const double d = hyperbolic_distance({p[0], p[1]}, {q[0], q[1]});
    std::vector<Point2> out;
    out.push_back(disk_point(p));
    for (std::size_t k = 1; k < segments; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(segments);
        Vec3 m;
        if (d < 1e-12) {
            m = a;
        } else {
            const double wa = std::sinh((1.0 - t) * d) / std::sinh(d), wb = std::sinh(t * d) / std::sinh(d);
            for (int i = 0; i < 3; ++i) m[i] = wa * a[i] + wb * b[i];
        }
        out.push_back({m[1] / (1.0 + m[0]), m[2] / (1.0 + m[0])});
    }
    out.push_back(disk_point(q));
    return out;
}

bool is_world_map(ProjectionKind kind) {
    return kind == ProjectionKind::mercator || kind == ProjectionKind::equal_earth;
}

// Splits a sampled spherical edge into polylines at visibility changes and
// seam crossings.
void add_spherical_edge(const std::vector<SphericalPoint>& samples, const Projection& proj,
                        std::vector<ScenePolyline>& out) {
    std::vector<Projected> img;
    img.reserve(samples.size());
    for (const auto& s : samples) img.push_back(project(s, proj));

    ScenePolyline current;
    auto flush = [&] {
        if (current.points.size() >= 2) out.push_back(current);
        current.points.clear();
    };
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const bool visible = img[k].visible && img[k + 1].visible;
        if (!current.points.empty() && current.visible != visible) flush();
        if (current.points.empty()) {
            current.visible = visible;
            current.points.push_back(img[k].xy);
        }
        if (is_world_map(proj.kind)) {
            const double la = relative_longitude(samples[k].lambda, proj.center.lambda);
            const double lb = relative_longitude(samples[k + 1].lambda, proj.center.lambda);
            if (std::abs(la - lb) > pi) {
                // Cut at the seam, interpolating latitude by longitude gap.
                const double ga = pi - std::abs(la), gb = pi - std::abs(lb);
                const double t = ga + gb > 0.0 ? ga / (ga + gb) : 0.5;
                const double phi = samples[k].phi + t * (samples[k + 1].phi - samples[k].phi);
                const double side_a = la < 0.0 ? -pi : pi;
                const double eps = 1e-9;
                Projected ea = project({phi, proj.center.lambda + side_a - std::copysign(eps, side_a)}, proj);
                Projected eb = project({phi, proj.center.lambda - side_a + std::copysign(eps, side_a)}, proj);
                current.points.push_back(ea.xy);
                flush();
                current.visible = visible;
                current.points.push_back(eb.xy);
            }
        }
        current.points.push_back(img[k + 1].xy);
    }
    flush();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string escape_xml(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string_view to_string(ProjectionKind kind) noexcept {
    switch (kind) {
    case ProjectionKind::orthographic: return "ortho";
    case ProjectionKind::stereographic: return "stereo";
    case ProjectionKind::mercator: return "mercator";
    case ProjectionKind::equal_earth: return "equal-earth";
    }
    return "ortho";
}

ProjectionKind parse_projection_kind(std::string_view name) {
    if (name == "ortho" || name == "orthographic") return ProjectionKind::orthographic;
    if (name == "stereo" || name == "stereographic") return ProjectionKind::stereographic;
    if (name == "mercator") return ProjectionKind::mercator;
    if (name == "equal-earth" || name == "equal_earth") return ProjectionKind::equal_earth;
    throw InputError("unknown projection '" + std::string(name) + "'");
}

Projected project(SphericalPoint p, const Projection& proj) {
    const double phi0 = proj.center.phi;
    switch (proj.kind) {
    case ProjectionKind::orthographic:
    case ProjectionKind::stereographic: {
        const double dl = p.lambda - proj.center.lambda;
        const double cos_c = std::sin(phi0) * std::sin(p.phi) + std::cos(phi0) * std::cos(p.phi) * std::cos(dl);
        const double x = std::cos(p.phi) * std::sin(dl);
        const double y = std::cos(phi0) * std::sin(p.phi) - std::sin(phi0) * std::cos(p.phi) * std::cos(dl);
        if (proj.kind == ProjectionKind::orthographic) return {{x, y}, cos_c >= 0.0};
        if (1.0 + cos_c < 1e-12) throw NumericalError("stereographic projection is undefined at the antipode of its center");
        const double k = 2.0 / (1.0 + cos_c);
        return {{k * x, k * y}, true};
    }
    case ProjectionKind::mercator: {
        const double phi = std::clamp(p.phi, -mercator_limit, mercator_limit);
        return {{relative_longitude(p.lambda, proj.center.lambda), std::log(std::tan(0.25 * pi + 0.5 * phi))}, true};
    }
    case ProjectionKind::equal_earth: {
        const double theta = std::asin(std::sqrt(3.0) / 2.0 * std::sin(p.phi));
        const double t2 = theta * theta, t6 = t2 * t2 * t2;
        const double lambda = relative_longitude(p.lambda, proj.center.lambda);
        const double x = 2.0 * std::sqrt(3.0) * lambda * std::cos(theta) /
                         (3.0 * (ee_a1 + 3.0 * ee_a2 * t2 + t6 * (7.0 * ee_a3 + 9.0 * ee_a4 * t2)));
        const double y = theta * (ee_a1 + ee_a2 * t2 + t6 * (ee_a3 + ee_a4 * t2));
        return {{x, y}, true};
    }
    }
    return {{0.0, 0.0}, true};
}

std::vector<SphericalPoint> sample_geodesic(SphericalPoint p, SphericalPoint q, std::size_t segments) {
    if (segments == 0) throw InputError("a geodesic needs at least one segment");
    if (dot(to_vec(p), to_vec(q)) < -1.0 + 1e-12)
        throw InputError("geodesic between antipodal points is not unique");
    return arc(p, q, segments);
}

ProjectionScene build_scene(const Embedding& emb, const Graph& g, const RenderOptions& opts) {
    if (g.num_vertices() != emb.size())
        throw InputError("graph has " + std::to_string(g.num_vertices()) + " vertices but the embedding has " +
                         std::to_string(emb.size()) + " points");
    if (opts.edge_segments == 0) throw InputError("edges need at least one segment");
    ProjectionScene scene;
    const std::size_t n = emb.size();
    const GeometryKind kind = emb.geometry.kind;

    if (kind == GeometryKind::spherical) {
        for (std::size_t i = 0; i < n; ++i) {
            const Projected p = project(emb.spherical(i), opts.projection);
            scene.vertices.push_back(p.xy);
            scene.vertex_visible.push_back(p.visible);
        }
        for (const Edge& e : g.edges())
            add_spherical_edge(arc(emb.spherical(e.u), emb.spherical(e.v), opts.edge_segments), opts.projection,
                               scene.edges);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            scene.vertices.push_back(kind == GeometryKind::hyperbolic ? disk_point(emb.coords[i])
                                                                      : Point2{emb.coords[i][0], emb.coords[i][1]});
            scene.vertex_visible.push_back(true);
        }
        for (const Edge& e : g.edges()) {
            ScenePolyline line;
            if (kind == GeometryKind::hyperbolic)
                line.points = hyperbolic_arc(emb.coords[e.u], emb.coords[e.v], opts.edge_segments);
            else
                line.points = {scene.vertices[e.u], scene.vertices[e.v]};
            scene.edges.push_back(std::move(line));
        }
    }

    const ProjectionKind pk = opts.projection.kind;
    if ((kind == GeometryKind::spherical && pk == ProjectionKind::orthographic) || kind == GeometryKind::hyperbolic) {
        scene.min = {-1.0, -1.0};
        scene.max = {1.0, 1.0};
        scene.disk_outline = true;
    } else if (kind == GeometryKind::spherical && pk == ProjectionKind::mercator) {
        const double ymax = std::log(std::tan(0.25 * pi + 0.5 * mercator_limit));
        scene.min = {-pi, -ymax};
        scene.max = {pi, ymax};
    } else if (kind == GeometryKind::spherical && pk == ProjectionKind::equal_earth) {
        const Point2 corner = project({0.0, opts.projection.center.lambda - pi + 1e-12}, opts.projection).xy;
        const Point2 top = project({0.5 * pi, opts.projection.center.lambda}, opts.projection).xy;
        scene.min = {-std::abs(corner[0]), -top[1]};
        scene.max = {std::abs(corner[0]), top[1]};
    } else {
        scene.min = {INFINITY, INFINITY};
        scene.max = {-INFINITY, -INFINITY};
        auto grow = [&](const Point2& p) {
            for (int k = 0; k < 2; ++k) {
                scene.min[k] = std::min(scene.min[k], p[k]);
                scene.max[k] = std::max(scene.max[k], p[k]);
            }
        };
        for (const auto& v : scene.vertices) grow(v);
        for (const auto& line : scene.edges)
            for (const auto& p : line.points) grow(p);
        if (n == 0) scene.min = scene.max = {0.0, 0.0};
        for (int k = 0; k < 2; ++k) {
            if (scene.max[k] - scene.min[k] < 1e-9) {
                scene.min[k] -= 1.0;
                scene.max[k] += 1.0;
            }
        }
    }
    return scene;
}

std::string render_svg(const Embedding& emb, const Graph& g, const RenderOptions& opts) {
    if (!(opts.width > 0.0)) throw InputError("image width must be positive");
    const ProjectionScene scene = build_scene(emb, g, opts);
    const double margin = 10.0;
    const double scale = (opts.width - 2.0 * margin) / (scene.max[0] - scene.min[0]);
    const double height = (scene.max[1] - scene.min[1]) * scale + 2.0 * margin;
    auto px = [&](const Point2& p) {
        return fmt(margin + (p[0] - scene.min[0]) * scale) + " " + fmt(margin + (scene.max[1] - p[1]) * scale);
    };
    auto path = [&](const ScenePolyline& line) {
        std::string d = "M " + px(line.points.front());
        for (std::size_t k = 1; k < line.points.size(); ++k) d += " L " + px(line.points[k]);
        return "<path d=\"" + d + "\"/>\n";
    };
    auto circle = [&](std::size_t i) {
        const Point2& v = scene.vertices[i];
        return "<circle cx=\"" + fmt(margin + (v[0] - scene.min[0]) * scale) + "\" cy=\"" +
               fmt(margin + (scene.max[1] - v[1]) * scale) + "\" r=\"" + fmt(opts.vertex_radius) + "\"/>\n";
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(opts.width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(opts.width) << " " << fmt(height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (scene.disk_outline) {
        const double cx = margin + (0.0 - scene.min[0]) * scale, cy = margin + scene.max[1] * scale, r = scale;
        svg << "<path d=\"M " << fmt(cx - r) << " " << fmt(cy) << " A " << fmt(r) << " " << fmt(r) << " 0 1 0 "
            << fmt(cx + r) << " " << fmt(cy) << " A " << fmt(r) << " " << fmt(r) << " 0 1 0 " << fmt(cx - r) << " "
            << fmt(cy) << " Z\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    }

    const bool show_hidden = opts.hidden_opacity > 0.0;
    if (show_hidden) {
        std::string hidden_edges, hidden_vertices;
        for (const auto& line : scene.edges)
            if (!line.visible) hidden_edges += path(line);
        for (std::size_t i = 0; i < scene.vertices.size(); ++i)
            if (!scene.vertex_visible[i]) hidden_vertices += circle(i);
        if (!hidden_edges.empty() || !hidden_vertices.empty()) {
            svg << "<g opacity=\"" << fmt(opts.hidden_opacity) << "\">\n"
                << "<g fill=\"none\" stroke=\"#555555\" stroke-width=\"1\">\n"
                << hidden_edges << "</g>\n"
                << "<g fill=\"#1f4e79\">\n"
                << hidden_vertices << "</g>\n"
                << "</g>\n";
        }
    }
    svg << "<g fill=\"none\" stroke=\"#555555\" stroke-width=\"1\">\n";
    for (const auto& line : scene.edges)
        if (line.visible) svg << path(line);
    svg << "</g>\n<g fill=\"#1f4e79\">\n";
    for (std::size_t i = 0; i < scene.vertices.size(); ++i)
        if (scene.vertex_visible[i]) svg << circle(i);
    svg << "</g>\n";
    if (opts.labels) {
        svg << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#222222\">\n";
        for (std::size_t i = 0; i < scene.vertices.size(); ++i) {
            if (!scene.vertex_visible[i] && !show_hidden) continue;
            const Point2& v = scene.vertices[i];
            const std::string text = i < emb.labels.size()       ? emb.labels[i]
                                     : i < g.labels().size() ? g.labels()[i]
                                                             : std::to_string(i);
            svg << "<text x=\"" << fmt(margin + (v[0] - scene.min[0]) * scale + opts.vertex_radius + 1.0)
                << "\" y=\"" << fmt(margin + (scene.max[1] - v[1]) * scale - opts.vertex_radius - 1.0) << "\">"
                << escape_xml(text) << "</text>\n";
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace smds
