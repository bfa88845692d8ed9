#pragma once

#include <smds/embedder.hpp>
#include <smds/graph.hpp>
#include <smds/metrics.hpp>
#include <smds/projection.hpp>
#include <smds/serialize.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smds {

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

/// Either a file or a generator. Generator specs:
///   tetrahedron | cube | octahedron | dodecahedron | icosahedron
///   cycle:N | path:N | grid:R | grid:RxC
/// optionally followed by "/K" for K rounds of edge subdivision ("cube/4").
/// Files: .mtx (Matrix Market), .csv (labeled distance matrix), anything
/// else is read as an edge list.
struct GraphSource {
    std::string path;
    std::string generator;
    unsigned subdivide = 0; // extra rounds on top of any "/K" suffix

    [[nodiscard]] static GraphSource file(std::string p) { return {std::move(p), {}, 0}; }
    [[nodiscard]] static GraphSource generated(std::string spec, unsigned rounds = 0) {
        return {{}, std::move(spec), rounds};
    }
    /// Report name: the generator spec or the file stem.
    [[nodiscard]] std::string name() const;
};

struct LoadedInput {
    std::string name;
    Graph graph;      // no edges for a distance-matrix input
    DistanceMatrix dm;
};

/// Throws InputError for a bad spec, ParseError for malformed content.
[[nodiscard]] Graph generate_graph(std::string_view spec);
/// Missing files raise InputError naming the path.
[[nodiscard]] LoadedInput load_input(const GraphSource& source);

/// none | heuristic | optimize-radius | factor=A
struct DilationSpec {
    DilationMode mode = DilationMode::none;
    double factor = 1.0; // used when mode is none and factor != 1
    [[nodiscard]] static DilationSpec parse(std::string_view text);
    /// Heuristic on the sphere, none elsewhere.
    [[nodiscard]] static DilationSpec default_for(GeometryKind kind);
    [[nodiscard]] std::string str() const;
};

enum class Optimizer { sgd, gd };

/// Lays out dm under cfg and spec. A fixed factor is applied to dm up front
/// and reported as the result's applied dilation.
[[nodiscard]] LayoutResult run_layout(const DistanceMatrix& dm, LayoutConfig cfg, const DilationSpec& spec,
                                      Optimizer optimizer = Optimizer::sgd);

// ---------------------------------------------------------------------------
// layout
// ---------------------------------------------------------------------------

struct RunManifest {
    GraphSource source;
    LayoutConfig config{};
    std::optional<DilationSpec> dilation; // unset: DilationSpec::default_for
    Optimizer optimizer = Optimizer::sgd;
    std::filesystem::path out_dir = ".";
    std::optional<RenderOptions> svg;
};

struct LayoutOutcome {
    std::string graph;
    std::size_t n = 0;
    LayoutResult result;
    QualityReport quality;
    std::vector<std::filesystem::path> written;
};

/// apsp, dilation, layout; writes layout.json, trace.csv, report.csv and,
/// when requested, layout.svg into out_dir (created if missing).
LayoutOutcome cmd_layout(const RunManifest& manifest);

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

/// cube, dodecahedron, icosahedron, their 4-fold subdivisions, grid:17.
[[nodiscard]] std::vector<GraphSource> default_benchmarks();

/// One row per source x geometry in input order. A source that fails to load
/// or lay out contributes a single error row. `dilation` unset applies the
/// per-geometry default; optimize-radius only applies to the sphere.
[[nodiscard]] std::vector<ReportRow> cmd_compare(std::span<const GraphSource> sources, const LayoutConfig& base,
                                                 std::optional<DilationSpec> dilation, unsigned repeats);

// ---------------------------------------------------------------------------
// dilation sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    double factor = 0.0;
    double relative = 0.0; // factor / heuristic factor
    double mean_distortion = 0.0;
    double sd_distortion = 0.0;
    bool heuristic = false;
};

/// `count` factors spaced geometrically over [lo, hi] times the heuristic.
[[nodiscard]] std::vector<double> sweep_factors(const DistanceMatrix& dm, double lo = 0.25, double hi = 4.0,
                                                std::size_t count = 20);

/// Spherical layouts of dm scaled by each factor (repeats seeds each), plus a
/// final row at the heuristic factor flagged `heuristic`.
[[nodiscard]] std::vector<SweepRow> cmd_dilation_sweep(const DistanceMatrix& dm, std::span<const double> factors,
                                                       const LayoutConfig& base, unsigned repeats);

[[nodiscard]] std::string sweep_csv(std::span<const SweepRow> rows);

// ---------------------------------------------------------------------------
// sampling experiment
// ---------------------------------------------------------------------------

struct SampleCell {
    GeometryKind source = GeometryKind::spherical;
    GeometryKind target = GeometryKind::spherical;
    double mean_distortion = 0.0;
    double sd_distortion = 0.0;
};

/// Points sampled in each source geometry (unit sphere, disks of radius
/// `extent`), embedded without dilation by each target geometry. Repeat r
/// samples with seed + r and lays out with seed + r. Row-major 3x3.
[[nodiscard]] std::vector<SampleCell> cmd_sample_experiment(std::size_t n_points, double extent, unsigned repeats,
                                                            const LayoutConfig& base);

[[nodiscard]] std::string sample_csv(std::span<const SampleCell> cells);

// ---------------------------------------------------------------------------
// cities
// ---------------------------------------------------------------------------

/// n random points on a sphere of radius_km with their great-circle distance
/// matrix, labeled city00, city01, ...
[[nodiscard]] DistanceMatrix synthetic_cities(std::size_t n, std::uint64_t seed, double radius_km = 6371.0);

struct CitiesOutcome {
    LayoutResult result;
    double distortion = 0.0;
    std::vector<std::filesystem::path> written;
};

/// Spherical SGD on a labeled distance matrix, heuristic dilation unless
/// another spec is given. With an output directory, writes layout.json,
/// report.csv and three orthographic views 120 degrees of longitude apart.
CitiesOutcome cmd_cities(const DistanceMatrix& dm, const LayoutConfig& base,
                         const std::optional<std::filesystem::path>& out_dir,
                         const DilationSpec& dilation = {DilationMode::heuristic, 1.0});

/// Writes text to path, throwing InputError when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view text);

} // namespace smds
