#include <smds/harness.hpp>

#include <smds/error.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace smds {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t parse_count(std::string_view text, std::string_view spec) {
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw InputError("bad number '" + std::string(text) + "' in generator '" + std::string(spec) + "'");
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Geometry geometry_like(const LayoutConfig& base, GeometryKind kind) {
    if (kind == GeometryKind::spherical)
        return base.geometry.kind == GeometryKind::spherical ? base.geometry : Geometry::spherical();
    return {kind, 1.0};
}

std::vector<std::string> labels_for(const LoadedInput& in) {
    if (!in.graph.labels().empty()) return in.graph.labels();
    return in.dm.labels();
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

MeanSd mean_sd(std::span<const double> xs) {
    MeanSd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        for (double x : xs) out.sd += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(out.sd / static_cast<double>(xs.size() - 1));
    }
    return out;
}

// Dilation that makes a layout comparable to a unit-sphere one.
double effective_dilation(const LayoutResult& r) {
    if (r.embedding.geometry.kind == GeometryKind::spherical && r.embedding.geometry.radius != 1.0)
        return r.applied_dilation / r.embedding.geometry.radius;
    return r.applied_dilation;
}

} // namespace

void write_file(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

std::string GraphSource::name() const {
    std::string base = generator.empty() ? fs::path(path).stem().string() : generator;
    if (subdivide > 0) base += "+sub" + std::to_string(subdivide);
    return base;
}

Graph generate_graph(std::string_view spec) {
    std::string_view body = spec;
    unsigned rounds = 0;
    if (const auto slash = spec.rfind('/'); slash != std::string_view::npos) {
        rounds = static_cast<unsigned>(parse_count(spec.substr(slash + 1), spec));
        body = spec.substr(0, slash);
    }
    const auto colon = body.find(':');
    const std::string name = lower(body.substr(0, colon));
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : body.substr(colon + 1);

    Graph g;
    if (name == "tetrahedron") g = generate_polytope(Polytope::tetrahedron);
    else if (name == "cube") g = generate_polytope(Polytope::cube);
    else if (name == "octahedron") g = generate_polytope(Polytope::octahedron);
    else if (name == "dodecahedron") g = generate_polytope(Polytope::dodecahedron);
    else if (name == "icosahedron") g = generate_polytope(Polytope::icosahedron);
    else if (name == "cycle") g = generate_cycle(parse_count(arg, spec));
    else if (name == "path") g = generate_path(parse_count(arg, spec));
    else if (name == "grid") {
        const auto x = arg.find('x');
        const std::size_t rows = parse_count(arg.substr(0, x), spec);
        const std::size_t cols = x == std::string_view::npos ? rows : parse_count(arg.substr(x + 1), spec);
        g = generate_grid(rows, cols);
    } else {
        throw InputError("unknown generator '" + std::string(spec) + "'");
    }
    if (colon != std::string_view::npos && name != "cycle" && name != "path" && name != "grid")
        throw InputError("generator '" + name + "' takes no parameter");
    return rounds > 0 ? subdivide(g, rounds) : g;
}

LoadedInput load_input(const GraphSource& source) {
    if (source.path.empty() == source.generator.empty())
        throw InputError("give exactly one of an input file or a generator");
    LoadedInput out;
    out.name = source.name();
    if (!source.generator.empty()) {
        out.graph = generate_graph(source.generator);
    } else {
        const fs::path path(source.path);
        if (!fs::exists(path)) throw InputError("input file '" + source.path + "' does not exist");
        const std::string text = read_file(path);
        const std::string ext = lower(path.extension().string());
        if (ext == ".csv") {
            out.dm = parse_distance_csv(text);
            if (source.subdivide > 0) throw InputError("cannot subdivide a distance matrix input");
            out.graph = Graph(out.dm.size());
            out.graph.set_labels(out.dm.labels());
            return out;
        }
        out.graph = ext == ".mtx" ? parse_matrix_market(text) : parse_edge_list(text);
    }
    if (source.subdivide > 0) out.graph = subdivide(out.graph, source.subdivide);
    out.dm = apsp(out.graph);
    return out;
}

DilationSpec DilationSpec::parse(std::string_view text) {
    constexpr std::string_view prefix = "factor=";
    if (text.starts_with(prefix)) {
        const std::string value(text.substr(prefix.size()));
        double f = 0.0;
        const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), f);
        if (ec != std::errc{} || end != value.data() + value.size() || !(f > 0.0) || !std::isfinite(f))
            throw InputError("dilation factor must be a positive number, got '" + value + "'");
        return {DilationMode::none, f};
    }
    return {parse_dilation_mode(text), 1.0};
}

DilationSpec DilationSpec::default_for(GeometryKind kind) {
    return {kind == GeometryKind::spherical ? DilationMode::heuristic : DilationMode::none, 1.0};
}

std::string DilationSpec::str() const {
    if (mode == DilationMode::none && factor != 1.0) return "factor=" + format_double(factor);
    return std::string(to_string(mode));
}

LayoutResult run_layout(const DistanceMatrix& dm, LayoutConfig cfg, const DilationSpec& spec, Optimizer optimizer) {
    cfg.dilation = spec.mode;
    const bool fixed = spec.mode == DilationMode::none && spec.factor != 1.0;
    const DistanceMatrix scaled = fixed ? dm.scaled(spec.factor) : DistanceMatrix{};
    const DistanceMatrix& targets = fixed ? scaled : dm;
    LayoutResult r = optimizer == Optimizer::gd ? gd_layout(targets, cfg) : sgd_layout(targets, cfg);
    if (fixed) r.applied_dilation = spec.factor;
    return r;
}

// ---------------------------------------------------------------------------
// layout
// ---------------------------------------------------------------------------

LayoutOutcome cmd_layout(const RunManifest& m) {
    LoadedInput in = load_input(m.source);
    const DilationSpec spec = m.dilation.value_or(DilationSpec::default_for(m.config.geometry.kind));

    LayoutOutcome out;
    out.graph = in.name;
    out.n = in.dm.size();
    out.result = run_layout(in.dm, m.config, spec, m.optimizer);
    out.result.embedding.labels = labels_for(in);
    out.quality = evaluate(out.result, in.dm, m.config.weights);

    LayoutConfig cfg = m.config;
    cfg.dilation = spec.mode;
    const LayoutRecord record{out.result.embedding, out.quality.stress, out.quality.distortion,
                              out.result.applied_dilation, cfg};
    const ReportRow row{in.name,
                        std::string(to_string(cfg.geometry.kind)),
                        out.n,
                        out.quality.distortion,
                        0.0,
                        out.quality.stress,
                        out.result.trace.seconds,
                        effective_dilation(out.result),
                        std::nullopt};

    fs::create_directories(m.out_dir);
    auto emit = [&](const char* file, std::string_view text) {
        const fs::path p = m.out_dir / file;
        write_file(p, text);
        out.written.push_back(p);
    };
    emit("layout.json", to_json(record).dump(2) + "\n");
    emit("trace.csv", trace_csv(out.result.trace));
    emit("report.csv", report_csv(std::span(&row, 1)));
    if (m.svg) emit("layout.svg", render_svg(out.result.embedding, in.graph, *m.svg));
    return out;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

std::vector<GraphSource> default_benchmarks() {
    return {GraphSource::generated("cube"),   GraphSource::generated("dodecahedron"),
            GraphSource::generated("icosahedron"), GraphSource::generated("cube/4"),
            GraphSource::generated("dodecahedron/4"), GraphSource::generated("icosahedron/4"),
            GraphSource::generated("grid:17")};
}

std::vector<ReportRow> cmd_compare(std::span<const GraphSource> sources, const LayoutConfig& base,
                                   std::optional<DilationSpec> dilation, unsigned repeats) {
    if (repeats == 0) throw InputError("repeats must be at least 1");
    std::vector<ReportRow> rows;
    for (const GraphSource& source : sources) {
        std::vector<ReportRow> mine;
        try {
            const LoadedInput in = load_input(source);
            for (GeometryKind kind : all_geometries) {
                LayoutConfig cfg = base;
                cfg.geometry = geometry_like(base, kind);
                DilationSpec spec = dilation.value_or(DilationSpec::default_for(kind));
                if (spec.mode == DilationMode::optimize_radius && kind != GeometryKind::spherical) spec = {};

                std::vector<double> dist, str, secs;
                double dil = 1.0;
                for (unsigned r = 0; r < repeats; ++r) {
                    cfg.seed = base.seed + r;
                    const LayoutResult result = run_layout(in.dm, cfg, spec);
                    const QualityReport q = evaluate(result, in.dm, cfg.weights);
                    dist.push_back(q.distortion);
                    str.push_back(q.stress);
                    secs.push_back(q.runtime_seconds);
                    dil = effective_dilation(result);
                }
                const MeanSd d = mean_sd(dist);
                mine.push_back({in.name, std::string(to_string(kind)), in.dm.size(), d.mean, d.sd,
                                mean_sd(str).mean, mean_sd(secs).mean, dil, std::nullopt});
            }
        } catch (const Error& e) {
            mine.assign(1, ReportRow{});
            mine[0].graph = source.name();
            mine[0].error = e.what();
        }
        rows.insert(rows.end(), mine.begin(), mine.end());
    }
    return rows;
}

// ---------------------------------------------------------------------------
// dilation sweep
// ---------------------------------------------------------------------------

std::vector<double> sweep_factors(const DistanceMatrix& dm, double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw InputError("bad sweep range");
    const double h = heuristic_dilation_factor(dm);
    std::vector<double> out;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        out.push_back(h * lo * std::pow(hi / lo, t));
    }
    return out;
}

std::vector<SweepRow> cmd_dilation_sweep(const DistanceMatrix& dm, std::span<const double> factors,
                                         const LayoutConfig& base, unsigned repeats) {
    if (repeats == 0) throw InputError("repeats must be at least 1");
    const double h = heuristic_dilation_factor(dm);
    LayoutConfig cfg = base;
    cfg.geometry = geometry_like(base, GeometryKind::spherical);

    auto row_at = [&](double factor, bool heuristic) {
        if (!(factor > 0.0)) throw InputError("dilation factors must be positive");
        std::vector<double> dist;
        for (unsigned r = 0; r < repeats; ++r) {
            cfg.seed = base.seed + r;
            const LayoutResult result = run_layout(dm, cfg, DilationSpec{DilationMode::none, factor});
            dist.push_back(evaluate(result, dm, cfg.weights).distortion);
        }
        const MeanSd s = mean_sd(dist);
        return SweepRow{factor, factor / h, s.mean, s.sd, heuristic};
    };

    std::vector<SweepRow> rows;
    for (double f : factors) rows.push_back(row_at(f, false));
    rows.push_back(row_at(h, true));
    return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "factor,relative,mean_distortion,sd_distortion,heuristic\n";
    for (const SweepRow& r : rows)
        out << format_double(r.factor) << ',' << format_double(r.relative) << ',' << format_double(r.mean_distortion)
            << ',' << format_double(r.sd_distortion) << ',' << (r.heuristic ? 1 : 0) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// sampling experiment
// ---------------------------------------------------------------------------

std::vector<SampleCell> cmd_sample_experiment(std::size_t n_points, double extent, unsigned repeats,
                                              const LayoutConfig& base) {
    if (n_points < 3) throw InputError("the sampling experiment needs at least 3 points");
    if (repeats == 0) throw InputError("repeats must be at least 1");
    std::vector<SampleCell> cells;
    for (GeometryKind source : all_geometries) {
        std::array<std::vector<double>, 3> dist;
        for (unsigned r = 0; r < repeats; ++r) {
            const Embedding pts = sample_uniform({source, 1.0}, n_points, extent, base.seed + r);
            const DistanceMatrix dm = pairwise_distances(pts);
            for (std::size_t t = 0; t < all_geometries.size(); ++t) {
                LayoutConfig cfg = base;
                cfg.geometry = {all_geometries[t], 1.0};
                cfg.dilation = DilationMode::none;
                cfg.seed = base.seed + r;
                dist[t].push_back(distortion(sgd_layout(dm, cfg).embedding, dm));
            }
        }
        for (std::size_t t = 0; t < all_geometries.size(); ++t) {
            const MeanSd s = mean_sd(dist[t]);
            cells.push_back({source, all_geometries[t], s.mean, s.sd});
        }
    }
    return cells;
}

std::string sample_csv(std::span<const SampleCell> cells) {
    std::ostringstream out;
    out << "source,target,mean_distortion,sd_distortion\n";
    for (const SampleCell& c : cells)
        out << to_string(c.source) << ',' << to_string(c.target) << ',' << format_double(c.mean_distortion) << ','
            << format_double(c.sd_distortion) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// cities
// ---------------------------------------------------------------------------

DistanceMatrix synthetic_cities(std::size_t n, std::uint64_t seed, double radius_km) {
    if (n < 2) throw InputError("need at least two cities");
    if (!(radius_km > 0.0)) throw InputError("radius must be positive");
    const Embedding pts = sample_uniform(Geometry::spherical(), n, 1.0, seed);
    DistanceMatrix dm(n);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back((i < 10 ? "city0" : "city") + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) dm.set(i, j, radius_km * pts.distance(i, j));
    }
    dm.set_labels(std::move(labels));
    return dm;
}

CitiesOutcome cmd_cities(const DistanceMatrix& dm, const LayoutConfig& base, const std::optional<fs::path>& out_dir,
                         const DilationSpec& dilation) {
    dm.validate();
    LayoutConfig cfg = base;
    cfg.geometry = geometry_like(base, GeometryKind::spherical);

    CitiesOutcome out;
    out.result = run_layout(dm, cfg, dilation);
    cfg.dilation = dilation.mode;
    out.result.embedding.labels = dm.labels();
    const QualityReport q = evaluate(out.result, dm, cfg.weights);
    out.distortion = q.distortion;
    if (!out_dir) return out;

    fs::create_directories(*out_dir);
    auto emit = [&](const std::string& file, std::string_view text) {
        const fs::path p = *out_dir / file;
        write_file(p, text);
        out.written.push_back(p);
    };
    const LayoutRecord record{out.result.embedding, q.stress, q.distortion, out.result.applied_dilation, cfg};
    emit("layout.json", to_json(record).dump(2) + "\n");
    const ReportRow row{"cities", "spherical", dm.size(), q.distortion, 0.0, q.stress, q.runtime_seconds,
                        out.result.applied_dilation, std::nullopt};
    emit("report.csv", report_csv(std::span(&row, 1)));

    // Views centered on the layout's mean direction, then turned by thirds.
    double x = 0.0, y = 0.0, z = 0.0;
    for (const Coord& c : out.result.embedding.coords) {
        x += std::cos(c[0]) * std::cos(c[1]);
        y += std::cos(c[0]) * std::sin(c[1]);
        z += std::sin(c[0]);
    }
    const double len = std::hypot(x, y, z);
    const SphericalPoint mean = len > 1e-9 ? SphericalPoint{std::asin(z / len), std::atan2(y, x)} : SphericalPoint{};

    Graph g(dm.size());
    g.set_labels(dm.labels());
    for (int k = 0; k < 3; ++k) {
        RenderOptions opts;
        opts.projection = {ProjectionKind::orthographic,
                           normalized(SphericalPoint{mean.phi, mean.lambda + k * 2.0 * std::numbers::pi / 3.0})};
        opts.labels = true;
        emit("view_" + std::to_string(120 * k) + ".svg", render_svg(out.result.embedding, g, opts));
    }
    return out;
}

} // namespace smds
