// smds: spherical / Euclidean / hyperbolic MDS layouts from the command line.
//
// Exit codes: 0 success, 1 usage, 2 input error, 3 numerical failure.

#include <smds/error.hpp>
#include <smds/harness.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace smds;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_input = 2;
constexpr int exit_numerical = 3;

struct ConfigFlags {
    std::string geometry = "spherical";
    std::string dilation;
    std::string schedule = "piecewise";
    std::string weights = "invsq";
    double lr_cap = 0.1;
    std::size_t max_epochs = 300;
    double eps = 1e-7;
    std::uint64_t seed = 0;
    double initial_radius = 0.0;

    // Sweep and sample fix the dilation themselves.
    void add_to(CLI::App& app, bool with_geometry, bool with_dilation = true) {
        if (with_geometry)
            app.add_option("--geometry", geometry, "spherical | euclidean | hyperbolic")->capture_default_str();
        if (with_dilation)
            app.add_option("--dilation", dilation,
                           "none | heuristic | optimize-radius | factor=A (default: heuristic on the sphere, none "
                           "elsewhere)");
        app.add_option("--schedule", schedule, "fixed | piecewise | frac-t | frac-sqrt-t")->capture_default_str();
        app.add_option("--lr-cap", lr_cap, "learning-rate cap")->capture_default_str();
        app.add_option("--max-epochs", max_epochs)->capture_default_str();
        app.add_option("--eps", eps, "stop when |stress change| falls below this")->capture_default_str();
        app.add_option("--weights", weights, "invsq | binary")->capture_default_str();
        app.add_option("--seed", seed)->capture_default_str();
        app.add_option("--initial-radius", initial_radius, "starting radius for optimize-radius (0: max(d)/pi)");
    }

    LayoutConfig config() const {
        LayoutConfig cfg;
        cfg.geometry = {parse_geometry_kind(geometry), 1.0};
        cfg.schedule.kind = parse_schedule_kind(schedule);
        cfg.weights = parse_weight_policy(weights);
        cfg.lr_cap = lr_cap;
        cfg.max_epochs = max_epochs;
        cfg.convergence_eps = eps;
        cfg.seed = seed;
        cfg.initial_radius = initial_radius;
        cfg.validate();
        return cfg;
    }

    std::optional<DilationSpec> dilation_spec() const {
        if (dilation.empty()) return std::nullopt;
        return DilationSpec::parse(dilation);
    }
};

struct SourceFlags {
    std::string input;
    std::string generate;
    unsigned subdivide = 0;

    void add_to(CLI::App& app) {
        auto* in = app.add_option("--input", input, "graph file (.mtx, edge list) or distance matrix (.csv)");
        auto* gen = app.add_option("--generate", generate, "generator, e.g. icosahedron, cycle:20, grid:17, cube/4");
        in->excludes(gen);
        app.add_option("--subdivide", subdivide, "rounds of edge subdivision")->capture_default_str();
    }

    GraphSource source() const {
        if (input.empty() && generate.empty()) throw CLI::RequiredError("--input or --generate");
        GraphSource s = input.empty() ? GraphSource::generated(generate) : GraphSource::file(input);
        s.subdivide = subdivide;
        return s;
    }
};

struct RenderFlags {
    std::string projection = "ortho";
    std::vector<double> center; // degrees
    double width = 800.0;
    double vertex_radius = 3.0;
    std::size_t edge_segments = 16;
    double hidden_opacity = 0.15;
    bool labels = false;

    void add_to(CLI::App& app) {
        app.add_option("--projection", projection, "ortho | stereo | mercator | equal-earth")->capture_default_str();
        app.add_option("--center", center, "view center as latitude,longitude in degrees")
            ->delimiter(',')
            ->expected(2);
        app.add_option("--width", width)->capture_default_str();
        app.add_option("--vertex-radius", vertex_radius)->capture_default_str();
        app.add_option("--edge-segments", edge_segments)->capture_default_str();
        app.add_option("--hidden-opacity", hidden_opacity, "opacity of the far hemisphere; 0 omits it")
            ->capture_default_str();
        app.add_flag("--labels", labels, "draw vertex labels");
    }

    RenderOptions options() const {
        RenderOptions o;
        o.projection.kind = parse_projection_kind(projection);
        if (!center.empty()) {
            constexpr double deg = std::numbers::pi / 180.0;
            o.projection.center = normalized(SphericalPoint{center[0] * deg, center[1] * deg});
        }
        o.width = width;
        o.vertex_radius = vertex_radius;
        o.edge_segments = edge_segments;
        o.hidden_opacity = hidden_opacity;
        o.labels = labels;
        return o;
    }
};

void print_written(const std::vector<fs::path>& files) {
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multidimensional scaling on the sphere, the plane and the hyperbolic plane"};
    app.require_subcommand(1);

    // layout
    auto* layout = app.add_subcommand("layout", "lay out one graph and write layout.json, trace.csv, report.csv");
    SourceFlags layout_src;
    ConfigFlags layout_cfg;
    RenderFlags layout_render;
    std::string layout_out = ".";
    std::string optimizer = "sgd";
    std::optional<std::string> svg;
    layout_src.add_to(*layout);
    layout_cfg.add_to(*layout, true);
    layout_render.add_to(*layout);
    layout->add_option("--optimizer", optimizer, "sgd | gd")->capture_default_str();
    layout->add_option("--svg", svg, "also write layout.svg, optionally naming the projection")
        ->expected(0, 1)
        ->default_str("");
    layout->add_option("--out", layout_out, "output directory")->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "compare the three geometries over several graphs");
    std::vector<std::string> cmp_inputs, cmp_generators;
    unsigned cmp_subdivide = 0;
    unsigned cmp_repeats = 5;
    std::string cmp_out;
    ConfigFlags cmp_cfg;
    auto* cmp_in = compare->add_option("--input", cmp_inputs, "graph files");
    auto* cmp_gen = compare->add_option("--generate", cmp_generators, "generators");
    compare->add_option("--subdivide", cmp_subdivide, "rounds of edge subdivision for every graph");
    compare->add_option("--repeats", cmp_repeats)->capture_default_str();
    compare->add_option("--out", cmp_out, "directory for report.csv and report.json");
    cmp_cfg.add_to(*compare, false);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "distortion of spherical layouts across dilation factors");
    SourceFlags sweep_src;
    ConfigFlags sweep_cfg;
    std::vector<double> factors;
    std::size_t sweep_points = 20;
    unsigned sweep_repeats = 1;
    std::string sweep_out;
    sweep_src.add_to(*sweep);
    sweep_cfg.add_to(*sweep, false, false);
    sweep->add_option("--factors", factors, "explicit factors (default: geometric over 0.25x..4x the heuristic)")
        ->delimiter(',');
    sweep->add_option("--points", sweep_points, "number of default factors")->capture_default_str();
    sweep->add_option("--repeats", sweep_repeats)->capture_default_str();
    sweep->add_option("--out", sweep_out, "directory for sweep.csv");

    // sample
    auto* sample = app.add_subcommand("sample", "embed points sampled from each geometry with each geometry");
    ConfigFlags sample_cfg;
    std::size_t sample_points = 50;
    double extent = 3.0;
    unsigned sample_repeats = 5;
    std::string sample_out;
    sample_cfg.add_to(*sample, false, false);
    sample->add_option("--points", sample_points)->capture_default_str();
    sample->add_option("--extent", extent, "disk radius for planar and hyperbolic samples")->capture_default_str();
    sample->add_option("--repeats", sample_repeats)->capture_default_str();
    sample->add_option("--out", sample_out, "directory for sample.csv");

    // cities
    auto* cities = app.add_subcommand("cities", "recover a sphere from a labeled distance table");
    std::string cities_csv;
    std::size_t synthetic = 0;
    std::string cities_out;
    ConfigFlags cities_cfg;
    auto* cities_in = cities->add_option("--input", cities_csv, "CSV distance table (km)");
    auto* cities_syn = cities->add_option("--synthetic", synthetic, "generate this many random cities instead");
    cities_in->excludes(cities_syn);
    cities->add_option("--out", cities_out, "output directory");
    cities_cfg.add_to(*cities, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (layout->parsed()) {
            RunManifest m;
            m.source = layout_src.source();
            m.config = layout_cfg.config();
            m.dilation = layout_cfg.dilation_spec();
            if (optimizer == "gd") m.optimizer = Optimizer::gd;
            else if (optimizer != "sgd") throw InputError("unknown optimizer '" + optimizer + "'");
            m.out_dir = layout_out;
            const bool want_svg = layout->count("--svg") > 0 || layout->count("--projection") > 0;
            if (want_svg) {
                RenderFlags r = layout_render;
                if (svg && !svg->empty()) r.projection = *svg;
                m.svg = r.options();
            }
            const LayoutOutcome out = cmd_layout(m);
            std::cout << "graph " << out.graph << ": n=" << out.n << '\n'
                      << "distortion " << format_double(out.quality.distortion) << ", stress "
                      << format_double(out.quality.stress) << ", epochs " << out.result.trace.epochs << ", "
                      << format_double(out.result.trace.seconds) << " s\n";
            print_written(out.written);
        } else if (compare->parsed()) {
            std::vector<GraphSource> sources;
            std::size_t next_in = 0, next_gen = 0;
            // Keep the command-line order of mixed --input and --generate.
            for (const CLI::Option* opt : compare->parse_order()) {
                if (opt == cmp_in && next_in < cmp_inputs.size())
                    sources.push_back(GraphSource::file(cmp_inputs[next_in++]));
                else if (opt == cmp_gen && next_gen < cmp_generators.size())
                    sources.push_back(GraphSource::generated(cmp_generators[next_gen++]));
            }
            while (next_gen < cmp_generators.size()) sources.push_back(GraphSource::generated(cmp_generators[next_gen++]));
            while (next_in < cmp_inputs.size()) sources.push_back(GraphSource::file(cmp_inputs[next_in++]));
            if (sources.empty()) sources = default_benchmarks();
            for (auto& s : sources) s.subdivide = cmp_subdivide;
            const auto rows = cmd_compare(sources, cmp_cfg.config(), cmp_cfg.dilation_spec(), cmp_repeats);
            const std::string csv = report_csv(rows);
            std::cout << csv;
            if (!cmp_out.empty()) {
                fs::create_directories(cmp_out);
                write_file(fs::path(cmp_out) / "report.csv", csv);
                write_file(fs::path(cmp_out) / "report.json", report_json(rows).dump(2) + "\n");
            }
        } else if (sweep->parsed()) {
            const LoadedInput in = load_input(sweep_src.source());
            if (factors.empty()) factors = sweep_factors(in.dm, 0.25, 4.0, sweep_points);
            const auto rows = cmd_dilation_sweep(in.dm, factors, sweep_cfg.config(), sweep_repeats);
            const std::string csv = sweep_csv(rows);
            std::cout << csv;
            if (!sweep_out.empty()) {
                fs::create_directories(sweep_out);
                write_file(fs::path(sweep_out) / "sweep.csv", csv);
            }
        } else if (sample->parsed()) {
            const auto cells = cmd_sample_experiment(sample_points, extent, sample_repeats, sample_cfg.config());
            const std::string csv = sample_csv(cells);
            std::cout << csv;
            if (!sample_out.empty()) {
                fs::create_directories(sample_out);
                write_file(fs::path(sample_out) / "sample.csv", csv);
            }
        } else if (cities->parsed()) {
            DistanceMatrix dm;
            if (!cities_csv.empty()) {
                dm = load_input(GraphSource::file(cities_csv)).dm;
            } else if (synthetic > 0) {
                dm = synthetic_cities(synthetic, cities_cfg.seed);
            } else {
                throw CLI::RequiredError("--input or --synthetic");
            }
            std::optional<fs::path> dir;
            if (!cities_out.empty()) dir = cities_out;
            const CitiesOutcome out =
                cmd_cities(dm, cities_cfg.config(), dir,
                           cities_cfg.dilation_spec().value_or(DilationSpec::default_for(GeometryKind::spherical)));
            if (dir && synthetic > 0) {
                write_file(*dir / "distances.csv", to_csv(dm));
                std::cout << "wrote " << (*dir / "distances.csv").string() << '\n';
            }
            std::cout << "cities: n=" << dm.size() << ", distortion " << format_double(out.distortion) << '\n';
            print_written(out.written);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_usage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const smds::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_input;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_input;
    }
    return 0;
}
