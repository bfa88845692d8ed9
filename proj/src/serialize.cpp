#include <smds/serialize.hpp>

#include <smds/error.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace smds {

using nlohmann::json;

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad value for '") + key + "': " + e.what());
    }
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

json to_json(const LayoutConfig& cfg) {
    return {
        {"geometry", std::string(to_string(cfg.geometry.kind))},
        {"radius", cfg.geometry.radius},
        {"schedule",
         {{"kind", std::string(to_string(cfg.schedule.kind))},
          {"fixed_eta", cfg.schedule.fixed_eta},
          {"decay", cfg.schedule.decay},
          {"switch_threshold", cfg.schedule.switch_threshold}}},
        {"lr_cap", cfg.lr_cap},
        {"max_epochs", cfg.max_epochs},
        {"convergence_eps", cfg.convergence_eps},
        {"weights", std::string(to_string(cfg.weights))},
        {"seed", cfg.seed},
        {"dilation", std::string(to_string(cfg.dilation))},
        {"initial_radius", cfg.initial_radius},
    };
}

LayoutConfig config_from_json(const json& j) {
    if (!j.is_object()) throw InputError("layout config must be a JSON object");
    LayoutConfig cfg;
    std::string name;
    if (j.contains("geometry")) {
        read(j, "geometry", name);
        cfg.geometry.kind = parse_geometry_kind(name);
    }
    read(j, "radius", cfg.geometry.radius);
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        if (s.contains("kind")) {
            read(s, "kind", name);
            cfg.schedule.kind = parse_schedule_kind(name);
        }
        read(s, "fixed_eta", cfg.schedule.fixed_eta);
        read(s, "decay", cfg.schedule.decay);
        read(s, "switch_threshold", cfg.schedule.switch_threshold);
    }
    read(j, "lr_cap", cfg.lr_cap);
    read(j, "max_epochs", cfg.max_epochs);
    read(j, "convergence_eps", cfg.convergence_eps);
    if (j.contains("weights")) {
        read(j, "weights", name);
        cfg.weights = parse_weight_policy(name);
    }
    read(j, "seed", cfg.seed);
    if (j.contains("dilation")) {
        read(j, "dilation", name);
        cfg.dilation = parse_dilation_mode(name);
    }
    read(j, "initial_radius", cfg.initial_radius);
    cfg.validate();
    return cfg;
}

json to_json(const LayoutRecord& record) {
    const Embedding& emb = record.embedding;
    json coords = json::array();
    for (const Coord& c : emb.coords) coords.push_back({c[0], c[1]});
    return {
        {"geometry", std::string(to_string(emb.geometry.kind))},
        {"radius", emb.geometry.radius},
        {"coords", std::move(coords)},
        {"labels", emb.labels},
        {"final_stress", record.final_stress},
        {"distortion", record.distortion},
        {"dilation_factor", record.dilation_factor},
        {"seed", record.config.seed},
        {"config", to_json(record.config)},
    };
}

LayoutRecord layout_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, e.what());
    }
    if (!j.is_object()) throw InputError("layout JSON must be an object");
    LayoutRecord record;
    std::string name = "spherical";
    read(j, "geometry", name);
    record.embedding.geometry.kind = parse_geometry_kind(name);
    read(j, "radius", record.embedding.geometry.radius);
    if (!j.contains("coords") || !j.at("coords").is_array()) throw InputError("layout JSON has no coords array");
    for (const json& c : j.at("coords")) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
            throw InputError("every coordinate must be a pair of numbers");
        record.embedding.coords.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    read(j, "labels", record.embedding.labels);
    if (!record.embedding.labels.empty() && record.embedding.labels.size() != record.embedding.coords.size())
        throw InputError("labels and coords differ in length");
    read(j, "final_stress", record.final_stress);
    read(j, "distortion", record.distortion);
    read(j, "dilation_factor", record.dilation_factor);
    if (j.contains("config")) record.config = config_from_json(j.at("config"));
    read(j, "seed", record.config.seed);
    return record;
}

std::string trace_csv(const OptTrace& trace) {
    std::ostringstream out;
    out << "epoch,stress,elapsed_seconds\n";
    out << "0," << format_double(trace.initial_stress) << ",0\n";
    for (std::size_t t = 0; t < trace.stress.size(); ++t)
        out << t + 1 << ',' << format_double(trace.stress[t]) << ',' << format_double(trace.elapsed_seconds[t]) << '\n';
    return out.str();
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string report_csv(std::span<const ReportRow> rows) {
    std::ostringstream out;
    out << "graph,geometry,n,mean_distortion,sd_distortion,mean_stress,runtime_s,dilation\n";
    for (const ReportRow& r : rows) {
        out << csv_field(r.graph) << ',';
        if (r.error) {
            out << csv_field("error: " + *r.error) << ",,,,,,\n";
            continue;
        }
        out << csv_field(r.geometry) << ',' << r.n << ',' << format_double(r.mean_distortion) << ','
            << format_double(r.sd_distortion) << ',' << format_double(r.mean_stress) << ','
            << format_double(r.runtime_s) << ',' << format_double(r.dilation) << '\n';
    }
    return out.str();
}

json report_json(std::span<const ReportRow> rows) {
    json out = json::array();
    for (const ReportRow& r : rows) {
        if (r.error) {
            out.push_back({{"graph", r.graph}, {"error", *r.error}});
            continue;
        }
        out.push_back({{"graph", r.graph},
                       {"geometry", r.geometry},
                       {"n", r.n},
                       {"mean_distortion", r.mean_distortion},
                       {"sd_distortion", r.sd_distortion},
                       {"mean_stress", r.mean_stress},
                       {"runtime_s", r.runtime_s},
                       {"dilation", r.dilation}});
    }
    return out;
}

} // namespace smds
