#pragma once

#include <smds/embedder.hpp>
#include <smds/geometry.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smds {

/// Shortest decimal form that parses back to the same double.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] nlohmann::json to_json(const LayoutConfig& cfg);
/// Missing keys keep their defaults. Throws InputError on bad values.
[[nodiscard]] LayoutConfig config_from_json(const nlohmann::json& j);

struct LayoutRecord {
    Embedding embedding;
    double final_stress = 0.0;
    double distortion = 0.0;
    double dilation_factor = 1.0;
    LayoutConfig config{};
};

/// {geometry, radius, coords, labels, final_stress, distortion,
///  dilation_factor, seed, config}
[[nodiscard]] nlohmann::json to_json(const LayoutRecord& record);
/// Throws ParseError on malformed JSON, InputError on bad content.
[[nodiscard]] LayoutRecord layout_from_json(std::string_view text);

/// "epoch,stress,elapsed_seconds", epoch 0 being the initial layout.
[[nodiscard]] std::string trace_csv(const OptTrace& trace);

struct ReportRow {
    std::string graph;
    std::string geometry;
    std::size_t n = 0;
    double mean_distortion = 0.0;
    double sd_distortion = 0.0;
    double mean_stress = 0.0;
    double runtime_s = 0.0;
    double dilation = 1.0;
    std::optional<std::string> error; // failed rows carry the diagnostic
};

/// Columns graph, geometry, n, mean_distortion, sd_distortion, mean_stress,
/// runtime_s, dilation. A failed row has geometry "error: <message>" and
/// empty numeric fields.
[[nodiscard]] std::string report_csv(std::span<const ReportRow> rows);
[[nodiscard]] nlohmann::json report_json(std::span<const ReportRow> rows);

/// RFC 4180 quoting when the field needs it.
[[nodiscard]] std::string csv_field(std::string_view text);

} // namespace smds
