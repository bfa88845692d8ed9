#pragma once

#include <smds/embedder.hpp>
#include <smds/geometry.hpp>
#include <smds/graph.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace smds {

struct QualityReport {
    double stress = 0.0;
    double distortion = 0.0;
    GeometryKind geometry = GeometryKind::spherical;
    double dilation = 1.0;
    std::size_t n = 0;
    double runtime_seconds = 0.0;
};

/// Mean relative error |delta_ij - d_ij| / d_ij over all pairs i < j.
/// Throws InputError on size mismatch, n < 2, or a zero off-diagonal target.
[[nodiscard]] double distortion(const Embedding& emb, const DistanceMatrix& dm);

/// Scores a finished layout against the targets it was fit to, i.e. dm
/// scaled by the layout's applied dilation.
[[nodiscard]] QualityReport evaluate(const LayoutResult& result, const DistanceMatrix& dm, WeightPolicy weights);

struct GeometrySummary {
    GeometryKind geometry = GeometryKind::spherical;
    std::size_t n = 0;
    double mean_distortion = 0.0;
    double sd_distortion = 0.0;
    double mean_stress = 0.0;
    double sd_stress = 0.0;
    double mean_runtime_seconds = 0.0;
    double dilation = 1.0;
    std::vector<QualityReport> runs;
};

/// Runs sgd_layout `repeats` times per config with seeds seed, seed+1, ...
/// and aggregates. One summary per config, in order.
[[nodiscard]] std::vector<GeometrySummary> compare_geometries(const DistanceMatrix& dm,
                                                              std::span<const LayoutConfig> configs,
                                                              unsigned repeats);

} // namespace smds
