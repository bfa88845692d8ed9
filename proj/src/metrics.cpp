#include <smds/metrics.hpp>

#include <smds/error.hpp>

#include <cmath>

namespace smds {

double distortion(const Embedding& emb, const DistanceMatrix& dm) {
    const std::size_t n = dm.size();
    if (emb.size() != n) throw InputError("embedding and distance matrix sizes differ");
    if (n < 2) throw InputError("distortion needs at least two points");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = dm(i, j);
            if (d == 0.0)
                throw InputError("distortion is undefined for zero target distance between " + std::to_string(i) +
                                 " and " + std::to_string(j));
            total += std::abs(emb.distance(i, j) - d) / d;
        }
    }
    return total / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

QualityReport evaluate(const LayoutResult& result, const DistanceMatrix& dm, WeightPolicy weights) {
    const DistanceMatrix targets = result.applied_dilation == 1.0 ? dm : dm.scaled(result.applied_dilation);
    QualityReport report;
    report.stress = stress(result.embedding, targets, weights);
    report.distortion = distortion(result.embedding, targets);
    report.geometry = result.embedding.geometry.kind;
    report.dilation = targets.dilation();
    report.n = dm.size();
    report.runtime_seconds = result.trace.seconds;
    return report;
}

std::vector<GeometrySummary> compare_geometries(const DistanceMatrix& dm, std::span<const LayoutConfig> configs,
                                                unsigned repeats) {
    if (repeats == 0) throw InputError("repeats must be at least 1");
    std::vector<GeometrySummary> out;
    for (const LayoutConfig& base : configs) {
        GeometrySummary summary;
        summary.geometry = base.geometry.kind;
        summary.n = dm.size();
        for (unsigned r = 0; r < repeats; ++r) {
            LayoutConfig cfg = base;
            cfg.seed = base.seed + r;
            summary.runs.push_back(evaluate(sgd_layout(dm, cfg), dm, cfg.weights));
        }
        const double k = static_cast<double>(repeats);
        for (const auto& run : summary.runs) {
            summary.mean_distortion += run.distortion / k;
            summary.mean_stress += run.stress / k;
            summary.mean_runtime_seconds += run.runtime_seconds / k;
        }
        if (repeats > 1) {
            for (const auto& run : summary.runs) {
                summary.sd_distortion += std::pow(run.distortion - summary.mean_distortion, 2) / (k - 1);
                summary.sd_stress += std::pow(run.stress - summary.mean_stress, 2) / (k - 1);
            }
            summary.sd_distortion = std::sqrt(summary.sd_distortion);
            summary.sd_stress = std::sqrt(summary.sd_stress);
        }
        summary.dilation = summary.runs.front().dilation;
        out.push_back(std::move(summary));
    }
    return out;
}

} // namespace smds
