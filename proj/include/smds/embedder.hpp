#pragma once

#include <smds/geometry.hpp>
#include <smds/graph.hpp>
#include <smds/schedule.hpp>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace smds {

enum class WeightPolicy { inverse_square, binary };

enum class DilationMode { none, heuristic, optimize_radius };

[[nodiscard]] std::string_view to_string(WeightPolicy policy) noexcept;
[[nodiscard]] std::string_view to_string(DilationMode mode) noexcept;
/// "invsq" or "binary". Throws InputError.
[[nodiscard]] WeightPolicy parse_weight_policy(std::string_view name);
/// "none", "heuristic" or "optimize-radius". Throws InputError.
[[nodiscard]] DilationMode parse_dilation_mode(std::string_view name);

struct LayoutConfig {
    Geometry geometry = Geometry::spherical();
    Schedule schedule{};
    double lr_cap = 0.1;
    std::size_t max_epochs = 300;
    double convergence_eps = 1e-7;
    WeightPolicy weights = WeightPolicy::inverse_square;
    std::uint64_t seed = 0;
    DilationMode dilation = DilationMode::none;
    // Starting radius for optimize_radius; 0 picks max(d) / pi.
    double initial_radius = 0.0;

    /// Throws InputError on a non-positive cap, threshold or epoch count.
    void validate() const;
};

enum class Termination { converged, max_epochs };

struct OptTrace {
    double initial_stress = 0.0;
    std::vector<double> stress;          // after each epoch
    std::vector<double> elapsed_seconds; // since the start of the run, per epoch
    std::size_t epochs = 0;
    Termination terminated_by = Termination::max_epochs;
    double seconds = 0.0;

    [[nodiscard]] double final_stress() const noexcept { return stress.empty() ? initial_stress : stress.back(); }
};

struct LayoutResult {
    Embedding embedding;
    OptTrace trace;
    // Factor the optimizer applied to the input targets (1 unless the
    // heuristic dilation ran). Quality is measured against
    // dm.scaled(applied_dilation).
    double applied_dilation = 1.0;
};

/// sum_{i<j} w_ij (delta(X_i, X_j) - d_ij)^2 with the embedding's own metric.
/// Throws InputError on size mismatch.
[[nodiscard]] double stress(const Embedding& emb, const DistanceMatrix& dm, WeightPolicy weights);

/// pi / max(d). Throws InputError for an all-zero matrix.
[[nodiscard]] double heuristic_dilation_factor(const DistanceMatrix& dm);
/// Scales dm so that its largest entry is exactly pi.
[[nodiscard]] DistanceMatrix dilate_heuristic(const DistanceMatrix& dm);

struct StressGradient {
    std::vector<Coord> coords;
    double radius = 0.0; // d stress / d R, spherical only
};

/// Exact gradient of stress() with respect to every coordinate and, for the
/// sphere, the radius. Singular pairs contribute nothing.
[[nodiscard]] StressGradient stress_gradient(const Embedding& emb, const DistanceMatrix& dm, WeightPolicy weights);

/// Random start: uniform on the sphere, or a disk of radius max(d)/2 in the
/// plane and in the hyperbolic plane.
[[nodiscard]] Embedding initial_embedding(Geometry geometry, std::size_t n, double max_target, std::uint64_t seed);

/// Stochastic gradient descent with random reshuffling: every epoch visits
/// each pair once in a fresh order and moves both endpoints against the
/// gradient of that pair's stress term. Delegates to
/// sgd_layout_with_radius when cfg.dilation is optimize_radius.
[[nodiscard]] LayoutResult sgd_layout(const DistanceMatrix& dm, const LayoutConfig& cfg);

/// One step along the full stress gradient per epoch. Same schedules and
/// stopping rule as sgd_layout.
[[nodiscard]] LayoutResult gd_layout(const DistanceMatrix& dm, const LayoutConfig& cfg);

/// Spherical SGD that also fits the sphere radius. The returned embedding's
/// geometry carries the fitted radius.
[[nodiscard]] LayoutResult sgd_layout_with_radius(const DistanceMatrix& dm, const LayoutConfig& cfg);

} // namespace smds
