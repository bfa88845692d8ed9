#include <smds/embedder.hpp>

#include <smds/error.hpp>
#include <smds/kernels.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <numbers>
#include <random>

namespace smds {

namespace {

constexpr double radius_floor = 1e-3;
constexpr double radius_rate = 0.01; // radius step relative to the vertex step
constexpr double perturbation = 1e-6;

using Clock = std::chrono::steady_clock;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double weight_of(double d, WeightPolicy policy) {
    return policy == WeightPolicy::binary ? 1.0 : 1.0 / (d * d);
}

// Kept at 16 bytes so the per-epoch shuffle moves as little as possible; the
// weight is recomputed from d.
struct Term {
    std::uint32_t i;
    std::uint32_t j;
    double d;
};

std::vector<Term> make_terms(const DistanceMatrix& dm) {
    std::vector<Term> terms;
    const std::size_t n = dm.size();
    terms.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            terms.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), dm(i, j)});
    return terms;
}

void check_inputs(const DistanceMatrix& dm, const LayoutConfig& cfg) {
    cfg.validate();
    if (dm.size() < 2) throw InputError("layout needs at least two points");
    dm.validate();
    if (cfg.weights == WeightPolicy::inverse_square) {
        for (std::size_t i = 0; i < dm.size(); ++i)
            for (std::size_t j = i + 1; j < dm.size(); ++j)
                if (dm(i, j) == 0.0)
                    throw InputError("zero target distance between distinct points " + std::to_string(i) + " and " +
                                     std::to_string(j) + " has no inverse-square weight");
    }
    if (!(dm.max_value() > 0.0)) throw InputError("all target distances are zero");
}

// Unit-scale geodesic distance of every pair, summed into the stress with the
// given radius. The sphere path caches per-point trig.
template <class K>
double stress_impl(const std::vector<Coord>& x, double radius, const DistanceMatrix& dm, WeightPolicy policy) {
    const std::size_t n = x.size();
    double total = 0.0;
    if constexpr (std::is_same_v<K, kernel::Sphere>) {
        // Struct-of-arrays trig so the inner loop vectorizes.
        std::vector<double> sp(n), cp(n), sl(n), cl(n);
        for (std::size_t i = 0; i < n; ++i) {
            sp[i] = std::sin(x[i][0]);
            cp[i] = std::cos(x[i][0]);
            sl[i] = std::sin(x[i][1]);
            cl[i] = std::cos(x[i][1]);
        }
        const bool binary = policy == WeightPolicy::binary;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = dm.row(i);
            double row_total = 0.0;
#pragma omp simd reduction(+ : row_total)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double c = sp[i] * sp[j] + cp[i] * cp[j] * (cl[i] * cl[j] + sl[i] * sl[j]);
                const double delta = radius * kernel::fast_acos(std::clamp(c, -1.0, 1.0));
                const double d = row[j];
                const double inv_sq = 1.0 / (d * d); // unused and possibly inf for binary weights
                const double w = binary ? 1.0 : inv_sq;
                row_total += w * (delta - d) * (delta - d);
            }
            total += row_total;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double delta = K::distance(x[i], x[j]);
                const double d = dm(i, j);
                total += weight_of(d, policy) * (delta - d) * (delta - d);
            }
        }
    }
    return total;
}

double stress_dispatch(GeometryKind kind, const std::vector<Coord>& x, double radius, const DistanceMatrix& dm,
                       WeightPolicy policy) {
    return kernel::dispatch(kind, [&](auto k) { return stress_impl<decltype(k)>(x, radius, dm, policy); });
}

template <class K>
void perturb(Coord& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double a = angle(rng);
    p[0] += perturbation * std::cos(a);
    p[1] += perturbation * std::sin(a);
    K::normalize(p);
}

// Shared epoch loop. step(eta) runs one epoch of updates in place.
template <class Step>
OptTrace optimize(const LayoutConfig& cfg, Step&& step, auto&& current_stress) {
    OptTrace trace;
    const auto start = Clock::now();
    trace.initial_stress = current_stress();
    double previous = trace.initial_stress;
    for (std::size_t t = 0; t < cfg.max_epochs; ++t) {
        step(schedule_eta(cfg.schedule, cfg.lr_cap, t));
        const double s = current_stress();
        if (!std::isfinite(s)) throw NumericalError("stress diverged at epoch " + std::to_string(t));
        trace.stress.push_back(s);
        trace.elapsed_seconds.push_back(std::chrono::duration<double>(Clock::now() - start).count());
        trace.epochs = t + 1;
        if (std::abs(s - previous) < cfg.convergence_eps) {
            trace.terminated_by = Termination::converged;
            break;
        }
        previous = s;
    }
    trace.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return trace;
}

// Per-pair SGD. The pair's term w (R theta - d)^2 is handled in angular units
// as w R^2 (theta - d / R)^2. The step is eta relative to the smallest
// weight, min(eta w / w_min, cap): every pair starts at the cap and the
// schedule means the same thing at every target scale and radius.
template <class K>
LayoutResult run_sgd(const DistanceMatrix& dm, const LayoutConfig& cfg, double radius, bool fit_radius,
                     double applied_dilation) {
    const std::size_t n = dm.size();
    LayoutResult result;
    result.applied_dilation = applied_dilation;
    result.embedding = initial_embedding(cfg.geometry, n, dm.max_value(), mix_seed(cfg.seed, 1));
    auto& x = result.embedding.coords;
    std::mt19937_64 rng(mix_seed(cfg.seed, 2));
    std::vector<Term> terms = make_terms(dm);
    const GeometryKind kind = cfg.geometry.kind;
    const WeightPolicy policy = cfg.weights;
    double w_min = weight_of(terms.front().d, policy);
    for (const Term& term : terms) w_min = std::min(w_min, weight_of(term.d, policy));

    // Shared per-pair update once the pair has been evaluated. Returns the
    // two raw gradient steps; callers precondition.
    auto pair_steps = [&](const Term& term, const kernel::PairEval& e, double eta, Coord& step_p, Coord& step_q) {
        const double mu = std::min(eta * weight_of(term.d, policy) / w_min, cfg.lr_cap);
        const double residual = e.distance - term.d / radius;
        const double g = 2.0 * mu * residual;
        step_p = {g * e.grad_first[0], g * e.grad_first[1]};
        step_q = {g * e.grad_second[0], g * e.grad_second[1]};
        if (fit_radius) {
            const double rel = radius_rate * mu * 2.0 * residual * e.distance;
            radius = std::max(radius_floor, radius * (1.0 - rel));
        }
    };

    std::function<void(double)> epoch;
    if constexpr (std::is_same_v<K, kernel::Sphere>) {
        std::vector<kernel::Sphere::Trig> trig(n);
        epoch = [&, trig](double eta) mutable {
            std::shuffle(terms.begin(), terms.end(), rng);
            for (std::size_t v = 0; v < n; ++v) trig[v] = kernel::Sphere::trig(x[v]);
            kernel::PairEval e{};
            Coord step_p, step_q;
            for (const Term& term : terms) {
                if (!kernel::Sphere::evaluate_cached(trig[term.i], trig[term.j], e)) {
                    perturb<K>(x[term.i], rng);
                    trig[term.i] = kernel::Sphere::trig(x[term.i]);
                    continue;
                }
                pair_steps(term, e, eta, step_p, step_q);
                kernel::Sphere::precondition(trig[term.i], step_p);
                kernel::Sphere::precondition(trig[term.j], step_q);
                kernel::Sphere::move(x[term.i], trig[term.i], step_p);
                kernel::Sphere::move(x[term.j], trig[term.j], step_q);
            }
        };
    } else {
        epoch = [&](double eta) {
            std::shuffle(terms.begin(), terms.end(), rng);
            kernel::PairEval e{};
            Coord step_p, step_q;
            for (const Term& term : terms) {
                Coord& p = x[term.i];
                Coord& q = x[term.j];
                if (!K::evaluate(p, q, e)) {
                    perturb<K>(p, rng);
                    continue;
                }
                pair_steps(term, e, eta, step_p, step_q);
                K::precondition(p, step_p);
                K::precondition(q, step_q);
                p[0] -= step_p[0];
                p[1] -= step_p[1];
                q[0] -= step_q[0];
                q[1] -= step_q[1];
                K::normalize(p);
                K::normalize(q);
            }
        };
    }
    result.trace = optimize(cfg, epoch, [&] { return stress_dispatch(kind, x, radius, dm, cfg.weights); });
    if (kind == GeometryKind::spherical) result.embedding.geometry.radius = radius;
    return result;
}

template <class K>
void accumulate_gradient(const std::vector<Coord>& x, double radius, const DistanceMatrix& dm, WeightPolicy policy,
                         StressGradient& out) {
    const std::size_t n = x.size();
    out.coords.assign(n, Coord{0.0, 0.0});
    out.radius = 0.0;
    kernel::PairEval e{};
    [[maybe_unused]] std::vector<kernel::Sphere::Trig> trig;
    if constexpr (std::is_same_v<K, kernel::Sphere>) {
        trig.resize(n);
        for (std::size_t i = 0; i < n; ++i) trig[i] = kernel::Sphere::trig(x[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool ok;
            if constexpr (std::is_same_v<K, kernel::Sphere>)
                ok = kernel::Sphere::evaluate_cached(trig[i], trig[j], e);
            else
                ok = K::evaluate(x[i], x[j], e);
            if (!ok) continue;
            const double d = dm(i, j);
            const double w = weight_of(d, policy);
            const double coef = 2.0 * w * (radius * e.distance - d);
            for (int k = 0; k < 2; ++k) {
                out.coords[i][k] += coef * radius * e.grad_first[k];
                out.coords[j][k] += coef * radius * e.grad_second[k];
            }
            out.radius += coef * e.distance;
        }
    }
}

template <class K>
LayoutResult run_gd(const DistanceMatrix& dm, const LayoutConfig& cfg, double applied_dilation) {
    const std::size_t n = dm.size();
    LayoutResult result;
    result.applied_dilation = applied_dilation;
    result.embedding = initial_embedding(cfg.geometry, n, dm.max_value(), mix_seed(cfg.seed, 1));
    auto& x = result.embedding.coords;
    const double radius = cfg.geometry.kind == GeometryKind::spherical ? cfg.geometry.radius : 1.0;
    StressGradient grad;

    // Jacobi scaling: dividing point i's gradient by 2 R^2 sum_j w_ij turns
    // it into the weighted mean of its pair residual steps, the size of one
    // stress-majorization move. eta / cap then follows the schedule's shape,
    // so the first epoch takes a full move.
    std::vector<double> scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) scale[i] += weight_of(dm(i, j), cfg.weights);
        scale[i] = 1.0 / (2.0 * radius * radius * scale[i]);
    }
    auto epoch = [&](double eta) {
        accumulate_gradient<K>(x, radius, dm, cfg.weights, grad);
        const double rel = eta / cfg.lr_cap;
        for (std::size_t i = 0; i < n; ++i) {
            Coord step{rel * scale[i] * grad.coords[i][0], rel * scale[i] * grad.coords[i][1]};
            K::precondition(x[i], step);
            x[i][0] -= step[0];
            x[i][1] -= step[1];
            K::normalize(x[i]);
        }
    };
    result.trace = optimize(cfg, epoch, [&] { return stress_dispatch(cfg.geometry.kind, x, radius, dm, cfg.weights); });
    return result;
}

} // namespace

std::string_view to_string(WeightPolicy policy) noexcept {
    return policy == WeightPolicy::binary ? "binary" : "invsq";
}

std::string_view to_string(DilationMode mode) noexcept {
    switch (mode) {
    case DilationMode::none: return "none";
    case DilationMode::heuristic: return "heuristic";
    case DilationMode::optimize_radius: return "optimize-radius";
    }
    return "none";
}

WeightPolicy parse_weight_policy(std::string_view name) {
    if (name == "invsq" || name == "inverse-square" || name == "inverse_square") return WeightPolicy::inverse_square;
    if (name == "binary") return WeightPolicy::binary;
    throw InputError("unknown weight policy '" + std::string(name) + "'");
}

DilationMode parse_dilation_mode(std::string_view name) {
    if (name == "none") return DilationMode::none;
    if (name == "heuristic") return DilationMode::heuristic;
    if (name == "optimize-radius" || name == "optimize_radius") return DilationMode::optimize_radius;
    throw InputError("unknown dilation mode '" + std::string(name) + "'");
}

void LayoutConfig::validate() const {
    if (!(lr_cap > 0.0)) throw InputError("learning-rate cap must be positive");
    if (!(convergence_eps > 0.0)) throw InputError("convergence threshold must be positive");
    if (max_epochs == 0) throw InputError("max epochs must be positive");
    if (geometry.kind == GeometryKind::spherical && !(geometry.radius > 0.0))
        throw InputError("sphere radius must be positive");
    if (initial_radius < 0.0) throw InputError("initial radius must be nonnegative");
}

double stress(const Embedding& emb, const DistanceMatrix& dm, WeightPolicy weights) {
    if (emb.size() != dm.size())
        throw InputError("embedding has " + std::to_string(emb.size()) + " points but the distance matrix has " +
                         std::to_string(dm.size()));
    const double radius = emb.geometry.kind == GeometryKind::spherical ? emb.geometry.radius : 1.0;
    return stress_dispatch(emb.geometry.kind, emb.coords, radius, dm, weights);
}

double heuristic_dilation_factor(const DistanceMatrix& dm) {
    const double m = dm.max_value();
    if (!(m > 0.0)) throw InputError("cannot dilate an all-zero distance matrix");
    return std::numbers::pi / m;
}

DistanceMatrix dilate_heuristic(const DistanceMatrix& dm) {
    const double factor = heuristic_dilation_factor(dm);
    DistanceMatrix out = dm.scaled(factor);
    // Pin the largest entry to pi exactly despite rounding in the product.
    const double m = dm.max_value();
    for (std::size_t i = 0; i < dm.size(); ++i)
        for (std::size_t j = i + 1; j < dm.size(); ++j)
            if (dm(i, j) == m) out.set(i, j, std::numbers::pi);
    return out;
}

StressGradient stress_gradient(const Embedding& emb, const DistanceMatrix& dm, WeightPolicy weights) {
    if (emb.size() != dm.size()) throw InputError("embedding and distance matrix sizes differ");
    StressGradient out;
    const bool sphere = emb.geometry.kind == GeometryKind::spherical;
    const double radius = sphere ? emb.geometry.radius : 1.0;
    kernel::dispatch(emb.geometry.kind,
                     [&](auto k) { accumulate_gradient<decltype(k)>(emb.coords, radius, dm, weights, out); });
    if (!sphere) out.radius = 0.0;
    return out;
}

Embedding initial_embedding(Geometry geometry, std::size_t n, double max_target, std::uint64_t seed) {
    const double extent = std::max(max_target / 2.0, 1e-3);
    return sample_uniform(geometry, n, extent, seed);
}

LayoutResult sgd_layout(const DistanceMatrix& dm, const LayoutConfig& cfg) {
    if (cfg.dilation == DilationMode::optimize_radius) return sgd_layout_with_radius(dm, cfg);
    check_inputs(dm, cfg);
    const double radius = cfg.geometry.kind == GeometryKind::spherical ? cfg.geometry.radius : 1.0;
    if (cfg.dilation == DilationMode::heuristic) {
        const DistanceMatrix dilated = dilate_heuristic(dm);
        const double factor = heuristic_dilation_factor(dm);
        return kernel::dispatch(cfg.geometry.kind, [&](auto k) {
            return run_sgd<decltype(k)>(dilated, cfg, radius, false, factor);
        });
    }
    return kernel::dispatch(cfg.geometry.kind,
                            [&](auto k) { return run_sgd<decltype(k)>(dm, cfg, radius, false, 1.0); });
}

LayoutResult gd_layout(const DistanceMatrix& dm, const LayoutConfig& cfg) {
    if (cfg.dilation == DilationMode::optimize_radius)
        throw InputError("radius optimization is only available with stochastic gradient descent");
    check_inputs(dm, cfg);
    if (cfg.dilation == DilationMode::heuristic) {
        const DistanceMatrix dilated = dilate_heuristic(dm);
        const double factor = heuristic_dilation_factor(dm);
        return kernel::dispatch(cfg.geometry.kind,
                                [&](auto k) { return run_gd<decltype(k)>(dilated, cfg, factor); });
    }
    return kernel::dispatch(cfg.geometry.kind, [&](auto k) { return run_gd<decltype(k)>(dm, cfg, 1.0); });
}

LayoutResult sgd_layout_with_radius(const DistanceMatrix& dm, const LayoutConfig& cfg) {
    if (cfg.geometry.kind != GeometryKind::spherical)
        throw InputError("radius optimization requires the spherical geometry");
    check_inputs(dm, cfg);
    const double start = cfg.initial_radius > 0.0 ? cfg.initial_radius : dm.max_value() / std::numbers::pi;
    return run_sgd<kernel::Sphere>(dm, cfg, std::max(start, radius_floor), true, 1.0);
}

} // namespace smds
