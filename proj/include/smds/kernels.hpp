#pragma once

// Inline per-pair kernels shared by the optimizer and the metrics. Each
// kernel works on raw Coord pairs in unit scale; callers apply the spherical
// radius themselves.

#include <smds/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smds::kernel {

/// Below this value of sin(delta) (sphere), sinh(delta) (hyperbolic) or
/// delta (plane) a pair is treated as singular.
inline constexpr double singular_tolerance = 1e-10;

// arccos without library calls or branches, so loops over it vectorize.
// Absolute error below 1e-15 on [-1, 1]. Small |x| uses the asin series
// directly; large |x| uses acos(a) = 2 asin(sqrt((1 - a) / 2)).
inline double fast_acos(double x) noexcept {
    constexpr double pi = std::numbers::pi;
    const double a = std::abs(x);
    const bool big = a > 0.5;
    const double z = big ? (1.0 - a) * 0.5 : a * a;
    const double r = big ? std::sqrt(z) : a;
    double p = 0.015415634513090692;
    p = p * z + 0.007420461808664163;
    p = p * z + 0.00476921794400764;
    p = p * z + 0.0117908183332125;
    p = p * z + 0.01098733285888957;
    p = p * z + 0.014058993710010535;
    p = p * z + 0.017342863996593735;
    p = p * z + 0.02237281471345488;
    p = p * z + 0.030381918166000017;
    p = p * z + 0.044642857725449105;
    p = p * z + 0.0749999999941039;
    p = p * z + 0.16666666666668256;
    const double asin_r = r + r * z * p;
    const double acos_a = big ? 2.0 * asin_r : 0.5 * pi - asin_r;
    return x < 0.0 ? pi - acos_a : acos_a;
}

struct PairEval {
    double distance;
    Coord grad_first;  // d distance / d first point
    Coord grad_second; // d distance / d second point
};

inline void wrap_angle(double& a) noexcept {
    constexpr double tau = 2.0 * std::numbers::pi;
    if (a >= 0.0 && a < tau) return;
    a = std::fmod(a, tau);
    if (a < 0.0) a += tau;
    if (a >= tau) a = 0.0;
}

struct Sphere {
    static double distance(const Coord& p, const Coord& q) noexcept {
        double c = std::sin(p[0]) * std::sin(q[0]) + std::cos(p[0]) * std::cos(q[0]) * std::cos(p[1] - q[1]);
        return std::acos(std::clamp(c, -1.0, 1.0));
    }

    static bool evaluate(const Coord& p, const Coord& q, PairEval& out) noexcept {
        const double sp1 = std::sin(p[0]), cp1 = std::cos(p[0]);
        const double sp2 = std::sin(q[0]), cp2 = std::cos(q[0]);
        const double dl = p[1] - q[1];
        const double sd = std::sin(dl), cd = std::cos(dl);
        const double c = std::clamp(sp1 * sp2 + cp1 * cp2 * cd, -1.0, 1.0);
        const double s = std::sqrt(1.0 - c * c);
        if (!(s > singular_tolerance)) return false;
        out.distance = std::acos(c);
        out.grad_first = {-(cp1 * sp2 - sp1 * cp2 * cd) / s, cp1 * cp2 * sd / s};
        out.grad_second = {-(cp2 * sp1 - sp2 * cp1 * cd) / s, -out.grad_first[1]};
        return true;
    }

    // Riemannian step: the metric is dphi^2 + cos^2 phi dlambda^2, so the raw
    // lambda gradient stalls near the poles.
    static void precondition(const Coord& at, Coord& step) noexcept {
        const double c = std::cos(at[0]);
        step[1] /= std::max(c * c, 1e-12);
    }

    // Cached per-point trig for the hot loop.
    struct Trig {
        double sin_phi, cos_phi, sin_lambda, cos_lambda;
    };

    static Trig trig(const Coord& p) noexcept {
        return {std::sin(p[0]), std::cos(p[0]), std::sin(p[1]), std::cos(p[1])};
    }

    static void precondition(const Trig& at, Coord& step) noexcept {
        step[1] /= std::max(at.cos_phi * at.cos_phi, 1e-12);
    }

    static bool evaluate_cached(const Trig& a, const Trig& b, PairEval& out) noexcept {
        const double cd = a.cos_lambda * b.cos_lambda + a.sin_lambda * b.sin_lambda;
        const double sd = a.sin_lambda * b.cos_lambda - a.cos_lambda * b.sin_lambda;
        const double c = std::clamp(a.sin_phi * b.sin_phi + a.cos_phi * b.cos_phi * cd, -1.0, 1.0);
        const double s = std::sqrt(1.0 - c * c);
        if (!(s > singular_tolerance)) return false;
        out.distance = fast_acos(c);
        const double inv = 1.0 / s;
        out.grad_first = {-(a.cos_phi * b.sin_phi - a.sin_phi * b.cos_phi * cd) * inv,
                          a.cos_phi * b.cos_phi * sd * inv};
        out.grad_second = {-(b.cos_phi * a.sin_phi - b.sin_phi * a.cos_phi * cd) * inv, -out.grad_first[1]};
        return true;
    }

    // p -= step, keeping t in sync. Steps up to 0.8 rad rotate the cached
    // sin/cos by a Taylor series (truncation error below 1e-16); larger ones
    // recompute.
    static void move(Coord& p, Trig& t, const Coord& step) noexcept {
        constexpr double small = 0.8;
        if (std::abs(step[0]) > small || std::abs(step[1]) > small) {
            p[0] -= step[0];
            p[1] -= step[1];
            normalize(p);
            t = trig(p);
            return;
        }
        rotate(t.sin_phi, t.cos_phi, -step[0]);
        rotate(t.sin_lambda, t.cos_lambda, -step[1]);
        p[0] -= step[0];
        p[1] -= step[1];
        constexpr double pi = std::numbers::pi;
        if (p[0] > pi / 2 || p[0] < -pi / 2) {
            p[0] = (p[0] > 0 ? pi : -pi) - p[0];
            p[1] += pi;
            t.cos_phi = -t.cos_phi;
            t.sin_lambda = -t.sin_lambda;
            t.cos_lambda = -t.cos_lambda;
        }
        wrap_angle(p[1]);
    }

    static void rotate(double& s, double& c, double a) noexcept {
        const double a2 = a * a;
        double sa = -1.0 / 1307674368000.0;
        sa = sa * a2 + 1.0 / 6227020800.0;
        sa = sa * a2 - 1.0 / 39916800.0;
        sa = sa * a2 + 1.0 / 362880.0;
        sa = sa * a2 - 1.0 / 5040.0;
        sa = sa * a2 + 1.0 / 120.0;
        sa = sa * a2 - 1.0 / 6.0;
        sa = a + a * a2 * sa;
        double ca = 1.0 / 20922789888000.0;
        ca = ca * a2 - 1.0 / 87178291200.0;
        ca = ca * a2 + 1.0 / 479001600.0;
        ca = ca * a2 - 1.0 / 3628800.0;
        ca = ca * a2 + 1.0 / 40320.0;
        ca = ca * a2 - 1.0 / 720.0;
        ca = ca * a2 + 1.0 / 24.0;
        ca = ca * a2 - 0.5;
        ca = 1.0 + a2 * ca;
        const double ns = s * ca + c * sa;
        c = c * ca - s * sa;
        s = ns;
    }

    // Reflect latitude at the poles, wrap longitude.
    static void normalize(Coord& p) noexcept {
        constexpr double pi = std::numbers::pi;
        double phi = p[0];
        if (phi < -pi || phi > pi) phi = std::remainder(phi, 2.0 * pi);
        if (phi > pi / 2) {
            phi = pi - phi;
            p[1] += pi;
        } else if (phi < -pi / 2) {
            phi = -pi - phi;
            p[1] += pi;
        }
        p[0] = phi;
        wrap_angle(p[1]);
    }
};

struct Plane {
    static double distance(const Coord& p, const Coord& q) noexcept {
        return std::hypot(p[0] - q[0], p[1] - q[1]);
    }

    static bool evaluate(const Coord& p, const Coord& q, PairEval& out) noexcept {
        const double dx = p[0] - q[0], dy = p[1] - q[1];
        const double d = std::hypot(dx, dy);
        if (!(d > singular_tolerance)) return false;
        out.distance = d;
        out.grad_first = {dx / d, dy / d};
        out.grad_second = {-dx / d, -dy / d};
        return true;
    }

    static void precondition(const Coord&, Coord&) noexcept {}
    static void normalize(Coord&) noexcept {}
};

struct Hyperbolic {
    // cosh(d) written as cosh(r1 - r2) + (1 - cos dtheta) sinh r1 sinh r2,
    // which avoids cancellation between large cosh products.
    static double cosh_distance(const Coord& p, const Coord& q) noexcept {
        const double h = std::sin(0.5 * (p[1] - q[1]));
        return std::cosh(p[0] - q[0]) + 2.0 * h * h * std::sinh(p[0]) * std::sinh(q[0]);
    }

    static double distance(const Coord& p, const Coord& q) noexcept {
        return std::acosh(std::max(1.0, cosh_distance(p, q)));
    }

    static bool evaluate(const Coord& p, const Coord& q, PairEval& out) noexcept {
        const double sh1 = std::sinh(p[0]), ch1 = std::cosh(p[0]);
        const double sh2 = std::sinh(q[0]), ch2 = std::cosh(q[0]);
        const double dt = p[1] - q[1];
        const double h = std::sin(0.5 * dt);
        const double one_minus_cos = 2.0 * h * h;
        const double c = std::max(1.0, std::cosh(p[0] - q[0]) + one_minus_cos * sh1 * sh2);
        const double s = std::sqrt((c - 1.0) * (c + 1.0));
        if (!(s > singular_tolerance)) return false;
        out.distance = std::acosh(c);
        const double sdiff = std::sinh(p[0] - q[0]);
        out.grad_first = {(sdiff + one_minus_cos * ch1 * sh2) / s, sh1 * sh2 * std::sin(dt) / s};
        out.grad_second = {(-sdiff + one_minus_cos * ch2 * sh1) / s, -out.grad_first[1]};
        return true;
    }

    // Riemannian step: the metric is dr^2 + sinh^2 r dtheta^2, so a raw theta
    // gradient overshoots by sinh^2 r far from the origin.
    static void precondition(const Coord& at, Coord& step) noexcept {
        const double sh = std::sinh(at[0]);
        step[1] /= std::max(sh * sh, 1e-12);
    }

    static void normalize(Coord& p) noexcept {
        if (p[0] < 0.0) {
            p[0] = -p[0];
            p[1] += std::numbers::pi;
        }
        if (p[0] == 0.0) {
            p[1] = 0.0;
            return;
        }
        wrap_angle(p[1]);
    }
};

/// Calls f with the kernel type matching kind.
template <class F>
decltype(auto) dispatch(GeometryKind kind, F&& f) {
    switch (kind) {
    case GeometryKind::euclidean: return f(Plane{});
    case GeometryKind::hyperbolic: return f(Hyperbolic{});
    case GeometryKind::spherical: break;
    }
    return f(Sphere{});
}

} // namespace smds::kernel
