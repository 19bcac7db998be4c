#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>

#include "tnfun/errors.hpp"

namespace tnfun {

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
inline constexpr double kGL16Node[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
inline constexpr double kGL16Weight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

}  // namespace detail

// Gauss-Legendre 16-point rule on [a, b]. Works for real- or complex-valued f.
template <class F>
auto gauss16(F&& f, double a, double b) -> decltype(f(a)) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    decltype(f(a)) acc{};
    for (int i = 0; i < 8; ++i) {
        const double dx = half * detail::kGL16Node[i];
        acc += detail::kGL16Weight[i] * (f(mid + dx) + f(mid - dx));
    }
    return half * acc;
}

// Gauss-Legendre nodes and weights mapped to [a, b], appended to out arrays.
template <class NodeSink>
void gauss16_nodes(double a, double b, NodeSink&& sink) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < 8; ++i) {
        const double dx = half * detail::kGL16Node[i];
        const double w = half * detail::kGL16Weight[i];
        sink(mid + dx, w);
        sink(mid - dx, w);
    }
}

// ∫_0^∞ f(u) du for integrands that are integrable at 0 and decay at ∞.
// Dyadic panels shrink toward 0 and grow toward ∞ from the split point;
// each direction stops after two consecutive panels contribute < tol/8.
template <class F>
auto integrate_half_line(F&& f, double split, double tol)
    -> decltype(f(split)) {
    using V = decltype(f(split));
    const double panel_tol = tol / 8.0;
    V total{};

    // toward zero
    int quiet = 0;
    double hi = split;
    for (int k = 0; k < 1400 && hi > 1e-290; ++k) {
        const double lo = 0.5 * hi;
        const V p = gauss16(f, lo, hi);
        total += p;
        quiet = (std::abs(p) < panel_tol) ? quiet + 1 : 0;
        if (quiet >= 2) break;
        hi = lo;
    }

    // toward infinity
    quiet = 0;
    double lo = split;
    bool converged = false;
    for (int k = 0; k < 1400; ++k) {
        const double up = 2.0 * lo;
        const V p = gauss16(f, lo, up);
        total += p;
        quiet = (std::abs(p) < panel_tol) ? quiet + 1 : 0;
        if (quiet >= 2) {
            converged = true;
            break;
        }
        lo = up;
    }
    if (!converged)
        throw QuadratureError("half-line quadrature: tail did not settle",
                              panel_tol);
    return total;
}

// ∫_0^b f(u) du with dyadic panels shrinking toward the (integrable)
// endpoint at 0.
template <class F>
auto integrate_zero_to(F&& f, double b, double tol) -> decltype(f(b)) {
    using V = decltype(f(b));
    const double panel_tol = tol / 8.0;
    V total{};
    int quiet = 0;
    double hi = b;
    for (int k = 0; k < 1400 && hi > 1e-290; ++k) {
        const double lo = 0.5 * hi;
        const V p = gauss16(f, lo, hi);
        total += p;
        quiet = (std::abs(p) < panel_tol) ? quiet + 1 : 0;
        if (quiet >= 2) break;
        hi = lo;
    }
    return total;
}

// ∫_a^∞ f(u) du with dyadic panels [a 2^k, a 2^{k+1}]; suits integrands
// steep near a small positive cutoff.
template <class F>
auto integrate_dyadic_up(F&& f, double a, double tol) -> decltype(f(a)) {
    using V = decltype(f(a));
    const double panel_tol = tol / 8.0;
    V total{};
    double lo = a;
    int quiet = 0;
    for (int k = 0; k < 1400; ++k) {
        const double up = 2.0 * lo;
        const V p = gauss16(f, lo, up);
        total += p;
        quiet = (std::abs(p) < panel_tol) ? quiet + 1 : 0;
        if (quiet >= 2) return total;
        lo = up;
    }
    throw QuadratureError("dyadic quadrature: tail did not settle", panel_tol);
}

// ∫_a^∞ f(t) dt with geometrically doubling panel widths starting at 1.
template <class F>
auto integrate_to_infinity(F&& f, double a, double tol) -> decltype(f(a)) {
    using V = decltype(f(a));
    const double panel_tol = tol / 8.0;
    V total{};
    double lo = a, width = 1.0;
    int quiet = 0;
    for (int k = 0; k < 600; ++k) {
        const double up = lo + width;
        const V p = gauss16(f, lo, up);
        total += p;
        quiet = (std::abs(p) < panel_tol) ? quiet + 1 : 0;
        if (quiet >= 2) return total;
        lo = up;
        width *= 2.0;
    }
    throw QuadratureError("semi-infinite quadrature: tail did not settle",
                          panel_tol);
}

// e^z - 1 without cancellation for small |z|.
inline double expm1_stable(double x) { return std::expm1(x); }

inline std::complex<double> expm1_stable(std::complex<double> z) {
    if (std::abs(z) < 1e-4) {
        // z + z^2/2 + z^3/6 + z^4/24, relative error below 1e-20 here
        return z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0))));
    }
    return std::exp(z) - 1.0;
}

// (e^x - 1)/x, continuous through x = 0.
inline double expm1_over(double x) {
    if (std::abs(x) < 1e-8) return 1.0 + 0.5 * x;
    return std::expm1(x) / x;
}

// Exponential integral E1(x) = ∫_x^∞ e^{-t}/t dt, x > 0.
inline double expint_e1(double x) {
    return integrate_to_infinity([](double t) { return std::exp(-t) / t; }, x,
                                 1e-14);
}

}  // namespace tnfun
