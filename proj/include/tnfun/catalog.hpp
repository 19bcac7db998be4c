#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnfun/constructors.hpp"
#include "tnfun/errors.hpp"
#include "tnfun/function_handle.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/quadrature.hpp"

namespace tnfun {

struct CatalogEntry {
    std::string name;
    std::map<std::string, double> params;
    FunctionHandle handle;
    std::optional<LevyTriple> triple;
    std::string notes;
};

namespace detail {

// Li_p(s) by its defining series, |s| < 1; s real negative makes it
// alternating with geometric tail.
inline double polylog_series(int p, double s) {
    double acc = 0.0, term = s;
    for (int k = 1; k < 200000; ++k) {
        const double add = term / std::pow(static_cast<double>(k), p);
        acc += add;
        if (std::abs(add) < 1e-17 * (1.0 + std::abs(acc))) break;
        term *= s;
    }
    return acc;
}

// Li_p(z) = z/Gamma(p) ∫_0^∞ t^{p-1}/(e^t - z) dt, valid off [1, ∞).
template <class Z>
Z polylog_integral(int p, Z z) {
    const double gamma_p = std::tgamma(static_cast<double>(p));
    const Z integral = integrate_to_infinity(
        [&](double t) {
            return std::pow(t, p - 1) / (std::exp(t) - z);
        },
        0.0, 1e-11);
    return z * integral / gamma_p;
}

inline double polylog_real(int p, double s) {
    if (p == 1) return -std::log1p(-s);
    if (s > -1.0) return polylog_series(p, s);
    return polylog_integral(p, s);
}

inline std::complex<double> polylog_cplx(int p, std::complex<double> z) {
    if (p == 1) return -std::log(1.0 - z);
    return polylog_integral(p, z);
}

}  // namespace detail

// Family "power":  c^a - (c - s)^a,  0 < a < 1, c >= 0.
inline CatalogEntry catalog_power(double alpha, double c) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ArgumentError("power family: alpha must lie in (0,1)");
    if (!(c >= 0.0)) throw ArgumentError("power family: c must be >= 0");
    CatalogEntry e;
    e.name = "power";
    e.params = {{"alpha", alpha}, {"c", c}};
    e.notes = "fractional power; Levy density alpha/Gamma(1-alpha) u^{-1-alpha}"
              ", exponentially damped for c > 0";
    const double head = c > 0.0 ? std::pow(c, alpha) : 0.0;
    e.handle = make_handle(
        1,
        [alpha, c, head](std::span<const double> s) {
            return head - std::pow(c - s[0], alpha);
        },
        "power");
    e.handle.eval_complex = [alpha, c, head](
                                std::span<const std::complex<double>> z) {
        return head - std::pow(c - z[0], std::complex<double>(alpha));
    };
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::stable(alpha, c);
    e.triple = std::move(t);
    return e;
}

// Family "log":  log b - log(b - s),  b >= 1.
inline CatalogEntry catalog_log(double b) {
    if (!(b >= 1.0)) throw ArgumentError("log family: b must be >= 1");
    CatalogEntry e;
    e.name = "log";
    e.params = {{"b", b}};
    e.notes = "logarithmic family; Levy density e^{-b u}/u";
    e.handle = make_handle(
        1,
        [b](std::span<const double> s) {
            return std::log(b) - std::log(b - s[0]);
        },
        "log");
    e.handle.eval_complex = [b](std::span<const std::complex<double>> z) {
        return std::log(b) - std::log(b - z[0]);
    };
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::exp_over_u(b);
    e.triple = std::move(t);
    return e;
}

// Family "arch":  arcosh b - arcosh(b - s),  b >= 1. Handle only.
inline CatalogEntry catalog_arch(double b) {
    if (!(b >= 1.0)) throw ArgumentError("arch family: b must be >= 1");
    CatalogEntry e;
    e.name = "arch";
    e.params = {{"b", b}};
    e.notes = "inverse hyperbolic cosine family; no closed Levy density here";
    e.handle = make_handle(
        1,
        [b](std::span<const double> s) {
            return std::acosh(b) - std::acosh(b - s[0]);
        },
        "arch");
    e.handle.eval_complex = [b](std::span<const std::complex<double>> z) {
        return std::acosh(std::complex<double>(b)) - std::acosh(b - z[0]);
    };
    return e;
}

// Li_p, p >= 1. Series inside the unit interval, integral representation
// outside; the tail-integral recursion route is cross-checked at build time.
inline CatalogEntry catalog_polylog(int p, bool cross_check = true) {
    if (p < 1) throw ArgumentError("polylog order must be >= 1");
    CatalogEntry e;
    e.name = "polylog";
    e.params = {{"p", static_cast<double>(p)}};
    e.notes = "polylogarithm Li_p; Li_1 shares the log family's Levy density";
    e.handle = make_handle(
        1,
        [p](std::span<const double> s) { return detail::polylog_real(p, s[0]); },
        "Li_" + std::to_string(p));
    e.handle.eval_complex = [p](std::span<const std::complex<double>> z) {
        return detail::polylog_cplx(p, z[0]);
    };
    e.handle.eval_noise = p == 1 ? 0.0 : 1e-10;
    if (p == 1) {
        LevyTriple t;
        t.dim = 1;
        t.c1 = {0.0};
        t.measure = MeasureRepr::exp_over_u(1.0);
        e.triple = std::move(t);
    }
    if (cross_check && p >= 2) {
        // recursion route Li_p = ∫_s^0 Li_{p-1}(t)(-1/t) dt
        CatalogEntry prev = catalog_polylog(p - 1, false);
        FunctionHandle rec =
            tail_integral(prev.handle, WeightSpec::neg_inv_t(), 1e-9);
        for (double s : {-0.5, -2.0}) {
            const double a = e.handle({s});
            const double b = rec({s});
            if (std::abs(a - b) > 1e-6)
                throw ConstructionError(
                    "polylog route cross-check failed at s=" +
                    std::to_string(s));
        }
    }
    return e;
}

// Two-variable member from the divided-difference lift of the log family.
inline CatalogEntry catalog_example2(double b) {
    if (!(b >= 1.0)) throw ArgumentError("example2: b must be >= 1");
    CatalogEntry e;
    e.name = "example2";
    e.params = {{"b", b}};
    e.notes = "divided-difference lift of the log family";

    // log((b-s2)/(b-s1))/d written via log1p so the quotient stays accurate
    // near the diagonal
    auto closed = [b](double s1, double s2) {
        const double a = b - s1, d = s1 - s2;
        const double r = d / a;
        if (std::abs(r) < 1e-8)
            return (1.0 - r * (0.5 - r / 3.0)) / a - 1.0 / b;
        return std::log1p(r) / d - 1.0 / b;
    };
    e.handle = make_handle(
        2,
        [closed](std::span<const double> s) { return closed(s[0], s[1]); },
        "example2");
    e.handle.eval_complex = [b](std::span<const std::complex<double>> z) {
        const std::complex<double> a = b - z[0], d = z[0] - z[1];
        const std::complex<double> r = d / a;
        if (std::abs(r) < 1e-8)
            return (1.0 - r * (0.5 - r / 3.0)) / a - 1.0 / b;
        return std::log(1.0 + r) / d - 1.0 / b;
    };

    // build through the lift and cross-check the two routes
    LevyTriple base;
    base.dim = 1;
    base.c1 = {0.0};
    base.measure = MeasureRepr::exp_over_u(b);
    LiftResult lift = divided_difference_lift(base);
    const double pts[3][2] = {{-1.0, -2.0}, {-0.5, -0.5}, {-3.0, -0.25}};
    for (const auto& p : pts) {
        const double got = lift.handle({p[0], p[1]});
        const double want = closed(p[0], p[1]);
        if (std::abs(got - want) > 1e-6)
            throw ConstructionError("example2 lift cross-check failed");
    }
    return e;
}

inline CatalogEntry catalog_get(const std::string& name,
                                const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback,
                   bool required) -> double {
        auto it = params.find(key);
        if (it != params.end()) return it->second;
        if (required)
            throw ArgumentError("catalog entry '" + name +
                                "' needs parameter '" + key + "'");
        return fallback;
    };
    if (name == "power")
        return catalog_power(get("alpha", 0.0, true), get("c", 0.0, false));
    if (name == "log") return catalog_log(get("b", 1.0, false));
    if (name == "arch") return catalog_arch(get("b", 1.0, false));
    if (name == "polylog" || name == "Li")
        return catalog_polylog(static_cast<int>(get("p", 0.0, true)));
    if (name == "example2") return catalog_example2(get("b", 1.0, false));
    throw ArgumentError("unknown catalog entry '" + name + "'");
}

// The members exercised by the membership and agreement suites.
inline std::vector<CatalogEntry> catalog_standard_entries() {
    std::vector<CatalogEntry> out;
    out.push_back(catalog_power(0.3, 0.0));
    out.push_back(catalog_power(0.5, 0.0));
    out.push_back(catalog_power(0.7, 0.0));
    out.push_back(catalog_power(0.5, 1.0));
    out.push_back(catalog_log(1.0));
    out.push_back(catalog_log(2.0));
    out.push_back(catalog_arch(1.0));
    out.push_back(catalog_arch(2.0));
    for (int p = 1; p <= 4; ++p) out.push_back(catalog_polylog(p));
    out.push_back(catalog_example2(2.0));
    return out;
}

inline std::vector<std::string> catalog_names() {
    return {"power", "log", "arch", "polylog", "example2"};
}

}  // namespace tnfun
