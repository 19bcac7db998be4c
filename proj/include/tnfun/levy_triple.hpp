#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "tnfun/errors.hpp"
#include "tnfun/measure.hpp"
#include "tnfun/quadrature.hpp"

namespace tnfun {

// Default absolute quadrature tolerances.
inline double default_tol(int dim) { return dim == 1 ? 1e-9 : 1e-7; }

inline constexpr double kDefaultDelta = 1.0;

// (c0, c1, mu) data of the integral representation
//   psi(s) = c0 + c1·s + ∫ (e^{s·u} - 1) dmu(u).
// Immutable after construction; all operations on it are pure.
struct LevyTriple {
    int dim = 1;
    double c0 = 0.0;
    std::vector<double> c1;
    MeasureRepr measure;

    static LevyTriple drift(std::vector<double> slope) {
        LevyTriple t;
        t.dim = static_cast<int>(slope.size());
        t.c1 = std::move(slope);
        return t;
    }
};

struct ValidationReport {
    bool structural_ok = false;
    bool integrability_ok = false;
    bool pass = false;
    std::vector<double> coord_moments;  // ∫_{[0,delta)^n\{0}} u_j dmu
    double tail_mass = 0.0;             // mu(R_+^n \ [0,delta)^n)
    std::string message;
};

namespace detail {

inline void check_structure(const LevyTriple& t) {
    if (t.dim < 1) throw StructuralError("dim must be a positive integer");
    if (t.c0 > 0.0) throw StructuralError("c0 must be <= 0");
    if (static_cast<int>(t.c1.size()) != t.dim)
        throw StructuralError("c1 length must equal dim");
    for (double v : t.c1)
        if (v < 0.0) throw StructuralError("c1 components must be >= 0");
    t.measure.check_structure(t.dim);
}

// Dyadic-shell decay probe for gridded measures: if the near-zero
// first-moment contributions per shell fail to decay toward the origin,
// the grid is approximating a non-integrable density.
inline bool grid_moment_decays(const MeasureRepr& m, int dim, double delta) {
    if (m.kind == MeasureRepr::Kind::Sum) {
        for (std::size_t i = 0; i < m.parts.size(); ++i)
            if (m.coefs[i] > 0.0 &&
                !grid_moment_decays(m.parts[i], dim, delta))
                return false;
        return true;
    }
    if (m.kind != MeasureRepr::Kind::Grid) return true;
    std::vector<double> shell;  // shell k: |u|_inf in [delta 2^{-k-1}, delta 2^{-k})
    for (const auto& g : m.grid) {
        double norm = 0.0;
        for (double x : g.u) norm = std::max(norm, x);
        if (norm <= 0.0 || norm >= delta) continue;
        const int k = static_cast<int>(std::floor(std::log2(delta / norm)));
        if (static_cast<int>(shell.size()) <= k) shell.resize(k + 1, 0.0);
        double usum = 0.0;
        for (double x : g.u) usum += x;
        shell[k] += g.density * g.quad_w * usum;
    }
    std::vector<double> nonempty;
    for (double c : shell)
        if (c > 0.0) nonempty.push_back(c);
    if (nonempty.size() < 6) return true;
    // compare block sums so partially filled edge shells cannot mislead:
    // the innermost third must carry clearly less first moment than the
    // middle third, otherwise ∫ u dmu is not converging at 0
    const std::size_t n = nonempty.size();
    const std::size_t third = n / 3;
    double inner = 0.0, middle = 0.0;
    for (std::size_t k = n - third; k < n; ++k) inner += nonempty[k];
    for (std::size_t k = n - 2 * third; k < n - third; ++k)
        middle += nonempty[k];
    return inner < 0.7 * middle;
}

inline void require_valid(const LevyTriple& t, double delta = kDefaultDelta) {
    check_structure(t);
    for (int j = 0; j < t.dim; ++j) {
        const double mj = t.measure.coord_moment_below(t.dim, j, delta);
        if (!std::isfinite(mj))
            throw ValidationError("coordinate moment diverges near 0");
    }
    if (!std::isfinite(t.measure.mass_above(t.dim, delta)))
        throw ValidationError("measure mass away from 0 is infinite");
    if (!grid_moment_decays(t.measure, t.dim, delta))
        throw ValidationError("grid moment fails to decay near 0");
}

inline void check_domain(const LevyTriple& t, std::span<const double> s) {
    if (static_cast<int>(s.size()) != t.dim)
        throw ArgumentError("domain point dimension mismatch");
    for (double v : s)
        if (!(v < 0.0))
            throw ArgumentError("domain points must be strictly negative");
}

}  // namespace detail

inline ValidationReport validate_triple(const LevyTriple& t,
                                        double delta = kDefaultDelta) {
    if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
    ValidationReport r;
    try {
        detail::check_structure(t);
        r.structural_ok = true;
    } catch (const StructuralError& e) {
        r.message = e.what();
        return r;
    }
    r.integrability_ok = true;
    for (int j = 0; j < t.dim; ++j) {
        const double mj = t.measure.coord_moment_below(t.dim, j, delta);
        r.coord_moments.push_back(mj);
        if (!std::isfinite(mj)) r.integrability_ok = false;
    }
    r.tail_mass = t.measure.mass_above(t.dim, delta);
    if (!std::isfinite(r.tail_mass)) r.integrability_ok = false;
    if (!detail::grid_moment_decays(t.measure, t.dim, delta)) {
        r.integrability_ok = false;
        r.message = "near-zero first moment grows under grid refinement";
    }
    r.pass = r.structural_ok && r.integrability_ok;
    return r;
}

// psi(s) = c0 + c1·s + ∫ (e^{s·u} - 1) dmu, s strictly negative.
inline double evaluate_real(const LevyTriple& t, std::span<const double> s,
                            double tol = 0.0) {
    detail::require_valid(t);
    detail::check_domain(t, s);
    if (tol <= 0.0) tol = default_tol(t.dim);
    double v = t.c0;
    for (int j = 0; j < t.dim; ++j) v += t.c1[j] * s[j];
    if (t.measure.is_zero()) return v;
    v += t.measure.integrate(
        t.dim,
        [&](std::span<const double> u) {
            double dot = 0.0;
            for (int j = 0; j < t.dim; ++j) dot += s[j] * u[j];
            return expm1_stable(dot);
        },
        kDefaultDelta, tol);
    return v;
}

inline double evaluate_real(const LevyTriple& t,
                            std::initializer_list<double> s,
                            double tol = 0.0) {
    return evaluate_real(t, std::span<const double>(s.begin(), s.size()), tol);
}

// Holomorphic extension, Re z_j < 0. For real z this reduces to
// evaluate_real through the same drift + measure decomposition.
inline std::complex<double> evaluate_complex(
    const LevyTriple& t, std::span<const std::complex<double>> z,
    double tol = 0.0) {
    detail::require_valid(t);
    std::vector<double> re(t.dim);
    bool real_slice = true;
    for (int j = 0; j < t.dim; ++j) {
        re[j] = z[j].real();
        if (z[j].imag() != 0.0) real_slice = false;
    }
    detail::check_domain(t, re);
    if (real_slice) return {evaluate_real(t, re, tol), 0.0};
    if (tol <= 0.0) tol = default_tol(t.dim);
    std::complex<double> v{t.c0, 0.0};
    for (int j = 0; j < t.dim; ++j) v += t.c1[j] * z[j];
    if (t.measure.is_zero()) return v;
    v += t.measure.integrate(
        t.dim,
        [&](std::span<const double> u) {
            std::complex<double> dot{};
            for (int j = 0; j < t.dim; ++j) dot += z[j] * u[j];
            return expm1_stable(dot);
        },
        kDefaultDelta, tol);
    return v;
}

// ∂psi/∂s_j = c1_j + ∫ u_j e^{s·u} dmu(u); all components nonnegative.
inline std::vector<double> gradient(const LevyTriple& t,
                                    std::span<const double> s,
                                    double tol = 0.0) {
    detail::require_valid(t);
    detail::check_domain(t, s);
    if (tol <= 0.0) tol = default_tol(t.dim);
    std::vector<double> g(t.c1.begin(), t.c1.end());
    if (t.measure.is_zero()) return g;
    for (int j = 0; j < t.dim; ++j) {
        g[j] += t.measure.integrate(
            t.dim,
            [&](std::span<const double> u) {
                double dot = 0.0;
                for (int k = 0; k < t.dim; ++k) dot += s[k] * u[k];
                return u[j] * std::exp(dot);
            },
            kDefaultDelta, tol);
    }
    return g;
}

// Triple of s ↦ psi(s-c) - psi(-c): measure damped by e^{-c·u}, same
// drift, and c0' = 0 (the shifted function vanishes at -0).
inline LevyTriple shift_normalize(const LevyTriple& t,
                                  std::span<const double> c) {
    detail::require_valid(t);
    if (static_cast<int>(c.size()) != t.dim)
        throw ArgumentError("shift vector dimension mismatch");
    for (double v : c)
        if (!(v > 0.0)) throw ArgumentError("shift must be strictly positive");

    LevyTriple out;
    out.dim = t.dim;
    out.c0 = 0.0;
    out.c1 = t.c1;
    out.measure = t.measure.damped(c);

    // pointwise cross-check at three sample points
    const double probes[3] = {-0.5, -1.0, -2.0};
    std::vector<double> s(t.dim), sc(t.dim), mc(t.dim);
    for (double p : probes) {
        for (int j = 0; j < t.dim; ++j) {
            s[j] = p;
            sc[j] = p - c[j];
            mc[j] = -c[j];
        }
        const double lhs = evaluate_real(out, s);
        const double rhs = evaluate_real(t, sc) - evaluate_real(t, mc);
        if (std::abs(lhs - rhs) > 1e-6 * (1.0 + std::abs(rhs)))
            throw ConstructionError("shift_normalize cross-check failed");
    }
    return out;
}

inline LevyTriple shift_normalize(const LevyTriple& t,
                                  std::initializer_list<double> c) {
    return shift_normalize(t, std::span<const double>(c.begin(), c.size()));
}

}  // namespace tnfun
