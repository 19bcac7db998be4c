#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tnfun/errors.hpp"
#include "tnfun/quadrature.hpp"

namespace tnfun {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
    std::vector<double> u;  // point in R_+^n \ {0}
    double w = 0.0;         // mass, > 0
};

struct GridNode {
    std::vector<double> u;
    double density = 0.0;
    double quad_w = 0.0;  // quadrature weight attached to the node
};

// A Levy measure on R_+^n \ {0}.
//
// Parametric families are one-dimensional:
//   stable     : density  alpha/Gamma(1-alpha) * u^{-1-alpha} * e^{-tilt u}
//   exp_over_u : density  e^{-rate u} / u
// `tilt` accumulates exponential damping from shift normalization; for
// exp_over_u damping folds into `rate` directly.
struct MeasureRepr {
    enum class Kind { Atoms, Grid, Parametric, Sum };

    Kind kind = Kind::Atoms;

    std::vector<Atom> atoms;
    std::vector<GridNode> grid;

    std::string family;  // "stable" | "exp_over_u"
    double alpha = 0.0;
    double rate = 0.0;
    double tilt = 0.0;

    std::vector<double> coefs;       // Sum: nonnegative scale per part
    std::vector<MeasureRepr> parts;  // Sum components

    static MeasureRepr zero() { return MeasureRepr{}; }

    static MeasureRepr from_atoms(std::vector<Atom> a) {
        MeasureRepr m;
        m.kind = Kind::Atoms;
        m.atoms = std::move(a);
        return m;
    }

    static MeasureRepr from_grid(std::vector<GridNode> g) {
        MeasureRepr m;
        m.kind = Kind::Grid;
        m.grid = std::move(g);
        return m;
    }

    static MeasureRepr stable(double alpha, double tilt = 0.0) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ArgumentError("stable family needs alpha in (0,1)");
        MeasureRepr m;
        m.kind = Kind::Parametric;
        m.family = "stable";
        m.alpha = alpha;
        m.tilt = tilt;
        return m;
    }

    static MeasureRepr exp_over_u(double rate) {
        if (!(rate > 0.0))
            throw ArgumentError("exp_over_u family needs rate > 0");
        MeasureRepr m;
        m.kind = Kind::Parametric;
        m.family = "exp_over_u";
        m.rate = rate;
        return m;
    }

    static MeasureRepr sum(std::vector<double> cs, std::vector<MeasureRepr> ps) {
        MeasureRepr m;
        m.kind = Kind::Sum;
        m.coefs = std::move(cs);
        m.parts = std::move(ps);
        return m;
    }

    bool is_zero() const {
        switch (kind) {
            case Kind::Atoms: return atoms.empty();
            case Kind::Grid: return grid.empty();
            case Kind::Parametric: return false;
            case Kind::Sum:
                for (std::size_t i = 0; i < parts.size(); ++i)
                    if (coefs[i] != 0.0 && !parts[i].is_zero()) return false;
                return true;
        }
        return true;
    }

    // Parametric density at u > 0.
    double density_at(double u) const {
        if (family == "stable") {
            const double c = alpha / std::tgamma(1.0 - alpha);
            double d = c * std::pow(u, -1.0 - alpha);
            if (tilt > 0.0) d *= std::exp(-tilt * u);
            return d;
        }
        return std::exp(-rate * u) / u;  // exp_over_u
    }

    void check_structure(int dim) const {
        switch (kind) {
            case Kind::Atoms:
                for (const auto& a : atoms) {
                    if (static_cast<int>(a.u.size()) != dim)
                        throw StructuralError("atom dimension mismatch");
                    if (!(a.w > 0.0))
                        throw StructuralError("atom weight must be positive");
                    double norm = 0.0;
                    for (double x : a.u) {
                        if (x < 0.0)
                            throw StructuralError("atom outside R_+^n");
                        norm = std::max(norm, x);
                    }
                    if (norm == 0.0)
                        throw StructuralError("atom at the origin");
                }
                break;
            case Kind::Grid:
                for (const auto& g : grid) {
                    if (static_cast<int>(g.u.size()) != dim)
                        throw StructuralError("grid node dimension mismatch");
                    if (g.density < 0.0)
                        throw StructuralError("negative grid density");
                    if (g.quad_w < 0.0)
                        throw StructuralError("negative quadrature weight");
                    double norm = 0.0;
                    for (double x : g.u) {
                        if (x < 0.0)
                            throw StructuralError("grid node outside R_+^n");
                        norm = std::max(norm, x);
                    }
                    if (norm == 0.0 && g.density * g.quad_w > 0.0)
                        throw StructuralError("grid mass at the origin");
                }
                break;
            case Kind::Parametric:
                if (dim != 1)
                    throw StructuralError(
                        "parametric families are one-dimensional");
                if (family == "stable") {
                    if (!(alpha > 0.0 && alpha < 1.0))
                        throw StructuralError("stable alpha out of (0,1)");
                } else if (family == "exp_over_u") {
                    if (!(rate > 0.0))
                        throw StructuralError("exp_over_u rate must be > 0");
                } else {
                    throw StructuralError("unknown parametric family '" +
                                          family + "'");
                }
                break;
            case Kind::Sum:
                if (coefs.size() != parts.size())
                    throw StructuralError("sum coefficient/part mismatch");
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    if (coefs[i] < 0.0)
                        throw StructuralError("negative sum coefficient");
                    parts[i].check_structure(dim);
                }
                break;
        }
    }

    // ∫ f(u) dμ(u) for integrands vanishing fast enough at 0 and ∞.
    // `f` maps span<const double> (length dim) to double or complex.
    template <class F>
    auto integrate(int dim, F&& f, double split, double tol) const
        -> decltype(f(std::span<const double>{})) {
        using V = decltype(f(std::span<const double>{}));
        V acc{};
        switch (kind) {
            case Kind::Atoms:
                for (const auto& a : atoms)
                    acc += a.w * f(std::span<const double>(a.u));
                break;
            case Kind::Grid:
                for (const auto& g : grid)
                    acc += g.density * g.quad_w *
                           f(std::span<const double>(g.u));
                break;
            case Kind::Parametric: {
                (void)dim;
                acc = integrate_half_line(
                    [&](double u) {
                        const double pt[1] = {u};
                        return f(std::span<const double>(pt, 1)) *
                               density_at(u);
                    },
                    split, tol);
                break;
            }
            case Kind::Sum:
                for (std::size_t i = 0; i < parts.size(); ++i)
                    if (coefs[i] != 0.0)
                        acc += coefs[i] *
                               parts[i].integrate(dim, f, split, tol);
                break;
        }
        return acc;
    }

    // ∫_{[0,delta)^n \ {0}} u_j dμ  (near-zero coordinate moment).
    double coord_moment_below(int dim, int j, double delta) const {
        switch (kind) {
            case Kind::Atoms: {
                double s = 0.0;
                for (const auto& a : atoms)
                    if (*std::max_element(a.u.begin(), a.u.end()) < delta)
                        s += a.w * a.u[j];
                return s;
            }
            case Kind::Grid: {
                double s = 0.0;
                for (const auto& g : grid)
                    if (*std::max_element(g.u.begin(), g.u.end()) < delta)
                        s += g.density * g.quad_w * g.u[j];
                return s;
            }
            case Kind::Parametric:
                if (family == "stable" && tilt == 0.0) {
                    const double c = alpha / std::tgamma(1.0 - alpha);
                    return c * std::pow(delta, 1.0 - alpha) / (1.0 - alpha);
                }
                if (family == "exp_over_u")
                    return (1.0 - std::exp(-rate * delta)) / rate;
                return integrate_zero_to(
                    [&](double u) { return u * density_at(u); }, delta, 1e-12);
            case Kind::Sum: {
                double s = 0.0;
                for (std::size_t i = 0; i < parts.size(); ++i)
                    s += coefs[i] *
                         parts[i].coord_moment_below(dim, j, delta);
                return s;
            }
        }
        return 0.0;
    }

    // μ(R_+^n \ [0,delta)^n)  (mass away from the origin).
    double mass_above(int dim, double delta) const {
        switch (kind) {
            case Kind::Atoms: {
                double s = 0.0;
                for (const auto& a : atoms)
                    if (*std::max_element(a.u.begin(), a.u.end()) >= delta)
                        s += a.w;
                return s;
            }
            case Kind::Grid: {
                double s = 0.0;
                for (const auto& g : grid)
                    if (*std::max_element(g.u.begin(), g.u.end()) >= delta)
                        s += g.density * g.quad_w;
                return s;
            }
            case Kind::Parametric:
                if (family == "stable" && tilt == 0.0)
                    return std::pow(delta, -alpha) /
                           std::tgamma(1.0 - alpha);
                if (family == "exp_over_u") return expint_e1(rate * delta);
                return integrate_to_infinity(
                    [&](double u) { return density_at(u); }, delta, 1e-12);
            case Kind::Sum: {
                double s = 0.0;
                for (std::size_t i = 0; i < parts.size(); ++i)
                    s += coefs[i] * parts[i].mass_above(dim, delta);
                return s;
            }
        }
        return 0.0;
    }

    // ω_j = ∫ u_j dμ over the whole support; may be infinite.
    double first_moment_total(int dim, int j) const {
        switch (kind) {
            case Kind::Atoms: {
                double s = 0.0;
                for (const auto& a : atoms) s += a.w * a.u[j];
                return s;
            }
            case Kind::Grid: {
                double s = 0.0;
                for (const auto& g : grid)
                    s += g.density * g.quad_w * g.u[j];
                return s;
            }
            case Kind::Parametric:
                if (family == "stable" && tilt == 0.0) return kInf;
                if (family == "exp_over_u") return 1.0 / rate;
                // tilted stable: ∫ u^{-alpha} c e^{-tilt u} du, finite
                return coord_moment_below(dim, j, 1.0) +
                       integrate_to_infinity(
                           [&](double u) { return u * density_at(u); }, 1.0,
                           1e-12);
            case Kind::Sum: {
                double s = 0.0;
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    const double m = parts[i].first_moment_total(dim, j);
                    if (std::isinf(m) && coefs[i] > 0.0) return kInf;
                    s += coefs[i] * m;
                }
                return s;
            }
        }
        return 0.0;
    }

    // Exponentially damp the measure by e^{-c·u} (shift normalization).
    MeasureRepr damped(std::span<const double> c) const {
        MeasureRepr m = *this;
        switch (kind) {
            case Kind::Atoms:
                for (auto& a : m.atoms) {
                    double dot = 0.0;
                    for (std::size_t j = 0; j < c.size(); ++j)
                        dot += c[j] * a.u[j];
                    a.w *= std::exp(-dot);
                }
                break;
            case Kind::Grid:
                for (auto& g : m.grid) {
                    double dot = 0.0;
                    for (std::size_t j = 0; j < c.size(); ++j)
                        dot += c[j] * g.u[j];
                    g.density *= std::exp(-dot);
                }
                break;
            case Kind::Parametric:
                if (family == "stable")
                    m.tilt += c[0];
                else
                    m.rate += c[0];
                break;
            case Kind::Sum:
                for (auto& p : m.parts) p = p.damped(c);
                break;
        }
        return m;
    }
};

// Discretize a one-dimensional measure density into atoms: Gauss nodes on
// log-spaced panels over [u_min, u_max].
inline std::vector<Atom> atomize(const MeasureRepr& m, int n_atoms,
                                 double u_min, double u_max) {
    if (m.kind != MeasureRepr::Kind::Parametric)
        throw ArgumentError("atomize expects a parametric 1-D measure");
    if (n_atoms < 16 || !(0.0 < u_min && u_min < u_max))
        throw ArgumentError("atomize: bad discretization request");
    const int panels = std::max(1, n_atoms / 16);
    const double la = std::log(u_min), lb = std::log(u_max);
    const double dl = (lb - la) / panels;
    std::vector<Atom> out;
    out.reserve(static_cast<std::size_t>(panels) * 16);
    for (int p = 0; p < panels; ++p) {
        gauss16_nodes(la + p * dl, la + (p + 1) * dl, [&](double x, double w) {
            const double u = std::exp(x);
            out.push_back(Atom{{u}, m.density_at(u) * u * w});
        });
    }
    return out;
}

}  // namespace tnfun
