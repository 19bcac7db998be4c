#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tnfun/errors.hpp"
#include "tnfun/function_handle.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/membership.hpp"
#include "tnfun/quadrature.hpp"

namespace tnfun {

// Arguments approaching -0 are clamped here; c0 is the limit psi(-0), so
// the clamp realizes the boundary limit.
inline constexpr double kZeroClamp = -1e-12;

// ---------------------------------------------------------------------------
// composition (first-slot substitution; T is an operad)

// psi1(psi2(r), s_2..s_n): arity m + n - 1. Only slot 1 is supported;
// other slots follow by permute_arguments.
inline FunctionHandle compose(const FunctionHandle& psi1,
                              const FunctionHandle& psi2, int slot = 1) {
    if (slot != 1)
        throw ArgumentError(
            "only first-slot composition is supported; permute arguments "
            "for other slots");
    const int n = psi1.arity, m = psi2.arity;

    // limit probe: psi1 must tolerate first arguments near -0
    {
        std::vector<double> probe(n, -1.0);
        probe[0] = -1e-9;
        try {
            (void)psi1.eval(probe);
        } catch (const std::exception& e) {
            throw ConstructionError(
                std::string("outer function not evaluable near -0: ") +
                e.what());
        }
    }

    FunctionHandle h;
    h.arity = m + n - 1;
    h.provenance = "compose(" + psi1.provenance + "," + psi2.provenance + ")";
    h.domain_lo = uniform_vec(h.arity, -8.0);
    h.domain_hi = uniform_vec(h.arity, -0.05);
    for (int j = 0; j < m; ++j) {
        h.domain_lo[j] = psi2.domain_lo[j];
        h.domain_hi[j] = psi2.domain_hi[j];
    }
    for (int j = 1; j < n; ++j) {
        h.domain_lo[m + j - 1] = psi1.domain_lo[j];
        h.domain_hi[m + j - 1] = psi1.domain_hi[j];
    }
    h.eval_noise = psi1.eval_noise + psi2.eval_noise;

    auto f1 = psi1.eval, f2 = psi2.eval;
    h.eval = [f1, f2, m, n](std::span<const double> x) {
        const double inner =
            std::min(f2(x.subspan(0, m)), kZeroClamp);
        std::vector<double> args(n);
        args[0] = inner;
        for (int j = 1; j < n; ++j) args[j] = x[m + j - 1];
        return f1(args);
    };
    if (psi1.has_complex() && psi2.has_complex()) {
        auto c1 = psi1.eval_complex, c2 = psi2.eval_complex;
        h.eval_complex = [c1, c2, m,
                          n](std::span<const std::complex<double>> x) {
            std::complex<double> inner =
                c2(std::span<const std::complex<double>>(x.data(), m));
            if (inner.real() > kZeroClamp)
                inner = {kZeroClamp, inner.imag()};
            std::vector<std::complex<double>> args(n);
            args[0] = inner;
            for (int j = 1; j < n; ++j) args[j] = x[m + j - 1];
            return c1(args);
        };
    }
    return h;
}

// ---------------------------------------------------------------------------
// conic combinations

inline FunctionHandle conic_combine(
    const std::vector<std::pair<double, FunctionHandle>>& terms) {
    if (terms.empty()) throw ArgumentError("conic_combine needs terms");
    const int n = terms.front().second.arity;
    bool complex_ok = true;
    double noise = 0.0;
    for (const auto& [a, f] : terms) {
        if (a < 0.0) throw ArgumentError("conic coefficients must be >= 0");
        if (f.arity != n) throw ArgumentError("mixed arities in conic sum");
        complex_ok = complex_ok && f.has_complex();
        noise += a * f.eval_noise;
    }
    FunctionHandle h;
    h.arity = n;
    h.provenance = "conic";
    h.domain_lo = terms.front().second.domain_lo;
    h.domain_hi = terms.front().second.domain_hi;
    h.eval_noise = noise;
    auto shared =
        std::make_shared<std::vector<std::pair<double, FunctionHandle>>>(terms);
    h.eval = [shared](std::span<const double> s) {
        double acc = 0.0;
        for (const auto& [a, f] : *shared)
            if (a != 0.0) acc += a * f.eval(s);
        return acc;
    };
    if (complex_ok) {
        h.eval_complex = [shared](std::span<const std::complex<double>> z) {
            std::complex<double> acc{};
            for (const auto& [a, f] : *shared)
                if (a != 0.0) acc += a * f.eval_complex(z);
            return acc;
        };
    }
    return h;
}

inline LevyTriple conic_combine(
    const std::vector<std::pair<double, LevyTriple>>& terms) {
    if (terms.empty()) throw ArgumentError("conic_combine needs terms");
    const int n = terms.front().second.dim;
    LevyTriple out;
    out.dim = n;
    out.c1.assign(n, 0.0);
    std::vector<double> coefs;
    std::vector<MeasureRepr> parts;
    for (const auto& [a, t] : terms) {
        if (a < 0.0) throw ArgumentError("conic coefficients must be >= 0");
        if (t.dim != n) throw ArgumentError("mixed dimensions in conic sum");
        detail::require_valid(t);
        out.c0 += a * t.c0;
        for (int j = 0; j < n; ++j) out.c1[j] += a * t.c1[j];
        if (!t.measure.is_zero()) {
            coefs.push_back(a);
            parts.push_back(t.measure);
        }
    }
    out.measure = parts.empty()
                      ? MeasureRepr::zero()
                      : MeasureRepr::sum(std::move(coefs), std::move(parts));
    return out;
}

// ---------------------------------------------------------------------------
// argument permutation

// result(x) = psi(x permuted by p^{-1}); i.e. slot p[i] of the result reads
// the value the original read in slot i. For the swap on a 2-ary psi,
// result(x1, x2) = psi(x2, x1).
inline FunctionHandle permute_arguments(const FunctionHandle& psi,
                                        const std::vector<int>& perm) {
    const int n = psi.arity;
    if (static_cast<int>(perm.size()) != n)
        throw ArgumentError("permutation length mismatch");
    std::vector<bool> seen(n, false);
    for (int v : perm) {
        if (v < 0 || v >= n || seen[v])
            throw ArgumentError("malformed permutation");
        seen[v] = true;
    }
    FunctionHandle h = psi;
    h.provenance = "permute(" + psi.provenance + ")";
    for (int i = 0; i < n; ++i) {
        h.domain_lo[i] = psi.domain_lo[perm[i]];
        h.domain_hi[i] = psi.domain_hi[perm[i]];
    }
    auto base = psi.eval;
    h.eval = [base, perm, n](std::span<const double> x) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = x[perm[i]];
        return base(v);
    };
    if (psi.has_complex()) {
        auto basec = psi.eval_complex;
        h.eval_complex = [basec, perm,
                          n](std::span<const std::complex<double>> x) {
            std::vector<std::complex<double>> v(n);
            for (int i = 0; i < n; ++i) v[i] = x[perm[i]];
            return basec(v);
        };
    }
    return h;
}

// ---------------------------------------------------------------------------
// tail integral factory:  phi(s) = ∫_s^0 psi(t) w(t) dt

// w together with the nonnegative nondecreasing original of its Laplace
// representation (named, e.g. "heaviside" for w(t) = -1/t).
struct WeightSpec {
    std::function<double(double)> w;  // on t < 0, w(t) >= 0
    std::string original;             // name of the Laplace original

    static WeightSpec neg_inv_t() {
        return WeightSpec{[](double t) { return -1.0 / t; }, "heaviside"};
    }
};

inline FunctionHandle tail_integral(const FunctionHandle& psi,
                                    const WeightSpec& w, double tol = 1e-10) {
    if (psi.arity != 1)
        throw ArgumentError("tail_integral takes a one-variable function");

    // slope-at-minus-infinity probe: psi'(-inf) = 0 shows up as the far
    // slope decaying with the probe point; a residual drift keeps it flat.
    {
        const double dh = 1.0;
        auto slope_at = [&](double p) {
            return std::abs((psi({p + dh}) - psi({p - dh})) / (2.0 * dh));
        };
        const double near_slope = slope_at(-100.0);
        const double far_slope = slope_at(-10000.0);
        if (far_slope > 0.5 * near_slope + 1e-9)
            throw ConstructionError(
                "tail_integral needs psi'(-inf) = 0; far-probe slope " +
                std::to_string(far_slope));
    }
    for (double t : {-0.25, -1.0, -3.0})
        if (w.w(t) < 0.0)
            throw ConstructionError("weight w(t) must be nonnegative");

    auto f = psi.eval;
    auto wfn = w.w;
    // substitute t = -e^{-tau}: ∫_s^0 g(t) dt = ∫_{-ln(-s)}^∞ g(-e^{-tau}) e^{-tau} dtau,
    // which regularizes integrable endpoint singularities such as w = -1/t
    auto integrand = [f, wfn](double tau) {
        const double t = -std::exp(-tau);
        return f(std::span<const double>(&t, 1)) * wfn(t) * (-t);
    };

    // existence probe at a reference point: the improper endpoint at 0 must
    // give decaying panel contributions
    try {
        (void)integrate_to_infinity(integrand, 0.0, tol);
    } catch (const QuadratureError& e) {
        throw ConstructionError(
            std::string("tail_integral existence probe failed near t=0: ") +
            e.what());
    }

    FunctionHandle h;
    h.arity = 1;
    h.provenance = "tailint(" + psi.provenance + ")";
    h.domain_lo = psi.domain_lo;
    h.domain_hi = psi.domain_hi;
    h.eval_noise = std::max(tol, psi.eval_noise);
    h.eval = [integrand, tol](std::span<const double> s) {
        if (!(s[0] < 0.0))
            throw ArgumentError("tail integral argument must be negative");
        return integrate_to_infinity(integrand, -std::log(-s[0]), tol);
    };
    return h;
}

// ---------------------------------------------------------------------------
// divided-difference lift to two variables

struct LiftResult {
    FunctionHandle handle;                 // psi(s1,s2)
    std::optional<LevyTriple> pushforward; // 2-D triple when mu1 is discrete
    double omega = 0.0;                    // ∫ u dmu1
};

namespace detail {

// Discrete atoms of the lifting measure: the w-line integral over [-v, v]
// per atom of mu1, Gauss nodes, with the 1/2 Jacobian factor folded in.
inline std::vector<Atom> lift_pushforward_atoms(const std::vector<Atom>& in,
                                                int nodes_per_atom) {
    const int panels = std::max(1, nodes_per_atom / 16);
    std::vector<Atom> out;
    out.reserve(in.size() * static_cast<std::size_t>(panels) * 16);
    for (const auto& a : in) {
        const double v = a.u[0];
        const double dw = 2.0 * v / panels;
        for (int p = 0; p < panels; ++p) {
            gauss16_nodes(-v + p * dw, -v + (p + 1) * dw,
                          [&](double w, double gw) {
                              out.push_back(Atom{{0.5 * (v + w), 0.5 * (v - w)},
                                                 0.5 * a.w * gw});
                          });
        }
    }
    return out;
}

}  // namespace detail

// Divided-difference lift: psi(s1,s2) = (psi1(s1) - psi1(s2))/(s1 - s2) - omega
// for a drift-free one-variable triple with finite omega = ∫ u dmu1.
// The quotient is computed as the single integral
//   ∫ u e^{s2 u} * phi1((s1-s2) u) dmu1(u) - omega,   phi1(x) = (e^x-1)/x,
// which is cancellation-free and covers the diagonal as the phi1(0) limit.
inline LiftResult divided_difference_lift(const LevyTriple& psi1,
                                          double tol = 0.0,
                                          int nodes_per_atom = 32) {
    if (psi1.dim != 1)
        throw ArgumentError("divided_difference_lift takes a 1-D triple");
    detail::require_valid(psi1);
    if (psi1.c1[0] != 0.0)
        throw ConstructionError(
            "divided_difference_lift requires a drift-free triple (c1 = 0)");
    const double omega = psi1.measure.first_moment_total(1, 0);
    if (!std::isfinite(omega))
        throw ConstructionError(
            "divided_difference_lift requires finite omega = ∫ u dmu1");
    if (tol <= 0.0) tol = default_tol(1);

    LiftResult res;
    res.omega = omega;

    auto measure = std::make_shared<MeasureRepr>(psi1.measure);
    FunctionHandle h;
    h.arity = 2;
    h.provenance = "lift2(triple)";
    h.domain_lo = uniform_vec(2, -8.0);
    h.domain_hi = uniform_vec(2, -0.05);
    h.eval_noise = 4.0 * tol;
    h.eval = [measure, omega, tol](std::span<const double> s) {
        // ordered arguments keep phi1's argument nonpositive and make the
        // evaluation exactly symmetric
        const double s1 = std::min(s[0], s[1]);
        const double s2 = std::max(s[0], s[1]);
        if (!(s2 < 0.0))
            throw ArgumentError("lift arguments must be strictly negative");
        const double diff = s1 - s2;  // <= 0
        return measure->integrate(
                   1,
                   [&](std::span<const double> u) {
                       return u[0] * std::exp(s2 * u[0]) *
                              expm1_over(diff * u[0]);
                   },
                   kDefaultDelta, tol) -
               omega;
    };
    h.eval_complex = [measure, omega,
                      tol](std::span<const std::complex<double>> z) {
        const std::complex<double> z1 = z[0], z2 = z[1];
        if (!(z1.real() < 0.0 && z2.real() < 0.0))
            throw ArgumentError("lift arguments must have negative real part");
        const std::complex<double> diff = z1 - z2;
        auto phi1 = [](std::complex<double> x) {
            if (std::abs(x) < 1e-8)
                return std::complex<double>{1.0, 0.0} + 0.5 * x;
            return expm1_stable(x) / x;
        };
        return measure->integrate(
                   1,
                   [&](std::span<const double> u) {
                       return u[0] * std::exp(z2 * u[0]) * phi1(diff * u[0]);
                   },
                   kDefaultDelta, tol) -
               omega;
    };
    res.handle = std::move(h);

    // pushforward triple for discrete measures
    const MeasureRepr& m = psi1.measure;
    std::vector<Atom> discrete;
    bool discrete_ok = true;
    std::function<void(const MeasureRepr&, double)> collect =
        [&](const MeasureRepr& mm, double scale) {
            switch (mm.kind) {
                case MeasureRepr::Kind::Atoms:
                    for (auto a : mm.atoms) {
                        a.w *= scale;
                        discrete.push_back(std::move(a));
                    }
                    break;
                case MeasureRepr::Kind::Grid:
                    for (const auto& g : mm.grid)
                        discrete.push_back(
                            Atom{g.u, scale * g.density * g.quad_w});
                    break;
                case MeasureRepr::Kind::Sum:
                    for (std::size_t i = 0; i < mm.parts.size(); ++i)
                        collect(mm.parts[i], scale * mm.coefs[i]);
                    break;
                case MeasureRepr::Kind::Parametric:
                    discrete_ok = false;
                    break;
            }
        };
    collect(m, 1.0);
    if (discrete_ok && !discrete.empty()) {
        LevyTriple push;
        push.dim = 2;
        push.c1 = {0.0, 0.0};
        push.measure = MeasureRepr::from_atoms(
            detail::lift_pushforward_atoms(discrete, nodes_per_atom));
        res.pushforward = std::move(push);
    }
    return res;
}

}  // namespace tnfun
