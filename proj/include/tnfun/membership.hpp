#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tnfun/errors.hpp"
#include "tnfun/function_handle.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/rng.hpp"

namespace tnfun {

// ---------------------------------------------------------------------------
// grids

struct GridSpec {
    std::vector<std::vector<double>> axes;  // strictly negative coordinates

    std::size_t point_count() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.size();
        return n;
    }
};

// Log-spaced lattice covering both tails of [lo, hi], hi < 0.
inline GridSpec default_grid(int arity, double lo = -8.0, double hi = -0.05) {
    int per_axis = arity == 1 ? 16 : (arity == 2 ? 6 : 4);
    GridSpec g;
    const double la = std::log(-lo), lb = std::log(-hi);
    for (int j = 0; j < arity; ++j) {
        std::vector<double> axis;
        for (int i = 0; i < per_axis; ++i) {
            const double f = per_axis == 1
                                 ? 0.0
                                 : static_cast<double>(i) / (per_axis - 1);
            axis.push_back(-std::exp(la + f * (lb - la)));
        }
        g.axes.push_back(std::move(axis));
    }
    return g;
}

// ---------------------------------------------------------------------------
// forward-difference membership test

struct Violation {
    std::vector<double> location;
    std::vector<int> order;  // multi-index; all zeros = sign violation
    double value;            // failing margin (negative)
    double noise;            // noise floor it was compared against
};

struct MembershipReport {
    enum class Verdict { Accept, Reject, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    int tested_order = 0;
    double step = 0.0;
    double noise_floor = 0.0;  // floor at the highest tested order
    std::optional<Violation> violation;
    std::string note;

    bool accepted() const { return verdict == Verdict::Accept; }
    bool rejected() const { return verdict == Verdict::Reject; }
};

struct MembershipOptions {
    int max_order = 5;
    double step = 0.0;          // 0: auto from the grid
    double resolution = 1e-6;   // difference-scale resolution for "accept"
    int order_cap = 6;          // higher orders are never certified
};

namespace detail {

inline double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

template <class Fn>
void for_each_lattice_point(const GridSpec& grid, Fn&& fn) {
    const int n = static_cast<int>(grid.axes.size());
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> p(n);
    for (;;) {
        for (int j = 0; j < n; ++j) p[j] = grid.axes[j][idx[j]];
        fn(p);
        int j = 0;
        for (; j < n; ++j) {
            if (++idx[j] < grid.axes[j].size()) break;
            idx[j] = 0;
        }
        if (j == n) return;
    }
}

// Multi-indices alpha with 1 <= |alpha| <= max_order, ascending |alpha|.
inline std::vector<std::vector<int>> multi_indices(int n, int max_order) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(n, 0);
    for (int total = 1; total <= max_order; ++total) {
        // enumerate compositions of `total` into n nonnegative parts
        std::fill(a.begin(), a.end(), 0);
        a[0] = total;
        for (;;) {
            out.push_back(a);
            int j = 0;
            while (j < n - 1 && a[j] == 0) ++j;
            if (j == n - 1) break;
            // move one unit from slot j to slot j+1, reset front
            const int head = a[j] - 1;
            a[j] = 0;
            ++a[j + 1];
            a[0] = head;
        }
        if (n == 1) continue;
    }
    return out;
}

// Mixed forward difference of f at p with step h per axis.
inline double forward_difference(const FunctionHandle& f,
                                 std::span<const double> p,
                                 const std::vector<int>& alpha, double h) {
    const int n = static_cast<int>(alpha.size());
    std::vector<int> beta(n, 0);
    std::vector<double> q(n);
    int abs_alpha = 0;
    for (int v : alpha) abs_alpha += v;
    double acc = 0.0;
    for (;;) {
        int abs_beta = 0;
        double coef = 1.0;
        for (int j = 0; j < n; ++j) {
            abs_beta += beta[j];
            coef *= binom(alpha[j], beta[j]);
            q[j] = p[j] + h * beta[j];
        }
        const double sign = ((abs_alpha - abs_beta) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * coef * f.eval(q);
        int j = 0;
        for (; j < n; ++j) {
            if (++beta[j] <= alpha[j]) break;
            beta[j] = 0;
        }
        if (j == n) break;
    }
    return acc;
}

}  // namespace detail

// Shared engine: checks the order-0 sign condition and nonnegativity of all
// mixed forward differences up to the effective order. `sign_flip` selects
// the order-0 condition: true for psi <= 0 (class test), false for g >= 0
// (absolute monotonicity of the exponential criterion).
inline MembershipReport check_forward_differences(
    const FunctionHandle& f, const GridSpec& grid, bool sign_flip,
    MembershipOptions opt = {}) {
    if (static_cast<int>(grid.axes.size()) != f.arity)
        throw ArgumentError("grid arity mismatch");
    for (const auto& axis : grid.axes)
        for (double v : axis)
            if (!(v < 0.0))
                throw ArgumentError("grid escapes the open negative orthant");

    double nearest = -std::numeric_limits<double>::infinity();
    for (const auto& axis : grid.axes)
        nearest = std::max(nearest, *std::max_element(axis.begin(), axis.end()));
    const double h =
        opt.step > 0.0
            ? opt.step
            : std::min(0.05, -nearest / (2.0 * std::max(1, opt.max_order)));
    if (nearest + h * opt.max_order >= 0.0)
        throw ArgumentError("forward shifts escape the domain");

    // noise model: evaluator noise amplified 2^order by differencing
    double maxabs = 0.0;
    detail::for_each_lattice_point(grid, [&](const std::vector<double>& p) {
        maxabs = std::max(maxabs, std::abs(f.eval(p)));
    });
    const double eps = std::numeric_limits<double>::epsilon();
    const double noise0 =
        std::max({f.eval_noise, 16.0 * eps * maxabs, 1e-300});
    auto floor_at = [&](int k) { return noise0 * std::pow(2.0, k); };

    MembershipReport rep;
    rep.step = h;

    int certifiable = std::min(opt.max_order, opt.order_cap);
    while (certifiable >= 1 && floor_at(certifiable) > opt.resolution)
        --certifiable;
    const int scan_order = std::min(opt.max_order, opt.order_cap);
    rep.tested_order = scan_order;
    rep.noise_floor = floor_at(scan_order);

    std::optional<Violation> worst;
    auto consider = [&](const std::vector<double>& p,
                        const std::vector<int>& alpha, double margin,
                        double floor) {
        if (margin < -3.0 * floor &&
            (!worst || margin < worst->value))
            worst = Violation{p, alpha, margin, floor};
    };

    const auto alphas = detail::multi_indices(f.arity, scan_order);
    detail::for_each_lattice_point(grid, [&](const std::vector<double>& p) {
        const double v = f.eval(p);
        // order 0: psi <= 0 for the class test, g >= 0 for abs. monotonicity
        const double margin0 = sign_flip ? -v : v;
        consider(p, std::vector<int>(f.arity, 0), margin0, floor_at(0));
        for (const auto& alpha : alphas) {
            int k = 0;
            for (int a : alpha) k += a;
            const double d = detail::forward_difference(f, p, alpha, h);
            consider(p, alpha, d, floor_at(k));
        }
    });

    if (worst) {
        rep.verdict = MembershipReport::Verdict::Reject;
        rep.violation = std::move(worst);
        return rep;
    }
    if (certifiable >= opt.max_order) {
        rep.verdict = MembershipReport::Verdict::Accept;
    } else {
        rep.verdict = MembershipReport::Verdict::Inconclusive;
        rep.note = "noise floor exceeds requested resolution above order " +
                   std::to_string(certifiable);
    }
    return rep;
}

// Necessary-condition test for membership in T_n: psi <= 0 on the grid and
// all mixed forward differences of order 1..max_order nonnegative up to
// noise. Accept certifies the differences only, not membership itself.
inline MembershipReport verify_Tn(const FunctionHandle& f, const GridSpec& grid,
                                  MembershipOptions opt = {}) {
    return check_forward_differences(f, grid, /*sign_flip=*/true, opt);
}

inline MembershipReport verify_Tn(const FunctionHandle& f,
                                  MembershipOptions opt = {}) {
    GridSpec g = default_grid(f.arity, f.domain_lo[0], f.domain_hi[0]);
    return verify_Tn(f, g, opt);
}

// Tests absolute monotonicity of s ↦ e^{v·f(s)}; acceptance is necessary
// for f in T_n.
inline MembershipReport exponential_criterion(const FunctionHandle& f, double v,
                                              const GridSpec& grid,
                                              MembershipOptions opt = {}) {
    if (!(v > 0.0)) throw ArgumentError("exponential criterion needs v > 0");
    FunctionHandle g;
    g.arity = f.arity;
    g.provenance = "exp(" + std::to_string(v) + "*" + f.provenance + ")";
    g.domain_lo = f.domain_lo;
    g.domain_hi = f.domain_hi;
    // f <= 0 keeps e^{vf} in (0,1], so the noise transfers with factor v
    g.eval_noise = v * f.eval_noise;
    auto base = f.eval;
    g.eval = [base, v](std::span<const double> s) {
        return std::exp(v * base(s));
    };
    return check_forward_differences(g, grid, /*sign_flip=*/false, opt);
}

inline MembershipReport exponential_criterion(const FunctionHandle& f,
                                              double v,
                                              MembershipOptions opt = {}) {
    GridSpec g = default_grid(f.arity, f.domain_lo[0], f.domain_hi[0]);
    return exponential_criterion(f, v, g, opt);
}

// ---------------------------------------------------------------------------
// sector check (range of the cone S_theta^n under psi)

struct SectorSpec {
    double theta = M_PI / 2;  // in (0, pi]
    int samples = 1000;
    std::vector<double> rect_lo, rect_hi;  // real-part rectangle, hi < 0
};

struct SectorReport {
    int samples = 0;
    int violations = 0;
    double max_ratio = 0.0;  // worst |Im psi| / (-Re psi)
    bool identically_zero = false;
    std::optional<std::vector<std::complex<double>>> worst_point;
};

inline SectorReport sector_check(const FunctionHandle& f, SectorSpec spec,
                                 std::uint64_t seed, double tol = 1e-9) {
    if (!(spec.theta > 0.0 && spec.theta <= M_PI))
        throw ArgumentError("theta must lie in (0, pi]");
    if (!f.has_complex())
        throw ArgumentError("sector check needs a complex evaluator");
    if (spec.rect_lo.empty()) spec.rect_lo = f.domain_lo;
    if (spec.rect_hi.empty()) spec.rect_hi = f.domain_hi;

    const double cot = spec.theta == M_PI ? 0.0 : 1.0 / std::tan(spec.theta / 2);
    SectorReport rep;
    rep.samples = spec.samples;
    double max_abs = 0.0;

    std::vector<std::complex<double>> z(f.arity);
    for (int i = 0; i < spec.samples; ++i) {
        SplitStream rng(seed, static_cast<std::uint64_t>(i), 0);
        const bool boundary = (i % 2 == 0);  // the containment is tight there
        for (int j = 0; j < f.arity; ++j) {
            const double s = spec.rect_lo[j] +
                             rng.uniform() *
                                 (spec.rect_hi[j] - spec.rect_lo[j]);
            const double bound = (-s) * cot;
            double y = boundary ? bound : rng.uniform() * bound;
            if (rng.uniform() < 0.5) y = -y;
            z[j] = {s, y};
        }
        std::complex<double> w;
        try {
            w = f.eval_complex(z);
        } catch (const std::exception& e) {
            throw EvaluationError(std::string("sector sample failed: ") +
                                  e.what());
        }
        max_abs = std::max(max_abs, std::abs(w));
        const double re = w.real(), im = std::abs(w.imag());
        bool bad = re > tol || im > cot * (-re) + tol;
        if (-re > 1e-300)
            rep.max_ratio = std::max(rep.max_ratio, im / (-re));
        if (bad) {
            ++rep.violations;
            if (!rep.worst_point) rep.worst_point = z;
        }
    }
    rep.identically_zero = max_abs < tol;
    if (rep.identically_zero) rep.violations = 0;  // psi == 0 is out of scope
    return rep;
}

// ---------------------------------------------------------------------------
// Lemma inequality:  Re psi(s+iy) - psi(s) >= 2(Re psi(r+iy) - c0 - c1·r)

struct LemmaSample {
    std::vector<double> s, r, y;
};

struct LemmaReport {
    int samples = 0;
    int violations = 0;
    double min_margin = kInf;
    double mean_margin = 0.0;
};

inline LemmaReport lemma_inequality_check(
    const LevyTriple& t, const std::vector<LemmaSample>& samples,
    double tol = 0.0) {
    if (tol <= 0.0) tol = 8.0 * default_tol(t.dim) + 1e-9;
    LemmaReport rep;
    rep.samples = static_cast<int>(samples.size());
    std::vector<std::complex<double>> z(t.dim);
    for (const auto& smp : samples) {
        for (int j = 0; j < t.dim; ++j) z[j] = {smp.s[j], smp.y[j]};
        const double lhs =
            evaluate_complex(t, z).real() - evaluate_real(t, smp.s);
        for (int j = 0; j < t.dim; ++j) z[j] = {smp.r[j], smp.y[j]};
        double drift = t.c0;
        for (int j = 0; j < t.dim; ++j) drift += t.c1[j] * smp.r[j];
        const double rhs = 2.0 * (evaluate_complex(t, z).real() - drift);
        const double margin = lhs - rhs;
        rep.min_margin = std::min(rep.min_margin, margin);
        rep.mean_margin += margin / samples.size();
        if (margin < -tol) ++rep.violations;
    }
    return rep;
}

// Randomized sample set for the lemma check.
inline std::vector<LemmaSample> lemma_samples(int dim, int count,
                                              std::uint64_t seed) {
    std::vector<LemmaSample> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        SplitStream rng(seed, static_cast<std::uint64_t>(i), 1);
        LemmaSample smp;
        for (int j = 0; j < dim; ++j) {
            smp.s.push_back(-0.1 - 4.0 * rng.uniform());
            smp.r.push_back(-0.1 - 4.0 * rng.uniform());
            smp.y.push_back(8.0 * (rng.uniform() - 0.5));
        }
        out.push_back(std::move(smp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// convergence probe (uniform convergence on compacts of the limit)

struct ConvergenceReport {
    std::vector<double> gaps;  // sup |psi_k - psi| per sequence member
    bool decreasing = false;
    MembershipReport limit_report;
};

inline ConvergenceReport convergence_probe(
    const std::vector<FunctionHandle>& seq, const FunctionHandle& limit,
    std::span<const double> rect_lo, std::span<const double> rect_hi,
    int mesh_per_axis = 33, MembershipOptions opt = {}) {
    const int n = limit.arity;
    for (const auto& f : seq)
        if (f.arity != n) throw ArgumentError("sequence arity mismatch");
    for (int j = 0; j < n; ++j)
        if (!(rect_lo[j] < rect_hi[j] && rect_hi[j] < 0.0))
            throw ArgumentError("compact must lie strictly inside the domain");

    GridSpec mesh;
    for (int j = 0; j < n; ++j) {
        std::vector<double> axis;
        for (int i = 0; i < mesh_per_axis; ++i)
            axis.push_back(rect_lo[j] + (rect_hi[j] - rect_lo[j]) * i /
                                            (mesh_per_axis - 1));
        mesh.axes.push_back(std::move(axis));
    }

    ConvergenceReport rep;
    for (const auto& f : seq) {
        double sup = 0.0;
        detail::for_each_lattice_point(mesh, [&](const std::vector<double>& p) {
            sup = std::max(sup, std::abs(f.eval(p) - limit.eval(p)));
        });
        rep.gaps.push_back(sup);
    }
    rep.decreasing = true;
    for (std::size_t i = 1; i < rep.gaps.size(); ++i)
        if (rep.gaps[i] > rep.gaps[i - 1] + 1e-12) rep.decreasing = false;
    rep.limit_report = verify_Tn(limit, opt);
    return rep;
}

}  // namespace tnfun
