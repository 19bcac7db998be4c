#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tnfun/errors.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/measure.hpp"
#include "tnfun/quadrature.hpp"
#include "tnfun/rng.hpp"

namespace tnfun {

// ---------------------------------------------------------------------------
// plan

struct SimPlan {
    LevyTriple triple;
    std::vector<double> times;                // positive
    std::vector<std::vector<double>> probes;  // strictly negative s-vectors
    int samples = 100000;
    double eps = 1e-3;  // small-jump cutoff
    std::uint64_t seed = 0;

    void check() const {
        detail::require_valid(triple);
        if (samples < 100) throw ArgumentError("need at least 100 samples");
        if (!(eps > 0.0)) throw ArgumentError("cutoff eps must be positive");
        for (double t : times)
            if (!(t > 0.0)) throw ArgumentError("times must be positive");
        for (const auto& s : probes) detail::check_domain(triple, s);
    }
};

// ---------------------------------------------------------------------------
// truncated exponent

// Compensation drift of the truncated small jumps: ∫_{|u|_inf < eps} u_j dmu.
inline std::vector<double> compensation_drift(const LevyTriple& t, double eps) {
    std::vector<double> m(t.dim);
    for (int j = 0; j < t.dim; ++j)
        m[j] = t.measure.coord_moment_below(t.dim, j, eps);
    return m;
}

// Exponent of the eps-truncated-plus-compensated triple actually simulated:
//   psi_eps(s) = c0 + c1·s + s·m_eps + ∫_{|u|_inf >= eps} (e^{s·u}-1) dmu.
inline double truncated_exponent(const LevyTriple& t, double eps,
                                 std::span<const double> s, double tol = 0.0) {
    detail::require_valid(t);
    detail::check_domain(t, s);
    if (tol <= 0.0) tol = default_tol(t.dim);
    double v = t.c0;
    const auto m_eps = compensation_drift(t, eps);
    for (int j = 0; j < t.dim; ++j) v += (t.c1[j] + m_eps[j]) * s[j];

    std::function<double(const MeasureRepr&, double)> tail =
        [&](const MeasureRepr& mm, double scale) -> double {
        switch (mm.kind) {
            case MeasureRepr::Kind::Atoms: {
                double acc = 0.0;
                for (const auto& a : mm.atoms)
                    if (*std::max_element(a.u.begin(), a.u.end()) >= eps) {
                        double dot = 0.0;
                        for (int j = 0; j < t.dim; ++j) dot += s[j] * a.u[j];
                        acc += a.w * expm1_stable(dot);
                    }
                return scale * acc;
            }
            case MeasureRepr::Kind::Grid: {
                double acc = 0.0;
                for (const auto& g : mm.grid)
                    if (*std::max_element(g.u.begin(), g.u.end()) >= eps) {
                        double dot = 0.0;
                        for (int j = 0; j < t.dim; ++j) dot += s[j] * g.u[j];
                        acc += g.density * g.quad_w * expm1_stable(dot);
                    }
                return scale * acc;
            }
            case MeasureRepr::Kind::Parametric:
                return scale * integrate_dyadic_up(
                                   [&](double u) {
                                       return expm1_stable(s[0] * u) *
                                              mm.density_at(u);
                                   },
                                   eps, tol);
            case MeasureRepr::Kind::Sum: {
                double acc = 0.0;
                for (std::size_t i = 0; i < mm.parts.size(); ++i)
                    acc += tail(mm.parts[i], scale * mm.coefs[i]);
                return acc;
            }
        }
        return 0.0;
    };
    return v + tail(t.measure, 1.0);
}

inline double truncation_bias(const LevyTriple& t, double eps,
                              std::span<const double> s) {
    return std::abs(truncated_exponent(t, eps, s) - evaluate_real(t, s));
}

// ---------------------------------------------------------------------------
// jump sampler

// Draws jumps from the normalized restriction of mu to {|u|_inf >= eps}.
// Discrete variants invert the weight CDF directly; parametric densities go
// through a precomputed monotone inverse-CDF table on a log grid.
class JumpSampler {
  public:
    static JumpSampler build(const MeasureRepr& m, int dim, double eps,
                             int knots = 2048) {
        JumpSampler js;
        js.dim_ = dim;
        js.collect(m, 1.0, eps, knots);
        for (const auto& c : js.components_) js.rate_ += c.rate;
        return js;
    }

    double rate() const { return rate_; }

    void draw(SplitStream& rng, std::vector<double>& out) const {
        double pick = rng.uniform() * rate_;
        const Component* chosen = &components_.back();
        for (const auto& c : components_) {
            if (pick < c.rate) {
                chosen = &c;
                break;
            }
            pick -= c.rate;
        }
        chosen->draw(rng, out);
    }

  private:
    struct Component {
        double rate = 0.0;
        // discrete
        std::vector<std::vector<double>> points;
        std::vector<double> cumw;
        // tabulated parametric (1-D)
        std::vector<double> log_u, cdf;

        void draw(SplitStream& rng, std::vector<double>& out) const {
            if (!points.empty()) {
                const double pick = rng.uniform() * cumw.back();
                const auto it =
                    std::upper_bound(cumw.begin(), cumw.end(), pick);
                const std::size_t idx = std::min(
                    static_cast<std::size_t>(it - cumw.begin()),
                    points.size() - 1);
                out = points[idx];
                return;
            }
            const double u01 = rng.uniform();
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u01);
            std::size_t hi = std::min(
                static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
            if (hi == 0) hi = 1;
            const std::size_t lo = hi - 1;
            const double span = cdf[hi] - cdf[lo];
            const double f = span > 0.0 ? (u01 - cdf[lo]) / span : 0.5;
            out.assign(1, std::exp(log_u[lo] + f * (log_u[hi] - log_u[lo])));
        }
    };

    void collect(const MeasureRepr& m, double scale, double eps, int knots) {
        switch (m.kind) {
            case MeasureRepr::Kind::Atoms: {
                Component c;
                double acc = 0.0;
                for (const auto& a : m.atoms)
                    if (*std::max_element(a.u.begin(), a.u.end()) >= eps) {
                        acc += scale * a.w;
                        c.points.push_back(a.u);
                        c.cumw.push_back(acc);
                    }
                c.rate = acc;
                if (acc > 0.0) components_.push_back(std::move(c));
                break;
            }
            case MeasureRepr::Kind::Grid: {
                Component c;
                double acc = 0.0;
                for (const auto& g : m.grid)
                    if (*std::max_element(g.u.begin(), g.u.end()) >= eps &&
                        g.density * g.quad_w > 0.0) {
                        acc += scale * g.density * g.quad_w;
                        c.points.push_back(g.u);
                        c.cumw.push_back(acc);
                    }
                c.rate = acc;
                if (acc > 0.0) components_.push_back(std::move(c));
                break;
            }
            case MeasureRepr::Kind::Parametric: {
                const double lambda = m.mass_above(1, eps);
                if (!(lambda > 0.0) || !std::isfinite(lambda))
                    throw ConstructionError(
                        "measure not sampleable at this cutoff; consider "
                        "atomizing it");
                // truncate where the remaining tail is negligible
                double u_max = eps;
                while (m.mass_above(1, u_max) > 1e-12 * lambda &&
                       u_max < 1e300)
                    u_max *= 2.0;
                Component c;
                c.rate = scale * lambda;
                c.log_u.resize(knots);
                c.cdf.resize(knots);
                const double la = std::log(eps), lb = std::log(u_max);
                double acc = 0.0;
                c.log_u[0] = la;
                c.cdf[0] = 0.0;
                for (int i = 1; i < knots; ++i) {
                    const double x0 = la + (lb - la) * (i - 1) / (knots - 1);
                    const double x1 = la + (lb - la) * i / (knots - 1);
                    acc += gauss16(
                        [&](double x) {
                            const double u = std::exp(x);
                            return m.density_at(u) * u;
                        },
                        x0, x1);
                    c.log_u[i] = x1;
                    c.cdf[i] = acc;
                }
                for (auto& v : c.cdf) v /= acc;  // normalize
                components_.push_back(std::move(c));
                break;
            }
            case MeasureRepr::Kind::Sum:
                for (std::size_t i = 0; i < m.parts.size(); ++i)
                    if (m.coefs[i] > 0.0)
                        collect(m.parts[i], scale * m.coefs[i], eps, knots);
                break;
        }
    }

    int dim_ = 1;
    double rate_ = 0.0;
    std::vector<Component> components_;
};

// ---------------------------------------------------------------------------
// simulation

struct SampleSet {
    std::vector<double> times;
    // x[t][path] is the increment vector; alive[t][path] marks survival
    std::vector<std::vector<std::vector<double>>> x;
    std::vector<std::vector<char>> alive;
};

// Compound-Poisson + drift approximation: deterministic drift t(c1 + m_eps),
// Poisson(t*lambda_eps) jumps from the truncated measure, and killing with
// survival probability e^{t c0} via an explicit indicator.
inline SampleSet sample_increments(const SimPlan& plan) {
    plan.check();
    const LevyTriple& t = plan.triple;
    const auto m_eps = compensation_drift(t, plan.eps);
    const bool has_jumps = !t.measure.is_zero();
    JumpSampler sampler;
    if (has_jumps)
        sampler = JumpSampler::build(t.measure, t.dim, plan.eps);

    SampleSet out;
    out.times = plan.times;
    out.x.resize(plan.times.size());
    out.alive.resize(plan.times.size());

    std::vector<double> jump;
    for (std::size_t ti = 0; ti < plan.times.size(); ++ti) {
        const double tt = plan.times[ti];
        out.x[ti].resize(plan.samples);
        out.alive[ti].assign(plan.samples, 1);
        const double survival = std::exp(tt * t.c0);
        for (int i = 0; i < plan.samples; ++i) {
            SplitStream rng(plan.seed, static_cast<std::uint64_t>(i), ti);
            if (t.c0 < 0.0 && rng.uniform() > survival) {
                out.alive[ti][i] = 0;
                out.x[ti][i].assign(t.dim, 0.0);
                continue;
            }
            std::vector<double> xv(t.dim);
            for (int j = 0; j < t.dim; ++j)
                xv[j] = tt * (t.c1[j] + m_eps[j]);
            if (has_jumps && sampler.rate() > 0.0) {
                const int n = rng.poisson(tt * sampler.rate());
                for (int k = 0; k < n; ++k) {
                    sampler.draw(rng, jump);
                    for (int j = 0; j < t.dim; ++j) xv[j] += jump[j];
                }
            }
            out.x[ti][i] = std::move(xv);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// empirical Laplace transform

struct LaplaceCell {
    double t = 0.0;
    std::vector<double> s;
    double g_hat = 0.0;
    double stderr_ = 0.0;
    double log_g = 0.0;
    double log_stderr = 0.0;  // delta-method error of log g_hat
    int alive = 0;
    bool insufficient = false;
};

struct EmpiricalLaplace {
    std::vector<LaplaceCell> cells;

    const LaplaceCell* find(double t, std::span<const double> s) const {
        for (const auto& c : cells) {
            if (c.t != t || c.s.size() != s.size()) continue;
            bool same = true;
            for (std::size_t j = 0; j < s.size(); ++j)
                if (c.s[j] != s[j]) same = false;
            if (same) return &c;
        }
        return nullptr;
    }
};

namespace detail {

// deterministic pairwise reduction
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace detail

// g_hat_t(s) = (1/M) sum e^{s·X_i}; killed paths contribute 0, so the
// estimate carries the e^{t c0} factor naturally.
inline EmpiricalLaplace empirical_laplace(
    const SampleSet& samples, const std::vector<std::vector<double>>& probes) {
    EmpiricalLaplace out;
    std::vector<double> vals;
    for (std::size_t ti = 0; ti < samples.times.size(); ++ti) {
        const auto& xs = samples.x[ti];
        const auto& alive = samples.alive[ti];
        const std::size_t M = xs.size();
        for (const auto& s : probes) {
            vals.assign(M, 0.0);
            int n_alive = 0;
            for (std::size_t i = 0; i < M; ++i) {
                if (!alive[i]) continue;
                ++n_alive;
                double dot = 0.0;
                for (std::size_t j = 0; j < s.size(); ++j)
                    dot += s[j] * xs[i][j];
                vals[i] = std::exp(dot);
            }
            LaplaceCell c;
            c.t = samples.times[ti];
            c.s = s;
            c.alive = n_alive;
            const double mean =
                detail::pairwise_sum(vals) / static_cast<double>(M);
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= static_cast<double>(M) * std::max<double>(1.0, M - 1);
            c.g_hat = mean;
            c.stderr_ = std::sqrt(var);
            if (mean > 0.0) {
                c.log_g = std::log(mean);
                c.log_stderr = c.stderr_ / mean;
            } else {
                c.insufficient = true;
            }
            out.cells.push_back(std::move(c));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// exponent verification

struct ExponentRow {
    double t = 0.0;
    std::vector<double> s;
    double g_hat = 0.0, stderr_ = 0.0;
    double log_g = 0.0, log_stderr = 0.0;
    double t_psi_eps = 0.0, t_psi = 0.0;
    bool pass = false;
    bool insufficient = false;
};

struct SemigroupRow {
    double t = 0.0;
    std::vector<double> s;
    double lhs = 0.0, rhs = 0.0, tol = 0.0;
    bool pass = false;
};

struct ExponentReport {
    std::vector<ExponentRow> rows;
    std::vector<SemigroupRow> semigroup;
    bool all_pass = true;
};

inline ExponentReport verify_exponent(const SimPlan& plan,
                                      const EmpiricalLaplace& emp) {
    ExponentReport rep;
    for (const auto& c : emp.cells) {
        ExponentRow r;
        r.t = c.t;
        r.s = c.s;
        r.g_hat = c.g_hat;
        r.stderr_ = c.stderr_;
        r.log_g = c.log_g;
        r.log_stderr = c.log_stderr;
        r.t_psi_eps =
            c.t * truncated_exponent(plan.triple, plan.eps, c.s);
        r.t_psi = c.t * evaluate_real(plan.triple, c.s);
        r.insufficient = c.insufficient;
        r.pass = !c.insufficient &&
                 std::abs(r.log_g - r.t_psi_eps) <=
                     3.0 * c.log_stderr + 1e-12;
        rep.all_pass = rep.all_pass && r.pass;
        rep.rows.push_back(std::move(r));
    }
    // semigroup identity g_{2t} = g_t^2 wherever both times are simulated
    for (const auto& c : emp.cells) {
        const LaplaceCell* c2 = emp.find(2.0 * c.t, c.s);
        if (!c2 || c.insufficient || c2->insufficient) continue;
        SemigroupRow sr;
        sr.t = c.t;
        sr.s = c.s;
        sr.lhs = c2->g_hat;
        sr.rhs = c.g_hat * c.g_hat;
        sr.tol = 3.0 * std::sqrt(c2->stderr_ * c2->stderr_ +
                                 4.0 * c.g_hat * c.g_hat * c.stderr_ *
                                     c.stderr_) +
                 1e-12;
        sr.pass = std::abs(sr.lhs - sr.rhs) <= sr.tol;
        rep.all_pass = rep.all_pass && sr.pass;
        rep.semigroup.push_back(std::move(sr));
    }
    return rep;
}

inline ExponentReport verify_exponent(const SimPlan& plan) {
    return verify_exponent(plan,
                           empirical_laplace(sample_increments(plan),
                                             plan.probes));
}

// g_{at}(s) ≈ (g_t(s))^a for rational a with both times in the grid.
struct PowerScalingRow {
    double t = 0.0, a = 0.0;
    std::vector<double> s;
    double lhs = 0.0, rhs = 0.0, tol = 0.0;
    bool pass = false;
};

inline std::vector<PowerScalingRow> power_scaling_check(
    const SimPlan& plan, const EmpiricalLaplace& emp, double a) {
    if (!(a > 0.0)) throw ArgumentError("scaling exponent must be positive");
    std::vector<PowerScalingRow> rows;
    for (const auto& c : emp.cells) {
        const LaplaceCell* ca = emp.find(a * c.t, c.s);
        if (!ca || c.insufficient || ca->insufficient) continue;
        PowerScalingRow r;
        r.t = c.t;
        r.a = a;
        r.s = c.s;
        r.lhs = ca->g_hat;
        r.rhs = std::pow(c.g_hat, a);
        const double drhs = a * std::pow(c.g_hat, a - 1.0) * c.stderr_;
        r.tol = 3.0 * std::sqrt(ca->stderr_ * ca->stderr_ + drhs * drhs) +
                1e-12;
        r.pass = std::abs(r.lhs - r.rhs) <= r.tol;
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw ArgumentError(
            "power_scaling_check: scaled times missing from the t-grid");
    return rows;
}

// ---------------------------------------------------------------------------
// CSV output (RFC-4180-style, headers, timestamp-free)

inline void write_simulation_csv(std::ostream& os, const ExponentReport& rep) {
    os << "t,s,g_hat,stderr,t_psi_eps,t_psi,pass\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    for (const auto& r : rep.rows) {
        std::string s_joined;
        for (std::size_t j = 0; j < r.s.size(); ++j) {
            if (j) s_joined += ';';
            s_joined += num(r.s[j]);
        }
        os << num(r.t) << ',' << s_joined << ',' << num(r.g_hat) << ','
           << num(r.stderr_) << ',' << num(r.t_psi_eps) << ',' << num(r.t_psi)
           << ',' << (r.pass ? 1 : 0) << "\n";
    }
}

}  // namespace tnfun
