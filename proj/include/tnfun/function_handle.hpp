#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tnfun/errors.hpp"
#include "tnfun/levy_triple.hpp"

namespace tnfun {

// A black-box evaluable candidate function on (-inf,0)^n. The declared
// rectangle [domain_lo, domain_hi] (componentwise, hi < 0) is where
// membership tests may probe it. Evaluators must be safe for concurrent
// invocation; construct them from immutable data.
struct FunctionHandle {
    int arity = 1;
    std::function<double(std::span<const double>)> eval;
    std::function<std::complex<double>(std::span<const std::complex<double>>)>
        eval_complex;  // optional
    std::string provenance;
    std::vector<double> domain_lo, domain_hi;
    double eval_noise = 0.0;  // absolute noise scale; 0 means machine level

    double operator()(std::span<const double> s) const { return eval(s); }
    double operator()(std::initializer_list<double> s) const {
        return eval(std::span<const double>(s.begin(), s.size()));
    }
    std::complex<double> operator()(
        std::span<const std::complex<double>> z) const {
        if (!eval_complex)
            throw EvaluationError("handle '" + provenance +
                                  "' has no complex evaluator");
        return eval_complex(z);
    }

    bool has_complex() const { return static_cast<bool>(eval_complex); }
};

inline std::vector<double> uniform_vec(int n, double v) {
    return std::vector<double>(static_cast<std::size_t>(n), v);
}

template <class F>
FunctionHandle make_handle(int arity, F&& f, std::string provenance,
                           double lo = -8.0, double hi = -0.05) {
    FunctionHandle h;
    h.arity = arity;
    h.eval = std::forward<F>(f);
    h.provenance = std::move(provenance);
    h.domain_lo = uniform_vec(arity, lo);
    h.domain_hi = uniform_vec(arity, hi);
    return h;
}

// Handle backed by quadrature evaluation of a Levy triple.
inline FunctionHandle handle_from_triple(LevyTriple t, double tol = 0.0) {
    if (tol <= 0.0) tol = default_tol(t.dim);
    const int n = t.dim;
    FunctionHandle h;
    h.arity = n;
    h.provenance = "triple";
    h.domain_lo = uniform_vec(n, -8.0);
    h.domain_hi = uniform_vec(n, -0.05);
    h.eval_noise = tol;
    auto shared = std::make_shared<LevyTriple>(std::move(t));
    h.eval = [shared, tol](std::span<const double> s) {
        return evaluate_real(*shared, s, tol);
    };
    h.eval_complex = [shared, tol](std::span<const std::complex<double>> z) {
        return evaluate_complex(*shared, z, tol);
    };
    return h;
}

}  // namespace tnfun
