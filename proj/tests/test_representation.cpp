#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tnfun/function_handle.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/measure.hpp"

using namespace tnfun;

namespace {

LevyTriple stable_triple(double alpha, double tilt = 0.0) {
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::stable(alpha, tilt);
    return t;
}

LevyTriple log_triple(double b) {
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::exp_over_u(b);
    return t;
}

// Grid nodes mimicking a density rho on log-spaced 1-D panels.
std::vector<GridNode> log_grid_nodes(double u_min, double u_max, int count,
                                     double (*rho)(double)) {
    std::vector<GridNode> out;
    const double la = std::log(u_min), lb = std::log(u_max);
    const double dl = (lb - la) / count;
    for (int i = 0; i < count; ++i) {
        const double u = std::exp(la + (i + 0.5) * dl);
        out.push_back(GridNode{{u}, rho(u), u * dl});  // log-measure Jacobian
    }
    return out;
}

}  // namespace

TEST_CASE("structural validation catches malformed data") {
    LevyTriple t;
    t.dim = 1;
    t.c1 = {1.0};
    CHECK(validate_triple(t).pass);

    t.c0 = 0.5;  // killing rate must be <= 0
    CHECK_FALSE(validate_triple(t).structural_ok);
    t.c0 = 0.0;

    t.c1 = {-1.0};
    CHECK_FALSE(validate_triple(t).structural_ok);
    t.c1 = {1.0};

    t.measure = MeasureRepr::from_atoms({Atom{{0.0}, 1.0}});  // at origin
    CHECK_FALSE(validate_triple(t).structural_ok);

    t.measure = MeasureRepr::from_atoms({Atom{{1.0}, -2.0}});  // bad weight
    CHECK_FALSE(validate_triple(t).structural_ok);

    t.measure = MeasureRepr::from_atoms({Atom{{1.0}, 2.0}});
    CHECK(validate_triple(t).pass);
}

TEST_CASE("dimension mismatches are structural errors") {
    LevyTriple t;
    t.dim = 2;
    t.c1 = {1.0};  // wrong length
    CHECK_FALSE(validate_triple(t).structural_ok);
    t.c1 = {1.0, 1.0};
    t.measure = MeasureRepr::from_atoms({Atom{{1.0}, 1.0}});  // 1-D atom
    CHECK_FALSE(validate_triple(t).structural_ok);
}

TEST_CASE("grid approximating u^{-2} fails integrability under refinement") {
    // first moment ∫ u u^{-2} du = ∫ du/u diverges at 0; dyadic shells carry
    // constant mass, which the decay probe flags
    auto rho = [](double u) { return 1.0 / (u * u); };
    for (int count : {64, 128}) {
        LevyTriple t;
        t.dim = 1;
        t.c1 = {0.0};
        t.measure = MeasureRepr::from_grid(log_grid_nodes(1e-8, 8.0, count, rho));
        auto r = validate_triple(t);
        CHECK(r.structural_ok);
        CHECK_FALSE(r.pass);
    }
    // sanity: the same construction for an integrable density passes
    auto ok = [](double u) { return std::exp(-u) / std::sqrt(u); };
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::from_grid(log_grid_nodes(1e-8, 8.0, 128, ok));
    CHECK(validate_triple(t).pass);
}

TEST_CASE("stable family evaluates to -(-s)^alpha") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        auto t = stable_triple(alpha);
        for (double s : {-0.1, -1.0, -10.0}) {
            const double got = evaluate_real(t, {s});
            const double want = -std::pow(-s, alpha);
            CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
        }
    }
}

TEST_CASE("exponentially damped log-density evaluates to log b - log(b-s)") {
    for (double b : {1.0, 2.0, 5.0}) {
        auto t = log_triple(b);
        for (double s : {-0.25, -1.0, -4.0}) {
            const double got = evaluate_real(t, {s});
            const double want = std::log(b) - std::log(b - s);
            CHECK(got == doctest::Approx(want).epsilon(1e-8));
        }
    }
}

TEST_CASE("atomic measures evaluate by direct summation") {
    LevyTriple t;
    t.dim = 2;
    t.c0 = -0.25;
    t.c1 = {0.5, 0.0};
    t.measure = MeasureRepr::from_atoms(
        {Atom{{1.0, 0.0}, 2.0}, Atom{{0.5, 3.0}, 0.25}});
    const double s1 = -1.0, s2 = -0.5;
    const double want = -0.25 + 0.5 * s1 +
                        2.0 * std::expm1(s1) +
                        0.25 * std::expm1(0.5 * s1 + 3.0 * s2);
    CHECK(evaluate_real(t, {s1, s2}) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("complex evaluation of a single atom matches e^z - 1") {
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::from_atoms({Atom{{1.0}, 1.0}});
    std::vector<std::complex<double>> z{{-1.0, 1.0}};
    const auto got = evaluate_complex(t, z);
    CHECK(got.real() == doctest::Approx(-0.8012338896535871).epsilon(1e-12));
    CHECK(got.imag() == doctest::Approx(0.3095598756531122).epsilon(1e-12));
}

TEST_CASE("complex evaluation agrees with real evaluation on the real slice") {
    auto t = stable_triple(0.5);
    for (double s : {-0.3, -2.0}) {
        std::vector<std::complex<double>> z{{s, 0.0}};
        const auto c = evaluate_complex(t, z);
        CHECK(c.imag() == 0.0);
        CHECK(c.real() == doctest::Approx(evaluate_real(t, {s})).epsilon(1e-12));
    }
}

TEST_CASE("gradient matches central differences and is nonnegative") {
    auto t = log_triple(2.0);
    t.c1 = {0.25};
    for (double s : {-0.5, -2.0}) {
        const auto g = gradient(t, std::vector<double>{s});
        CHECK(g[0] >= 0.0);
        const double h = 1e-5;
        const double fd = (evaluate_real(t, {s + h}) -
                           evaluate_real(t, {s - h})) /
                          (2.0 * h);
        CHECK(g[0] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("monotone and nonpositive on the negative orthant") {
    auto t = stable_triple(0.7);
    double prev = -kInf;
    for (double s = -6.0; s < -0.1; s += 0.37) {
        const double v = evaluate_real(t, {s});
        CHECK(v <= 0.0);
        CHECK(v >= prev);  // nondecreasing in s
        prev = v;
    }
}

TEST_CASE("conic sums of measures evaluate additively") {
    auto ta = stable_triple(0.5);
    auto tb = log_triple(2.0);
    LevyTriple sum;
    sum.dim = 1;
    sum.c1 = {0.0};
    sum.measure = MeasureRepr::sum({2.0, 3.0}, {ta.measure, tb.measure});
    for (double s : {-0.5, -3.0}) {
        const double want =
            2.0 * evaluate_real(ta, {s}) + 3.0 * evaluate_real(tb, {s});
        CHECK(evaluate_real(sum, {s}) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("shift normalization reproduces psi(s-c) - psi(-c)") {
    auto check_shift = [](const LevyTriple& t, double c) {
        const auto shifted = shift_normalize(t, {c});
        for (double s : {-0.3, -1.5, -5.0}) {
            const double want =
                evaluate_real(t, {s - c}) - evaluate_real(t, {-c});
            CHECK(evaluate_real(shifted, {s}) ==
                  doctest::Approx(want).epsilon(1e-7));
        }
        CHECK(shifted.c0 == 0.0);
    };
    check_shift(stable_triple(0.5), 1.0);
    check_shift(log_triple(1.0), 0.5);

    // atoms shift by reweighting
    LevyTriple at;
    at.dim = 1;
    at.c1 = {1.0};
    at.measure = MeasureRepr::from_atoms({Atom{{2.0}, 1.5}});
    check_shift(at, 0.25);
}

TEST_CASE("shift normalization rejects nonpositive shifts") {
    auto t = stable_triple(0.5);
    CHECK_THROWS_AS(shift_normalize(t, {0.0}), ArgumentError);
    CHECK_THROWS_AS(shift_normalize(t, {-1.0}), ArgumentError);
}

TEST_CASE("evaluation rejects points outside the open negative orthant") {
    auto t = stable_triple(0.5);
    CHECK_THROWS_AS(evaluate_real(t, {0.0}), ArgumentError);
    CHECK_THROWS_AS(evaluate_real(t, {1.0}), ArgumentError);
}

TEST_CASE("triple-backed handles forward evaluation and noise") {
    auto h = handle_from_triple(stable_triple(0.5));
    CHECK(h.arity == 1);
    CHECK(h.eval_noise > 0.0);
    CHECK(h({-1.0}) == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(h.has_complex());
}
