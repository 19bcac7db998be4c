#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tnfun/catalog.hpp"
#include "tnfun/constructors.hpp"
#include "tnfun/function_handle.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/membership.hpp"

using namespace tnfun;

namespace {

LevyTriple atom_triple(double u, double w) {
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::from_atoms({Atom{{u}, w}});
    return t;
}

}  // namespace

TEST_CASE("first-slot composition composes evaluators") {
    auto li1 = catalog_polylog(1).handle;
    auto h = compose(li1, li1);
    CHECK(h.arity == 1);
    // -log(1 + log 2) at s = -1
    CHECK(h({-1.0}) == doctest::Approx(-0.5265890341390445).epsilon(1e-12));
}

TEST_CASE("composition arity arithmetic for multivariate outers") {
    auto outer = catalog_example2(2.0).handle;  // 2-ary
    auto inner = catalog_polylog(1).handle;     // 1-ary
    auto h = compose(outer, inner);
    CHECK(h.arity == 2);
    const double inner_val = inner({-1.0});
    CHECK(h({-1.0, -2.0}) ==
          doctest::Approx(outer({inner_val, -2.0})).epsilon(1e-12));
}

TEST_CASE("composition is associative") {
    auto f = catalog_power(0.5, 0.0).handle;
    auto g = catalog_log(2.0).handle;
    auto k = catalog_polylog(1).handle;
    auto lhs = compose(f, compose(g, k));
    auto rhs = compose(compose(f, g), k);
    for (double s : {-0.3, -1.0, -4.0})
        CHECK(lhs({s}) == doctest::Approx(rhs({s})).epsilon(1e-12));
}

TEST_CASE("only the first slot is composable directly") {
    auto f = catalog_power(0.5, 0.0).handle;
    CHECK_THROWS_AS(compose(f, f, 2), ArgumentError);
}

TEST_CASE("conic combinations of handles evaluate additively") {
    auto a = catalog_power(0.5, 0.0).handle;
    auto b = catalog_log(2.0).handle;
    auto h = conic_combine({{2.0, a}, {3.0, b}});
    for (double s : {-0.5, -2.0})
        CHECK(h({s}) ==
              doctest::Approx(2.0 * a({s}) + 3.0 * b({s})).epsilon(1e-12));
    CHECK_THROWS_AS(
        conic_combine(std::vector<std::pair<double, FunctionHandle>>{
            {-1.0, a}}),
        ArgumentError);
}

TEST_CASE("conic combinations of triples match the handle route") {
    auto ta = *catalog_power(0.5, 0.0).triple;
    auto tb = *catalog_log(2.0).triple;
    ta.c0 = -0.125;
    auto sum = conic_combine(
        std::vector<std::pair<double, LevyTriple>>{{2.0, ta}, {3.0, tb}});
    CHECK(sum.c0 == doctest::Approx(-0.25));
    for (double s : {-0.5, -2.0}) {
        const double want =
            2.0 * evaluate_real(ta, {s}) + 3.0 * evaluate_real(tb, {s});
        CHECK(evaluate_real(sum, {s}) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("argument permutation relabels slots") {
    auto f = make_handle(
        2, [](std::span<const double> s) { return s[0] + 2.0 * s[1]; },
        "affine");
    auto g = permute_arguments(f, {1, 0});
    CHECK(g({-1.0, -2.0}) == doctest::Approx(-4.0));  // f(-2, -1)
    CHECK_THROWS_AS(permute_arguments(f, {0, 0}), ArgumentError);
    CHECK_THROWS_AS(permute_arguments(f, {0}), ArgumentError);
}

TEST_CASE("composing with a permuted outer reaches other slots") {
    auto outer = catalog_example2(2.0).handle;
    auto swapped = permute_arguments(outer, {1, 0});
    auto inner = catalog_polylog(1).handle;
    auto h = compose(swapped, inner);
    const double inner_val = inner({-1.0});
    CHECK(h({-1.0, -2.0}) ==
          doctest::Approx(outer({-2.0, inner_val})).epsilon(1e-12));
}

TEST_CASE("tail integral reproduces the series oracle for the atom member") {
    // psi(t) = e^t - 1;  ∫_{-1}^0 psi(t)(-1/t) dt = sum (-1)^k/(k k!)
    auto psi = handle_from_triple(atom_triple(1.0, 1.0));
    auto h = tail_integral(psi, WeightSpec::neg_inv_t());
    CHECK(h({-1.0}) == doctest::Approx(-0.7965995992970531).epsilon(1e-8));
}

TEST_CASE("tail integral requires a vanishing derivative at -infinity") {
    auto drift = make_handle(
        1, [](std::span<const double> s) { return s[0]; }, "drift");
    CHECK_THROWS_AS(tail_integral(drift, WeightSpec::neg_inv_t()),
                    ConstructionError);
}

TEST_CASE("tail integral rejects multivariate input") {
    auto f = catalog_example2(2.0).handle;
    CHECK_THROWS_AS(tail_integral(f, WeightSpec::neg_inv_t()), ArgumentError);
}

TEST_CASE("divided-difference lift of a single atom") {
    auto lift = divided_difference_lift(atom_triple(1.0, 1.0));
    CHECK(lift.omega == doctest::Approx(1.0));
    // (e^{s1} - e^{s2})/(s1 - s2) - 1
    CHECK(lift.handle({-1.0, -2.0}) ==
          doctest::Approx(-0.7674558420651704).epsilon(1e-10));
    // diagonal: psi'(s) - omega = e^{-1} - 1
    CHECK(lift.handle({-1.0, -1.0}) ==
          doctest::Approx(-0.6321205588285577).epsilon(1e-10));
}

TEST_CASE("the lifted function is exactly symmetric") {
    auto lift = divided_difference_lift(atom_triple(1.5, 0.5));
    for (double a : {-0.3, -1.0, -5.0})
        for (double b : {-0.31, -2.0})
            CHECK(lift.handle({a, b}) == lift.handle({b, a}));
}

TEST_CASE("lift is continuous across the diagonal") {
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::exp_over_u(2.0);
    auto lift = divided_difference_lift(t);
    const double on = lift.handle({-1.0, -1.0});
    const double near = lift.handle({-1.0, -1.0 - 1e-9});
    CHECK(std::abs(on - near) < 1e-7);
}

TEST_CASE("lift preconditions: drift and infinite first moment") {
    auto with_drift = atom_triple(1.0, 1.0);
    with_drift.c1 = {0.5};
    CHECK_THROWS_AS(divided_difference_lift(with_drift), ConstructionError);

    LevyTriple heavy;
    heavy.dim = 1;
    heavy.c1 = {0.0};
    heavy.measure = MeasureRepr::stable(0.5);  // ∫ u dmu = inf
    CHECK_THROWS_AS(divided_difference_lift(heavy), ConstructionError);
}

TEST_CASE("pushforward triple agrees with the lifted handle") {
    auto lift = divided_difference_lift(atom_triple(1.0, 1.0), 0.0, 64);
    REQUIRE(lift.pushforward.has_value());
    const auto& push = *lift.pushforward;
    CHECK(push.dim == 2);
    CHECK(validate_triple(push).pass);
    for (const auto& p : {std::pair{-1.0, -2.0}, {-0.5, -0.5}, {-3.0, -0.3}}) {
        const double via_push = evaluate_real(push, {p.first, p.second});
        const double direct = lift.handle({p.first, p.second});
        CHECK(via_push == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("no pushforward for parametric measures, handle still works") {
    LevyTriple t;
    t.dim = 1;
    t.c1 = {0.0};
    t.measure = MeasureRepr::exp_over_u(2.0);
    auto lift = divided_difference_lift(t);
    CHECK_FALSE(lift.pushforward.has_value());
    CHECK(std::isfinite(lift.handle({-1.0, -2.0})));
}

TEST_CASE("lift output passes the membership test in two variables") {
    auto lift = divided_difference_lift(atom_triple(1.0, 1.0));
    MembershipOptions opt;
    opt.max_order = 4;
    CHECK(verify_Tn(lift.handle, opt).accepted());
}
