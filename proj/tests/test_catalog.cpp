#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tnfun/catalog.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/membership.hpp"

using namespace tnfun;

TEST_CASE("catalog lookup enforces parameter ranges") {
    CHECK_THROWS_AS(catalog_get("power", {}), ArgumentError);
    CHECK_THROWS_AS(catalog_get("power", {{"alpha", 1.5}}), ArgumentError);
    CHECK_THROWS_AS(catalog_get("log", {{"b", 0.5}}), ArgumentError);
    CHECK_THROWS_AS(catalog_get("nonsense", {}), ArgumentError);
    CHECK(catalog_get("power", {{"alpha", 0.5}}).handle.arity == 1);
    CHECK(catalog_get("log", {}).params.at("b") == 1.0);
}

TEST_CASE("closed forms agree with their integral representations") {
    for (const auto& e : catalog_standard_entries()) {
        if (!e.triple) continue;
        for (double s : {-0.2, -1.0, -5.0}) {
            std::vector<double> p(e.handle.arity, s);
            const double closed = e.handle(p);
            const double integral = evaluate_real(*e.triple, p);
            CHECK(std::abs(closed - integral) <=
                  1e-6 * (1.0 + std::abs(closed)));
        }
    }
}

TEST_CASE("polylog values at -1 against series oracles") {
    CHECK(catalog_polylog(1).handle({-1.0}) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(catalog_polylog(2).handle({-1.0}) ==
          doctest::Approx(-0.8224670334241132).epsilon(1e-9));
    CHECK(catalog_polylog(3).handle({-1.0}) ==
          doctest::Approx(-0.9015426773696957).epsilon(1e-9));
    CHECK(catalog_polylog(4).handle({-1.0}) ==
          doctest::Approx(-0.9470328294972459).epsilon(1e-9));
}

TEST_CASE("polylog series and integral routes agree across the switch") {
    for (int p : {2, 3}) {
        auto h = catalog_polylog(p).handle;
        // both sides of the s = -1 switch point
        const double a = h({-0.999});
        const double b = h({-1.001});
        CHECK(std::abs(a - b) < 5e-3);
        CHECK(a > b);  // Li_p is increasing
    }
}

TEST_CASE("damped power family matches its closed form") {
    auto e = catalog_power(0.5, 1.0);
    for (double s : {-0.5, -2.0}) {
        const double want = 1.0 - std::sqrt(1.0 - s);
        CHECK(e.handle({s}) == doctest::Approx(want).epsilon(1e-12));
        CHECK(evaluate_real(*e.triple, {s}) ==
              doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("damping coheres with shift normalization") {
    auto base = *catalog_power(0.5, 0.0).triple;
    auto shifted = shift_normalize(base, {1.0});
    auto damped = *catalog_power(0.5, 1.0).triple;
    for (double s : {-0.5, -3.0})
        CHECK(evaluate_real(shifted, {s}) ==
              doctest::Approx(evaluate_real(damped, {s})).epsilon(1e-7));
}

TEST_CASE("two-variable entry values") {
    auto e = catalog_example2(2.0);
    CHECK(e.handle({-1.0, -2.0}) ==
          doctest::Approx(-0.2123179275482191).epsilon(1e-12));
    CHECK(e.handle({-1.0, -1.0}) ==
          doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
    // symmetric by construction
    CHECK(e.handle({-0.5, -3.0}) ==
          doctest::Approx(e.handle({-3.0, -0.5})).epsilon(1e-12));
}

TEST_CASE("inverse hyperbolic cosine family basics") {
    auto e = catalog_arch(2.0);
    CHECK(e.handle({-1.0}) ==
          doctest::Approx(std::acosh(2.0) - std::acosh(3.0)).epsilon(1e-12));
    CHECK_FALSE(e.triple.has_value());
    CHECK(catalog_arch(1.0).handle({-1.0}) ==
          doctest::Approx(-std::acosh(2.0)).epsilon(1e-12));
}

TEST_CASE("every standard entry passes the membership suite") {
    for (const auto& e : catalog_standard_entries()) {
        auto rep = verify_Tn(e.handle);
        INFO(e.name);
        CHECK(rep.accepted());
    }
}

TEST_CASE("standard entries pass the sector check") {
    SectorSpec spec;
    spec.samples = 300;
    for (const auto& e : catalog_standard_entries()) {
        if (!e.handle.has_complex()) continue;
        for (double theta : {M_PI / 3, M_PI / 2, 2 * M_PI / 3}) {
            spec.theta = theta;
            auto rep = sector_check(e.handle, spec, 13);
            INFO(e.name << " theta=" << theta);
            CHECK(rep.violations == 0);
        }
    }
}
