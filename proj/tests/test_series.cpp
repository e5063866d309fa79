#include <doctest.h>

#include <cmath>
#include <vector>

#include "besselsharp/series.hpp"

using namespace bsharp;

namespace {

// Independent recursion replay with the raw factors, used to check that the
// stored coefficients are recomputable.
double raw_factor(double p, double d, double k) {
    return (k * (k - 1.0) + 2.0 * (d - 1.0) * k - p * (d - 1.0)) /
           (2.0 * (k + 1.0) * (k + d - 1.0));
}

} // namespace

TEST_CASE("params validation and branch classification") {
    CHECK_THROWS_AS(Params::make(0.0, 2.0), Error);
    CHECK_THROWS_AS(Params::make(-1.0, 2.0), Error);
    CHECK_THROWS_AS(Params::make(1.0, 1.0), Error);
    CHECK_THROWS_AS(Params::make(1.0, 0.5), Error);

    CHECK(Params::make(0.5, 2.0).branch == Branch::p_less_1);
    CHECK(Params::make(1.0, 2.0).branch == Branch::p_1_to_2);
    CHECK(Params::make(1.99, 2.0).branch == Branch::p_1_to_2);
    CHECK(Params::make(2.0, 2.0).branch == Branch::p_equal_2);
    CHECK(Params::make(2.0000001, 2.0).branch == Branch::p_greater_2);

    CHECK(Params::make(2.0, 3.0).supercritical);
    CHECK_FALSE(Params::make(0.5, 1.5).supercritical);  // p + d == 2 exactly
    CHECK_FALSE(Params::make(0.7, 1.3).supercritical);  // sums to 2.0 in doubles
    CHECK(Params::make(0.8, 1.5).supercritical);
}

TEST_CASE("leading coefficients match the closed forms") {
    for (const auto& [p, d] : std::vector<std::pair<double, double>>{
             {0.8, 1.5}, {1.0, 3.0}, {1.5, 2.5}, {3.0, 2.0}, {6.0, 5.0}}) {
        const auto s = build_series(Params::make(p, d), 1e-15, 0.9);
        CHECK(s.coeff(0) == -1.0);
        CHECK(s.coeff(1) == doctest::Approx(p / 2.0).epsilon(1e-15));
        CHECK(s.coeff(2) ==
              doctest::Approx(p * (2.0 - p) * (d - 1.0) / (8.0 * d)).epsilon(1e-14));
    }
}

TEST_CASE("stored coefficients are recomputable from the recursion") {
    const auto s = build_series(Params::make(1.7, 2.6), 1e-15, 0.9);
    double a = -1.0;
    for (std::size_t n = 0; n + 1 < std::min<std::size_t>(s.n_terms, 200); ++n) {
        a *= raw_factor(1.7, 2.6, static_cast<double>(n));
        CHECK(s.coeff(n + 1) == doctest::Approx(a).epsilon(1e-13));
    }
}

TEST_CASE("p = 2 terminates as the linear polynomial g(s) = s") {
    const auto s = build_series(Params::make(2.0, 3.0), 1e-15, 0.9);
    REQUIRE(s.polynomial_degree.has_value());
    CHECK(*s.polynomial_degree == 1);
    CHECK(s.coeff(0) == -1.0);
    CHECK(s.coeff(1) == 1.0);
    CHECK(s.coeff(2) == 0.0);
    CHECK(s.coeff(3) == 0.0);

    CHECK(s.eval(0.3, 0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(s.eval(-1.0, 0) == -1.0);
    CHECK(s.eval(0.5, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.eval(0.5, 2) == doctest::Approx(0.0));
    CHECK(s.ode_residual(0.5) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("p = 6, d = 2 is the quadratic (1 - 3 s^2) / 2") {
    const auto s = build_series(Params::make(6.0, 2.0), 1e-15, 0.9);
    REQUIRE(s.polynomial_degree.has_value());
    CHECK(*s.polynomial_degree == 2);
    // Expansion in u = 1+s: -1 + 3u - 1.5u^2.
    CHECK(s.coeff(0) == -1.0);
    CHECK(s.coeff(1) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(s.coeff(2) == doctest::Approx(-1.5).epsilon(1e-15));

    for (int i = 0; i <= 100; ++i) {
        const double x = -1.0 + 1.9 * i / 100.0;
        CHECK(s.eval(x, 0) ==
              doctest::Approx((1.0 - 3.0 * x * x) / 2.0).epsilon(1e-13));
        CHECK(std::abs(s.ode_residual(std::max(x, -0.999999))) <= 1e-12);
    }
}

TEST_CASE("p = 12, d = 2 is the cubic (5 s^3 - 3 s) / 2") {
    const auto s = build_series(Params::make(12.0, 2.0), 1e-15, 0.9);
    REQUIRE(s.polynomial_degree.has_value());
    CHECK(*s.polynomial_degree == 3);
    // Expansion in u = 1+s: -1 + 6u - 7.5u^2 + 2.5u^3.
    CHECK(s.coeff(1) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(s.coeff(2) == doctest::Approx(-7.5).epsilon(1e-15));
    CHECK(s.coeff(3) == doctest::Approx(2.5).epsilon(1e-15));
    for (int i = 0; i <= 50; ++i) {
        const double x = -1.0 + 1.8 * i / 50.0;
        CHECK(s.eval(x, 0) ==
              doctest::Approx((5.0 * x * x * x - 3.0 * x) / 2.0).epsilon(1e-12));
    }
    // terminated series solve the equation to rounding on a 101-point grid
    for (int i = 0; i <= 100; ++i) {
        const double x = -1.0 + 1e-6 + (s.s_max_certified + 1.0 - 1e-6) * i / 100.0;
        CHECK(std::abs(s.ode_residual(x)) <= 1e-12);
    }
}

TEST_CASE("p + d = 2 closed form: g(s) = -((1-s)/2)^p") {
    const auto s = build_series(Params::make(0.7, 1.3), 1e-15, 0.95);
    CHECK_FALSE(s.polynomial_degree.has_value());
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 1.9 * i / 1000.0;
        worst = std::max(worst, std::abs(s.eval(x, 0) + std::pow((1.0 - x) / 2.0, 0.7)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("evaluation domain is guarded") {
    const auto s = build_series(Params::make(1.5, 3.0), 1e-15, 0.9);
    CHECK(s.s_max_certified == doctest::Approx(0.9));
    CHECK_THROWS_AS(s.eval(0.95, 0), Error);
    CHECK_THROWS_AS(s.eval(-1.0001, 0), Error);
    CHECK_THROWS_AS(s.ode_residual(-1.0), Error);
    try {
        s.eval(0.95, 0);
    } catch (const Error& e) {
        CHECK(e.id() == "range");
    }
    CHECK(s.eval(-1.0, 0) == -1.0);
    CHECK(s.eval(-1.0, 1) == doctest::Approx(0.75)); // a_1 = p/2
}

TEST_CASE("tiny budget raises series-budget-exceeded") {
    try {
        build_series(Params::make(1.5, 3.0), 1e-15, 0.9, 20);
        FAIL("expected series-budget-exceeded");
    } catch (const Error& e) {
        CHECK(e.id() == "series-budget-exceeded");
    }
}

TEST_CASE("termwise derivatives agree with finite differences") {
    for (const auto& [p, d] : std::vector<std::pair<double, double>>{
             {0.8, 2.0}, {1.5, 3.0}, {3.0, 1.5}, {6.0, 5.0}}) {
        const auto s = build_series(Params::make(p, d), 1e-15, 0.9);
        const double h = 1e-6;
        for (const double x : {-0.8, -0.3, 0.0, 0.4, 0.7}) {
            const double fd1 = (s.eval(x + h, 0) - s.eval(x - h, 0)) / (2.0 * h);
            const double fd2 = (s.eval(x + h, 1) - s.eval(x - h, 1)) / (2.0 * h);
            CHECK(s.eval(x, 1) == doctest::Approx(fd1).epsilon(1e-5));
            CHECK(s.eval(x, 2) == doctest::Approx(fd2).epsilon(1e-5));
        }
    }
}

TEST_CASE("scaled residual stays below 1e-8 across the certified range") {
    for (const auto& [p, d] : std::vector<std::pair<double, double>>{
             {0.8, 1.5}, {1.0, 2.0}, {1.5, 5.0}, {3.0, 3.0}, {6.0, 2.5}}) {
        const auto s = build_series(Params::make(p, d), 1e-15, 0.95);
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double lo = -1.0 + 1e-6;
            const double x = lo + (s.s_max_certified - lo) * i / 1000.0;
            worst = std::max(worst, std::abs(s.ode_residual(x)));
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("coefficient envelope |a_n| <= 0.75^n for n >= 64") {
    const auto s = build_series(Params::make(1.5, 5.0), 1e-15, 0.95);
    REQUIRE(s.n_terms > 100);
    for (std::size_t n = 64; n < s.n_terms; n += 7)
        CHECK(std::abs(s.coeff(n)) <= std::pow(0.75, static_cast<double>(n)));
}

TEST_CASE("integrator cross-check") {
    SUBCASE("p = 2 exact line") {
        const auto s = build_series(Params::make(2.0, 2.5), 1e-15, 0.9);
        CHECK(rk4_crosscheck(s, 0.7, 20000) == doctest::Approx(0.7).epsilon(1e-8));
    }
    SUBCASE("p = 6, d = 2 quadratic") {
        const auto s = build_series(Params::make(6.0, 2.0), 1e-15, 0.9);
        CHECK(rk4_crosscheck(s, 0.2, 20000) == doctest::Approx(0.44).epsilon(1e-7));
    }
    SUBCASE("generic pair agrees with the series") {
        const auto s = build_series(Params::make(1.2, 1.9), 1e-15, 0.9);
        const double got = rk4_crosscheck(s, 0.5, 200000);
        CHECK(got == doctest::Approx(s.eval(0.5, 0)).epsilon(1e-6));
    }
    SUBCASE("argument guards") {
        const auto s = build_series(Params::make(1.2, 1.9), 1e-15, 0.9);
        CHECK_THROWS_AS(rk4_crosscheck(s, 0.5, 100), Error);
        CHECK_THROWS_AS(rk4_crosscheck(s, -1.0, 20000), Error);
        CHECK_THROWS_AS(rk4_crosscheck(s, 1.0, 20000), Error);
    }
}
