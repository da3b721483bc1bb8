#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <fraclag/core.hpp>

using namespace fraclag;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("fractional order accepts (0,1] and flags the classical limit") {
    CHECK(FractionalOrder(0.65).value() == 0.65);
    CHECK(FractionalOrder(1e-9).value() == 1e-9);
    CHECK(FractionalOrder(1.0).is_classical());
    CHECK_FALSE(FractionalOrder(0.999999).is_classical());
}

TEST_CASE("fractional order rejects everything outside (0,1]") {
    CHECK_THROWS_AS(FractionalOrder(0.0), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(-0.3), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(1.0000001), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(1.5), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(FractionalOrder(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("state norm, finiteness and arithmetic") {
    const State3 a{3.0, 0.0, 4.0};
    CHECK(a.norm() == 5.0);
    CHECK(a.finite());
    CHECK_FALSE(State3{1.0, std::nan(""), 0.0}.finite());
    CHECK_FALSE(State3{1.0, 0.0, std::numeric_limits<double>::infinity()}.finite());

    const State3 b{1.0, -2.0, 0.5};
    CHECK(a + b == State3{4.0, -2.0, 4.5});
    CHECK(a - b == State3{2.0, 2.0, 3.5});
    CHECK(2.0 * b == State3{2.0, -4.0, 1.0});
}

TEST_CASE("gamma matches high-precision reference values") {
    // Reference digits computed with 30-digit arithmetic ahead of the build.
    CHECK_THAT(fraclag::gamma(1.0), WithinAbs(1.0, 1e-13));
    CHECK_THAT(fraclag::gamma(2.0), WithinAbs(1.0, 1e-12));
    CHECK_THAT(fraclag::gamma(6.0), WithinRel(120.0, 1e-13));
    CHECK_THAT(fraclag::gamma(0.5), WithinRel(1.7724538509055160273, 1e-13));
    CHECK_THAT(fraclag::gamma(1.5), WithinRel(0.88622692545275801365, 1e-13));
    CHECK_THAT(fraclag::gamma(1.65), WithinRel(0.90011681631723150185, 1e-13));
    CHECK_THAT(fraclag::gamma(0.65), WithinRel(1.3847951020265100029, 1e-13));
    CHECK_THAT(fraclag::gamma(0.75), WithinRel(1.2254167024651776451, 1e-13));
    CHECK_THAT(fraclag::gamma(1.25), WithinRel(0.90640247705547707798, 1e-13));
    CHECK_THAT(fraclag::gamma(1.9), WithinRel(0.96176583190738741941, 1e-13));
    CHECK_THAT(fraclag::gamma(2.35), WithinRel(1.2030544467328060930, 1e-13));
    CHECK_THAT(fraclag::gamma(3.0), WithinRel(2.0, 1e-13));
}

TEST_CASE("gamma satisfies the recurrence gamma(x+1) = x*gamma(x)") {
    std::mt19937 rng(20260816);
    std::uniform_real_distribution<double> dist(0.5, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double x = dist(rng);
        CHECK_THAT(fraclag::gamma(x + 1.0), WithinRel(x * fraclag::gamma(x), 1e-12));
    }
}

TEST_CASE("gamma rejects the poles and the negative axis") {
    CHECK_THROWS_AS(fraclag::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(fraclag::gamma(-1.0), std::domain_error);
    CHECK_THROWS_AS(fraclag::gamma(-0.5), std::domain_error);
    CHECK_THROWS_AS(fraclag::gamma(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(fraclag::gamma(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("complex argument on the axes") {
    CHECK(complex_arg({-1.0, 0.0}).value() == M_PI);
    CHECK(complex_arg({-7.25, 0.0}).value() == M_PI);
    CHECK(complex_arg({1.0, 0.0}).value() == 0.0);
    CHECK(complex_arg({345.0, 0.0}).value() == 0.0);
    CHECK_THAT(complex_arg({0.0, 1.0}).value(), WithinAbs(M_PI / 2.0, 0.0));
    CHECK_THAT(complex_arg({0.0, -1.0}).value(), WithinAbs(-M_PI / 2.0, 0.0));
}

TEST_CASE("zero and near-zero values are flagged, not given an argument") {
    CHECK_FALSE(complex_arg({0.0, 0.0}).has_value());
    CHECK_FALSE(complex_arg({1e-13, 0.0}).has_value());
    CHECK_FALSE(complex_arg({0.0, -1e-13}).has_value());
    CHECK(complex_arg({1e-11, 0.0}).has_value());
}
