#include <catch2/catch_amalgamated.hpp>

#include <bosegas/special.hpp>

#include <cmath>

using namespace bosegas;

TEST_CASE("zeta at classical points") {
    CHECK(std::abs(zeta_fn(2.0) - M_PI * M_PI / 6.0) < 1e-10);
    CHECK(std::abs(zeta_fn(4.0) - std::pow(M_PI, 4) / 90.0) < 1e-10);
    CHECK(std::abs(zeta_fn(3.0) - 1.2020569031595943) < 1e-10);
    CHECK(std::abs(zeta_fn(1.5) - 2.6123753486854883) < 1e-10);
    // accuracy contract: abs error <= 1e-10 on [1.1, 10]
    CHECK(std::abs(zeta_fn(1.1) - 10.584448464950804) < 1e-10);
    CHECK(std::abs(zeta_fn(10.0) - 1.0009945751278180854) < 1e-10);
    CHECK_THROWS_AS(zeta_fn(1.0), std::domain_error);
    CHECK_THROWS_AS(zeta_fn(0.5), std::domain_error);
}

TEST_CASE("gamma at classical points") {
    CHECK(std::abs(gamma_fn(4.0) - 6.0) < 1e-10);
    CHECK(std::abs(gamma_fn(1.0) - 1.0) < 1e-12);
    CHECK(std::abs(gamma_fn(0.5) - std::sqrt(M_PI)) < 1e-10);
    CHECK(std::abs(gamma_fn(1.5) - 0.8862269254527580) < 1e-10);
    CHECK(std::abs(gamma_fn(10.0) - 362880.0) < 1e-4);
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.0), std::domain_error);
}

TEST_CASE("gamma functional equation") {
    for (double s : {1.3, 2.7, 4.2, 6.9}) {
        CHECK(gamma_fn(s + 1.0) == Catch::Approx(s * gamma_fn(s)).epsilon(1e-12));
    }
}

TEST_CASE("euler gamma constant") {
    CHECK(std::abs(euler_gamma() - 0.5772156649015329) < 1e-15);
}

TEST_CASE("gumbel survival function") {
    CHECK(std::abs(gumbel_sf(euler_gamma()) - std::exp(-1.0)) < 1e-14);
    CHECK(std::abs(gumbel_sf(0.0) - 0.5703760016750230) < 1e-12);
    // monotone decreasing with limits 1 and 0
    double prev = 1.0;
    for (double x = -30.0; x <= 30.0; x += 0.25) {
        const double v = gumbel_sf(x);
        CHECK(v < prev);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        prev = v;
    }
    CHECK(gumbel_sf(-40.0) > 1.0 - 1e-12);
    CHECK(gumbel_sf(40.0) < 1e-12);
}

TEST_CASE("normal cdf sanity") {
    CHECK(normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(normal_cdf(1.0) == Catch::Approx(0.8413447460685429).margin(1e-12));
    CHECK(normal_cdf(-1.0) == Catch::Approx(1.0 - 0.8413447460685429).margin(1e-12));
}
