#include <catch_amalgamated.hpp>

#include <cmath>

#include "acfd/params.hpp"

using namespace acfd;

// frozen from an arbitrary-precision evaluation (mpmath, 40 digits)
namespace {
constexpr double kEps200m10 = 0.012007495930289694;
constexpr double kEps100m12 = 0.028817990232695267;
constexpr double kAlphaM10 = 0.017339441804069420;
constexpr double kAlphaM12 = 0.012041279030603764;
} // namespace

TEST_CASE("epsilon_m matches the high-precision oracle", "[params]") {
    CHECK(epsilon_m(1.0 / 200, 10) == Catch::Approx(kEps200m10).epsilon(1e-15));
    CHECK(epsilon_m(1.0 / 100, 12) == Catch::Approx(kEps100m12).epsilon(1e-15));
    CHECK(kAtanh09 == Catch::Approx(std::atanh(0.9)).epsilon(1e-15));
    CHECK(kAtanh09 == Catch::Approx(0.5 * std::log(19.0)).epsilon(1e-15));

    CHECK_THROWS_AS(epsilon_m(1.0, 0), param_error);
    CHECK_THROWS_AS(epsilon_m(0.0, 5), param_error);
    CHECK_THROWS_AS(epsilon_m(-1.0, 5), param_error);
}

TEST_CASE("epsilon_m is strictly increasing in h and m", "[params]") {
    double prev = 0.0;
    for (int m = 1; m <= 20; ++m) {
        const double e = epsilon_m(0.01, m);
        CHECK(e > prev);
        prev = e;
    }
    prev = 0.0;
    for (double h : {0.001, 0.002, 0.005, 0.01, 0.02}) {
        const double e = epsilon_m(h, 10);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("default parameters: dt = 0.1 h^2 and alpha = dt/eps^2", "[params]") {
    const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, 200, 200);
    const SchemeParams p = default_params(s, 10);
    CHECK(p.dt == Catch::Approx(0.1 / (200.0 * 200.0)).epsilon(1e-15));
    CHECK(p.eps == Catch::Approx(kEps200m10).epsilon(1e-15));
    CHECK(p.alpha == Catch::Approx(kAlphaM10).epsilon(1e-14));
    CHECK(p.alpha == p.dt / (p.eps * p.eps));
    CHECK(p.m == 10);
    CHECK(p.dim == 2);

    const GridSpec s3 = GridSpec::make_3d(0, 1, 0, 1, 0, 1, 100, 100, 100);
    CHECK(default_params(s3, 12).alpha == Catch::Approx(kAlphaM12).epsilon(1e-14));
}

TEST_CASE("alpha is invariant under grid refinement at fixed m", "[params]") {
    // closed form: alpha = 0.8 atanh(0.9)^2 / m^2, independent of h
    for (int m : {4, 10, 12}) {
        const double closed = 0.8 * kAtanh09 * kAtanh09 / (static_cast<double>(m) * m);
        for (index_t n : {50, 100, 400}) {
            const GridSpec s = GridSpec::make_2d(0, 1, 0, 1, n, n);
            CHECK(default_params(s, m).alpha == Catch::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("the diffusion stability guard is a hard error", "[params]") {
    const GridSpec s2 = GridSpec::make_2d(0, 1, 0, 1, 50, 50);
    const GridSpec s3 = GridSpec::make_3d(0, 1, 0, 1, 0, 1, 50, 50, 50);
    const double h2 = s2.h() * s2.h();

    CHECK_NOTHROW(params_with_dt(s2, 10, h2 / 4.0));     // under the 2D bound
    CHECK_NOTHROW(params_with_dt(s2, 10, h2 / 4.0 * 0.999999));
    CHECK_THROWS_AS(params_with_dt(s2, 10, h2 / 4.0 * 1.01), config_error);

    // dt = h^2 violates h^2/6 in 3D
    CHECK_THROWS_AS(params_with_dt(s3, 12, h2), config_error);
    CHECK_NOTHROW(params_with_dt(s3, 12, h2 / 6.0));

    CHECK_THROWS_AS(params_with_dt(s2, 10, 0.0), config_error);
    CHECK_THROWS_AS(params_with_dt(s2, 10, -1e-6), config_error);
}
