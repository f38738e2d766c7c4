#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tauberkit/errors.hpp"
#include "tauberkit/kernels.hpp"

using namespace tk::kernels;
using oracle::pi;

namespace {

double chi_ref(double u) {
    if (u == 0.0) return 1.0 / (2.0 * pi);
    const double s = std::sin(u / 2.0) / (u / 2.0);
    return s * s / (2.0 * pi);
}

// int_R^inf chi = (1/pi) int_R^inf (1 - cos u)/u^2 du = 1/(pi R) + sin R/(pi R^2) + O(R^-3).
double far_tail(double R) { return 1.0 / (pi * R) + std::sin(R) / (pi * R * R); }

double tail_ref(double q) {
    const double R = 4000.0;
    return 2.0 * (oracle::simpson<double>(chi_ref, q, R, 4'000'000) + far_tail(R));
}

}  // namespace

TEST_CASE("fejer kernel values") {
    CHECK(fejer_chi(0.0) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-15));
    CHECK(fejer_chi(pi) == doctest::Approx(2.0 / (pi * pi * pi)).epsilon(1e-14));
    CHECK(fejer_chi(-2.3) == doctest::Approx(fejer_chi(2.3)).epsilon(1e-15));
    CHECK(fejer_chi_T(1.0, 0.0) == doctest::Approx(1.0 / (2.0 * pi)));
    CHECK(fejer_chi_T(2.0, 0.0) == doctest::Approx(1.0 / pi));
    CHECK_THROWS_AS((void)fejer_chi_T(0.0, 1.0), tk::DomainError);
    CHECK_THROWS_AS((void)fejer_chi_T(-1.0, 1.0), tk::DomainError);
}

TEST_CASE("fejer mass against Simpson") {
        const double T = 3.0, R = 2000.0;
    const double inner = 2.0 * oracle::simpson<double>([&](double u) { return T * chi_ref(T * u); }, 0.0, R, 6'000'000);
    CHECK(std::abs(inner + 2.0 * far_tail(T * R) - 1.0) < 1e-8);
}

TEST_CASE("fejer transform triangle") {
    CHECK(fejer_hat(4.0, 0.0) == 1.0);
    CHECK(fejer_hat(4.0, 4.0) == 0.0);
    CHECK(fejer_hat(4.0, 1.0) == doctest::Approx(0.75));
    CHECK(fejer_hat(4.0, -5.0) == 0.0);
    CHECK_THROWS_AS((void)fejer_hat(0.0, 1.0), tk::DomainError);
}

TEST_CASE("fejer tail") {
    CHECK(fejer_tail(5.0) <= 4.0 / (5.0 * pi));
    CHECK(std::abs(fejer_tail(5.0) - tail_ref(5.0)) < 1e-8);
    CHECK(fejer_tail(1e-6) > 0.999999);
    CHECK_THROWS_AS((void)fejer_tail(0.0), tk::DomainError);
    double prev = 1.0;
    for (double q = 0.05; q < 200.0; q *= 1.3) {
        const double v = fejer_tail(q);
        CHECK(v < prev);
        CHECK(v <= std::min(1.0, 4.0 / (pi * q)));
        prev = v;
    }
}

TEST_CASE("wallis W closed forms") {
    CHECK(wallis_W({1.0, 1.0, 1.0}) == doctest::Approx(std::asinh(1.0)).epsilon(1e-10));
    CHECK(wallis_W({2.0, 0.7, 3.0}) == doctest::Approx(std::atan(3.0 / 0.7) / 0.7).epsilon(1e-10));
    CHECK(wallis_W({2.0, 1.0, kInf}) == doctest::Approx(pi / 2.0).epsilon(1e-9));
    CHECK(wallis_W({2.0, 1.0, kInf}) < 2.0);
    // m = 0.5, sigma = 0: int_0^T t^{-1/2} = 2 sqrt T
    CHECK(wallis_W({0.5, 0.0, 9.0}) == doctest::Approx(6.0).epsilon(1e-9));
    const double lhs = wallis_W({2.0, 0.5, 3.0});
    const double rhs = std::pow(0.5, -1.0) * wallis_W({2.0, 1.0, 6.0});
    CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
}

TEST_CASE("wallis W divergence") {
    CHECK_THROWS_AS((void)wallis_W({1.0, 1.0, kInf}), tk::DomainError);
    CHECK_THROWS_AS((void)wallis_W({0.5, 1.0, kInf}), tk::DomainError);
    CHECK_THROWS_AS((void)wallis_W({1.0, 0.0, 1.0}), tk::DomainError);
}

TEST_CASE("wallis W scaling on random triples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dm(0.0, 5.0), ds(0.01, 10.0), dT(0.1, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double m = dm(rng), s = ds(rng), T = dT(rng);
        const double lhs = wallis_W({m, s, T});
        const double rhs = std::pow(s, 1.0 - m) * wallis_W({m, 1.0, T / s});
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
    }
}

TEST_CASE("wallis Z") {
    CHECK(wallis_Z({2.0, 0.3, 0.0}) == 0.0);
    // Riemann midpoint sum on a fine grid
    const double s = 0.1;
    auto f = [&](double t) { return 1.0 / ((s * s + t * t) * std::hypot(1.0 + s, t)); };
    const int n = 2'000'000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f((i + 0.5) / n);
    acc /= n;
    CHECK(std::abs(wallis_Z({2.0, s, 1.0}) - acc) < 1e-8);
    const double z0 = wallis_Z({0.0, 0.3, 100.0});
    CHECK(z0 > 0.25 * std::log(101.0));
    CHECK(z0 < 4.0 * std::log(101.0));
}

TEST_CASE("beta kernel") {
    CHECK(beta({0.5, -1.0}) == 0.0);
    CHECK(beta({3.0, 0.0}) == 0.0);
    CHECK(beta({0.0, std::log(2.0)}) == doctest::Approx(0.25).epsilon(1e-14));
    double best = 0.0;
    for (int i = 1; i < 20000; ++i) best = std::max(best, beta({0.0, i * 1e-4}));
    CHECK(best <= 0.25);
    CHECK(best > 0.25 - 1e-8);
    for (double w = -0.99; w <= 10.0; w += 0.17)
        for (double t = 0.01; t < 40.0; t += 0.05) CHECK(beta({w, t}) <= 1.0 / std::sqrt(pi));
    CHECK_THROWS_AS((void)beta({-1.0, 1.0}), tk::DomainError);
}

TEST_CASE("beta difference bound") {
    double margin = -1.0;
    CHECK(beta_diff_bound_check(0.0, 0.0, 0.1));
    CHECK(beta_diff_bound_check(1.3, -5.0, 1.0, &margin));
    CHECK(margin == doctest::Approx(1.0 + 2.0 / std::sqrt(pi)));
    CHECK(beta_diff_bound_check(2.0, 1.0, 0.01, &margin));
    const double direct = std::abs(beta({2.0, 1.01}) - beta({2.0, 1.0}));
    CHECK(margin == doctest::Approx(std::pow(0.01, 3.0) + 0.02 / std::sqrt(pi) - direct).epsilon(1e-12));
}

TEST_CASE("gamma") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_fn(3.7) > gamma_stirling_lower(3.7));
    for (double x = 0.1; x < 40.0; x += 0.37)
        CHECK(std::abs(gamma_fn(x + 1.0) - x * gamma_fn(x)) <= 1e-11 * gamma_fn(x + 1.0));
    CHECK_THROWS_AS((void)gamma_fn(0.0), tk::DomainError);
    CHECK_THROWS_AS((void)gamma_fn(-3.0), tk::DomainError);
}
