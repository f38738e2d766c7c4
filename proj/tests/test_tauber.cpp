#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tauberkit/errors.hpp"
#include "tauberkit/tauber.hpp"

using namespace tk::tauber;
using oracle::euler_gamma;
using oracle::pi;

namespace {

const CoefficientSeries& vm() {
    static const auto s = CoefficientSeries::catalog("von_mangoldt", 1'000'000);
    return s;
}

double eta_double_pole_ref(double sigma, double T) {
    auto f = [sigma](double t) {
        const cd a(2.0 * sigma, t), b(sigma, t);
        return std::abs(1.0 / (a * a) - 1.0 / (b * b));
    };
    return oracle::simpson<double>(f, -T, T, 4'000'000);
}

}  // namespace

TEST_CASE("G vanishes for an exactly cancelled pole") {
    const double c = 1.7;
    const auto exact = CoefficientSeries::synthetic("exact", [c](cd s) { return s * c / (s - 1.0); });
    const auto sing = real_pole_structure({{0.0, c}});
    for (double t : {-3.0, 0.0, 2.5}) CHECK(std::abs(G_eval(exact, sing, {0.2, t})) < 1e-14);
    CHECK(eta(exact, sing, 0.1, 5.0).value < 1e-12);
}

TEST_CASE("G for the von Mangoldt series is regular at 0") {
    const auto sing = real_pole_structure({{0.0, 1.0}});
    // -zeta'/zeta(1+s)/(1+s) = 1/s - 1 - gamma + O(s)
    const cd g = G_eval(vm(), sing, {1e-5, 0.0});
    CHECK(g.real() == doctest::Approx(-1.0 - euler_gamma).epsilon(1e-3));
    const cd z(0.3, 4.0);
    CHECK(std::abs(G_eval(vm(), sing, std::conj(z)) - std::conj(G_eval(vm(), sing, z))) < 1e-12);
}

TEST_CASE("G for the twisted series is bounded near 1 +- i") {
    const auto tw = CoefficientSeries::catalog("cos_twisted_von_mangoldt", 100000);
    const SingularStructure sing({Pole{0.0, {}}, Pole{1.0, {{0.0, 1.0 / cd(1.0, -1.0)}}}}, "twisted");
    const SingularStructure none;
    for (double d : {1e-2, 1e-3, 1e-4}) {
        CHECK(std::abs(G_eval(tw, sing, {d, 1.0})) < 5.0);
        CHECK(std::abs(G_eval(tw, sing, {d, -1.0})) < 5.0);
        CHECK(std::abs(G_eval(tw, none, {d, 1.0})) > 0.5 / d);
    }
}

TEST_CASE("eta basics") {
    const auto sing = real_pole_structure({{0.0, 1.0}});
    double prev = 0.0;
    for (double T : {1.0, 5.0, 20.0}) {
        const double v = eta(vm(), sing, 0.05, T).value;
        CHECK(v >= prev);
        prev = v;
    }
    // eta for the fully cancelled von Mangoldt pole shrinks with sigma
    std::vector<double> vals;
    for (int j = 3; j <= 9; j += 2) vals.push_back(eta(vm(), sing, std::ldexp(1.0, -j), 5.0).value);
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] < vals[i - 1]);
    CHECK(vals.back() < 0.05);
    EtaAccumulator acc(vm(), sing, 0.05);
    CHECK(acc.extend_to(5.0).value == doctest::Approx(eta(vm(), sing, 0.05, 5.0).value).epsilon(1e-8));
    CHECK(acc.extend_to(20.0).value == doctest::Approx(prev).epsilon(1e-8));
}

TEST_CASE("eta of a double pole against Simpson") {
    const auto s2 = CoefficientSeries::synthetic_power(2);
    const SingularStructure none;
    for (double sigma : {1e-3, 1e-2, 1e-1}) {
        const double v = eta(s2, none, sigma, 1.0).value;
        CHECK(v == doctest::Approx(eta_double_pole_ref(sigma, 1.0)).epsilon(1e-6));
        CHECK(v * sigma > 0.5);
        CHECK(v * sigma < 5.0);
    }
}

TEST_CASE("pole order round trip") {
    const SingularStructure none;
    const auto sig = geometric_points(1e-4, 1e-1, 10);
    for (int m = 0; m <= 3; ++m) {
        const auto curve = eta_curve(CoefficientSeries::synthetic_power(m), none, 1.0, sig);
        CHECK(estimate_pole_order(curve).m_hat == m);
    }
    EtaCurve zero{1.0, {{1e-3, 0, 0}, {1e-2, 0, 0}, {1e-1, 0, 0}, {0.5, 0, 0}}, "z", "none"};
    CHECK(estimate_pole_order(zero).m_hat == 0);
    EtaCurve few{1.0, {{1e-3, 1, 0}, {1e-2, 1, 0}}, "z", "none"};
    CHECK_THROWS_AS((void)estimate_pole_order(few), tk::ArgumentError);
}

TEST_CASE("principal part bound") {
    CHECK(eta_principal_split(real_pole_structure({{0.0, 1.0}}), 0.3, 1.0) == doctest::Approx(4.0));
    CHECK(eta_principal_split(real_pole_structure({{1.0, 2.0}}), 0.1, 1.0) == doctest::Approx(120.0));
    CHECK(eta_principal_split(SingularStructure(), 0.1, 1.0) == 0.0);
}

TEST_CASE("integral condition of the boundedness theorem") {
    const auto zero = CoefficientSeries::from_coefficients({0.0, 0.0}, "zero", [](cd) { return cd(0.0); });
    const auto sig = geometric_points(1e-3, 0.5, 6);
    CHECK(check_thm41_hypothesis(zero, 1.0, 10.0, 0.0, sig).K1_min == 0.0);
    const auto r1 = check_thm41_hypothesis(vm(), 1.0, 10.0, 100.0, sig);
    CHECK(std::isfinite(r1.K1_min));
    CHECK(r1.pass);
    const auto dv = CoefficientSeries::catalog("divisor", 100000);
    const auto r2 = check_thm41_hypothesis(dv, 2.0, 10.0, 100.0, sig);
    CHECK(r2.pass);
    // integral ~ sigma^{-1}: sigma * integral stays within a bounded band
    for (const auto& row : r2.rows) {
        CHECK(row.integral * row.sigma > 0.1);
        CHECK(row.integral * row.sigma < 10.0);
    }
}

TEST_CASE("growth conclusion") {
    std::vector<double> xs;
    for (double x = std::exp(std::numbers::e); x < 1e7; x *= 1.5) xs.push_back(x);
    const auto u = check_thm41_conclusion(CoefficientSeries::catalog("unit", 10'000'000), 1.0, xs);
    CHECK(u.C <= 1.0);
    CHECK(u.weight == "loglog x");
    CHECK(std::isfinite(check_thm41_conclusion(CoefficientSeries::catalog("von_mangoldt", 10'000'000), 1.0, xs).C));
    const auto d = check_thm41_conclusion(CoefficientSeries::catalog("divisor", 10'000'000), 2.0, xs);
    CHECK(d.C < 2.0);
}

TEST_CASE("transfer constant") {
    CHECK(lemma43_transfer(3.0, 1.0, 1.0) == doctest::Approx(6.0));
    CHECK(lemma43_transfer(0.0, 2.0, 1.0) == 0.0);
    const Lemma43Params p{1.5, 0.25, 0.5};
    const double Kstar = 1.5 / 2.0 + 2.0 * std::numbers::e * std::tgamma(2.5) * 0.25;
    CHECK(lemma43_transfer(1.0, 0.0, 10.0, p) == doctest::Approx(2.0 / std::log(2.0) * (Kstar * 10.0 + 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS((void)lemma43_transfer(1.0, 0.0, 10.0), tk::ArgumentError);
}

TEST_CASE("main term") {
    CHECK(main_term(real_pole_structure({{0.0, 1.0}}), 100.0) == doctest::Approx(100.0));
    const auto div = real_pole_structure({{1.0, 1.0}, {0.0, 2.0 * euler_gamma - 1.0}});
    CHECK(main_term(div, std::numbers::e) == doctest::Approx(2.0 * euler_gamma * std::numbers::e).epsilon(1e-14));
    const SingularStructure osc({Pole{0.0, {}}, Pole{1.0, {{0.0, 0.5}}}});
    const double x = std::exp(2.0 * pi);
    CHECK(main_term(osc, x) == doctest::Approx(x).epsilon(1e-12));
    // only 2Re(c e^{-ib log x}) enters
    const SingularStructure a({Pole{0.0, {{0.5, cd(0.3, 0.0)}}}}), b({Pole{0.0, {{0.5, cd(0.3, 9.0)}}}});
    CHECK(main_term(a, 50.0) == doctest::Approx(main_term(b, 50.0)).epsilon(1e-15));
}

TEST_CASE("Laurent coefficients of the divisor transform") {
    const auto c = laurent_fit(CoefficientSeries::catalog("divisor", 1000), 2);
    REQUIRE(c.size() == 2);
    CHECK(std::abs(c[0] - 1.0) < 1e-6);
    CHECK(std::abs(c[1] - (2.0 * euler_gamma - 1.0)) < 1e-6);
}

TEST_CASE("error factor examples") {
    const SingularStructure empty;
    const double x = std::exp(10.0);
    ModerateParams mp;
    mp.B1 = 0.4;
    mp.A_minus_norm = 0.3;
    const double Bp = 0.4 + 0.6;
    const double C4 = 10.0 * 0.4 * std::exp(0.1) + Bp;
    CHECK(rho_moderate(x, 100.0, empty, mp, 0.0) == doctest::Approx(oracle::big_prefactor() * C4 / 100.0).epsilon(1e-13));

    const auto s0 = real_pole_structure({{0.0, 1.0}});
    CHECK(rho_increasing(x, 100.0, s0, 0.0) == doctest::Approx(0.011).epsilon(1e-14));
    const auto s1 = real_pole_structure({{1.0, 1.0}, {0.0, 1.0}});
    CHECK(rho_increasing(x, 64.0, s1, 0.05) == doctest::Approx(0.05 + 10.0 / 64.0 + 1.0 / 640.0).epsilon(1e-14));

    // increasing A with B2 = 0: the moderate form collapses onto the remark form up to constants
    const double rm = rho_moderate(x, 100.0, s0, ModerateParams{}, 0.02);
    CHECK(rm > rho_moderate_remark(x, 100.0, s0, 0.02));

    SlowParams zero;
    CHECK(rho_slow(std::exp(100.0), 100.0, empty, zero, 0.0) == 0.0);
    CHECK_THROWS_AS((void)rho_moderate(2.0, 1.0, s0, mp, 0.0), tk::DomainError);
    CHECK_THROWS_AS((void)rho_slow(2.0, 100.0, s0, zero, 0.0), tk::DomainError);
}

TEST_CASE("error factors against independent re-assembly") {
    // moderate, T = 100, x = e^10, Omega = omega = 0
    {
        const auto s = real_pole_structure({{0.0, 1.0}});
        ModerateParams mp{0.2, 0.1, [](double u) { return 1.0 / std::log(u); }, 0.05};
        const double x = std::exp(10.0), eta = 0.013;
        oracle::RhoInputs in{x, 100.0, eta, {{0, 0.0, 0.0, 0.5}}};
        const double ref = oracle::rho_moderate_ref(in, 0.2, 0.1, 0.05, 1.0 / std::log(std::sqrt(x)));
        CHECK(std::abs(rho_moderate(x, 100.0, s, mp, eta) - ref) <= 1e-12 * ref);
    }
    // slow, nu_bar(e) = 1, A(1) = 0, K = 2, c = 1, b = 0, omega = 0, T = 100, x = e^100
    {
        const SingularStructure s({Pole{0.0, {{0.0, 1.0}}}});
        SlowParams sp;
        sp.nu_bar = [](double lam) { return lam == std::numbers::e ? 1.0 : 0.0; };
        sp.K = 2.0;
        const double x = std::exp(100.0);
        oracle::RhoInputs in{x, 100.0, 0.0, {{0, 0.0, 0.0, 1.0}}};
        const double ref = oracle::rho_slow_ref(in, {0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0});
        CHECK(std::abs(rho_slow(x, 100.0, s, sp, 0.0) - ref) <= 1e-12 * ref);
    }
}

TEST_CASE("three-term form is below the general form") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dT(1.0, 1e4), dL(3.0, 40.0), de(0.0, 2.0), dw(-0.5, 2.0);
    for (int i = 0; i < 500; ++i) {
        const double w1 = dw(rng), w2 = dw(rng);
        const auto s = real_pole_structure({{w1, 1.0}, {w2, 0.5}});
        const double T = dT(rng), x = std::exp(std::max(dL(rng), 32.0 / T + 0.1)), e = de(rng);
        CHECK(rho_increasing(x, T, s, e) <= rho_increasing_general(x, T, s, e));
    }
}

TEST_CASE("T optimization") {
    const auto grid = T_grid(1.0, 1e4, 16);
    CHECK(grid.front() == doctest::Approx(1.0));
    CHECK(grid.back() == doctest::Approx(1e4));
    CHECK(optimize_T([](double T) { return 1.0 / T + 0.3; }, grid).T_star == doctest::Approx(1e4));
    const auto opt = optimize_T([](double T) { return 1.0 / T + 1e-3 * T; }, grid);
    CHECK(opt.T_star > grid.front());
    CHECK(opt.T_star < grid.back());
    for (double T : grid) CHECK(opt.rho_star <= 1.0 / T + 1e-3 * T);
    CHECK(opt.T_star == doctest::Approx(std::sqrt(1e3)).epsilon(0.08));
    CHECK(optimize_T([](double T) { return 1.0 / T; }, {64.0}).rho_star == doctest::Approx(1.0 / 64.0));
    CHECK_THROWS_AS((void)optimize_T([](double T) { return T; }, {}), tk::ArgumentError);
    CHECK(default_T_min(Regime::increasing) == 1.0);
}

TEST_CASE("end-to-end bounds") {
    const auto sing = real_pole_structure({{0.0, 1.0}});
    BoundParams bp;
    bp.regime = Regime::increasing;
    std::vector<double> xs;
    for (int k = 3; k <= 13; ++k) xs.push_back(std::exp(static_cast<double>(k)));
    const auto rows = verify_bound(vm(), sing, bp, xs);
    for (const auto& r : rows) {
        CHECK(r.x0_check);
        CHECK(r.pass);
    }
    const auto big = verify_bound(vm(), sing, bp, {1e6});
    CHECK(big.front().rho < 1.0);

    const auto exact = CoefficientSeries::synthetic_power(1);
    const auto ex = verify_bound(exact, sing, bp, {1e3, 1e5});
    for (const auto& r : ex) CHECK(r.residual_ratio < 1e-12);
    CHECK(bound_csv(rows).rfind("x,", 0) == 0);
}

TEST_CASE("majorized series") {
    const auto tw = CoefficientSeries::catalog("cos_twisted_von_mangoldt", 100000);
    const auto two_vm = CoefficientSeries::from_coefficients(
        [] {
            std::vector<cd> c(100000);
            for (std::size_t n = 1; n <= c.size(); ++n) c[n - 1] = 2.0 * oracle::von_mangoldt(static_cast<std::int64_t>(n));
            return c;
        }(),
        "2vm", [](cd s) { return -2.0 * tk::dirichlet::zeta_log_derivative(s); });
    for (std::int64_t n = 1; n <= 2000; ++n)
        CHECK(std::abs(tw.coefficient(n).real() - 2.0 * std::cos(std::log(static_cast<double>(n))) * oracle::von_mangoldt(n)) < 1e-12);
    VerifyOptions vo;
    vo.T_grid = {64.0, 128.0};
    CHECK_NOTHROW((void)bound_majorized(tw, two_vm, 0.0, 2.0, {1e4}, vo, 100000));
    CHECK_THROWS_AS((void)bound_majorized(two_vm, tw, 2.0, 0.0, {1e4}, vo, 1000), tk::ArgumentError);

    const auto unit = CoefficientSeries::catalog("unit", 100000);
    const auto zero = CoefficientSeries::from_coefficients(std::vector<cd>(100000, 0.0), "zero", [](cd) { return cd(0.0); });
    const auto rep = bound_majorized(zero, unit, 0.0, 1.0, {1e3, 1e4}, vo);
    for (const auto& r : rep.rows) CHECK(r.residual_ratio == 0.0);
}
