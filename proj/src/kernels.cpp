#include "tauberkit/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tauberkit/errors.hpp"

namespace tk::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

// int_c^inf sin(u)/u du via the auxiliary functions f, g (asymptotic, c >= 100).
double sine_integral_tail(double c) {
    const double c2 = c * c;
    double f = 0.0, g = 0.0, term = 1.0 / c;
    for (int k = 0; k < 8; ++k) {  // f ~ (1/c) sum (-1)^k (2k)!/c^{2k}
        f += term;
        term *= -(2.0 * k + 1.0) * (2.0 * k + 2.0) / c2;
    }
    term = 1.0 / c2;
    for (int k = 0; k < 8; ++k) {  // g ~ (1/c^2) sum (-1)^k (2k+1)!/c^{2k}
        g += term;
        term *= -(2.0 * k + 2.0) * (2.0 * k + 3.0) / c2;
    }
    return f * std::cos(c) + g * std::sin(c);
}

// int_c^inf chi(u) du, chi(u) = (1 - cos u)/(pi u^2).
double fejer_half_tail(double c) {
    const double int_cos_over_u2 = std::cos(c) / c - sine_integral_tail(c);
    return (1.0 / c - int_cos_over_u2) / kPi;
}

double binom_general(double alpha, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (alpha - i) / (i + 1.0);
    return r;
}

// Panel boundaries 0, s, 10s, 100s, ... below T, then T.
std::vector<double> geometric_breaks(double scale, double T) {
    std::vector<double> pts{0.0};
    for (double p = scale; p < T; p *= 10.0) pts.push_back(p);
    pts.push_back(T);
    return pts;
}

void check_wallis(const WallisQuery& q) {
    if (!(q.m >= 0.0)) throw DomainError("wallis: m must be >= 0");
    if (!(q.sigma >= 0.0)) throw DomainError("wallis: sigma must be >= 0");
    if (!(q.T_upper >= 0.0)) throw DomainError("wallis: T_upper must be > 0");
}

}  // namespace

quad::Options default_options() { return {1e-10, 1e-9, 4000}; }

double fejer_chi(double u) {
    const double h = 0.5 * u;
    if (std::abs(h) < 1e-4) {
        const double h2 = h * h;
        return (1.0 - h2 / 3.0 + 2.0 * h2 * h2 / 45.0) / (2.0 * kPi);
    }
    const double s = std::sin(h) / h;
    return s * s / (2.0 * kPi);
}

double fejer_chi_T(double T, double u) {
    if (!(T > 0.0)) throw DomainError("fejer_chi_T: T must be positive");
    return T * fejer_chi(T * u);
}

double fejer_hat(double T, double tau) {
    if (!(T > 0.0)) throw DomainError("fejer_hat: T must be positive");
    return std::max(0.0, 1.0 - std::abs(tau) / T);
}

double fejer_tail(double q) {
    if (!(q > 0.0)) throw DomainError("fejer_tail: q must be positive");
    constexpr double cut = 200.0;
    if (q >= cut) return 2.0 * fejer_half_tail(q);
    auto r = quad::integrate([](double u) { return fejer_chi(u); }, q, cut, default_options());
    return 2.0 * (r.value + fejer_half_tail(cut));
}

double wallis_W(const WallisQuery& q) {
    check_wallis(q);
    const double m = q.m, s = q.sigma, T = q.T_upper;
    if (std::isinf(T) && m <= 1.0) throw DomainError("wallis_W: divergent at infinity (m <= 1)");
    if (s == 0.0 && m >= 1.0) throw DomainError("wallis_W: divergent at 0 (sigma = 0, m >= 1)");
    if (T == 0.0) return 0.0;
    if (s == 0.0) return std::pow(T, 1.0 - m) / (1.0 - m);

    const double s2 = s * s;
    auto f = [m, s2](double t) { return std::pow(s2 + t * t, -0.5 * m); };
    if (!std::isinf(T)) return quad::integrate_breakpoints(f, geometric_breaks(s, T), default_options()).value;

    const double c = 10.0 * s;
    double head = quad::integrate_breakpoints(f, geometric_breaks(s, c), default_options()).value;
    double tail = 0.0;
    for (int k = 0; k < 14; ++k)
        tail += binom_general(-0.5 * m, k) * std::pow(s2, k) * std::pow(c, 1.0 - m - 2.0 * k) / (m + 2.0 * k - 1.0);
    return head + tail;
}

double wallis_Z(const WallisQuery& q) {
    check_wallis(q);
    const double m = q.m, s = q.sigma, T = q.T_upper;
    if (T == 0.0) return 0.0;
    if (std::isinf(T) && m <= 0.0) throw DomainError("wallis_Z: divergent at infinity (m <= 0)");
    if (s == 0.0 && m >= 1.0) throw DomainError("wallis_Z: divergent at 0 (sigma = 0, m >= 1)");

    const double s2 = s * s, r2 = (1.0 + s) * (1.0 + s);
    auto f = [m, s2, r2](double t) { return std::pow(s2 + t * t, -0.5 * m) / std::sqrt(r2 + t * t); };

    auto head = [&](double upper) {
        if (s == 0.0) {
            // t = u^{1/(1-m)} removes the integrable t^{-m} singularity at 0.
            const double p = 1.0 / (1.0 - m);
            auto g = [p, r2](double u) {
                const double t = std::pow(u, p);
                return p / std::sqrt(r2 + t * t);
            };
            return quad::integrate(g, 0.0, std::pow(upper, 1.0 - m), default_options()).value;
        }
        return quad::integrate_breakpoints(f, geometric_breaks(s, upper), default_options()).value;
    };
    if (!std::isinf(T)) return head(T);

    const double c = 10.0 * (1.0 + s);
    double tail = 0.0;
    for (int k = 0; k < 16; ++k) {
        double dk = 0.0;
        for (int i = 0; i <= k; ++i)
            dk += binom_general(-0.5 * m, i) * std::pow(s2, i) * binom_general(-0.5, k - i) * std::pow(r2, k - i);
        tail += dk * std::pow(c, -m - 2.0 * k) / (m + 2.0 * k);
    }
    return head(c) + tail;
}

double beta(const BetaQuery& q) {
    if (!(q.omega > -1.0)) throw DomainError("beta: omega must exceed -1");
    if (q.t <= 0.0) return 0.0;
    const double logv = q.omega * std::log(q.t) - std::lgamma(q.omega + 1.0) - q.t;
    return std::exp(logv) * (-std::expm1(-q.t));
}

bool beta_diff_bound_check(double omega, double x, double y, double* margin) {
    if (!(y > 0.0)) throw DomainError("beta_diff_bound_check: y must be positive");
    const double lhs = std::abs(beta({omega, x + y}) - beta({omega, x}));
    const double rhs = std::pow(y, omega + 1.0) + 2.0 * y / std::sqrt(kPi);
    if (margin) *margin = rhs - lhs;
    return lhs <= rhs;
}

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x)) throw PoleError("gamma_fn: pole at " + std::to_string(x));
    return std::tgamma(x);
}

double gamma_stirling_lower(double xi) {
    if (!(xi > 0.0)) throw DomainError("gamma_stirling_lower: xi must be positive");
    return std::exp((xi - 0.5) * std::log(xi) - xi) * std::sqrt(2.0 * kPi);
}

}  // namespace tk::kernels
