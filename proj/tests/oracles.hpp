#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = 0.57721566490153286;

template <class V, class F>
V simpson(F&& f, double a, double b, long n) {
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    V s = f(a) + f(b);
    for (long i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return s * (h / 3.0);
}

inline double von_mangoldt(std::int64_t n) {
    if (n < 2) return 0.0;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        std::int64_t m = n;
        while (m % p == 0) m /= p;
        return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
    return std::log(static_cast<double>(n));
}

inline int divisor_count(std::int64_t n) {
    int c = 0;
    for (std::int64_t d = 1; d * d <= n; ++d)
        if (n % d == 0) c += (d * d == n) ? 1 : 2;
    return c;
}

/// Prefix sums A[0..N] of a_n.
inline std::vector<double> prefix(std::int64_t N, const std::function<double(std::int64_t)>& a) {
    std::vector<double> A(static_cast<std::size_t>(N) + 1, 0.0);
    for (std::int64_t n = 1; n <= N; ++n) A[static_cast<std::size_t>(n)] = A[static_cast<std::size_t>(n) - 1] + a(n);
    return A;
}

/// Sieve of the von Mangoldt function.
inline std::vector<double> mangoldt_table(std::int64_t N) {
    std::vector<double> lam(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<bool> comp(static_cast<std::size_t>(N) + 1, false);
    for (std::int64_t p = 2; p <= N; ++p) {
        if (comp[static_cast<std::size_t>(p)]) continue;
        for (std::int64_t q = p * p; q <= N; q += p) comp[static_cast<std::size_t>(q)] = true;
        const double lp = std::log(static_cast<double>(p));
        for (std::int64_t q = p; q <= N; q *= p) {
            lam[static_cast<std::size_t>(q)] = lp;
            if (q > N / p) break;
        }
    }
    return lam;
}

/// int_0^inf h_sigma(t) e^{-i tau t} dt for A piecewise constant on [n, n+1), exact panel by panel up to N,
/// with A(x) ~ x beyond N (tail e^{(1-s)L}/(s-1), s = 1 + sigma + i tau).
inline cd fourier_h_piecewise(const std::vector<double>& A, double sigma, double tau, bool linear_tail) {
    const cd s(1.0 + sigma, tau);
    cd total = 0.0;
    const std::size_t N = A.size() - 1;
    for (std::size_t n = 1; n < N; ++n) {
        if (A[n] == 0.0) continue;
        const double t1 = std::log(static_cast<double>(n)), t2 = std::log(static_cast<double>(n + 1));
        total += A[n] * (std::exp(-s * t1) - std::exp(-s * t2)) / s;
    }
    const double L = std::log(static_cast<double>(N));
    if (linear_tail)
        total += std::exp((1.0 - s) * L) / (s - 1.0);
    else
        total += A[N] * std::exp(-s * L) / s;
    return total;
}

/// zeta(s) for real s > 1 by direct summation with an Euler-Maclaurin tail.
inline double zeta_real(double s, long N = 100000) {
    double sum = 0.0;
    for (long n = 1; n < N; ++n) sum += std::pow(static_cast<double>(n), -s);
    const double Nd = static_cast<double>(N);
    return sum + std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s) + s / 12.0 * std::pow(Nd, -s - 1.0);
}

/// zeta'(s) for real s > 1 by direct summation with an integral tail.
inline double zeta_prime_real(double s, long N = 1000000) {
    double sum = 0.0;
    for (long n = 2; n < N; ++n) sum -= std::log(static_cast<double>(n)) * std::pow(static_cast<double>(n), -s);
    const double Nd = static_cast<double>(N), lN = std::log(Nd);
    // int_N^inf log x x^{-s} dx and half the endpoint term
    sum -= std::pow(Nd, 1.0 - s) * (lN / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0)));
    sum -= 0.5 * lN * std::pow(Nd, -s);
    return sum;
}


/// One singular term c/(s+ib)^{w+1}; pole index k = 0 is the real slot.
struct Term {
    int k;
    double b, omega;
    cd c;
};

/// Error factors re-assembled term by term from the printed formulas, in long double.
struct RhoInputs {
    double x, T, eta;
    std::vector<Term> terms;
};

inline long double big_prefactor() {
    const long double e = 2.718281828459045235360287471352662498L;
    return 20.0L * e / (1.0L - 1.0L / e);
}

inline long double four_root_pi() { return 4.0L / std::sqrt(3.141592653589793238462643383279502884L); }

inline double rho_moderate_ref(const RhoInputs& in, double B1, double B2, double A_minus, double phi_at_sqrt_x) {
    const long double T = in.T, L = std::log(static_cast<long double>(in.x));
    const long double E = std::exp(10.0L / T);
    const long double lam3 = static_cast<long double>(B1) + B2;
    const long double Bprime = static_cast<long double>(B1) + B2 + 2.0L * A_minus;
    const long double C4 = 10.0L * lam3 * E + Bprime;
    const long double C5 = 1.2L * E / T + 1.0L / 3.141592653589793238462643383279502884L;
    long double terms = 0.0L;
    for (const auto& t : in.terms) {
        const long double mod = std::abs(std::complex<long double>(t.c.real(), t.c.imag()));
        const long double C1 = mod * (13.2L * E + four_root_pi() * std::fabs(static_cast<long double>(t.b)));
        const long double C2 = four_root_pi() * mod;
        const long double Lw = std::pow(L, static_cast<long double>(t.omega));
        terms += C1 * Lw + C2 / L * (Lw + std::pow(1.0L / T, static_cast<long double>(t.omega)));
    }
    const long double R = C4 / T + C5 * in.eta + terms / T;
    const long double b2 = B2;
    return static_cast<double>(big_prefactor() * (b2 * std::sqrt(static_cast<long double>(phi_at_sqrt_x)) + R + std::sqrt(b2 * R)));
}

struct SlowInputs {
    double nu_lam;        // nu(e^{1/T})
    double nu_bar_e;      // nu_bar(e)
    double nu_bar_lam;    // nu_bar(e^{1/T})
    double psi_1;         // Psi_{e^{1/T}}(1)
    double psi_sqrt_x;    // Psi_{e^{1/T}}(sqrt x)
    double A_norm, A1_abs, K;
};

inline double rho_slow_ref(const RhoInputs& in, const SlowInputs& s) {
    const long double T = in.T, L = std::log(static_cast<long double>(in.x));
    const long double pi_l = 3.141592653589793238462643383279502884L;
    long double Omega = -1.0L / 0.0L;
    for (const auto& t : in.terms) Omega = std::max(Omega, static_cast<long double>(t.omega));
    if (in.terms.empty()) Omega = 0.0L;
    const long double Omega_plus = std::max(0.0L, Omega);
    long double line3 = 0.0L, line4 = 0.0L;
    for (const auto& t : in.terms) {
        const long double mod = std::abs(std::complex<long double>(t.c.real(), t.c.imag()));
        const long double Lw = std::pow(L, static_cast<long double>(t.omega));
        if (t.k >= 1) line3 += mod * (1.0L / std::pow(T, static_cast<long double>(t.omega)) + Lw);
        line4 += mod * (four_root_pi() * std::fabs(static_cast<long double>(t.b)) + 6.6L) * Lw;
    }
    const long double R = s.nu_lam + (1.0L / pi_l + 0.6L / T) * in.eta +
                          (8.0L * s.nu_bar_e + 8.0L * s.A1_abs + s.K) *
                              (std::pow(L, std::min(1.0L, Omega_plus)) + std::log(2.0L * L)) / T +
                          four_root_pi() / (T * L) * line3 +
                          (50.0L * s.nu_bar_lam + s.A_norm + line4) / T;
    const long double p1 = s.psi_1, px = s.psi_sqrt_x;
    return static_cast<double>(big_prefactor() * (std::sqrt(p1 * px) + R + std::sqrt(p1 * R)));
}

/// Three-term form for T >= 1.
inline double rho_increasing_ref(double x, double T, double Omega, double omega, double eta) {
    const long double L = std::log(static_cast<long double>(x));
    return static_cast<double>(eta + std::pow(L, static_cast<long double>(Omega)) / T +
                               1.0L / (L * std::pow(static_cast<long double>(T), 1.0L + omega)));
}

}  // namespace oracle
