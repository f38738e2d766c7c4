#pragma once

#include <limits>

#include "tauberkit/quadrature.hpp"

namespace tk::kernels {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct KernelParams {
    double T;
};

/// Integrand exponent m, abscissa offset sigma, upper limit T_upper (may be +inf).
struct WallisQuery {
    double m;
    double sigma;
    double T_upper;
};

struct BetaQuery {
    double omega;
    double t;
};

/// chi(u) = (1/2pi) (sin(u/2)/(u/2))^2.
[[nodiscard]] double fejer_chi(double u);

/// chi_T(u) = T chi(T u). Throws DomainError for T <= 0.
[[nodiscard]] double fejer_chi_T(double T, double u);

/// Fourier transform of chi_T: the triangle (1 - |tau|/T)_+.
[[nodiscard]] double fejer_hat(double T, double tau);

/// I_q = integral of chi over |u| > q. Throws DomainError for q <= 0.
[[nodiscard]] double fejer_tail(double q);

/// W_m(sigma, T) = int_0^T |sigma + i t|^{-m} dt.
[[nodiscard]] double wallis_W(const WallisQuery& q);

/// Z_m(sigma, T) = int_0^T |sigma + i t|^{-m} |1 + sigma + i t|^{-1} dt.
[[nodiscard]] double wallis_Z(const WallisQuery& q);

/// beta(omega, t) = t^omega e^{-t} (1 - e^{-t}) / Gamma(omega + 1) for t > 0, else 0.
[[nodiscard]] double beta(const BetaQuery& q);

/// True iff |beta(w, x+y) - beta(w, x)| <= y^{w+1} + 2y/sqrt(pi). margin receives rhs - lhs.
[[nodiscard]] bool beta_diff_bound_check(double omega, double x, double y, double* margin = nullptr);

/// Gamma function on the reals minus the non-positive integers.
[[nodiscard]] double gamma_fn(double x);

/// Lower bound xi^{xi-1/2} e^{-xi} sqrt(2 pi) valid for xi > 0.
[[nodiscard]] double gamma_stirling_lower(double xi);

/// Quadrature options used by the kernel integrals.
[[nodiscard]] quad::Options default_options();

}  // namespace tk::kernels
