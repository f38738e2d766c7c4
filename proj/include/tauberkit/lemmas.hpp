#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tauberkit/dirichlet.hpp"
#include "tauberkit/tauber.hpp"

namespace tk::lemmas {

using cd = std::complex<double>;
using RealFn = std::function<double(double)>;

/// Real function with its Fourier transform g^(tau) = int g(x) e^{-i tau x} dx.
struct TestFunction {
    RealFn eval;
    std::function<cd(double)> fourier;  // closed form; empty means numeric quadrature
    double gap = 0.0;                   // declared: g^ = 0 on (-gap, gap)
    double band = std::numeric_limits<double>::infinity();  // declared: g^ = 0 for |tau| > band
    double lo = -10.0, hi = 10.0;       // window holding the numerically relevant part of g
    std::vector<double> tau_breaks;     // kinks of |g^| used as quadrature breakpoints
    std::optional<double> sup_norm;     // declared ||g||_inf when known
    std::string label;
};

[[nodiscard]] TestFunction zero_function(double lo = -10.0, double hi = 10.0);
/// A exp(-(x - xc)^2 / (2 s^2)).
[[nodiscard]] TestFunction gaussian_pulse(double A, double s, double xc = 0.0);
/// A chi_{W/2}(x - xc)^2 cos(carrier (x - xc) + phase). The envelope has spectrum in [-W, W],
/// so g^ vanishes on (-T, T). Requires 0 < W < T <= carrier - W.
[[nodiscard]] TestFunction build_gapped(double T, double W, double carrier, double A = 1.0, double xc = 0.0,
                                        double phase = 0.0);
/// Nonnegative Fejer bump A chi_W(x - xc) with triangular spectrum on [-W, W].
[[nodiscard]] TestFunction fejer_bump(double A, double W, double xc = 0.0);
/// g_sigma(t) = A(e^t) e^{-(1+sigma)t}(1 - e^{-sigma t}) on t <= log n_max.
[[nodiscard]] TestFunction pipeline_g_sigma(const dirichlet::CoefficientSeries& series, double sigma);
/// L_sigma = g_sigma - 2 sum Re(c e^{-ibt}) sigma^{-w} beta(w, sigma t), or -L_sigma when negate is set.
/// The transform of L_sigma is G(sigma + i tau) - G(2 sigma + i tau).
[[nodiscard]] TestFunction pipeline_L_sigma(const dirichlet::CoefficientSeries& series,
                                            const tauber::SingularStructure& singular, double sigma,
                                            bool negate = false);

/// g^(tau) by quadrature over [lo, hi] with panels no wider than pi/(2 max(|tau|, band, 1)).
[[nodiscard]] cd numeric_fourier(const TestFunction& g, double tau);
/// int_{-T}^{T} |g^(tau)| d tau.
[[nodiscard]] double abs_fourier_integral(const TestFunction& g, double T);

/// Base points and increments of the hypothesis spot-checks; n is the conclusion grid size.
struct CheckGrid {
    int n = 4000;
    int base_points = 1000;
    int increments = 100;
};

/// Grid lower bound of ||g||_inf over [lo, hi].
[[nodiscard]] double measured_sup(const TestFunction& g, int n = 4000);
/// max over base x in [from, hi] and 0 < y <= h of g(x+y) - g(x) - Phi(x).
[[nodiscard]] double measured_increment_sup(const TestFunction& g, double h, double from, const RealFn& Phi = {},
                                            const CheckGrid& grid = {});
/// min over base u with f(u) > lambda2 and v in [0, 10/T] of f(u+v)/f(u).
[[nodiscard]] double measured_lambda1(const TestFunction& f, double lambda2, double T, const CheckGrid& grid = {});

struct LemmaParams {
    double T = 1.0;
    double a = 0.0;
    double b = 0.0;
    double K = 0.0;
    RealFn Phi;  // even, nonnegative, nonincreasing on [0, inf); absent means 0
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
};

enum class LemmaStatus { pass, fail, precondition_violated };
[[nodiscard]] std::string to_string(LemmaStatus s);

struct LemmaReport {
    std::string lemma;
    std::vector<std::pair<std::string, double>> params;
    double grid_lo = 0.0, grid_hi = 0.0;
    int grid_n = 0;
    double lhs_max = 0.0;
    double rhs_min_margin = 0.0;
    bool pass = false;
    LemmaStatus status = LemmaStatus::fail;
    std::string note;
};

[[nodiscard]] std::string to_json(const LemmaReport& r);
[[nodiscard]] std::string to_json(const std::vector<LemmaReport>& rs);

struct LemfConstants {
    double k1, k2;
};
/// Case 1: k1 = 5/(2(5pi-4)l1), k2 = max(l2, 4 l3/((5pi-4) l1), l3). Case 2: k1 = 5/(2(5pi-4)l1 - 8), k2 = l2.
[[nodiscard]] LemfConstants lemf_constants(double lambda1, double lambda2, double lambda3, int which_case);
/// 4/(5 pi - 4), the Case 2 threshold for lambda1.
[[nodiscard]] double lemf_case2_threshold();

/// ||f|| <= k1 int_{-T}^{T} |f^| + k2.
[[nodiscard]] LemmaReport verify_lemf(const TestFunction& f, const LemmaParams& p, int which_case,
                                      const CheckGrid& grid = {});
/// ||g|| <= 16 K + 6 int_{-T}^{T} |g^|.
[[nodiscard]] LemmaReport verify_ganelius_tenenbaum(const TestFunction& g, double T, double K,
                                                    const CheckGrid& grid = {});
/// |g(x)| <= 8 sqrt(14/3) sqrt((a + Phi(0))(a + Phi(x/2))) for x > (16/T) sqrt(1 + Phi(0)/a).
[[nodiscard]] LemmaReport verify_ganelius_type(const TestFunction& g, double T, double a, const RealFn& Phi = {},
                                               const CheckGrid& grid = {});
/// |g(x)| <= 20(sqrt(Phi(0)Phi(x/2)) + sqrt(Phi(0)(b+Q)) + b + Q), Q = (1/pi) int |g^|,
/// for x > (16/T) sqrt(1 + Phi(0)/b).
[[nodiscard]] LemmaReport verify_tenenbaum_type(const TestFunction& g, double T, double b, const RealFn& Phi = {},
                                                const CheckGrid& grid = {});

}  // namespace tk::lemmas
