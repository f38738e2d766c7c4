#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tauberkit/dirichlet.hpp"
#include "tauberkit/quadrature.hpp"

namespace tk::tauber {

using cd = std::complex<double>;
using dirichlet::CoefficientSeries;

struct SingularTerm {
    double omega;  // > -1
    cd c;
};

struct Pole {
    double b;  // 0 for the first slot, then strictly increasing positive ordinates
    std::vector<SingularTerm> terms;
};

/// Boundary principal part sum_k sum_l c/(s+ib)^{w+1} + conj(c)/(s-ib)^{w+1}.
class SingularStructure {
public:
    SingularStructure();  // only the empty b = 0 slot
    explicit SingularStructure(std::vector<Pole> poles, std::string label = "");

    [[nodiscard]] const std::vector<Pole>& poles() const { return poles_; }
    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] bool empty() const;
    /// Max and min exponent; both 0 for an empty structure.
    [[nodiscard]] double Omega() const { return Omega_; }
    [[nodiscard]] double omega_min() const { return omega_min_; }
    [[nodiscard]] cd principal(cd s) const;

private:
    std::vector<Pole> poles_;
    std::string label_;
    double Omega_ = 0.0, omega_min_ = 0.0;
};

/// Single real pole at s = 0: terms (omega, 2 Re c) with c real.
[[nodiscard]] SingularStructure real_pole_structure(const std::vector<std::pair<double, double>>& omega_and_2rec,
                                                    const std::string& label = "");

/// A(s+1)/(s+1) minus the singular sum.
[[nodiscard]] cd G_eval(const CoefficientSeries& series, const SingularStructure& singular, cd s);

struct EtaValue {
    double value;
    double error;
};

/// Default tolerances for eta quadrature.
[[nodiscard]] quad::Options eta_options();

/// eta(sigma, T) = int_{-T}^{T} |G(2 sigma + i tau) - G(sigma + i tau)| d tau. Real-coefficient
/// series integrate [0, T] and double. Throws PrecisionError with the partial value.
[[nodiscard]] EtaValue eta(const CoefficientSeries& series, const SingularStructure& singular, double sigma, double T,
                           const quad::Options& opt = eta_options());

/// Incremental eta over increasing T at fixed sigma. Each extension integrates only the new panels.
class EtaAccumulator {
public:
    EtaAccumulator(const CoefficientSeries& series, const SingularStructure& singular, double sigma,
                   quad::Options opt = eta_options());
    /// eta(sigma, T) for T >= the previous argument.
    EtaValue extend_to(double T);
    [[nodiscard]] double T() const { return T_; }

private:
    double integrate_panel(double lo, double hi, double& err);
    CoefficientSeries series_;
    SingularStructure singular_;
    double sigma_;
    quad::Options opt_;
    double T_ = 0.0, value_ = 0.0, error_ = 0.0;
};

struct EtaSample {
    double sigma;
    double eta;
    double quad_error;
};

struct EtaCurve {
    double T;
    std::vector<EtaSample> samples;
    std::string series_label;
    std::string singular_label;
};

[[nodiscard]] EtaCurve eta_curve(const CoefficientSeries& series, const SingularStructure& singular, double T,
                                 const std::vector<double>& sigmas, const quad::Options& opt = eta_options());
[[nodiscard]] std::string eta_curve_csv(const EtaCurve& c);

/// Geometric grid lo..hi with n points (both ends included).
[[nodiscard]] std::vector<double> geometric_points(double lo, double hi, int n);

struct PoleOrder {
    int m_hat;
    double slope;
    double fit_quality;  // R^2 of the log-log fit, 1 when eta vanishes
};

/// m_hat = round(1 - p) with p the least-squares slope of log eta against log sigma, clamped at
/// 0; m_hat = 0 when eta vanishes identically or decays (p > 1/2).
[[nodiscard]] PoleOrder estimate_pole_order(const EtaCurve& curve, double zero_tol = 1e-14);

/// sum over singular terms of 2|a|(j+1) sigma^{-(j-1)}, j = omega + 1. A real pole (b = 0)
/// contributes a = 2 Re c; b > 0 contributes two terms of modulus |c|.
[[nodiscard]] double eta_principal_split(const SingularStructure& singular, double sigma, double T);

struct Thm41HypothesisRow {
    double sigma;
    double integral;   // int_0^T |A(1+sigma+it)|/|1+sigma+it| dt
    double reference;  // Z_m(sigma, inf) for m > 0, Z_0(sigma, T) for m = 0
    double ratio;
};

struct Thm41HypothesisReport {
    std::vector<Thm41HypothesisRow> rows;
    double K1_min;  // smallest admissible K1 on the grid
    bool pass;      // K1_min <= K1
};

[[nodiscard]] Thm41HypothesisReport check_thm41_hypothesis(const CoefficientSeries& series, double m, double T,
                                                           double K1, const std::vector<double>& sigma_grid);

struct Thm41ConclusionReport {
    double C;  // sup |A(x)| / (x w(x))
    double worst_x;
    std::string weight;  // "log^p x", "loglog x" or "1"
};

/// Weight x log^{(m-1)_+} x, or x log log x when m = 1.
[[nodiscard]] Thm41ConclusionReport check_thm41_conclusion(const CoefficientSeries& series, double m,
                                                           const std::vector<double>& x_grid);

struct Lemma43Params {
    double A2;      // A(2), the transform at 2
    double k_star;  // decrease constant
    double mu0;
};

/// K' = k/(1 - 2^{-mu}) for mu > 0; K** = (2/log 2)(K* T + k) with K* = A(2)/2 + 2e Gamma(2+mu0) k*
/// for mu = 0.
[[nodiscard]] double lemma43_transfer(double k, double mu, double T, const std::optional<Lemma43Params>& params = {});

/// x sum (log x)^w / Gamma(w+1) 2 Re(c e^{-ib log x}).
[[nodiscard]] double main_term(const SingularStructure& singular, double x);

/// Principal part at s = 0 of A(s+1)/(s+1) with pole order m, from a polynomial fit of
/// sigma^m A(1+sigma)/(1+sigma) on shrinking real grids. Returns a_0..a_{m-1}, where a_j is the
/// coefficient of s^{-(m-j)}.
[[nodiscard]] std::vector<double> laurent_fit(const CoefficientSeries& series, int m, double tol = 1e-8);
[[nodiscard]] SingularStructure structure_from_laurent(const std::vector<double>& coeffs, const std::string& label);

enum class Regime { moderate, increasing, slow };
[[nodiscard]] std::string to_string(Regime r);
[[nodiscard]] Regime regime_from_name(const std::string& name);

struct ModerateParams {
    double B1 = 0.0;
    double B2 = 0.0;
    std::function<double(double)> phi;  // absent means phi = 0
    double A_minus_norm = 0.0;          // ||A_-|| on [1, e]
};

struct SlowParams {
    std::function<double(double)> nu;              // nu(A(x)/x; lambda)
    std::function<double(double)> nu_bar;          // nu_bar(A(x)/x; lambda)
    std::function<double(double, double)> Psi;     // Psi_lambda(x)
    double A_norm = 0.0;                           // ||A|| on [1, e]
    double A1_abs = 0.0;                           // |A(1)|
    double K = 0.0;                                // eta-condition constant
    bool simplified = false;                       // use the T >= 1 corollary form
};

struct BoundParams {
    Regime regime = Regime::increasing;
    ModerateParams moderate;
    SlowParams slow;
};

/// Validity thresholds.
[[nodiscard]] double x0_moderate(double T);            // max(e^{16/15}, e^{32/T})
[[nodiscard]] double x0_slow(double T);                // max(e, e^{17/T}, e^{17/sqrt T})
[[nodiscard]] double x0_slow_simplified(double T);     // max(e, e^{17/sqrt T})
[[nodiscard]] double x0_for(const BoundParams& p, double T);

/// (20e/(1-e^{-1})) {B2 sqrt(phi(sqrt x)) + R + sqrt(B2 R)} with the proof-level constants.
[[nodiscard]] double rho_moderate(double x, double T, const SingularStructure& s, const ModerateParams& p, double eta);
/// B2 = 0 form: (e^{10/T}/T + 1) eta + (e^{10/T}/T) log^{Omega_+} x + (T^{-Omega-1} + T^{-omega-1})/log x.
[[nodiscard]] double rho_moderate_remark(double x, double T, const SingularStructure& s, double eta);
/// Nondecreasing A: the T >= 1 three-term form, else the general form.
[[nodiscard]] double rho_increasing(double x, double T, const SingularStructure& s, double eta);
[[nodiscard]] double rho_increasing_general(double x, double T, const SingularStructure& s, double eta);
/// Proof form with the 20e/(1-e^{-1}) prefactor and Psi(sqrt x).
[[nodiscard]] double rho_slow(double x, double T, const SingularStructure& s, const SlowParams& p, double eta);
/// T >= 1 corollary form, no prefactor and Psi(x).
[[nodiscard]] double rho_slow_simplified(double x, double T, const SingularStructure& s, const SlowParams& p,
                                         double eta);
/// Single-pole forms: 1/T + eta/t^w + (Tt)^{-w-1}, and 1/T + eta/log^{m-1} x.
[[nodiscard]] double rho_tenenbaum(double t, double T, double omega, double eta);
[[nodiscard]] double rho_meromorphic(double x, double T, double m, double eta);

/// Regime dispatch; throws DomainError below the validity threshold.
[[nodiscard]] double rho_for(const BoundParams& p, double x, double T, const SingularStructure& s, double eta);
/// Coefficient kappa with rho >= kappa * eta for every T (used to stop T sweeps early).
[[nodiscard]] double eta_floor_coefficient(const BoundParams& p);

struct TOptimum {
    double T_star;
    double rho_star;
    double eta_at_T_star;
};

/// Minimizer of rho(T) over the grid. Throws ArgumentError when the grid is empty.
[[nodiscard]] TOptimum optimize_T(const std::function<double(double)>& rho_of_T, const std::vector<double>& T_grid);

/// Geometric T grid [T_min, T_max] with `per_decade` points per decade.
[[nodiscard]] std::vector<double> T_grid(double T_min, double T_max = 1e4, int per_decade = 16);
[[nodiscard]] double default_T_min(Regime r);

struct BoundReport {
    double x;
    double A_of_x;
    double main_term;
    double rho;
    double T_used;
    double eta;
    double residual_ratio;
    bool x0_check;  // a feasible T exists (x >= x0(T))
    bool pass;      // feasible and residual_ratio <= 1
};

struct VerifyOptions {
    std::vector<double> T_grid;  // empty: T_grid(default_T_min(regime))
    quad::Options eta_opt = eta_options();
    int threads = 1;
};

/// Per x: sigma = 1/log x, eta swept cumulatively over the T grid, T optimized, rho assembled.
[[nodiscard]] std::vector<BoundReport> verify_bound(const CoefficientSeries& series, const SingularStructure& singular,
                                                    const BoundParams& params, const std::vector<double>& x_grid,
                                                    const VerifyOptions& opt = {});

[[nodiscard]] std::string bound_csv(const std::vector<BoundReport>& rows);
[[nodiscard]] std::string bound_json(const std::string& series, const SingularStructure& singular, Regime regime,
                                     const std::vector<BoundReport>& rows);

struct MajorizedReport {
    std::vector<BoundReport> rows;  // residual |A(x) - alpha x| / (x rho)
    double alpha;
    double beta;
    std::int64_t checked_n;
};

/// rho(x) = inf_{T >= 64} (1/T + eta_a + eta_b) with G_a = A(s+1)/(s+1) - alpha/s and likewise
/// for b. Throws ArgumentError listing the first indices with |a_n| > b_n.
[[nodiscard]] MajorizedReport bound_majorized(const CoefficientSeries& a, const CoefficientSeries& b, double alpha,
                                              double beta, const std::vector<double>& x_grid,
                                              const VerifyOptions& opt = {}, std::int64_t check_up_to = 100000);

}  // namespace tk::tauber
