#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tk::decrease {

using RealFn = std::function<double(double)>;

/// Sorted abscissas. Pairs (x, y) with x <= y <= lambda x are all grid points in that window
/// plus `pair_subsamples` equispaced points of the window. With log_coordinates the points are
/// u = log x, functions are called with u, and the window is [u, u + log lambda].
struct SampleGrid {
    std::vector<double> points;
    int pair_subsamples = 0;
    bool log_coordinates = false;
};

/// Grid in u = log x, geometric in u on [u0, u1] with the given ratio.
[[nodiscard]] SampleGrid log_grid(double u0, double u1, double ratio, int pair_subsamples);

/// Geometric grid on [a, b] with the given ratio, merged with extra points inside [a, b].
[[nodiscard]] SampleGrid geometric_grid(double a, double b, double ratio = 1.001,
                                        const std::vector<double>& extra = {});

/// Upper ends X_1 < X_2 < X_3 with log log X doubling at each step (the grid is
/// extended from X_k to exp(log^2 X_k)).
[[nodiscard]] std::vector<double> doubled_extents(double first_end, int count = 3);

/// Sampled max of -(f(y) - f(x)) over grid pairs a <= x <= y <= lambda x, clamped at 0.
/// a and z_cutoff are in grid coordinates (log x for log grids).
/// A lower bound for the true nu_bar(f; lambda).
[[nodiscard]] double estimate_nu_bar(const RealFn& f, double a, double lambda, const SampleGrid& grid);

struct NuEstimate {
    double value;
    double z_cutoff;
};

/// Same as estimate_nu_bar restricted to x >= z_cutoff.
[[nodiscard]] NuEstimate estimate_nu(const RealFn& f, double a, double lambda, double z_cutoff,
                                     const SampleGrid& grid);

/// Estimates on successively extended grids; flagged when each estimate is at least
/// twice the previous one.
struct DivergenceCheck {
    std::vector<double> extents;
    std::vector<double> estimates;
    bool divergent = false;
};

using GridFactory = std::function<SampleGrid(double extent)>;

[[nodiscard]] DivergenceCheck divergence_check(const RealFn& f, double a, double lambda, double z_cutoff,
                                               const std::vector<double>& extents, const GridFactory& make_grid);

struct ProfileRow {
    double lambda;
    double nu_bar_est;
    double nu_est;
    double z_cutoff;
    bool divergence_flag;
};

struct DecreaseProfile {
    double a = 1.0;
    std::vector<ProfileRow> rows;
};

/// One pass of f over the grid serves all lambdas. With extents and a grid factory the
/// divergence check is run per lambda and stored in divergence_flag.
[[nodiscard]] DecreaseProfile compute_profile(const RealFn& f, double a, const std::vector<double>& lambdas,
                                              double z_cutoff, const SampleGrid& grid,
                                              const std::vector<double>& divergence_extents = {},
                                              const GridFactory& make_grid = {});

/// CSV with columns lambda,nu_bar_est,nu_est,z_cutoff,divergence_flag.
[[nodiscard]] std::string profile_csv(const DecreaseProfile& p);

/// Default lambda grid accumulating at 1: 1+1e-3, ..., 2.
[[nodiscard]] std::vector<double> default_lambda_grid();

enum class DecreaseClass { boundedly, slowly, very_slowly, none_detected };
[[nodiscard]] std::string to_string(DecreaseClass c);

struct ClassifyThresholds {
    double zero_tol = 1e-9;         // estimate counted as 0
    double slow_ratio = 1e-2;       // slowly if nu(1+1e-3) <= slow_ratio * nu(2)
    double decay_ratio = 0.25;      // tail sup at the last cutoff vs the first, for "tends to 0"
};

/// Diagnostic label. very_slowly: for every lambda the tail sup D(z) of the decrement over
/// x >= z is 0, or D(z_last) <= decay_ratio D(z_first) where z_first = max(a, e) and
/// z_last = end / lambda_max^2. none_detected when any profile row carries the divergence flag.
[[nodiscard]] DecreaseClass classify_decrease(const RealFn& f, double a, const DecreaseProfile& profile,
                                              const SampleGrid& grid, const ClassifyThresholds& th = {});

struct ModerateDecreaseParams {
    double B1 = 0.0;
    double B2 = 0.0;
    RealFn phi;  // nonincreasing, 1 on [a, max(1, a)], tends to 0
};

struct UV {
    double u, v;
};

struct ModerateReport {
    std::vector<UV> violations;
    double min_margin;
};

/// margin = F(u+v) - F(u) + B1 v + B2 max(1,u) phi(u); violation when margin < 0.
[[nodiscard]] ModerateReport check_moderate(const RealFn& F, const ModerateDecreaseParams& params,
                                            const std::vector<UV>& pairs);

enum class LowerBoundForm { minslowdec, minF };

struct LowerBoundReport {
    bool holds;
    double min_margin;
    double worst_x;
};

/// minslowdec: F(y) >= -M y (1 + log y - log a). minF: F(x) >= -B (x - a) - B max(a, 1).
[[nodiscard]] LowerBoundReport lower_bound_check(const RealFn& F, double a, double M_or_B, LowerBoundForm form,
                                                 const SampleGrid& grid);
/// minF with separate constants: F(x) >= -B1 (x - a) - B2 max(a, 1).
[[nodiscard]] LowerBoundReport lower_bound_check_minF(const RealFn& F, double a, double B1, double B2,
                                                      const SampleGrid& grid);

/// M(F, a) = nu_bar(F(x)/x; e) + F(a)_- / a from sampled estimates.
[[nodiscard]] double minslowdec_constant(const RealFn& F, double a, const SampleGrid& grid);

struct TransferRow {
    double lambda;
    double lhs;     // nu_hat(q/ell; lambda)
    double rhs;     // nu_hat(q; lambda)/ell(a) + C(lambda - 1)
    double margin;  // rhs - lhs
};

/// Checks the divide-by-ell inequality on the grid. Throws ArgumentError naming the failed
/// precondition (ell positive, nondecreasing, ell'/ell nonincreasing, |q| x ell'/ell^2 <= C).
[[nodiscard]] std::vector<TransferRow> divide_by_ell_transfer(const RealFn& q, const RealFn& ell,
                                                              const RealFn& ell_prime, double a, double C,
                                                              const std::vector<double>& lambdas,
                                                              const SampleGrid& grid);

struct Cor23 {
    RealFn s;  // block-capped running infimum of omega
    RealFn q;  // e^{floor(log x)} s(x)
    RealFn q_over_x;
};

/// Construction on [1, x_max]. The running infimum inf_{x' >= x} omega(x') is taken over a
/// geometric sample up to x_max.
[[nodiscard]] Cor23 construct_cor23(const RealFn& omega, double x_max, double ratio = 1.001);

/// omega(x) = log log max(x, 16).
[[nodiscard]] double omega_loglog(double x);

using MSeq = std::function<std::int64_t(std::int64_t)>;

/// 2; 2,3; 2,3,4; ...
[[nodiscard]] std::int64_t diagonal_m(std::int64_t n);

struct Prop25 {
    MSeq m;
    RealFn f;
    RealFn F;
    std::function<long double(long double)> f_ld;
    std::function<long double(long double)> F_ld;
    /// Block boundaries 2^n and (m_n+1)/m_n 2^n up to 2^n_max.
    [[nodiscard]] std::vector<double> breakpoints(int n_max) const;
};

[[nodiscard]] Prop25 construct_prop25(MSeq m_seq = diagonal_m);

struct WitnessRow {
    std::int64_t n;
    long double x;
    long double y;
    long double margin;  // F(x+y) - F(x) + C y
    long double bound;   // -x / (2 sqrt N)
};

/// Witness pairs x_k = 2^{n_k}, y_k = x_k / N for the first `count` indices with m_{n_k} = N.
[[nodiscard]] std::vector<WitnessRow> prop25_witness(const Prop25& p, std::int64_t N, double C, int count,
                                                     std::int64_t search_limit = 20000);

}  // namespace tk::decrease
