#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace tk::dirichlet {

using cd = std::complex<double>;

enum class SeriesKind { von_mangoldt, divisor, unit, cos_twisted_von_mangoldt, custom, synthetic };
enum class TransformMode { closed_form, truncated_sum };

/// Transform value; tail_bound is a rigorous bound on the neglected tail (0 in closed form).
struct TransformValue {
    cd value;
    double tail_bound = 0.0;
};

/// Immutable coefficient rule n -> a_n with optional closed-form Dirichlet series.
/// Copies share the underlying sieve tables.
class CoefficientSeries {
public:
    /// Builtin series by stable name; coefficients are sieved up to n_max.
    static CoefficientSeries catalog(const std::string& name, std::int64_t n_max = 10'000'000);
    /// Two-column text "n,a_n"; complex values as "re[+im i]". Lines starting with '#' are skipped.
    static CoefficientSeries from_file(const std::string& path, const std::string& label = "");
    /// Finite series a_1..a_N (coeffs[0] is a_1) with an optional closed form.
    static CoefficientSeries from_coefficients(std::vector<cd> coeffs, const std::string& label,
                                               std::function<cd(cd)> closed_form = {});
    /// Transform model only, e.g. for synthetic G functions. The summatory function is optional.
    static CoefficientSeries synthetic(const std::string& label, std::function<cd(cd)> transform,
                                       std::function<double(double)> summatory = {}, bool real = true);
    /// A(s) = s (s-1)^{-m}, so that A(s+1)/(s+1) = s^{-m}. For m >= 1, A(x) = x log^{m-1}(x)/(m-1)!.
    static CoefficientSeries synthetic_power(int m);

    [[nodiscard]] SeriesKind kind() const;
    [[nodiscard]] const std::string& label() const;
    [[nodiscard]] std::int64_t n_max() const;
    [[nodiscard]] bool real_coefficients() const;
    [[nodiscard]] bool has_closed_form() const;
    [[nodiscard]] bool has_coefficients() const;
    [[nodiscard]] bool has_summatory() const;

    [[nodiscard]] cd coefficient(std::int64_t n) const;
    /// Re A(x) = Re sum_{n <= x} a_n; right-continuous, 0 for x < 1.
    [[nodiscard]] double summatory(double x) const;
    [[nodiscard]] cd summatory_complex(double x) const;
    [[nodiscard]] cd closed_form(cd s) const;
    [[nodiscard]] TransformValue truncated(cd s) const;

private:
    struct Data;
    explicit CoefficientSeries(std::shared_ptr<const Data> d);
    std::shared_ptr<const Data> d_;
};

[[nodiscard]] std::vector<std::string> catalog_names();
[[nodiscard]] SeriesKind kind_from_name(const std::string& name);

/// Real function of locally bounded variation vanishing below support_start.
class SummatoryFunction {
public:
    static SummatoryFunction from_series(const CoefficientSeries& series);
    static SummatoryFunction from_function(std::function<double(double)> f, double support_start);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double support_start() const { return start_; }

private:
    std::function<double(double)> f_;
    double start_ = 1.0;
};

struct ExpScaleQuery {
    double sigma;
    double t;
};

[[nodiscard]] double summatory_eval(const SummatoryFunction& A, double x);
[[nodiscard]] TransformValue mellin_stieltjes(const CoefficientSeries& series, cd s,
                                              TransformMode mode = TransformMode::closed_form);

/// zeta(s) or zeta'(s) by Euler-Maclaurin, N = max(20, ceil(2|Im s|)), six correction terms.
[[nodiscard]] cd zeta_em(cd s, int derivative_order);
/// zeta'(s)/zeta(s) sharing one Euler-Maclaurin pass.
[[nodiscard]] cd zeta_log_derivative(cd s);

/// h_sigma(t) = e^{-(1+sigma)t} A(e^t).
[[nodiscard]] double h_sigma(const SummatoryFunction& A, const ExpScaleQuery& q);
/// g_sigma(t) = h_sigma(t) - h_{2 sigma}(t) = h_sigma(t)(1 - e^{-sigma t}).
[[nodiscard]] double g_sigma(const SummatoryFunction& A, const ExpScaleQuery& q);
/// A(1+sigma+i tau)/(1+sigma+i tau), the Fourier transform of h_sigma.
[[nodiscard]] cd fourier_h_sigma(const CoefficientSeries& series, double sigma, double tau);

}  // namespace tk::dirichlet
