#include "tauberkit/tauber.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tauberkit/errors.hpp"
#include "tauberkit/kernels.hpp"

namespace tk::tauber {

namespace {

constexpr double kPi = std::numbers::pi;
const double kPrefactor = 20.0 * std::numbers::e / (1.0 - std::exp(-1.0));
const double kFourRootPi = 4.0 / std::sqrt(kPi);

template <class Fn>
void for_each_term(const SingularStructure& s, Fn&& fn) {
    for (std::size_t k = 0; k < s.poles().size(); ++k)
        for (const auto& t : s.poles()[k].terms) fn(k, s.poles()[k].b, t);
}

void parallel_rows(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

}  // namespace

SingularStructure::SingularStructure() : poles_{Pole{0.0, {}}} {}

SingularStructure::SingularStructure(std::vector<Pole> poles, std::string label)
    : poles_(std::move(poles)), label_(std::move(label)) {
    if (poles_.empty() || poles_.front().b != 0.0) poles_.insert(poles_.begin(), Pole{0.0, {}});
    for (std::size_t k = 1; k < poles_.size(); ++k)
        if (!(poles_[k].b > poles_[k - 1].b))
            throw ArgumentError("SingularStructure: b_k must be positive and strictly increasing");
    bool any = false;
    Omega_ = -std::numeric_limits<double>::infinity();
    omega_min_ = std::numeric_limits<double>::infinity();
    for (const auto& p : poles_)
        for (const auto& t : p.terms) {
            if (!(t.omega > -1.0)) throw ArgumentError("SingularStructure: omega must exceed -1");
            Omega_ = std::max(Omega_, t.omega);
            omega_min_ = std::min(omega_min_, t.omega);
            any = true;
        }
    if (!any) Omega_ = omega_min_ = 0.0;
}

bool SingularStructure::empty() const {
    return std::all_of(poles_.begin(), poles_.end(), [](const Pole& p) { return p.terms.empty(); });
}

cd SingularStructure::principal(cd s) const {
    cd sum = 0.0;
    for (const auto& p : poles_) {
        const cd plus = s + cd(0.0, p.b), minus = s - cd(0.0, p.b);
        for (const auto& t : p.terms) {
            if (plus == 0.0 || minus == 0.0) throw PoleError("principal part evaluated at a pole");
            sum += t.c / std::pow(plus, t.omega + 1.0) + std::conj(t.c) / std::pow(minus, t.omega + 1.0);
        }
    }
    return sum;
}

SingularStructure real_pole_structure(const std::vector<std::pair<double, double>>& omega_and_2rec,
                                      const std::string& label) {
    Pole p{0.0, {}};
    for (const auto& [w, a] : omega_and_2rec) p.terms.push_back({w, cd(0.5 * a, 0.0)});
    return SingularStructure({p}, label);
}

cd G_eval(const CoefficientSeries& series, const SingularStructure& singular, cd s) {
    if (!(s.real() > 0.0)) throw DomainError("G_eval: requires Re s > 0");
    return series.closed_form(s + 1.0) / (s + 1.0) - singular.principal(s);
}

quad::Options eta_options() { return {1e-9, 1e-7, 2000}; }

EtaAccumulator::EtaAccumulator(const CoefficientSeries& series, const SingularStructure& singular, double sigma,
                               quad::Options opt)
    : series_(series), singular_(singular), sigma_(sigma), opt_(opt) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("eta: sigma must lie in (0, 1)");
}

double EtaAccumulator::integrate_panel(double lo, double hi, double& err) {
    auto f = [this](double tau) {
        return std::abs(G_eval(series_, singular_, cd(2.0 * sigma_, tau)) -
                        G_eval(series_, singular_, cd(sigma_, tau)));
    };
    const bool symmetric = series_.real_coefficients();
    // Panel edges near each boundary pole at scales sigma, 10 sigma, 100 sigma.
    auto panel = [&](double a, double b) {
        std::vector<double> pts{a, b};
        for (const auto& p : singular_.poles())
            for (double sign : {-1.0, 1.0})
                for (double d : {0.0, sigma_, 10.0 * sigma_, 100.0 * sigma_})
                    for (double e : {-d, d}) {
                        const double t = sign * p.b + e;
                        if (t > a && t < b) pts.push_back(t);
                    }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        auto r = quad::integrate_breakpoints(f, pts, opt_);
        if (!r.converged)
            throw PrecisionError("eta: quadrature did not converge on [" + fmt(a) + ", " + fmt(b) + "]",
                                 value_ + r.value);
        err += r.error;
        return r.value;
    };
    if (symmetric) {
        const double v = 2.0 * panel(lo, hi);
        err *= 2.0;
        return v;
    }
    return panel(lo, hi) + panel(-hi, -lo);
}

EtaValue EtaAccumulator::extend_to(double T) {
    if (T < T_) throw ArgumentError("EtaAccumulator: T must not decrease");
    if (T > T_) {
        double err = 0.0;
        value_ += integrate_panel(T_, T, err);
        error_ += err;
        T_ = T;
    }
    return {value_, error_};
}

EtaValue eta(const CoefficientSeries& series, const SingularStructure& singular, double sigma, double T,
             const quad::Options& opt) {
    if (!(T > 0.0)) throw DomainError("eta: T must be positive");
    EtaAccumulator acc(series, singular, sigma, opt);
    return acc.extend_to(T);
}

EtaCurve eta_curve(const CoefficientSeries& series, const SingularStructure& singular, double T,
                   const std::vector<double>& sigmas, const quad::Options& opt) {
    EtaCurve c{T, {}, series.label(), singular.label()};
    for (double s : sigmas) {
        const auto v = eta(series, singular, s, T, opt);
        c.samples.push_back({s, v.value, v.error});
    }
    return c;
}

std::string eta_curve_csv(const EtaCurve& c) {
    std::ostringstream os;
    os << std::setprecision(15) << "sigma,eta,quad_error,T\n";
    for (const auto& s : c.samples) os << s.sigma << ',' << s.eta << ',' << s.quad_error << ',' << c.T << '\n';
    return os.str();
}

std::vector<double> geometric_points(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw ArgumentError("geometric_points: need 0 < lo <= hi, n >= 1");
    std::vector<double> out;
    if (n == 1) return {lo};
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    out.back() = hi;
    return out;
}

PoleOrder estimate_pole_order(const EtaCurve& curve, double zero_tol) {
    if (curve.samples.size() < 4) throw ArgumentError("estimate_pole_order: need at least 4 samples");
    std::vector<double> lx, ly;
    for (const auto& s : curve.samples)
        if (s.eta > zero_tol) lx.push_back(std::log(s.sigma)), ly.push_back(std::log(s.eta));
    if (lx.size() < 2) return {0, 0.0, 1.0};
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / n, my += ly[i] / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw ArgumentError("estimate_pole_order: sigma grid is degenerate");
    const double p = sxy / sxx;
    const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {std::max(0, static_cast<int>(std::lround(1.0 - p))), p, r2};
}

double eta_principal_split(const SingularStructure& singular, double sigma, double /*T*/) {
    if (!(sigma > 0.0)) throw DomainError("eta_principal_split: sigma must be positive");
    double total = 0.0;
    for_each_term(singular, [&](std::size_t, double b, const SingularTerm& t) {
        const double j = t.omega + 1.0;
        const double per = 2.0 * (j + 1.0) * std::pow(sigma, -(j - 1.0));
        total += b == 0.0 ? std::abs(2.0 * t.c.real()) * per : 2.0 * std::abs(t.c) * per;
    });
    return total;
}

Thm41HypothesisReport check_thm41_hypothesis(const CoefficientSeries& series, double m, double T, double K1,
                                             const std::vector<double>& sigma_grid) {
    if (!(m >= 0.0) || !(T > 0.0)) throw ArgumentError("check_thm41_hypothesis: need m >= 0, T > 0");
    Thm41HypothesisReport rep{{}, 0.0, true};
    for (double s : sigma_grid) {
        auto f = [&](double t) {
            const cd z(1.0 + s, t);
            return std::abs(series.closed_form(z)) / std::abs(z);
        };
        std::vector<double> pts{0.0};
        for (double p = s; p < T; p *= 10.0) pts.push_back(p);
        pts.push_back(T);
        const auto r = quad::integrate_breakpoints(f, pts, eta_options());
        if (!r.converged) throw PrecisionError("check_thm41_hypothesis: quadrature did not converge", r.value);
        const double ref = m > 0.0 ? kernels::wallis_Z({m, s, kernels::kInf}) : kernels::wallis_Z({0.0, s, T});
        const double ratio = r.value / ref;
        rep.rows.push_back({s, r.value, ref, ratio});
        rep.K1_min = std::max(rep.K1_min, ratio);
    }
    rep.pass = rep.K1_min <= K1;
    return rep;
}

Thm41ConclusionReport check_thm41_conclusion(const CoefficientSeries& series, double m,
                                             const std::vector<double>& x_grid) {
    Thm41ConclusionReport rep{0.0, 0.0, m == 1.0 ? "loglog x" : (m > 1.0 ? "log^p x" : "1")};
    for (double x : x_grid) {
        if (x < std::numbers::e || (m == 1.0 && x < std::exp(std::numbers::e)))
            throw ArgumentError("check_thm41_conclusion: x below the admissible range");
        const double w = m == 1.0 ? std::log(std::log(x)) : std::pow(std::log(x), std::max(0.0, m - 1.0));
        const double c = std::abs(series.summatory(x)) / (x * w);
        if (c > rep.C) rep.C = c, rep.worst_x = x;
    }
    return rep;
}

double lemma43_transfer(double k, double mu, double T, const std::optional<Lemma43Params>& params) {
    if (!(mu >= 0.0)) throw ArgumentError("lemma43_transfer: mu must be >= 0");
    if (mu > 0.0) return k / (1.0 - std::pow(2.0, -mu));
    if (!params) throw ArgumentError("lemma43_transfer: mu = 0 needs A(2), k* and mu0");
    const double K_star = params->A2 / 2.0 + 2.0 * std::numbers::e * kernels::gamma_fn(2.0 + params->mu0) * params->k_star;
    return 2.0 / std::numbers::ln2 * (K_star * T + k);
}

double main_term(const SingularStructure& singular, double x) {
    if (!(x >= 1.0)) throw DomainError("main_term: x must be >= 1");
    const double L = std::log(x);
    double sum = 0.0;
    for_each_term(singular, [&](std::size_t, double b, const SingularTerm& t) {
        sum += std::pow(L, t.omega) / kernels::gamma_fn(t.omega + 1.0) * 2.0 * (t.c * std::polar(1.0, -b * L)).real();
    });
    return x * sum;
}

std::vector<double> laurent_fit(const CoefficientSeries& series, int m, double tol) {
    if (m < 0) throw ArgumentError("laurent_fit: m must be >= 0");
    if (m == 0) return {};
    constexpr int degree = 12, nodes = 40;
    auto fit = [&](double h) {
        Eigen::MatrixXd V(nodes, degree + 1);
        Eigen::VectorXd y(nodes);
        for (int i = 0; i < nodes; ++i) {
            // Chebyshev nodes of [h/20, h]; the polynomial is in t = sigma/h.
            const double t = 0.525 + 0.475 * std::cos(kPi * (i + 0.5) / nodes);
            const double sigma = h * t;
            y(i) = (std::pow(sigma, m) * series.closed_form(cd(1.0 + sigma, 0.0)) / (1.0 + sigma)).real();
            double p = 1.0;
            for (int j = 0; j <= degree; ++j, p *= t) V(i, j) = p;
        }
        const Eigen::VectorXd c = V.householderQr().solve(y);
        std::vector<double> out(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = c(j) / std::pow(h, j);
        return out;
    };
    double h = 0.4;
    auto prev = fit(h);
    for (int it = 0; it < 8; ++it) {
        h *= 0.5;
        auto cur = fit(h);
        double diff = 0.0;
        for (int j = 0; j < m; ++j) diff = std::max(diff, std::abs(cur[static_cast<std::size_t>(j)] - prev[static_cast<std::size_t>(j)]));
        prev = std::move(cur);
        if (diff < tol) return prev;
    }
    throw PrecisionError("laurent_fit: coefficients did not stabilize", prev.empty() ? 0.0 : prev[0]);
}

SingularStructure structure_from_laurent(const std::vector<double>& coeffs, const std::string& label) {
    std::vector<std::pair<double, double>> terms;
    const auto m = static_cast<int>(coeffs.size());
    for (int j = 0; j < m; ++j) terms.push_back({static_cast<double>(m - 1 - j), coeffs[static_cast<std::size_t>(j)]});
    return real_pole_structure(terms, label);
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::moderate: return "moderate";
        case Regime::increasing: return "increasing";
        case Regime::slow: return "slow";
    }
    return "unknown";
}

Regime regime_from_name(const std::string& name) {
    if (name == "moderate") return Regime::moderate;
    if (name == "increasing") return Regime::increasing;
    if (name == "slow") return Regime::slow;
    throw ArgumentError("unknown regime '" + name + "'");
}

double x0_moderate(double T) { return std::max(std::exp(16.0 / 15.0), std::exp(32.0 / T)); }
double x0_slow(double T) { return std::max({std::numbers::e, std::exp(17.0 / T), std::exp(17.0 / std::sqrt(T))}); }
double x0_slow_simplified(double T) { return std::max(std::numbers::e, std::exp(17.0 / std::sqrt(T))); }

double x0_for(const BoundParams& p, double T) {
    if (p.regime == Regime::slow) return p.slow.simplified ? x0_slow_simplified(T) : x0_slow(T);
    return x0_moderate(T);
}

namespace {

void require_x0(double x, double x0, const char* who) {
    if (x < x0) throw DomainError(std::string(who) + ": x below the validity threshold x0 = " + fmt(x0));
}

double Omega_plus(const SingularStructure& s) { return std::max(0.0, s.Omega()); }

}  // namespace

double rho_moderate(double x, double T, const SingularStructure& s, const ModerateParams& p, double eta) {
    if (!(T > 0.0)) throw DomainError("rho_moderate: T must be positive");
    require_x0(x, x0_moderate(T), "rho_moderate");
    const double L = std::log(x), e10 = std::exp(10.0 / T);
    const double lambda3 = p.B1 + p.B2;
    const double Bp = p.B1 + p.B2 + 2.0 * p.A_minus_norm;
    const double C4 = 10.0 * lambda3 * e10 + Bp;
    const double C5 = 1.2 * e10 / T + 1.0 / kPi;
    double sum = 0.0;
    for_each_term(s, [&](std::size_t, double b, const SingularTerm& t) {
        const double c = std::abs(t.c);
        const double C1 = c * (13.2 * e10 + kFourRootPi * std::abs(b));
        const double C2 = kFourRootPi * c;
        sum += C1 * std::pow(L, t.omega) + C2 / L * (std::pow(L, t.omega) + std::pow(T, -t.omega));
    });
    const double R = C4 / T + C5 * eta + sum / T;
    const double phi = p.phi ? p.phi(std::sqrt(x)) : 0.0;
    return kPrefactor * (p.B2 * std::sqrt(phi) + R + std::sqrt(p.B2 * R));
}

double rho_moderate_remark(double x, double T, const SingularStructure& s, double eta) {
    if (!(T > 0.0)) throw DomainError("rho_moderate_remark: T must be positive");
    require_x0(x, x0_moderate(T), "rho_moderate_remark");
    const double L = std::log(x), e10T = std::exp(10.0 / T) / T;
    return (e10T + 1.0) * eta + e10T * std::pow(L, Omega_plus(s)) +
           (std::pow(T, -s.Omega() - 1.0) + std::pow(T, -s.omega_min() - 1.0)) / L;
}

double rho_increasing_general(double x, double T, const SingularStructure& s, double eta) {
    if (!(T > 0.0)) throw DomainError("rho_increasing: T must be positive");
    require_x0(x, x0_moderate(T), "rho_increasing");
    const double L = std::log(x), e10T = std::exp(10.0 / T) / T;
    return (e10T + 1.0) * eta + e10T * std::pow(L, s.Omega()) +
           (std::pow(T, -s.Omega() - 1.0) + std::pow(T, -s.omega_min() - 1.0)) / L;
}

double rho_increasing(double x, double T, const SingularStructure& s, double eta) {
    if (T < 1.0) return rho_increasing_general(x, T, s, eta);
    require_x0(x, x0_moderate(T), "rho_increasing");
    const double L = std::log(x);
    return eta + std::pow(L, s.Omega()) / T + 1.0 / (L * std::pow(T, 1.0 + s.omega_min()));
}

double rho_slow(double x, double T, const SingularStructure& s, const SlowParams& p, double eta) {
    if (!(T > 0.0)) throw DomainError("rho_slow: T must be positive");
    require_x0(x, x0_slow(T), "rho_slow");
    const double L = std::log(x), lam = std::exp(1.0 / T);
    const double nu = p.nu ? p.nu(lam) : 0.0;
    const double nb_e = p.nu_bar ? p.nu_bar(std::numbers::e) : 0.0;
    const double nb_lam = p.nu_bar ? p.nu_bar(lam) : 0.0;
    const double psi1 = p.Psi ? p.Psi(lam, 1.0) : 0.0;
    const double psix = p.Psi ? p.Psi(lam, std::sqrt(x)) : 0.0;

    double osc = 0.0, all = 0.0;
    for_each_term(s, [&](std::size_t k, double b, const SingularTerm& t) {
        const double c = std::abs(t.c), Lw = std::pow(L, t.omega);
        if (k >= 1) osc += c * (std::pow(T, -t.omega) + Lw);
        all += c * (kFourRootPi * std::abs(b) + 6.6) * Lw;
    });
    const double R = nu + (1.0 / kPi + 0.6 / T) * eta +
                     (8.0 * nb_e + 8.0 * p.A1_abs + p.K) * (std::pow(L, std::min(1.0, Omega_plus(s))) + std::log(2.0 * L)) / T +
                     kFourRootPi / (T * L) * osc + (50.0 * nb_lam + p.A_norm + all) / T;
    return kPrefactor * (std::sqrt(psi1 * psix) + R + std::sqrt(psi1 * R));
}

double rho_slow_simplified(double x, double T, const SingularStructure& s, const SlowParams& p, double eta) {
    if (T < 1.0) throw DomainError("rho_slow_simplified: needs T >= 1");
    require_x0(x, x0_slow_simplified(T), "rho_slow_simplified");
    const double L = std::log(x), lam = std::exp(1.0 / T);
    const double nu = p.nu ? p.nu(lam) : 0.0;
    const double psi1 = p.Psi ? p.Psi(lam, 1.0) : 0.0;
    const double psix = p.Psi ? p.Psi(lam, x) : 0.0;
    const double R = nu + eta + (std::pow(L, Omega_plus(s)) + std::log(L)) / T +
                     1.0 / (std::pow(T, s.omega_min() + 1.0) * L);
    return std::sqrt(psi1 * psix) + R + std::sqrt(psi1 * R);
}

double rho_tenenbaum(double t, double T, double omega, double eta) {
    if (!(t > 0.0) || !(T > 0.0)) throw DomainError("rho_tenenbaum: t and T must be positive");
    return 1.0 / T + eta / std::pow(t, omega) + std::pow(T * t, -omega - 1.0);
}

double rho_meromorphic(double x, double T, double m, double eta) {
    if (!(x > 1.0) || !(T > 0.0)) throw DomainError("rho_meromorphic: need x > 1, T > 0");
    return 1.0 / T + eta / std::pow(std::log(x), m - 1.0);
}

double rho_for(const BoundParams& p, double x, double T, const SingularStructure& s, double eta) {
    switch (p.regime) {
        case Regime::moderate: return rho_moderate(x, T, s, p.moderate, eta);
        case Regime::increasing: return rho_increasing(x, T, s, eta);
        case Regime::slow:
            return p.slow.simplified ? rho_slow_simplified(x, T, s, p.slow, eta) : rho_slow(x, T, s, p.slow, eta);
    }
    throw ArgumentError("rho_for: unknown regime");
}

double eta_floor_coefficient(const BoundParams& p) {
    if (p.regime == Regime::moderate) return kPrefactor / kPi;
    if (p.regime == Regime::slow && !p.slow.simplified) return kPrefactor / kPi;
    return 1.0;
}

TOptimum optimize_T(const std::function<double(double)>& rho_of_T, const std::vector<double>& grid) {
    if (grid.empty()) throw ArgumentError("optimize_T: empty T grid");
    TOptimum best{grid.front(), std::numeric_limits<double>::infinity(), 0.0};
    for (double T : grid) {
        const double r = rho_of_T(T);
        if (r < best.rho_star) best.T_star = T, best.rho_star = r;
    }
    return best;
}

std::vector<double> T_grid(double T_min, double T_max, int per_decade) {
    if (!(T_min > 0.0) || !(T_max >= T_min) || per_decade < 1) throw ArgumentError("T_grid: invalid range");
    const int n = static_cast<int>(std::floor(std::log10(T_max / T_min) * per_decade + 1e-9));
    std::vector<double> out;
    for (int i = 0; i <= n; ++i) out.push_back(T_min * std::pow(10.0, static_cast<double>(i) / per_decade));
    if (out.back() < T_max * (1.0 - 1e-12)) out.push_back(T_max);
    return out;
}

double default_T_min(Regime r) { return r == Regime::moderate ? 64.0 : 1.0; }

namespace {

// Sweeps T upward with a cumulative eta and keeps the smallest feasible rho. The sweep stops
// once kappa * eta(T) exceeds the best value, since eta is nondecreasing in T.
template <class Rho>
BoundReport optimize_row(double x, const std::vector<double>& grid, double kappa,
                         const std::function<EtaValue(double)>& eta_at, Rho&& rho) {
    BoundReport row{x, 0, 0, std::numeric_limits<double>::infinity(), 0, 0, 0, false, false};
    for (double T : grid) {
        const double e = eta_at(T).value;
        if (row.x0_check && kappa * e >= row.rho) break;
        double r;
        try {
            r = rho(T, e);
        } catch (const DomainError&) {
            continue;  // below the validity threshold for this T
        }
        row.x0_check = true;
        if (r < row.rho) row.rho = r, row.T_used = T, row.eta = e;
    }
    return row;
}

}  // namespace

std::vector<BoundReport> verify_bound(const CoefficientSeries& series, const SingularStructure& singular,
                                      const BoundParams& params, const std::vector<double>& x_grid,
                                      const VerifyOptions& opt) {
    const auto grid = opt.T_grid.empty() ? T_grid(default_T_min(params.regime)) : opt.T_grid;
    const double kappa = eta_floor_coefficient(params);
    std::vector<BoundReport> rows(x_grid.size());
    parallel_rows(x_grid.size(), opt.threads, [&](std::size_t i) {
        const double x = x_grid[i];
        BoundReport row{x, 0, 0, std::numeric_limits<double>::infinity(), 0, 0, 0, false, false};
        if (x > std::numbers::e) {
            EtaAccumulator acc(series, singular, 1.0 / std::log(x), opt.eta_opt);
            row = optimize_row(x, grid, kappa, [&](double T) { return acc.extend_to(T); },
                               [&](double T, double e) { return rho_for(params, x, T, singular, e); });
        }
        row.A_of_x = series.summatory(x);
        row.main_term = main_term(singular, x);
        if (row.x0_check) {
            row.residual_ratio = std::abs(row.A_of_x - row.main_term) / (x * row.rho);
            row.pass = row.residual_ratio <= 1.0;
        } else {
            row.rho = std::numeric_limits<double>::quiet_NaN();
            row.residual_ratio = std::numeric_limits<double>::quiet_NaN();
        }
        rows[i] = row;
    });
    std::sort(rows.begin(), rows.end(), [](const BoundReport& a, const BoundReport& b) { return a.x < b.x; });
    return rows;
}

std::string bound_csv(const std::vector<BoundReport>& rows) {
    std::ostringstream os;
    os << "x,A_of_x,main_term,rho,T_used,residual_ratio,x0_check,eta,status\n";
    for (const auto& r : rows)
        os << fmt(r.x) << ',' << fmt(r.A_of_x) << ',' << fmt(r.main_term) << ',' << fmt(r.rho) << ','
           << fmt(r.T_used) << ',' << fmt(r.residual_ratio) << ',' << (r.x0_check ? "true" : "false") << ','
           << fmt(r.eta) << ',' << (!r.x0_check ? "infeasible" : (r.pass ? "PASS" : "FAIL")) << '\n';
    return os.str();
}

std::string bound_json(const std::string& series, const SingularStructure& singular, Regime regime,
                       const std::vector<BoundReport>& rows) {
    using nlohmann::ordered_json;
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(std::stod(fmt(v))) : ordered_json(nullptr); };
    ordered_json sing = ordered_json::array();
    for (const auto& p : singular.poles()) {
        ordered_json terms = ordered_json::array();
        for (const auto& t : p.terms) terms.push_back({{"omega", t.omega}, {"c", {t.c.real(), t.c.imag()}}});
        sing.push_back({{"b", p.b}, {"terms", terms}});
    }
    ordered_json out{{"series", series}, {"singular", sing}, {"regime", to_string(regime)}, {"rows", ordered_json::array()}};
    for (const auto& r : rows)
        out["rows"].push_back({{"x", num(r.x)},
                               {"A_of_x", num(r.A_of_x)},
                               {"main_term", num(r.main_term)},
                               {"rho", num(r.rho)},
                               {"T_used", num(r.T_used)},
                               {"residual_ratio", num(r.residual_ratio)},
                               {"x0_check", r.x0_check},
                               {"eta", num(r.eta)},
                               {"status", !r.x0_check ? "infeasible" : (r.pass ? "PASS" : "FAIL")}});
    return out.dump(2) + "\n";
}

MajorizedReport bound_majorized(const CoefficientSeries& a, const CoefficientSeries& b, double alpha, double beta,
                                const std::vector<double>& x_grid, const VerifyOptions& opt,
                                std::int64_t check_up_to) {
    if (!a.has_coefficients() || !b.has_coefficients())
        throw ArgumentError("bound_majorized: both series need coefficients");
    const std::int64_t N = std::min({check_up_to, a.n_max(), b.n_max()});
    std::vector<std::int64_t> bad;
    for (std::int64_t n = 1; n <= N && bad.size() < 10; ++n)
        if (std::abs(a.coefficient(n)) > b.coefficient(n).real() * (1.0 + 1e-12) + 1e-15) bad.push_back(n);
    if (!bad.empty()) {
        std::string list;
        for (auto n : bad) list += (list.empty() ? "" : ",") + std::to_string(n);
        throw ArgumentError("bound_majorized: |a_n| > b_n at n = " + list);
    }
    const auto sa = alpha == 0.0 ? SingularStructure() : real_pole_structure({{0.0, alpha}}, "alpha/s");
    const auto sb = beta == 0.0 ? SingularStructure() : real_pole_structure({{0.0, beta}}, "beta/s");
    const auto grid = opt.T_grid.empty() ? T_grid(64.0) : opt.T_grid;

    MajorizedReport rep{std::vector<BoundReport>(x_grid.size()), alpha, beta, N};
    parallel_rows(x_grid.size(), opt.threads, [&](std::size_t i) {
        const double x = x_grid[i];
        BoundReport row{x, 0, 0, std::numeric_limits<double>::infinity(), 0, 0, 0, false, false};
        if (x > std::numbers::e) {
            const double sigma = 1.0 / std::log(x);
            EtaAccumulator ea(a, sa, sigma, opt.eta_opt), eb(b, sb, sigma, opt.eta_opt);
            row = optimize_row(
                x, grid, 1.0,
                [&](double T) {
                    const auto va = ea.extend_to(T), vb = eb.extend_to(T);
                    return EtaValue{va.value + vb.value, va.error + vb.error};
                },
                [](double T, double e) { return 1.0 / T + e; });
        }
        const cd A = a.summatory_complex(x);
        row.A_of_x = A.real();
        row.main_term = alpha * x;
        if (row.x0_check) {
            row.residual_ratio = std::abs(A - cd(alpha * x, 0.0)) / (x * row.rho);
            row.pass = row.residual_ratio <= 1.0;
        }
        rep.rows[i] = row;
    });
    return rep;
}

}  // namespace tk::tauber
