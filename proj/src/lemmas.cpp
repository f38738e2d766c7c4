#include "tauberkit/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

#include "tauberkit/errors.hpp"
#include "tauberkit/kernels.hpp"
#include "tauberkit/quadrature.hpp"

namespace tk::lemmas {

namespace {

constexpr double kPi = std::numbers::pi;

double phi_at(const RealFn& Phi, double x) { return Phi ? Phi(x) : 0.0; }

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    if (n <= 1) {
        v.push_back(lo);
        return v;
    }
    v.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    return v;
}

// Cubic B-spline centred at 0 with support [-2, 2] and unit mass.
double bspline4(double u) {
    const double a = std::abs(u);
    if (a >= 2.0) return 0.0;
    if (a <= 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
    const double r = 2.0 - a;
    return r * r * r / 6.0;
}

// Transform of chi_h(x)^2: (1/2pi) (tri_h * tri_h)(tau) = (h/2pi) M4(tau/h), support [-2h, 2h].
double fejer_sq_hat(double h, double tau) { return h / (2.0 * kPi) * bspline4(tau / h); }

double tolerance(double scale) { return 1e-10 * std::max(1.0, std::abs(scale)); }

// Largest g(x+y) - g(x) - Phi(x) over the spot-check pairs; also returns the worst x.
double increment_excess(const TestFunction& g, double h, double from, const RealFn& Phi, const CheckGrid& grid,
                        const std::function<double(double)>& allowance, double* worst_x) {
    // Base points are anchored to [lo, hi] so that sups measured from different starts nest.
    double worst = -std::numeric_limits<double>::infinity();
    for (double x : linspace(g.lo, g.hi, grid.base_points)) {
        if (x < from) continue;
        const double gx = g.eval(x);
        const double cap = allowance ? allowance(x) : phi_at(Phi, x);
        for (int j = 1; j <= grid.increments; ++j) {
            const double y = h * j / grid.increments;
            if (x + y > g.hi) break;
            const double d = g.eval(x + y) - gx - cap;
            if (d > worst) {
                worst = d;
                if (worst_x) *worst_x = x;
            }
        }
    }
    return worst;
}

// Conclusion scan: min over grid x > x0 of rhs(x) - |g(x)|.
void scan_conclusion(const TestFunction& g, double x0, const std::function<double(double)>& rhs,
                     const CheckGrid& grid, LemmaReport& r) {
    r.grid_lo = std::max(g.lo, x0);
    r.grid_hi = g.hi;
    r.grid_n = 0;
    r.lhs_max = 0.0;
    r.rhs_min_margin = std::numeric_limits<double>::infinity();
    for (double x : linspace(g.lo, g.hi, grid.n)) {
        if (!(x > x0)) continue;
        const double lhs = std::abs(g.eval(x));
        r.lhs_max = std::max(r.lhs_max, lhs);
        r.rhs_min_margin = std::min(r.rhs_min_margin, rhs(x) - lhs);
        ++r.grid_n;
    }
    if (r.grid_n == 0) {
        r.note = "no grid point beyond x0";
        r.rhs_min_margin = 0.0;
    }
    r.pass = r.rhs_min_margin >= 0.0;
    r.status = r.pass ? LemmaStatus::pass : LemmaStatus::fail;
}

LemmaReport violated(LemmaReport r, std::string why) {
    r.pass = false;
    r.status = LemmaStatus::precondition_violated;
    r.note = std::move(why);
    return r;
}

}  // namespace

TestFunction zero_function(double lo, double hi) {
    TestFunction g;
    g.eval = [](double) { return 0.0; };
    g.fourier = [](double) { return cd(0.0, 0.0); };
    g.gap = std::numeric_limits<double>::infinity();
    g.band = 0.0;
    g.lo = lo;
    g.hi = hi;
    g.sup_norm = 0.0;
    g.label = "zero";
    return g;
}

TestFunction gaussian_pulse(double A, double s, double xc) {
    if (!(s > 0.0)) throw ArgumentError("gaussian_pulse: width must be positive");
    TestFunction g;
    g.eval = [=](double x) {
        const double u = (x - xc) / s;
        return A * std::exp(-0.5 * u * u);
    };
    g.fourier = [=](double tau) {
        const double mag = A * s * std::sqrt(2.0 * kPi) * std::exp(-0.5 * s * s * tau * tau);
        return mag * std::polar(1.0, -tau * xc);
    };
    g.lo = xc - 12.0 * s;
    g.hi = xc + 12.0 * s;
    g.tau_breaks = {-1.0 / s, 0.0, 1.0 / s};
    g.sup_norm = std::abs(A);
    g.label = "gaussian";
    return g;
}

TestFunction build_gapped(double T, double W, double carrier, double A, double xc, double phase) {
    if (!(W > 0.0 && W < T)) throw ArgumentError("build_gapped: need 0 < W < T");
    if (!(T <= carrier - W)) throw ArgumentError("build_gapped: need T <= carrier - W");
    const double h = 0.5 * W;
    TestFunction g;
    g.eval = [=](double x) {
        const double y = x - xc;
        const double env = kernels::fejer_chi_T(h, y);
        return A * env * env * std::cos(carrier * y + phase);
    };
    g.fourier = [=](double tau) {
        const cd up = std::polar(1.0, phase) * fejer_sq_hat(h, tau - carrier);
        const cd down = std::polar(1.0, -phase) * fejer_sq_hat(h, tau + carrier);
        return A * std::polar(1.0, -tau * xc) * 0.5 * (up + down);
    };
    g.gap = carrier - W;
    g.band = carrier + W;
    // chi_h^2 decays like x^-4; 400/h leaves a relative tail near 1e-9.
    g.lo = xc - 400.0 / h;
    g.hi = xc + 400.0 / h;
    for (double c : {-carrier, carrier})
        for (double d : {-W, -h, 0.0, h, W}) g.tau_breaks.push_back(c + d);
    g.label = "gapped";
    return g;
}

TestFunction fejer_bump(double A, double W, double xc) {
    if (!(W > 0.0)) throw ArgumentError("fejer_bump: W must be positive");
    TestFunction g;
    g.eval = [=](double x) { return A * kernels::fejer_chi_T(W, x - xc); };
    g.fourier = [=](double tau) { return A * kernels::fejer_hat(W, tau) * std::polar(1.0, -tau * xc); };
    g.band = W;
    g.lo = xc - 200.0 / W;
    g.hi = xc + 200.0 / W;
    g.tau_breaks = {-W, 0.0, W};
    g.sup_norm = std::abs(A) * W / (2.0 * kPi);
    g.label = "fejer";
    return g;
}

namespace {

TestFunction pipeline_base(const dirichlet::CoefficientSeries& series, double sigma, const char* who) {
    if (!(sigma > 0.0 && sigma < 0.5)) throw DomainError(std::string(who) + ": sigma must lie in (0, 1/2)");
    if (!series.has_coefficients() || !series.real_coefficients())
        throw ArgumentError(std::string(who) + ": needs a real coefficient table");
    TestFunction g;
    g.lo = -1.0;
    g.hi = std::log(static_cast<double>(series.n_max()));
    g.tau_breaks = {-10.0 * sigma, -sigma, 0.0, sigma, 10.0 * sigma};
    return g;
}

}  // namespace

TestFunction pipeline_g_sigma(const dirichlet::CoefficientSeries& series, double sigma) {
    TestFunction g = pipeline_base(series, sigma, "pipeline_g_sigma");
    const auto A = dirichlet::SummatoryFunction::from_series(series);
    g.eval = [A, sigma](double t) { return t <= 0.0 ? 0.0 : dirichlet::g_sigma(A, {sigma, t}); };
    g.fourier = [series, sigma](double tau) {
        return dirichlet::fourier_h_sigma(series, sigma, tau) - dirichlet::fourier_h_sigma(series, 2.0 * sigma, tau);
    };
    g.label = "g_sigma:" + series.label();
    return g;
}

TestFunction pipeline_L_sigma(const dirichlet::CoefficientSeries& series, const tauber::SingularStructure& singular,
                              double sigma, bool negate) {
    TestFunction g = pipeline_base(series, sigma, "pipeline_L_sigma");
    const double sign = negate ? -1.0 : 1.0;
    const auto A = dirichlet::SummatoryFunction::from_series(series);
    g.eval = [A, singular, sigma, sign](double t) {
        if (t <= 0.0) return 0.0;
        double sing = 0.0;
        for (const auto& pole : singular.poles())
            for (const auto& term : pole.terms) {
                const double re = (term.c * std::polar(1.0, -pole.b * t)).real();
                sing += 2.0 * re * std::pow(sigma, -term.omega) * kernels::beta({term.omega, sigma * t});
            }
        return sign * (dirichlet::g_sigma(A, {sigma, t}) - sing);
    };
    g.fourier = [series, singular, sigma, sign](double tau) {
        return sign * (tauber::G_eval(series, singular, cd(sigma, tau)) -
                       tauber::G_eval(series, singular, cd(2.0 * sigma, tau)));
    };
    for (const auto& pole : singular.poles()) {
        if (pole.b == 0.0) continue;
        for (double d : {-sigma, 0.0, sigma}) {
            g.tau_breaks.push_back(pole.b + d);
            g.tau_breaks.push_back(-pole.b + d);
        }
    }
    g.label = std::string(negate ? "-L_sigma:" : "L_sigma:") + series.label();
    return g;
}

cd numeric_fourier(const TestFunction& g, double tau) {
    const double freq = std::max({std::abs(tau), std::isfinite(g.band) ? g.band : 0.0, 1.0});
    const double width = kPi / (2.0 * freq);
    const int panels = std::max(1, static_cast<int>(std::ceil((g.hi - g.lo) / width)));
    const auto pts = linspace(g.lo, g.hi, panels + 1);
    auto f = [&](double x) { return g.eval(x) * std::polar(1.0, -tau * x); };
    return quad::integrate_breakpoints(f, pts, {1e-12, 1e-10, 200}).value;
}

double abs_fourier_integral(const TestFunction& g, double T) {
    if (!(T > 0.0)) throw DomainError("abs_fourier_integral: T must be positive");
    const double top = std::min(T, g.band);
    if (g.gap >= top) return 0.0;
    auto mag = [&](double tau) { return std::abs(g.fourier ? g.fourier(tau) : numeric_fourier(g, tau)); };
    // Integrate [gap, top] on both sides.
    std::vector<double> right{std::max(g.gap, 0.0), top}, left{-top, -std::max(g.gap, 0.0)};
    for (double b : g.tau_breaks) {
        if (b > right.front() && b < top) right.push_back(b);
        if (b < left.back() && b > -top) left.push_back(b);
    }
    std::sort(right.begin(), right.end());
    std::sort(left.begin(), left.end());
    const quad::Options opt{1e-10, 1e-8, 4000};
    double total = quad::integrate_breakpoints(mag, right, opt).value;
    total += quad::integrate_breakpoints(mag, left, opt).value;
    return total;
}

double measured_sup(const TestFunction& g, int n) {
    double m = 0.0;
    for (double x : linspace(g.lo, g.hi, n)) m = std::max(m, std::abs(g.eval(x)));
    return m;
}

double measured_increment_sup(const TestFunction& g, double h, double from, const RealFn& Phi,
                              const CheckGrid& grid) {
    return increment_excess(g, h, from, Phi, grid, {}, nullptr);
}

double measured_lambda1(const TestFunction& f, double lambda2, double T, const CheckGrid& grid) {
    const double reach = 10.0 / T;
    double worst = std::numeric_limits<double>::infinity();
    for (double u : linspace(f.lo, f.hi, grid.base_points)) {
        const double fu = f.eval(u);
        if (!(fu > lambda2) || !(fu > 0.0)) continue;
        for (int j = 0; j < grid.increments; ++j) {
            const double v = reach * j / std::max(1, grid.increments - 1);
            if (u + v > f.hi) break;
            worst = std::min(worst, f.eval(u + v) / fu);
        }
    }
    return worst;
}

std::string to_string(LemmaStatus s) {
    switch (s) {
        case LemmaStatus::pass: return "pass";
        case LemmaStatus::fail: return "fail";
        case LemmaStatus::precondition_violated: return "precondition_violated";
    }
    return "fail";
}

namespace {

nlohmann::ordered_json report_json(const LemmaReport& r) {
    nlohmann::ordered_json j;
    j["lemma"] = r.lemma;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    j["grid"] = {{"lo", r.grid_lo}, {"hi", r.grid_hi}, {"n", r.grid_n}};
    j["lhs_max"] = r.lhs_max;
    j["rhs_min_margin"] = r.rhs_min_margin;
    j["pass"] = r.pass;
    j["status"] = to_string(r.status);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace

std::string to_json(const LemmaReport& r) { return report_json(r).dump(2); }

std::string to_json(const std::vector<LemmaReport>& rs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rs) arr.push_back(report_json(r));
    return arr.dump(2);
}

double lemf_case2_threshold() { return 4.0 / (5.0 * kPi - 4.0); }

LemfConstants lemf_constants(double l1, double l2, double l3, int which_case) {
    const double c = 5.0 * kPi - 4.0;
    if (!(l1 > 0.0)) throw DomainError("lemf: lambda1 must be positive");
    if (which_case == 1) return {5.0 / (2.0 * c * l1), std::max({l2, 4.0 * l3 / (c * l1), l3})};
    if (which_case == 2) {
        if (!(l1 > lemf_case2_threshold())) throw DomainError("lemf: case 2 needs lambda1 > 4/(5 pi - 4)");
        return {5.0 / (2.0 * c * l1 - 8.0), l2};
    }
    throw ArgumentError("lemf: case must be 1 or 2");
}

LemmaReport verify_lemf(const TestFunction& f, const LemmaParams& p, int which_case, const CheckGrid& grid) {
    LemmaReport r;
    r.lemma = "lemf";
    r.params = {{"T", p.T},
                {"lambda1", p.lambda1},
                {"lambda2", p.lambda2},
                {"lambda3", p.lambda3},
                {"case", static_cast<double>(which_case)}};
    r.grid_lo = f.lo;
    r.grid_hi = f.hi;
    r.grid_n = grid.n;
    if (!(p.T > 0.0) || !(p.lambda1 > 0.0)) return violated(r, "T and lambda1 must be positive");
    if (which_case == 2 && !(p.lambda1 > lemf_case2_threshold()))
        return violated(r, "case 2 needs lambda1 > 4/(5 pi - 4)");
    if (which_case != 1 && which_case != 2) throw ArgumentError("lemf: case must be 1 or 2");

    const double sup = measured_sup(f, grid.n);
    const double tol = tolerance(sup);
    auto cond_holds = [&](const RealFn& h, double lo, double hi) {
        const double reach = 10.0 / p.T;
        for (double u : linspace(lo, hi, grid.base_points)) {
            const double hu = h(u);
            if (!(hu > p.lambda2)) continue;
            for (int j = 0; j < grid.increments; ++j) {
                const double v = reach * j / std::max(1, grid.increments - 1);
                if (u + v > hi) break;
                if (h(u + v) < p.lambda1 * hu - tol) return false;
            }
        }
        return true;
    };
    if (!cond_holds(f.eval, f.lo, f.hi)) return violated(r, "f(u+v) >= lambda1 f(u) fails on the spot-check grid");
    if (which_case == 1) {
        for (double x : linspace(f.lo, f.hi, grid.n))
            if (f.eval(x) < -p.lambda3 - tol) return violated(r, "f >= -lambda3 fails");
    } else {
        const RealFn reflected = [&](double u) { return -f.eval(-u); };
        if (!cond_holds(reflected, -f.hi, -f.lo)) return violated(r, "reflected -f(-u) fails the increment condition");
    }
    const auto k = lemf_constants(p.lambda1, p.lambda2, p.lambda3, which_case);
    const double I = abs_fourier_integral(f, p.T);
    r.params.emplace_back("k1", k.k1);
    r.params.emplace_back("k2", k.k2);
    r.params.emplace_back("fourier_l1", I);
    r.lhs_max = sup;
    r.rhs_min_margin = k.k1 * I + k.k2 - sup;
    r.pass = r.rhs_min_margin >= 0.0;
    r.status = r.pass ? LemmaStatus::pass : LemmaStatus::fail;
    return r;
}

LemmaReport verify_ganelius_tenenbaum(const TestFunction& g, double T, double K, const CheckGrid& grid) {
    LemmaReport r;
    r.lemma = "ganelius_tenenbaum";
    r.params = {{"T", T}, {"K", K}};
    r.grid_lo = g.lo;
    r.grid_hi = g.hi;
    r.grid_n = grid.n;
    if (!(T > 0.0)) return violated(r, "T must be positive");
    const double sup = measured_sup(g, grid.n);
    const double excess = increment_excess(g, 1.0 / T, g.lo, {}, grid, [K](double) { return K; }, nullptr);
    if (excess > tolerance(sup)) return violated(r, "increment sup exceeds K on the spot-check grid");
    const double I = abs_fourier_integral(g, T);
    r.params.emplace_back("fourier_l1", I);
    r.lhs_max = sup;
    r.rhs_min_margin = 16.0 * K + 6.0 * I - sup;
    r.pass = r.rhs_min_margin >= 0.0;
    r.status = r.pass ? LemmaStatus::pass : LemmaStatus::fail;
    return r;
}

LemmaReport verify_ganelius_type(const TestFunction& g, double T, double a, const RealFn& Phi, const CheckGrid& grid) {
    LemmaReport r;
    r.lemma = "ganelius_type";
    r.params = {{"T", T}, {"a", a}, {"Phi0", phi_at(Phi, 0.0)}};
    if (!(T > 0.0) || !(a > 0.0)) return violated(r, "T and a must be positive");
    if (g.gap < T) return violated(r, "transform not declared to vanish on (-T, T)");
    const double P0 = phi_at(Phi, 0.0);
    const double x1 = 8.0 / T * std::sqrt(1.0 + P0 / a);
    const double x0 = 2.0 * x1;
    r.params.emplace_back("x0", x0);
    const double excess = increment_excess(g, 1.0 / T, x1, Phi, grid, [&](double x) { return a + phi_at(Phi, x); },
                                           nullptr);
    if (excess > tolerance(measured_sup(g, grid.n)))
        return violated(r, "increment bound fails for x >= x0/2 on the spot-check grid");
    const double c = 8.0 * std::sqrt(14.0 / 3.0);
    scan_conclusion(
        g, x0, [&](double x) { return c * std::sqrt((a + P0) * (a + phi_at(Phi, 0.5 * x))); }, grid, r);
    return r;
}

LemmaReport verify_tenenbaum_type(const TestFunction& g, double T, double b, const RealFn& Phi,
                                  const CheckGrid& grid) {
    LemmaReport r;
    r.lemma = "tenenbaum_type";
    r.params = {{"T", T}, {"b", b}, {"Phi0", phi_at(Phi, 0.0)}};
    if (!(T > 0.0) || !(b > 0.0)) return violated(r, "T and b must be positive");
    const double P0 = phi_at(Phi, 0.0);
    const double x0 = 16.0 / T * std::sqrt(1.0 + P0 / b);
    r.params.emplace_back("x0", x0);
    const double excess = increment_excess(g, 1.0 / T, 8.0 / T, Phi, grid,
                                           [&](double x) { return b + phi_at(Phi, x); }, nullptr);
    if (excess > tolerance(measured_sup(g, grid.n)))
        return violated(r, "increment bound fails for x >= 8/T on the spot-check grid");
    const double Q = abs_fourier_integral(g, T) / kPi;
    r.params.emplace_back("Q", Q);
    scan_conclusion(
        g, x0,
        [&](double x) {
            return 20.0 * (std::sqrt(P0 * phi_at(Phi, 0.5 * x)) + std::sqrt(P0 * (b + Q)) + b + Q);
        },
        grid, r);
    return r;
}

}  // namespace tk::lemmas
