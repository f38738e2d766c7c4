#include "tauberkit/decrease.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "tauberkit/errors.hpp"

namespace tk::decrease {

namespace {

double window_end(const SampleGrid& g, double x, double lambda) {
    return g.log_coordinates ? x + std::log(lambda) : lambda * x;
}

std::vector<double> evaluate(const RealFn& f, const SampleGrid& g) {
    std::vector<double> fs(g.points.size());
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i] = f(g.points[i]);
    return fs;
}

std::size_t first_at_least(const SampleGrid& g, double lo) {
    return static_cast<std::size_t>(std::lower_bound(g.points.begin(), g.points.end(), lo) - g.points.begin());
}

// drop[i - start] = f(x_i) - min f over the window of x_i, for i >= start.
std::vector<double> window_drops(const RealFn& f, const SampleGrid& g, const std::vector<double>& fs,
                                 std::size_t start, double lambda) {
    if (!(lambda >= 1.0)) throw ArgumentError("decrease: lambda must be >= 1");
    const auto& xs = g.points;
    const std::size_t n = xs.size();
    std::vector<double> drops;
    drops.reserve(n - std::min(n, start));
    std::deque<std::size_t> dq;  // indices with increasing f
    std::size_t r = start;       // next index to enter the window
    for (std::size_t i = start; i < n; ++i) {
        const double hi = window_end(g, xs[i], lambda);
        while (r < n && xs[r] <= hi) {
            while (!dq.empty() && fs[dq.back()] >= fs[r]) dq.pop_back();
            dq.push_back(r++);
        }
        while (!dq.empty() && dq.front() < i) dq.pop_front();
        double lo = dq.empty() ? fs[i] : fs[dq.front()];
        for (int j = 1; j <= g.pair_subsamples; ++j)
            lo = std::min(lo, f(xs[i] + (hi - xs[i]) * j / g.pair_subsamples));
        drops.push_back(std::max(0.0, fs[i] - lo));
    }
    return drops;
}

double max_or_zero(const std::vector<double>& v, std::size_t from = 0) {
    double m = 0.0;
    for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, v[i]);
    return m;
}

void require_grid(const SampleGrid& g) {
    if (g.points.empty()) throw ArgumentError("decrease: empty grid");
}

}  // namespace

SampleGrid geometric_grid(double a, double b, double ratio, const std::vector<double>& extra) {
    if (!(a > 0.0) || !(b >= a) || !(ratio > 1.0)) throw ArgumentError("geometric_grid: need 0 < a <= b, ratio > 1");
    SampleGrid g;
    const double step = std::log(ratio);
    const auto count = static_cast<std::size_t>(std::ceil(std::log(b / a) / step));
    g.points.reserve(count + extra.size() + 1);
    for (std::size_t i = 0; i < count; ++i) g.points.push_back(a * std::exp(step * static_cast<double>(i)));
    g.points.push_back(b);
    for (double e : extra)
        if (e >= a && e <= b) g.points.push_back(e);
    std::sort(g.points.begin(), g.points.end());
    g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());
    return g;
}

SampleGrid log_grid(double u0, double u1, double ratio, int pair_subsamples) {
    SampleGrid g = geometric_grid(u0, u1, ratio);
    g.pair_subsamples = pair_subsamples;
    g.log_coordinates = true;
    return g;
}

std::vector<double> doubled_extents(double first_end, int count) {
    if (!(first_end > std::numbers::e)) throw ArgumentError("doubled_extents: first end must exceed e");
    std::vector<double> out{first_end};
    double L = std::log(first_end);
    for (int k = 1; k < count; ++k) {
        L *= L;
        if (L > 709.0) throw ArgumentError("doubled_extents: extent overflows double range");
        out.push_back(std::exp(L));
    }
    return out;
}

double estimate_nu_bar(const RealFn& f, double a, double lambda, const SampleGrid& grid) {
    require_grid(grid);
    const auto fs = evaluate(f, grid);
    const std::size_t start = first_at_least(grid, a);
    if (start == grid.points.size()) throw ArgumentError("estimate_nu_bar: no grid point >= a");
    return max_or_zero(window_drops(f, grid, fs, start, lambda));
}

NuEstimate estimate_nu(const RealFn& f, double a, double lambda, double z_cutoff, const SampleGrid& grid) {
    require_grid(grid);
    if (z_cutoff < a) throw ArgumentError("estimate_nu: z_cutoff must be >= a");
    const std::size_t start = first_at_least(grid, z_cutoff);
    if (start == grid.points.size()) throw ArgumentError("estimate_nu: no grid point beyond z_cutoff");
    const auto fs = evaluate(f, grid);
    return {max_or_zero(window_drops(f, grid, fs, start, lambda)), z_cutoff};
}

DivergenceCheck divergence_check(const RealFn& f, double a, double lambda, double z_cutoff,
                                 const std::vector<double>& extents, const GridFactory& make_grid) {
    if (extents.size() < 2 || !make_grid) throw ArgumentError("divergence_check: need >= 2 extents and a grid factory");
    DivergenceCheck out;
    out.extents = extents;
    for (double X : extents) out.estimates.push_back(estimate_nu(f, a, lambda, z_cutoff, make_grid(X)).value);
    out.divergent = out.estimates.front() > 0.0;
    for (std::size_t k = 1; k < out.estimates.size(); ++k)
        out.divergent = out.divergent && out.estimates[k] >= 2.0 * out.estimates[k - 1];
    return out;
}

DecreaseProfile compute_profile(const RealFn& f, double a, const std::vector<double>& lambdas, double z_cutoff,
                                const SampleGrid& grid, const std::vector<double>& divergence_extents,
                                const GridFactory& make_grid) {
    require_grid(grid);
    if (z_cutoff < a) throw ArgumentError("compute_profile: z_cutoff must be >= a");
    const std::size_t start = first_at_least(grid, a);
    const std::size_t zstart = first_at_least(grid, z_cutoff);
    if (zstart == grid.points.size()) throw ArgumentError("compute_profile: no grid point beyond z_cutoff");
    const auto fs = evaluate(f, grid);
    DecreaseProfile p;
    p.a = a;
    for (double lambda : lambdas) {
        const auto drops = window_drops(f, grid, fs, start, lambda);
        ProfileRow row{lambda, max_or_zero(drops), max_or_zero(drops, zstart - start), z_cutoff, false};
        if (!divergence_extents.empty())
            row.divergence_flag = divergence_check(f, a, lambda, z_cutoff, divergence_extents, make_grid).divergent;
        p.rows.push_back(row);
    }
    return p;
}

std::string profile_csv(const DecreaseProfile& p) {
    std::ostringstream os;
    os << std::setprecision(15) << "lambda,nu_bar_est,nu_est,z_cutoff,divergence_flag\n";
    for (const auto& r : p.rows)
        os << r.lambda << ',' << r.nu_bar_est << ',' << r.nu_est << ',' << r.z_cutoff << ','
           << (r.divergence_flag ? 1 : 0) << '\n';
    return os.str();
}

std::vector<double> default_lambda_grid() {
    return {1.001, 1.002, 1.005, 1.01, 1.02, 1.05, 1.1, 1.2, 1.5, 2.0};
}

std::string to_string(DecreaseClass c) {
    switch (c) {
        case DecreaseClass::boundedly: return "boundedly";
        case DecreaseClass::slowly: return "slowly";
        case DecreaseClass::very_slowly: return "very_slowly";
        case DecreaseClass::none_detected: return "none_detected";
    }
    return "unknown";
}

DecreaseClass classify_decrease(const RealFn& f, double a, const DecreaseProfile& profile, const SampleGrid& grid,
                                const ClassifyThresholds& th) {
    if (profile.rows.empty()) return DecreaseClass::none_detected;
    for (const auto& r : profile.rows)
        if (r.divergence_flag) return DecreaseClass::none_detected;

    const ProfileRow* lo = nullptr;
    const ProfileRow* hi = nullptr;
    for (const auto& r : profile.rows) {
        if (r.lambda <= 1.0) continue;
        if (!lo || r.lambda < lo->lambda) lo = &r;
        if (!hi || r.lambda > hi->lambda) hi = &r;
    }
    if (!lo) return DecreaseClass::very_slowly;  // only lambda = 1, where nu vanishes

    // Tail-decay test for "nu = 0": compare the tail sup of the decrement near the start and end.
    bool very_slow = !grid.points.empty();
    if (very_slow) {
        const auto fs = evaluate(f, grid);
        const double first = grid.log_coordinates ? std::max(a, 1.0) : std::max(a, std::numbers::e);
        const double span = 2.0 * std::log(hi->lambda);
        const double last = grid.log_coordinates ? grid.points.back() - span : grid.points.back() / std::exp(span);
        const std::size_t s0 = first_at_least(grid, first);
        const std::size_t s1 = first_at_least(grid, std::max(first, last));
        for (const auto& r : profile.rows) {
            if (r.lambda <= 1.0 || !very_slow) continue;
            const auto drops = window_drops(f, grid, fs, s0, r.lambda);
            const double d_first = max_or_zero(drops);
            const double d_last = max_or_zero(drops, s1 - s0);
            very_slow = d_first <= th.zero_tol || d_last <= th.decay_ratio * d_first;
        }
    }
    if (very_slow) return DecreaseClass::very_slowly;
    if (hi->nu_est <= th.zero_tol || lo->nu_est <= th.slow_ratio * hi->nu_est) return DecreaseClass::slowly;
    return DecreaseClass::boundedly;
}

ModerateReport check_moderate(const RealFn& F, const ModerateDecreaseParams& params, const std::vector<UV>& pairs) {
    ModerateReport rep{{}, std::numeric_limits<double>::infinity()};
    for (const auto& p : pairs) {
        const double phi = params.phi ? params.phi(p.u) : 0.0;
        const double margin = F(p.u + p.v) - F(p.u) + params.B1 * p.v + params.B2 * std::max(1.0, p.u) * phi;
        rep.min_margin = std::min(rep.min_margin, margin);
        if (margin < 0.0) rep.violations.push_back(p);
    }
    return rep;
}

LowerBoundReport lower_bound_check_minF(const RealFn& F, double a, double B1, double B2, const SampleGrid& grid) {
    require_grid(grid);
    LowerBoundReport rep{true, std::numeric_limits<double>::infinity(), 0.0};
    for (double x : grid.points) {
        if (x < a) continue;
        const double margin = F(x) + B1 * (x - a) + B2 * std::max(a, 1.0);
        if (margin < rep.min_margin) rep.min_margin = margin, rep.worst_x = x;
    }
    rep.holds = rep.min_margin >= 0.0;
    return rep;
}

LowerBoundReport lower_bound_check(const RealFn& F, double a, double M_or_B, LowerBoundForm form,
                                   const SampleGrid& grid) {
    if (form == LowerBoundForm::minF) return lower_bound_check_minF(F, a, M_or_B, M_or_B, grid);
    require_grid(grid);
    LowerBoundReport rep{true, std::numeric_limits<double>::infinity(), 0.0};
    for (double y : grid.points) {
        if (y < a) continue;
        const double margin = F(y) + M_or_B * y * (1.0 + std::log(y) - std::log(a));
        if (margin < rep.min_margin) rep.min_margin = margin, rep.worst_x = y;
    }
    rep.holds = rep.min_margin >= 0.0;
    return rep;
}

double minslowdec_constant(const RealFn& F, double a, const SampleGrid& grid) {
    auto f = [&F](double x) { return F(x) / x; };
    return estimate_nu_bar(f, a, std::numbers::e, grid) + std::max(0.0, -F(a)) / a;
}

std::vector<TransferRow> divide_by_ell_transfer(const RealFn& q, const RealFn& ell, const RealFn& ell_prime, double a,
                                                double C, const std::vector<double>& lambdas,
                                                const SampleGrid& grid) {
    require_grid(grid);
    if (grid.log_coordinates) throw ArgumentError("divide_by_ell_transfer: needs a grid in x");
    const std::size_t start = first_at_least(grid, a);
    if (start == grid.points.size()) throw ArgumentError("divide_by_ell_transfer: no grid point >= a");

    double prev_ell = 0.0, prev_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = start; i < grid.points.size(); ++i) {
        const double x = grid.points[i];
        const double l = ell(x), lp = ell_prime(x);
        if (!(l > 0.0)) throw ArgumentError("divide_by_ell_transfer: ell not positive at x=" + std::to_string(x));
        if (l < prev_ell * (1.0 - 1e-12))
            throw ArgumentError("divide_by_ell_transfer: ell not nondecreasing at x=" + std::to_string(x));
        const double ratio = lp / l;
        if (ratio > prev_ratio * (1.0 + 1e-12) + 1e-300)
            throw ArgumentError("divide_by_ell_transfer: ell'/ell not nonincreasing at x=" + std::to_string(x));
        if (std::abs(q(x)) * x * lp / (l * l) > C * (1.0 + 1e-12) + 1e-300)
            throw ArgumentError("divide_by_ell_transfer: |q| x ell'/ell^2 exceeds C at x=" + std::to_string(x));
        prev_ell = l;
        prev_ratio = ratio;
    }

    auto quotient = [&](double x) { return q(x) / ell(x); };
    const auto fq = evaluate(q, grid);
    const auto fql = evaluate(quotient, grid);
    const double ell_a = ell(a);
    std::vector<TransferRow> rows;
    for (double lambda : lambdas) {
        const double lhs = max_or_zero(window_drops(quotient, grid, fql, start, lambda));
        const double rhs = max_or_zero(window_drops(q, grid, fq, start, lambda)) / ell_a + C * (lambda - 1.0);
        rows.push_back({lambda, lhs, rhs, rhs - lhs});
    }
    return rows;
}

double omega_loglog(double x) { return std::log(std::log(std::max(x, 16.0))); }

Cor23 construct_cor23(const RealFn& omega, double x_max, double ratio) {
    if (!(x_max > std::numbers::e) || x_max > std::exp(709.0))
        throw ArgumentError("construct_cor23: x_max must lie in (e, e^709]");
    struct Tables {
        std::vector<double> xs, s0;  // running infimum of omega from the right
        std::vector<double> en, s_en;
        RealFn omega;
        double x_max;
    };
    auto t = std::make_shared<Tables>();
    t->omega = omega;
    t->x_max = x_max;
    const int nmax = static_cast<int>(std::ceil(std::log(x_max))) + 1;
    for (int n = 0; n <= nmax; ++n) t->en.push_back(std::exp(static_cast<double>(n)));
    t->xs = geometric_grid(1.0, x_max, ratio, t->en).points;
    t->s0.resize(t->xs.size());
    double run = std::numeric_limits<double>::infinity();
    for (std::size_t i = t->xs.size(); i-- > 0;) t->s0[i] = run = std::min(run, omega(t->xs[i]));

    auto s0_at = [t](double x) {
        const auto it = std::upper_bound(t->xs.begin(), t->xs.end(), x);
        const double w = t->omega(x);
        return it == t->xs.end() ? w : std::min(w, t->s0[static_cast<std::size_t>(it - t->xs.begin())]);
    };
    t->s_en.push_back(0.0);
    for (int n = 1; n <= nmax; ++n) t->s_en.push_back(std::min(s0_at(t->en[n]), t->s_en[n - 1] + 1.0));

    auto s = [t, s0_at](double x) {
        if (x < 1.0 || x > t->x_max) throw ArgumentError("cor23: x outside [1, x_max]");
        if (x == 1.0) return 0.0;
        // block n with x in (e^n, e^{n+1}]
        const auto n = static_cast<std::size_t>(std::lower_bound(t->en.begin(), t->en.end(), x) - t->en.begin()) - 1;
        return std::min(s0_at(x), t->s_en[n] + 1.0);
    };
    auto q = [t, s](double x) {
        const auto k = static_cast<std::size_t>(std::upper_bound(t->en.begin(), t->en.end(), x) - t->en.begin()) - 1;
        return t->en[k] * s(x);
    };
    return {s, q, [q](double x) { return q(x) / x; }};
}

std::int64_t diagonal_m(std::int64_t n) {
    if (n < 0) throw ArgumentError("diagonal_m: negative index");
    auto k = static_cast<std::int64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(n))) / 2.0);
    while (k * (k - 1) / 2 > n) --k;
    while ((k + 1) * k / 2 <= n) ++k;
    return 2 + n - k * (k - 1) / 2;
}

namespace {

template <class R>
R prop25_value(const MSeq& m_seq, R x) {
    if (!(x >= R(1))) throw DomainError("prop25: f is defined on [1, inf)");
    int e = 0;
    (void)std::frexp(x, &e);
    const int n = e - 1;  // 2^n <= x < 2^{n+1}
    const std::int64_t m = m_seq(n);
    if (m < 2) throw ArgumentError("prop25: m_n < 2 at n=" + std::to_string(n));
    const R base = std::ldexp(R(1), n);
    const R md = static_cast<R>(m);
    if (x < base * (md + 1) / md) return -std::sqrt(md) / base * (x - base);
    return R(-1) / std::sqrt(md);
}

}  // namespace

Prop25 construct_prop25(MSeq m_seq) {
    if (!m_seq) throw ArgumentError("construct_prop25: empty sequence");
    for (std::int64_t n = 0; n < 4096; ++n)
        if (m_seq(n) < 2) throw ArgumentError("construct_prop25: m_n < 2 at n=" + std::to_string(n));
    Prop25 p;
    p.m = m_seq;
    p.f = [m_seq](double x) { return prop25_value<double>(m_seq, x); };
    p.F = [m_seq](double x) { return x * prop25_value<double>(m_seq, x); };
    p.f_ld = [m_seq](long double x) { return prop25_value<long double>(m_seq, x); };
    p.F_ld = [m_seq](long double x) { return x * prop25_value<long double>(m_seq, x); };
    return p;
}

std::vector<double> Prop25::breakpoints(int n_max) const {
    std::vector<double> out;
    for (int n = 0; n <= n_max; ++n) {
        const double base = std::ldexp(1.0, n);
        const auto md = static_cast<double>(m(n));
        out.push_back(base);
        out.push_back(base * (md + 1.0) / md);
    }
    return out;
}

std::vector<WitnessRow> prop25_witness(const Prop25& p, std::int64_t N, double C, int count,
                                       std::int64_t search_limit) {
    if (N < 2) throw ArgumentError("prop25_witness: N must be >= 2");
    if (!(C < std::sqrt(static_cast<double>(N)) / 2.0))
        throw ArgumentError("prop25_witness: need C < sqrt(N)/2");
    std::vector<WitnessRow> rows;
    for (std::int64_t n = 0; n < search_limit && static_cast<int>(rows.size()) < count; ++n) {
        if (p.m(n) != N) continue;
        if (n > 16000) throw ArgumentError("prop25_witness: 2^n exceeds long double range");
        const long double x = std::ldexp(1.0L, static_cast<int>(n));
        const long double y = x / static_cast<long double>(N);
        const long double margin = p.F_ld(x + y) - p.F_ld(x) + static_cast<long double>(C) * y;
        rows.push_back({n, x, y, margin, -x / (2.0L * std::sqrt(static_cast<long double>(N)))});
    }
    if (rows.empty()) throw ArgumentError("prop25_witness: N not found in m_seq below search limit");
    return rows;
}

}  // namespace tk::decrease
