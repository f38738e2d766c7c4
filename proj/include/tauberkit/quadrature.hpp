#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature with a combined
// absolute/relative stopping rule. Works for real- and complex-valued
// integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

namespace tk::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_intervals = 4000;
};

template <class V>
struct Result {
    V value{};
    double error = 0.0;
    int intervals = 0;
    bool converged = true;
};

namespace detail {

inline constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600783255208, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double mag(double v) { return std::abs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }

template <class V>
struct Panel {
    double a, b;
    V value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class V, class F>
Panel<V> gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V fc = f(c);
    V resk = fc * wgk[10];
    V resg{};
    double resabs = mag(fc) * wgk[10];
    V fv1[10], fv2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = h * xgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const V s = fv1[j] + fv2[j];
        resk += wgk[j] * s;
        resabs += wgk[j] * (mag(fv1[j]) + mag(fv2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * s;
    }
    const V mean = resk * 0.5;
    double resasc = wgk[10] * mag(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (mag(fv1[j] - mean) + mag(fv2[j] - mean));
    const double ah = std::abs(h);
    resasc *= ah;
    resabs *= ah;
    double err = mag((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk * h, err};
}

}  // namespace detail

/// Integrate f over [a, b]. Subdivides the panel with the largest error until
/// the summed error is below max(abs_tol, rel_tol*|I|) or the panel budget is spent.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
    using V = std::decay_t<decltype(f(0.0))>;
    Result<V> out;
    if (a == b) return out;
    std::priority_queue<detail::Panel<V>> heap;
    auto first = detail::gk21<V>(f, a, b);
    V total = first.value;
    double err = first.error;
    heap.push(first);
    int n = 1;
    const double eps = std::numeric_limits<double>::epsilon();
    while (err > std::max(opt.abs_tol, opt.rel_tol * detail::mag(total))) {
        if (n >= opt.max_intervals) {
            out.converged = false;
            break;
        }
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (std::abs(worst.b - worst.a) < 1e3 * eps * std::max(1.0, std::abs(mid))) {
            out.converged = false;
            break;
        }
        heap.pop();
        auto left = detail::gk21<V>(f, worst.a, mid);
        auto right = detail::gk21<V>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    // Re-sum to shed accumulated cancellation from incremental updates.
    V sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error = esum;
    out.intervals = n;
    if (esum <= std::max(opt.abs_tol, opt.rel_tol * detail::mag(sum))) out.converged = true;
    return out;
}

/// Integrate over consecutive panels [p0,p1], [p1,p2], ...; each panel gets an
/// equal share of the absolute tolerance.
template <class F>
auto integrate_breakpoints(F&& f, const std::vector<double>& points, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
    using V = std::decay_t<decltype(f(0.0))>;
    Result<V> out;
    if (points.size() < 2) return out;
    Options local = opt;
    local.abs_tol = opt.abs_tol / static_cast<double>(points.size() - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        auto r = integrate(f, points[i], points[i + 1], local);
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
        out.converged = out.converged && r.converged;
    }
    return out;
}

}  // namespace tk::quad
