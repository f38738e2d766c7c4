#include "tauberkit/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tauberkit/errors.hpp"

namespace tk::dirichlet {

namespace {

constexpr double kEulerTerms[6] = {
    1.0 / 6.0 / 2.0,                  // B2 / 2!
    -1.0 / 30.0 / 24.0,               // B4 / 4!
    1.0 / 42.0 / 720.0,               // B6 / 6!
    -1.0 / 30.0 / 40320.0,            // B8 / 8!
    5.0 / 66.0 / 3628800.0,           // B10 / 10!
    -691.0 / 2730.0 / 479001600.0,    // B12 / 12!
};

const std::vector<double>& log_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(1 << 16);
        for (std::size_t n = 1; n < t.size(); ++n) t[n] = std::log(static_cast<double>(n));
        return t;
    }();
    return table;
}

double log_n(std::int64_t n) {
    const auto& t = log_table();
    return n < static_cast<std::int64_t>(t.size()) ? t[static_cast<std::size_t>(n)] : std::log(static_cast<double>(n));
}

// n^{-s} with a cached log n.
cd npow(std::int64_t n, cd s) {
    const double l = log_n(n);
    const double mag = std::exp(-s.real() * l);
    const double ph = -s.imag() * l;
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

struct ZetaPair {
    cd z, dz;
};

ZetaPair zeta_pair(cd s, bool want_derivative) {
    if (!(s.real() > 0.0)) throw DomainError("zeta_em: requires Re s > 0");
    if (s == cd(1.0, 0.0)) throw PoleError("zeta_em: pole at s = 1");
    const auto N = std::max<std::int64_t>(20, static_cast<std::int64_t>(std::ceil(2.0 * std::abs(s.imag()))));
    cd z = 0.0, dz = 0.0;
    for (std::int64_t n = 1; n < N; ++n) {
        const cd p = npow(n, s);
        z += p;
        if (want_derivative) dz -= log_n(n) * p;
    }
    const double lN = log_n(N);
    const cd pN = npow(N, s);         // N^{-s}
    const cd head = pN * static_cast<double>(N) / (s - 1.0);  // N^{1-s}/(s-1)
    z += head + 0.5 * pN;
    if (want_derivative) dz += head * (-lN - 1.0 / (s - 1.0)) - 0.5 * lN * pN;

    cd P = s, dP = 1.0;  // rising product s(s+1)...(s+2k-2) and its derivative
    cd Npow = pN / static_cast<double>(N);  // N^{-s-1}
    const double invN2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
    for (int k = 0; k < 6; ++k) {
        z += kEulerTerms[k] * P * Npow;
        if (want_derivative) dz += kEulerTerms[k] * Npow * (dP - lN * P);
        for (int j = 0; j < 2; ++j) {
            const cd f = s + static_cast<double>(2 * k + 1 + j);
            dP = dP * f + P;
            P *= f;
        }
        Npow *= invN2;
    }
    return {z, dz};
}

cd neg_log_derivative(cd s) {
    const auto zp = zeta_pair(s, true);
    if (zp.z == cd(0.0, 0.0)) throw PoleError("zeta'/zeta: zero of zeta");
    return -zp.dz / zp.z;
}

cd parse_complex(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw ArgumentError("empty coefficient");
    if (t.back() != 'i') return {std::stod(t), 0.0};
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        const std::string im = (t.empty() || t == "+") ? "1" : (t == "-" ? "-1" : t);
        return {0.0, std::stod(im)};
    }
    std::string im = t.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {std::stod(t.substr(0, split)), std::stod(im)};
}

}  // namespace

struct CoefficientSeries::Data {
    SeriesKind kind = SeriesKind::custom;
    std::string label;
    std::int64_t n_max = 0;
    bool real = true;
    bool finite = false;  // a_n = 0 beyond n_max
    std::vector<double> re, im;          // a_n at index n (index 0 unused)
    std::vector<double> pre_re, pre_im;  // prefix sums
    std::function<cd(cd)> closed;
    std::function<double(double)> summ;
};

CoefficientSeries::CoefficientSeries(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

std::vector<std::string> catalog_names() {
    return {"von_mangoldt", "divisor", "unit", "cos_twisted_von_mangoldt"};
}

SeriesKind kind_from_name(const std::string& name) {
    if (name == "von_mangoldt") return SeriesKind::von_mangoldt;
    if (name == "divisor") return SeriesKind::divisor;
    if (name == "unit") return SeriesKind::unit;
    if (name == "cos_twisted_von_mangoldt") return SeriesKind::cos_twisted_von_mangoldt;
    throw ArgumentError("unknown catalog series '" + name + "'");
}

namespace {

void fill_prefix(std::vector<double>& pre, const std::vector<double>& a) {
    pre.assign(a.size(), 0.0);
    long double acc = 0.0L;
    for (std::size_t n = 1; n < a.size(); ++n) {
        acc += a[n];
        pre[n] = static_cast<double>(acc);
    }
}

}  // namespace

CoefficientSeries CoefficientSeries::catalog(const std::string& name, std::int64_t n_max) {
    if (n_max < 2) throw ArgumentError("catalog: n_max must be at least 2");
    auto d = std::make_shared<Data>();
    d->kind = kind_from_name(name);
    d->label = name;
    d->n_max = n_max;
    const auto N = static_cast<std::size_t>(n_max);
    d->re.assign(N + 1, 0.0);
    switch (d->kind) {
        case SeriesKind::unit:
            std::fill(d->re.begin() + 1, d->re.end(), 1.0);
            d->closed = [](cd s) { return zeta_em(s, 0); };
            break;
        case SeriesKind::divisor: {
            for (std::size_t i = 1; i <= N; ++i)
                for (std::size_t j = i; j <= N; j += i) d->re[j] += 1.0;
            d->closed = [](cd s) {
                const cd z = zeta_em(s, 0);
                return z * z;
            };
            break;
        }
        case SeriesKind::von_mangoldt:
        case SeriesKind::cos_twisted_von_mangoldt: {
            std::vector<bool> composite(N + 1, false);
            for (std::size_t p = 2; p <= N; ++p) {
                if (composite[p]) continue;
                for (std::size_t q = p * p; q <= N; q += p) composite[q] = true;
                const double lp = std::log(static_cast<double>(p));
                for (std::size_t pk = p; pk <= N; pk *= p) {
                    d->re[pk] = lp;
                    if (pk > N / p) break;
                }
            }
            if (d->kind == SeriesKind::von_mangoldt) {
                d->closed = [](cd s) { return neg_log_derivative(s); };
            } else {
                for (std::size_t n = 2; n <= N; ++n)
                    if (d->re[n] != 0.0) d->re[n] *= 2.0 * std::cos(std::log(static_cast<double>(n)));
                d->closed = [](cd s) {
                    const cd i(0.0, 1.0);
                    return neg_log_derivative(s + i) + neg_log_derivative(s - i);
                };
            }
            break;
        }
        default:
            throw ArgumentError("catalog: not a catalog kind");
    }
    fill_prefix(d->pre_re, d->re);
    return CoefficientSeries(std::move(d));
}

CoefficientSeries CoefficientSeries::from_coefficients(std::vector<cd> coeffs, const std::string& label,
                                                       std::function<cd(cd)> closed_form) {
    auto d = std::make_shared<Data>();
    d->kind = SeriesKind::custom;
    d->label = label;
    d->finite = true;
    d->n_max = static_cast<std::int64_t>(coeffs.size());
    d->re.assign(coeffs.size() + 1, 0.0);
    d->im.assign(coeffs.size() + 1, 0.0);
    for (std::size_t n = 1; n <= coeffs.size(); ++n) {
        d->re[n] = coeffs[n - 1].real();
        d->im[n] = coeffs[n - 1].imag();
        if (d->im[n] != 0.0) d->real = false;
    }
    fill_prefix(d->pre_re, d->re);
    if (d->real) {
        d->im.clear();
    } else {
        fill_prefix(d->pre_im, d->im);
    }
    d->closed = std::move(closed_form);
    return CoefficientSeries(std::move(d));
}

CoefficientSeries CoefficientSeries::from_file(const std::string& path, const std::string& label) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open series file '" + path + "'");
    std::vector<cd> coeffs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected 'n,a_n'");
        std::int64_t n = 0;
        cd a;
        try {
            n = std::stoll(line.substr(0, comma));
            a = parse_complex(line.substr(comma + 1));
        } catch (const std::logic_error&) {
            throw ArgumentError(path + ":" + std::to_string(lineno) + ": malformed entry");
        }
        if (n < 1) throw ArgumentError(path + ":" + std::to_string(lineno) + ": n must be >= 1");
        if (static_cast<std::size_t>(n) > coeffs.size()) coeffs.resize(static_cast<std::size_t>(n), 0.0);
        coeffs[static_cast<std::size_t>(n - 1)] = a;
    }
    return from_coefficients(std::move(coeffs), label.empty() ? path : label);
}

CoefficientSeries CoefficientSeries::synthetic(const std::string& label, std::function<cd(cd)> transform,
                                               std::function<double(double)> summatory, bool real) {
    auto d = std::make_shared<Data>();
    d->kind = SeriesKind::synthetic;
    d->label = label;
    d->real = real;
    d->closed = std::move(transform);
    d->summ = std::move(summatory);
    return CoefficientSeries(std::move(d));
}

CoefficientSeries CoefficientSeries::synthetic_power(int m) {
    if (m < 0) throw ArgumentError("synthetic_power: m must be >= 0");
    auto transform = [m](cd s) {
        if (m > 0 && s == cd(1.0, 0.0)) throw PoleError("synthetic_power: pole at s = 1");
        return s * std::pow(s - 1.0, -m);
    };
    std::function<double(double)> summ;
    if (m >= 1) {
        const double fact = std::tgamma(static_cast<double>(m));
        summ = [m, fact](double x) {
            if (x < 1.0) return 0.0;
            return x * std::pow(std::log(x), m - 1) / fact;
        };
    }
    return synthetic("synthetic_power_" + std::to_string(m), transform, summ);
}

SeriesKind CoefficientSeries::kind() const { return d_->kind; }
const std::string& CoefficientSeries::label() const { return d_->label; }
std::int64_t CoefficientSeries::n_max() const { return d_->n_max; }
bool CoefficientSeries::real_coefficients() const { return d_->real; }
bool CoefficientSeries::has_closed_form() const { return static_cast<bool>(d_->closed); }
bool CoefficientSeries::has_coefficients() const { return !d_->re.empty(); }
bool CoefficientSeries::has_summatory() const { return has_coefficients() || static_cast<bool>(d_->summ); }

cd CoefficientSeries::coefficient(std::int64_t n) const {
    if (!has_coefficients()) throw DomainError(d_->label + ": no coefficient table");
    if (n < 1) throw ArgumentError("coefficient index must be >= 1");
    if (n > d_->n_max) {
        if (d_->finite) return 0.0;
        throw ArgumentError(d_->label + ": n beyond sieve limit " + std::to_string(d_->n_max));
    }
    const auto i = static_cast<std::size_t>(n);
    return {d_->re[i], d_->im.empty() ? 0.0 : d_->im[i]};
}

double CoefficientSeries::summatory(double x) const {
    if (!has_coefficients()) {
        if (d_->summ) return d_->summ(x);
        throw DomainError(d_->label + ": no summatory function");
    }
    if (x < 1.0) return 0.0;
    const double fx = std::floor(x);
    if (fx > static_cast<double>(d_->n_max)) {
        if (d_->finite) return d_->pre_re.back();
        throw ArgumentError(d_->label + ": x beyond sieve limit " + std::to_string(d_->n_max));
    }
    return d_->pre_re[static_cast<std::size_t>(fx)];
}

cd CoefficientSeries::summatory_complex(double x) const {
    const double re = summatory(x);
    if (d_->pre_im.empty() || x < 1.0) return re;
    const double fx = std::min(std::floor(x), static_cast<double>(d_->n_max));
    return {re, d_->pre_im[static_cast<std::size_t>(fx)]};
}

cd CoefficientSeries::closed_form(cd s) const {
    if (!d_->closed) throw DomainError(d_->label + ": no closed-form transform");
    if (!(s.real() > 0.0)) throw DomainError("closed-form transform requires Re s > 0");
    return d_->closed(s);
}

TransformValue CoefficientSeries::truncated(cd s) const {
    if (!has_coefficients()) throw DomainError(d_->label + ": no coefficient table");
    const double sig = s.real();
    if (sig < 1.5) throw PrecisionError("truncated sum requires Re s >= 1.5", 0.0);
    cd sum = 0.0;
    for (std::int64_t n = 1; n <= d_->n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const double ar = d_->re[i];
        const double ai = d_->im.empty() ? 0.0 : d_->im[i];
        if (ar == 0.0 && ai == 0.0) continue;
        sum += cd(ar, ai) * npow(n, s);
    }
    // Abel summation against a majorant of |A|: sum_{n>N} |a_n| n^{-sig} <= sig int_N^inf M(t) t^{-sig-1} dt.
    const double N = static_cast<double>(d_->n_max);
    const double lN = std::log(N);
    const double base = sig * std::pow(N, 1.0 - sig);
    double tail = 0.0;
    switch (d_->kind) {
        case SeriesKind::unit: tail = base / (sig - 1.0); break;                       // M(t) = t
        case SeriesKind::von_mangoldt: tail = 1.04 * base / (sig - 1.0); break;        // psi(t) < 1.04 t
        case SeriesKind::cos_twisted_von_mangoldt: tail = 2.08 * base / (sig - 1.0); break;
        case SeriesKind::divisor:                                                        // D(t) <= t(log t + 1)
            tail = base * ((lN + 1.0) / (sig - 1.0) + 1.0 / ((sig - 1.0) * (sig - 1.0)));
            break;
        default: tail = 0.0; break;  // finite coefficient list
    }
    return {sum, tail};
}

SummatoryFunction SummatoryFunction::from_series(const CoefficientSeries& series) {
    SummatoryFunction out;
    out.f_ = [series](double x) { return series.summatory(x); };
    out.start_ = 1.0;
    return out;
}

SummatoryFunction SummatoryFunction::from_function(std::function<double(double)> f, double support_start) {
    if (support_start < 0.0) throw ArgumentError("support start must be >= 0");
    SummatoryFunction out;
    out.f_ = std::move(f);
    out.start_ = support_start;
    return out;
}

double SummatoryFunction::operator()(double x) const {
    if (x < start_) return 0.0;
    return f_(x);
}

double summatory_eval(const SummatoryFunction& A, double x) { return A(x); }

TransformValue mellin_stieltjes(const CoefficientSeries& series, cd s, TransformMode mode) {
    if (mode == TransformMode::truncated_sum) return series.truncated(s);
    return {series.closed_form(s), 0.0};
}

cd zeta_em(cd s, int derivative_order) {
    if (derivative_order != 0 && derivative_order != 1) throw ArgumentError("zeta_em: order must be 0 or 1");
    const auto zp = zeta_pair(s, derivative_order == 1);
    return derivative_order == 0 ? zp.z : zp.dz;
}

cd zeta_log_derivative(cd s) { return -neg_log_derivative(s); }

double h_sigma(const SummatoryFunction& A, const ExpScaleQuery& q) {
    if (!(q.sigma > 0.0 && q.sigma < 1.0)) throw DomainError("h_sigma: sigma must lie in (0,1)");
    const double x = std::exp(q.t);
    const double a = A(x);
    if (a == 0.0) return 0.0;
    return std::exp(-(1.0 + q.sigma) * q.t) * a;
}

double g_sigma(const SummatoryFunction& A, const ExpScaleQuery& q) {
    const double h = h_sigma(A, q);
    return h * -std::expm1(-q.sigma * q.t);
}

cd fourier_h_sigma(const CoefficientSeries& series, double sigma, double tau) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("fourier_h_sigma: sigma must lie in (0,1)");
    const cd s(1.0 + sigma, tau);
    return series.closed_form(s) / s;
}

}  // namespace tk::dirichlet
