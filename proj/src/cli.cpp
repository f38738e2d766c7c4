#include "tauberkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tauberkit/decrease.hpp"
#include "tauberkit/dirichlet.hpp"
#include "tauberkit/errors.hpp"
#include "tauberkit/lemmas.hpp"

namespace tk::cli {

using json = nlohmann::json;
using tauber::SingularStructure;
using cd = std::complex<double>;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kEulerGamma = 0.57721566490153286;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

// Path-aware accessors.
std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const json& need(const json& j, const std::string& key, const std::string& base) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(join(base, key), "missing field");
    return j.at(key);
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

double num_or(const json& j, const std::string& key, double dflt, const std::string& base) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    return num(j.at(key), join(base, key));
}

int int_or(const json& j, const std::string& key, int dflt, const std::string& base) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(base, key), "expected an integer");
    return v.get<int>();
}

std::string str_or(const json& j, const std::string& key, const std::string& dflt, const std::string& base) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(join(base, key), "expected a string");
    return v.get<std::string>();
}

bool bool_or(const json& j, const std::string& key, bool dflt, const std::string& base) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError(join(base, key), "expected true or false");
    return v.get<bool>();
}

json parse_config(const std::string& text, const std::string& command) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    const int version = int_or(j, "schema_version", -1, "");
    if (version != kSchemaVersion)
        throw ConfigError("schema_version", "expected " + std::to_string(kSchemaVersion));
    const std::string cmd = str_or(j, "command", command, "");
    if (cmd != command) throw ConfigError("command", "config is for '" + cmd + "', not '" + command + "'");
    return j;
}

// Grid specs: {"values": [...]}, {"geometric": {from, to, count}} or {"exp_linear": {from, to, count}} (x = e^u).
std::vector<double> parse_grid(const json& g, const std::string& path) {
    std::vector<double> v;
    if (g.is_array()) {
        for (std::size_t i = 0; i < g.size(); ++i) v.push_back(num(g[i], path + "[" + std::to_string(i) + "]"));
    } else if (g.is_object() && g.contains("values")) {
        return parse_grid(g.at("values"), join(path, "values"));
    } else if (g.is_object() && (g.contains("geometric") || g.contains("exp_linear"))) {
        const bool geo = g.contains("geometric");
        const std::string sub = join(path, geo ? "geometric" : "exp_linear");
        const json& s = g.at(geo ? "geometric" : "exp_linear");
        const double from = num(need(s, "from", sub), join(sub, "from"));
        const double to = num(need(s, "to", sub), join(sub, "to"));
        const int count = int_or(s, "count", 0, sub);
        if (count < 1) throw ConfigError(join(sub, "count"), "must be at least 1");
        if (geo) {
            if (!(from > 0.0 && to >= from)) throw ConfigError(sub, "need 0 < from <= to");
            v = count == 1 ? std::vector<double>{from} : tauber::geometric_points(from, to, count);
        } else {
            if (!(to >= from)) throw ConfigError(sub, "need from <= to");
            for (int i = 0; i < count; ++i)
                v.push_back(std::exp(count == 1 ? from : from + (to - from) * i / (count - 1)));
        }
    } else {
        throw ConfigError(path, "expected values, geometric or exp_linear");
    }
    if (v.empty()) throw ConfigError(path, "grid is empty");
    return v;
}

dirichlet::CoefficientSeries parse_series(const json& j, const std::string& path, std::int64_t n_max_default) {
    auto from_name = [&](const std::string& name, std::int64_t n_max) {
        const auto names = dirichlet::catalog_names();
        if (std::find(names.begin(), names.end(), name) != names.end())
            return dirichlet::CoefficientSeries::catalog(name, n_max);
        if (std::filesystem::exists(name)) return dirichlet::CoefficientSeries::from_file(name);
        throw ConfigError(path, "unknown series '" + name + "' (not a catalog name or readable file)");
    };
    if (j.is_string()) return from_name(j.get<std::string>(), n_max_default);
    if (j.is_object()) {
        const auto n_max = static_cast<std::int64_t>(num_or(j, "n_max", static_cast<double>(n_max_default), path));
        if (j.contains("catalog")) return from_name(str_or(j, "catalog", "", path), n_max);
        if (j.contains("file")) return dirichlet::CoefficientSeries::from_file(str_or(j, "file", "", path));
        if (j.contains("synthetic_power")) {
            const int m = int_or(j, "synthetic_power", -1, path);
            if (m < 0) throw ConfigError(join(path, "synthetic_power"), "must be >= 0");
            return dirichlet::CoefficientSeries::synthetic_power(m);
        }
    }
    throw ConfigError(path, "expected a catalog name, a file path or {catalog|file|synthetic_power}");
}

std::string series_name(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.contains("catalog") && j.at("catalog").is_string()) return j.at("catalog").get<std::string>();
    return "";
}

SingularStructure parse_singular(const json& cfg, const dirichlet::CoefficientSeries& series) {
    if (!cfg.contains("singular")) throw ConfigError("singular", "missing field");
    const json& s = cfg.at("singular");
    if (s.is_string()) {
        const std::string v = s.get<std::string>();
        if (v == "none") return SingularStructure();
        if (v == "catalog") return catalog_singular(series_name(cfg.at("series")));
        throw ConfigError("singular", "expected \"none\", \"catalog\" or an object");
    }
    if (!s.is_object()) throw ConfigError("singular", "expected an object");
    const std::string label = str_or(s, "label", "", "singular");
    if (s.contains("laurent")) {
        const int m = int_or(s.at("laurent"), "order", 0, "singular.laurent");
        if (m < 1) throw ConfigError("singular.laurent.order", "must be at least 1");
        const double tol = num_or(s.at("laurent"), "tol", 1e-8, "singular.laurent");
        return tauber::structure_from_laurent(tauber::laurent_fit(series, m, tol), label);
    }
    const json& poles = need(s, "poles", "singular");
    if (!poles.is_array()) throw ConfigError("singular.poles", "expected an array");
    std::vector<tauber::Pole> out;
    for (std::size_t k = 0; k < poles.size(); ++k) {
        const std::string pk = "singular.poles[" + std::to_string(k) + "]";
        tauber::Pole p{num_or(poles[k], "b", 0.0, pk), {}};
        const json& terms = need(poles[k], "terms", pk);
        if (!terms.is_array()) throw ConfigError(join(pk, "terms"), "expected an array");
        for (std::size_t l = 0; l < terms.size(); ++l) {
            const std::string pl = join(pk, "terms[" + std::to_string(l) + "]");
            const double omega = num(need(terms[l], "omega", pl), join(pl, "omega"));
            cd c;
            if (terms[l].contains("two_re_c")) {
                c = 0.5 * num(terms[l].at("two_re_c"), join(pl, "two_re_c"));
            } else {
                const json& cj = need(terms[l], "c", pl);
                if (cj.is_number()) {
                    c = cj.get<double>();
                } else if (cj.is_array() && cj.size() == 2) {
                    c = cd(num(cj[0], join(pl, "c[0]")), num(cj[1], join(pl, "c[1]")));
                } else {
                    throw ConfigError(join(pl, "c"), "expected a number or [re, im]");
                }
            }
            p.terms.push_back({omega, c});
        }
        out.push_back(std::move(p));
    }
    try {
        return SingularStructure(std::move(out), label);
    } catch (const ArgumentError& e) {
        throw ConfigError("singular", e.what());
    } catch (const DomainError& e) {
        throw ConfigError("singular", e.what());
    }
}

quad::Options parse_tolerances(const json& cfg) {
    quad::Options o = tauber::eta_options();
    if (!cfg.contains("tolerances")) return o;
    const json& t = cfg.at("tolerances");
    o.abs_tol = num_or(t, "abs", o.abs_tol, "tolerances");
    o.rel_tol = num_or(t, "rel", o.rel_tol, "tolerances");
    o.max_intervals = int_or(t, "max_intervals", o.max_intervals, "tolerances");
    if (!(o.abs_tol > 0.0)) throw ConfigError("tolerances.abs", "must be positive");
    if (!(o.rel_tol > 0.0)) throw ConfigError("tolerances.rel", "must be positive");
    if (o.max_intervals < 1) throw ConfigError("tolerances.max_intervals", "must be positive");
    return o;
}

std::function<double(double)> parse_phi(const json& p, const std::string& path) {
    if (p.is_null()) return {};
    const std::string kind = str_or(p, "kind", "zero", path);
    if (kind == "zero") return {};
    if (kind == "power") {
        const double e = num(need(p, "exponent", path), join(path, "exponent"));
        if (!(e > 0.0)) throw ConfigError(join(path, "exponent"), "must be positive");
        return [e](double u) { return u <= 1.0 ? 1.0 : std::pow(u, -e); };
    }
    throw ConfigError(join(path, "kind"), "expected zero or power");
}

tauber::BoundParams parse_regime(const json& cfg) {
    tauber::BoundParams p;
    try {
        p.regime = tauber::regime_from_name(str_or(cfg, "regime", "increasing", ""));
    } catch (const ArgumentError& e) {
        throw ConfigError("regime", e.what());
    }
    if (p.regime == tauber::Regime::moderate) {
        const json& m = need(cfg, "moderate", "");
        p.moderate.B1 = num_or(m, "B1", 0.0, "moderate");
        p.moderate.B2 = num_or(m, "B2", 0.0, "moderate");
        p.moderate.A_minus_norm = num_or(m, "A_minus_norm", 0.0, "moderate");
        if (m.contains("phi")) p.moderate.phi = parse_phi(m.at("phi"), "moderate.phi");
        if (p.moderate.B1 < 0 || p.moderate.B2 < 0 || p.moderate.A_minus_norm < 0)
            throw ConfigError("moderate", "constants must be nonnegative");
    } else if (p.regime == tauber::Regime::slow) {
        const json& s = need(cfg, "slow", "");
        const double nu = num(need(s, "nu", "slow"), "slow.nu");
        const double nu_bar = num(need(s, "nu_bar", "slow"), "slow.nu_bar");
        const double Psi = num_or(s, "Psi", nu, "slow");
        p.slow.nu = [nu](double) { return nu; };
        p.slow.nu_bar = [nu_bar](double) { return nu_bar; };
        p.slow.Psi = [Psi](double, double) { return Psi; };
        p.slow.A_norm = num_or(s, "A_norm", 0.0, "slow");
        p.slow.A1_abs = num_or(s, "A1_abs", 0.0, "slow");
        p.slow.K = num_or(s, "K", 0.0, "slow");
        p.slow.simplified = bool_or(s, "simplified", false, "slow");
        if (nu < 0 || nu_bar < 0 || Psi < 0 || p.slow.A_norm < 0 || p.slow.A1_abs < 0 || p.slow.K < 0)
            throw ConfigError("slow", "constants must be nonnegative");
    }
    return p;
}

std::vector<double> parse_T_grid(const json& cfg, tauber::Regime r) {
    const json* g = nullptr;
    if (cfg.contains("grids") && cfg.at("grids").contains("T")) g = &cfg.at("grids").at("T");
    if (!g) return tauber::T_grid(tauber::default_T_min(r));
    if (g->is_array() || g->contains("values") || g->contains("geometric")) return parse_grid(*g, "grids.T");
    const double lo = num_or(*g, "T_min", tauber::default_T_min(r), "grids.T");
    const double hi = num_or(*g, "T_max", 1e4, "grids.T");
    const int per = int_or(*g, "per_decade", 16, "grids.T");
    if (!(lo > 0.0 && hi >= lo) || per < 1) throw ConfigError("grids.T", "need 0 < T_min <= T_max, per_decade >= 1");
    return tauber::T_grid(lo, hi, per);
}

const json& grid_field(const json& cfg, const std::string& key) {
    const json& g = need(cfg, "grids", "");
    return need(g, key, "grids");
}

std::string pick_format(const json& cfg, const RunOptions& opt) {
    std::string f = opt.format;
    if (f.empty() && cfg.contains("output") && cfg.at("output").contains("format"))
        f = str_or(cfg.at("output"), "format", "csv", "output");
    if (f.empty()) f = "csv";
    if (f != "csv" && f != "json" && f != "plot") throw ConfigError("output.format", "expected csv, json or plot");
    return f;
}

std::int64_t n_max_of(const json& cfg) {
    return static_cast<std::int64_t>(num_or(cfg, "n_max", 1e6, ""));
}

void emit(CommandResult& r, const std::string& name, const std::string& body, bool primary) {
    r.files.emplace_back(name, body);
    if (primary) r.stdout_text += body;
}

std::string plot_columns(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    os << "#";
    for (const auto& h : header) os << ' ' << h;
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << fmt(row[i]);
        os << '\n';
    }
    return os.str();
}

}  // namespace

std::vector<CatalogEntry> catalog_entries() {
    using tauber::Pole;
    const cd c_twist = 1.0 / cd(1.0, -1.0);
    return {
        {"von_mangoldt", "a_n = Lambda(n)", "-zeta'(s)/zeta(s)", tauber::real_pole_structure({{0.0, 1.0}}, "von_mangoldt"),
         "increasing-regime bound for psi(x) - x"},
        {"divisor", "a_n = d(n)", "zeta(s)^2",
         tauber::real_pole_structure({{1.0, 1.0}, {0.0, 2.0 * kEulerGamma - 1.0}}, "divisor"),
         "double pole: main term x log x + (2 gamma - 1) x"},
        {"unit", "a_n = 1", "zeta(s)", tauber::real_pole_structure({{0.0, 1.0}}, "unit"),
         "simple pole with an explicit floor-function residual"},
        {"cos_twisted_von_mangoldt", "a_n = 2 cos(log n) Lambda(n)", "-zeta'/zeta(s+i) - zeta'/zeta(s-i)",
         SingularStructure({Pole{0.0, {}}, Pole{1.0, {{0.0, c_twist}}}}, "cos_twisted_von_mangoldt"),
         "oscillatory boundary poles at 1 +- i; majorized by 2 Lambda(n)"},
    };
}

SingularStructure catalog_singular(const std::string& name) {
    for (const auto& e : catalog_entries())
        if (e.name == name) return e.singular;
    throw ConfigError("series", "no catalog singular structure for '" + name + "'");
}

std::string describe(const SingularStructure& s) {
    std::ostringstream os;
    bool first = true;
    for (const auto& p : s.poles()) {
        for (const auto& t : p.terms) {
            os << (first ? "" : "; ") << "{b=" << fmt(p.b) << ", omega=" << fmt(t.omega);
            if (p.b == 0.0)
                os << ", 2Re c=" << fmt(2.0 * t.c.real());
            else
                os << ", c=" << fmt(t.c.real()) << (t.c.imag() < 0 ? "-" : "+") << fmt(std::abs(t.c.imag())) << "i";
            os << "}";
            first = false;
        }
    }
    return first ? "{}" : os.str();
}

CommandResult cmd_catalog() {
    CommandResult r;
    std::ostringstream os;
    for (const auto& e : catalog_entries()) {
        std::vector<double> bs;
        for (const auto& p : e.singular.poles())
            if (p.b > 0.0) bs.push_back(p.b);
        os << e.name << "\n  coefficients: " << e.coefficients << "\n  transform: " << e.transform
           << "\n  poles: " << describe(e.singular) << "\n  nonzero ordinates b: {";
        for (std::size_t i = 0; i < bs.size(); ++i) os << (i ? ", " : "") << fmt(bs[i]);
        os << "}\n  exercises: " << e.exercises << "\n";
    }
    r.stdout_text = os.str();
    return r;
}

CommandResult cmd_bound(const std::string& config_json, const RunOptions& opt) {
    const json cfg = parse_config(config_json, "bound");
    const std::string format = pick_format(cfg, opt);
    const auto series = parse_series(need(cfg, "series", ""), "series", n_max_of(cfg));
    const auto xs = parse_grid(grid_field(cfg, "x"), "grids.x");
    tauber::VerifyOptions vo;
    vo.eta_opt = parse_tolerances(cfg);
    vo.threads = std::max(1, opt.threads);

    CommandResult r;
    std::vector<tauber::BoundReport> rows;
    SingularStructure singular;
    tauber::Regime regime = tauber::Regime::increasing;
    if (cfg.contains("majorized")) {
        const json& m = cfg.at("majorized");
        const auto b = parse_series(need(m, "majorant", "majorized"), "majorized.majorant", n_max_of(cfg));
        const double alpha = num(need(m, "alpha", "majorized"), "majorized.alpha");
        const double beta = num(need(m, "beta", "majorized"), "majorized.beta");
        vo.T_grid = parse_T_grid(cfg, tauber::Regime::moderate);
        rows = tauber::bound_majorized(series, b, alpha, beta, xs, vo).rows;
        singular = tauber::real_pole_structure({{0.0, alpha}}, "majorized");
    } else {
        singular = parse_singular(cfg, series);
        const auto params = parse_regime(cfg);
        regime = params.regime;
        vo.T_grid = parse_T_grid(cfg, params.regime);
        rows = tauber::verify_bound(series, singular, params, xs, vo);
    }

    bool failed = false;
    for (const auto& row : rows) failed = failed || (row.x0_check && !row.pass);
    if (format == "csv") emit(r, "bound.csv", tauber::bound_csv(rows), true);
    if (format == "json") emit(r, "bound.json", tauber::bound_json(series.label(), singular, regime, rows), true);
    if (format == "plot") {
        std::vector<std::vector<double>> pts;
        for (const auto& row : rows)
            if (row.x0_check) pts.push_back({row.x, row.rho, row.residual_ratio});
        emit(r, "bound.plot", plot_columns({"x", "rho", "residual_ratio"}, pts), true);
    }
    r.exit_code = failed ? exit_check_failed : exit_ok;
    return r;
}

CommandResult cmd_eta(const std::string& config_json, const RunOptions& opt) {
    const json cfg = parse_config(config_json, "eta");
    const std::string format = pick_format(cfg, opt);
    const auto series = parse_series(need(cfg, "series", ""), "series", n_max_of(cfg));
    const auto singular = parse_singular(cfg, series);
    const auto sigmas = parse_grid(grid_field(cfg, "sigma"), "grids.sigma");
    for (double s : sigmas)
        if (!(s > 0.0 && s < 1.0)) throw ConfigError("grids.sigma", "values must lie in (0, 1)");
    const double T = num_or(cfg, "T", 1.0, "");
    if (!(T > 0.0)) throw ConfigError("T", "must be positive");
    const auto curve = tauber::eta_curve(series, singular, T, sigmas, parse_tolerances(cfg));
    const auto po = tauber::estimate_pole_order(curve);

    CommandResult r;
    const std::string summary =
        "m_hat=" + std::to_string(po.m_hat) + " slope=" + fmt(po.slope) + " fit_quality=" + fmt(po.fit_quality) + "\n";
    if (format == "csv") {
        emit(r, "eta.csv", tauber::eta_curve_csv(curve), true);
        emit(r, "pole_order.txt", summary, true);
    } else if (format == "json") {
        nlohmann::ordered_json j{{"series", curve.series_label},
                                 {"singular", curve.singular_label},
                                 {"T", T},
                                 {"m_hat", po.m_hat},
                                 {"slope", po.slope},
                                 {"fit_quality", po.fit_quality},
                                 {"samples", nlohmann::ordered_json::array()}};
        for (const auto& s : curve.samples)
            j["samples"].push_back({{"sigma", s.sigma}, {"eta", s.eta}, {"quad_error", s.quad_error}});
        emit(r, "eta.json", j.dump(2) + "\n", true);
    } else {
        std::vector<std::vector<double>> pts;
        for (const auto& s : curve.samples) pts.push_back({s.sigma, s.eta});
        emit(r, "eta.plot", plot_columns({"sigma", "eta"}, pts), true);
        r.stdout_text += summary;
    }
    return r;
}

CommandResult cmd_decrease(const std::string& config_json, const RunOptions& opt) {
    using namespace tk::decrease;
    const json cfg = parse_config(config_json, "decrease");
    const std::string format = pick_format(cfg, opt);
    const json& d = need(cfg, "decrease", "");
    const std::string name = str_or(d, "construction", "", "decrease");
    const double ratio = num_or(d, "grid_ratio", 1.001, "decrease");
    const int subsamples = int_or(d, "pair_subsamples", 8, "decrease");
    if (!(ratio > 1.0)) throw ConfigError("decrease.grid_ratio", "must exceed 1");
    std::vector<double> lambdas = default_lambda_grid();
    if (cfg.contains("grids") && cfg.at("grids").contains("lambda"))
        lambdas = parse_grid(cfg.at("grids").at("lambda"), "grids.lambda");
    for (double l : lambdas)
        if (!(l >= 1.0)) throw ConfigError("grids.lambda", "values must be >= 1");

    CommandResult r;
    RealFn f;
    double a = num_or(d, "a", 1.0, "decrease");
    SampleGrid grid;
    double z = num_or(d, "z_cutoff", 0.0, "decrease");
    std::vector<double> extents;
    GridFactory factory;
    std::ostringstream extra;

    if (name == "prop25") {
        const int n_max = int_or(d, "extent_log2", 64, "decrease");
        auto p = construct_prop25();
        f = p.f;
        grid = geometric_grid(a, std::ldexp(1.0, n_max), ratio, p.breakpoints(n_max));
        grid.pair_subsamples = subsamples;
        if (z == 0.0) z = 1e3;
        const json w = d.contains("witness") ? d.at("witness") : json::object();
        const int N = int_or(w, "N", 64, "decrease.witness");
        const double C = num_or(w, "C", 0.5 * std::sqrt(static_cast<double>(N)) - 0.1, "decrease.witness");
        const auto rows = prop25_witness(p, N, C, int_or(w, "count", 3, "decrease.witness"));
        std::ostringstream os;
        os << std::setprecision(15) << "n,x,y,margin,bound\n";
        for (const auto& row : rows) os << row.n << ',' << row.x << ',' << row.y << ',' << row.margin << ',' << row.bound << '\n';
        r.files.emplace_back("witness.csv", os.str());
        extra << "witness:\n" << os.str();
    } else if (name == "cor23") {
        auto c = construct_cor23(omega_loglog, 1e300, ratio);
        f = c.q_over_x;
        a = std::max(a, 16.0);
        const double first = num_or(d, "first_extent", std::exp(std::exp(1.5)), "decrease");
        extents = doubled_extents(first, 3);
        factory = [ratio](double X) { return geometric_grid(16.0, X, ratio); };
        grid = factory(extents.front());
        if (z == 0.0) z = a;
    } else if (name == "nondecreasing") {
        f = [](double x) { return std::log(x); };
        grid = geometric_grid(a, num_or(d, "extent", 1e6, "decrease"), ratio);
        if (z == 0.0) z = a;
    } else if (name == "sin_log") {
        f = [](double x) { return std::sin(std::log(x)); };
        grid = geometric_grid(a, num_or(d, "extent", 1e8, "decrease"), ratio);
        grid.pair_subsamples = subsamples;
        if (z == 0.0) z = a;
    } else if (name == "neg_log_over_loglog") {
        f = [](double u) { return -u / std::log(u); };
        grid = log_grid(std::log(16.0), num_or(d, "log_extent", 1e12, "decrease"), 1.01, 16);
        a = std::log(16.0);
        if (z == 0.0) z = a;
    } else {
        throw ConfigError("decrease.construction",
                          "expected prop25, cor23, nondecreasing, sin_log or neg_log_over_loglog");
    }

    const auto profile = compute_profile(f, a, lambdas, z, grid, extents, factory);
    const auto label = classify_decrease(f, a, profile, grid);
    const std::string summary = "classification=" + to_string(label) + "\n";
    if (format == "csv") {
        emit(r, "profile.csv", profile_csv(profile), true);
    } else if (format == "json") {
        nlohmann::ordered_json j{{"construction", name}, {"a", a}, {"classification", to_string(label)}, {"rows", nlohmann::ordered_json::array()}};
        for (const auto& row : profile.rows)
            j["rows"].push_back({{"lambda", row.lambda},
                                 {"nu_bar_est", row.nu_bar_est},
                                 {"nu_est", row.nu_est},
                                 {"z_cutoff", row.z_cutoff},
                                 {"divergence_flag", row.divergence_flag}});
        emit(r, "profile.json", j.dump(2) + "\n", true);
    } else {
        std::vector<std::vector<double>> pts;
        for (const auto& row : profile.rows) pts.push_back({row.lambda, row.nu_bar_est, row.nu_est});
        emit(r, "profile.plot", plot_columns({"lambda", "nu_bar_est", "nu_est"}, pts), true);
    }
    r.files.emplace_back("classification.txt", summary);
    r.stdout_text += summary + extra.str();
    return r;
}

namespace {

using namespace tk::lemmas;

LemmaReport run_one(const std::string& lemma, const TestFunction& g, const json& s, const CheckGrid& grid) {
    const double T = num(need(s, "T", "lemma"), "lemma.T");
    if (!(T > 0.0)) throw ConfigError("lemma.T", "must be positive");
    const double Phi0 = num_or(s, "Phi0", 0.0, "lemma");
    RealFn Phi;
    if (Phi0 > 0.0) Phi = [Phi0](double x) { return Phi0 * std::exp(-std::abs(x)); };
    auto measured = [&](double from) {
        return std::max(1e-12, measured_increment_sup(g, 1.0 / T, from, Phi, grid));
    };
    if (lemma == "ganelius_tenenbaum") {
        const double K = s.contains("K") ? num(s.at("K"), "lemma.K") : std::max(0.0, measured_increment_sup(g, 1.0 / T, g.lo, {}, grid));
        return verify_ganelius_tenenbaum(g, T, K, grid);
    }
    if (lemma == "ganelius") {
        const double a = s.contains("a") ? num(s.at("a"), "lemma.a") : measured(g.lo);
        return verify_ganelius_type(g, T, a, Phi, grid);
    }
    if (lemma == "tenenbaum") {
        const double b = s.contains("b") ? num(s.at("b"), "lemma.b") : measured(g.lo);
        return verify_tenenbaum_type(g, T, b, Phi, grid);
    }
    if (lemma == "lemf") {
        LemmaParams p;
        p.T = T;
        p.lambda2 = num_or(s, "lambda2", 0.0, "lemma");
        p.lambda3 = num_or(s, "lambda3", 0.0, "lemma");
        p.lambda1 = s.contains("lambda1") ? num(s.at("lambda1"), "lemma.lambda1") : measured_lambda1(g, p.lambda2, T, grid);
        return verify_lemf(g, p, int_or(s, "case", 1, "lemma"), grid);
    }
    throw ConfigError("lemma.name", "expected lemf, ganelius_tenenbaum, ganelius or tenenbaum");
}

}  // namespace

CommandResult cmd_lemma(const std::string& config_json, const RunOptions& opt) {
    const json cfg = parse_config(config_json, "lemma");
    const std::string format = pick_format(cfg, opt);
    const json& s = need(cfg, "lemma", "");
    const std::string lemma = str_or(s, "name", "", "lemma");
    const std::string fn = str_or(s, "function", "zero", "lemma");
    CheckGrid grid;
    grid.n = int_or(s, "grid_n", grid.n, "lemma");
    grid.base_points = int_or(s, "base_points", grid.base_points, "lemma");
    grid.increments = int_or(s, "increments", grid.increments, "lemma");
    if (grid.n < 2 || grid.base_points < 2 || grid.increments < 1) throw ConfigError("lemma", "grid sizes too small");

    std::vector<TestFunction> fns;
    const double T = num(need(s, "T", "lemma"), "lemma.T");
    try {
        if (fn == "zero") {
            fns.push_back(zero_function());
        } else if (fn == "pulse") {
            fns.push_back(gaussian_pulse(num_or(s, "A", 1.0, "lemma"), num_or(s, "width", 0.5, "lemma"),
                                         num_or(s, "center", 0.0, "lemma")));
        } else if (fn == "fejer") {
            fns.push_back(fejer_bump(num_or(s, "A", 1.0, "lemma"), num_or(s, "W", 1.0, "lemma"),
                                     num_or(s, "center", 0.0, "lemma")));
        } else if (fn == "gapped") {
            const double W = num_or(s, "W", 0.5 * T, "lemma");
            fns.push_back(build_gapped(T, W, num_or(s, "carrier", T + W, "lemma"), num_or(s, "A", 1.0, "lemma"),
                                       num_or(s, "center", 0.0, "lemma"), num_or(s, "phase", 0.0, "lemma")));
        } else if (fn == "random_gapped") {
            std::mt19937_64 rng(opt.seed);
            std::uniform_real_distribution<double> U(0.0, 1.0);
            const int count = int_or(s, "count", 20, "lemma");
            for (int i = 0; i < count; ++i) {
                const double W = T * (0.1 + 0.8 * U(rng));
                const double carrier = T + W + 2.0 * T * U(rng);
                const double xc = (-5.0 + 25.0 * U(rng)) / T;
                fns.push_back(build_gapped(T, W, carrier, 1.0, xc, 2.0 * std::numbers::pi * U(rng)));
            }
        } else if (fn == "pipeline_g" || fn == "pipeline_L") {
            const auto series = parse_series(need(cfg, "series", ""), "series", n_max_of(cfg));
            const double sigma = num(need(s, "sigma", "lemma"), "lemma.sigma");
            if (fn == "pipeline_g")
                fns.push_back(pipeline_g_sigma(series, sigma));
            else
                fns.push_back(pipeline_L_sigma(series, parse_singular(cfg, series), sigma, bool_or(s, "negate", false, "lemma")));
        } else {
            throw ConfigError("lemma.function", "expected zero, pulse, fejer, gapped, random_gapped, pipeline_g or pipeline_L");
        }
    } catch (const ArgumentError& e) {
        throw ConfigError("lemma", e.what());
    }

    std::vector<LemmaReport> reports;
    for (const auto& g : fns) reports.push_back(run_one(lemma, g, s, grid));

    CommandResult r;
    bool failed = false;
    for (const auto& rep : reports) failed = failed || rep.status == LemmaStatus::fail;
    if (format == "csv") {
        std::ostringstream os;
        os << "lemma,function,status,lhs_max,rhs_min_margin\n";
        for (std::size_t i = 0; i < reports.size(); ++i)
            os << reports[i].lemma << ',' << fns[i].label << ',' << to_string(reports[i].status) << ','
               << fmt(reports[i].lhs_max) << ',' << fmt(reports[i].rhs_min_margin) << '\n';
        emit(r, "lemma.csv", os.str(), true);
    } else {
        emit(r, "lemma.json", to_json(reports) + "\n", true);
    }
    r.exit_code = failed ? exit_check_failed : exit_ok;
    return r;
}

CommandResult run_command(const std::string& name, const std::string& config_json, const RunOptions& opt) {
    CommandResult r;
    try {
        if (name == "catalog") return cmd_catalog();
        if (name == "bound") return cmd_bound(config_json, opt);
        if (name == "eta") return cmd_eta(config_json, opt);
        if (name == "decrease") return cmd_decrease(config_json, opt);
        if (name == "lemma") return cmd_lemma(config_json, opt);
        throw ConfigError("command", "unknown command '" + name + "'");
    } catch (const ConfigError& e) {
        r.exit_code = exit_config;
        r.stdout_text = std::string("config error: ") + e.what() + "\n";
    } catch (const ArgumentError& e) {
        r.exit_code = exit_config;
        r.stdout_text = std::string("config error: ") + e.what() + "\n";
    } catch (const DomainError& e) {
        r.exit_code = exit_config;
        r.stdout_text = std::string("config error: ") + e.what() + "\n";
    } catch (const PrecisionError& e) {
        r.exit_code = exit_precision;
        r.stdout_text = std::string("precision error: ") + e.what() + " (partial value " + fmt(e.partial_value()) + ")\n";
    }
    return r;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Effective Tauberian bounds toolkit"};
    app.require_subcommand(1);
    RunOptions opt;
    std::string config_path;
    app.add_option("--out", opt.out_dir, "Output directory");
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json", "plot"}));
    app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "Seed for randomized sweeps");
    for (const char* name : {"catalog", "bound", "eta", "decrease", "lemma"}) {
        auto* sub = app.add_subcommand(name);
        if (std::string(name) != "catalog") sub->add_option("--config", config_path, "JSON config")->required();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    std::string text;
    if (cmd != "catalog") {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "config error: cannot read " << config_path << "\n";
            return exit_config;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    const auto r = run_command(cmd, text, opt);
    if (opt.out_dir.empty() || cmd == "catalog" || r.exit_code == exit_config || r.exit_code == exit_precision) {
        (r.exit_code == exit_ok || r.exit_code == exit_check_failed ? std::cout : std::cerr) << r.stdout_text;
    } else {
        std::filesystem::create_directories(opt.out_dir);
        for (const auto& [file, body] : r.files) {
            std::ofstream out(std::filesystem::path(opt.out_dir) / file, std::ios::binary);
            out << body;
        }
        for (const auto& [file, body] : r.files) std::cout << "wrote " << (std::filesystem::path(opt.out_dir) / file).string() << "\n";
        if (cmd == "decrease") std::cout << r.stdout_text.substr(r.stdout_text.find("classification="));
    }
    return r.exit_code;
}

}  // namespace tk::cli
