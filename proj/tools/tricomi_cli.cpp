// Command-line front end over the tricomi C API.

#include "config.hpp"

#include <tricomi/tricomi.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using cli::Config;
using cli::ConfigError;
using cli::Key;
using cli::Kind;
using json = nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitCensored = 4;
constexpr int kExitReportGap = 5;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kSubcommands = {"specfun", "odecheck", "testfun", "exponents",
                                               "iterate", "simulate", "scan",    "report"};

struct ApiError : std::runtime_error {
    tricomi_status status;
    ApiError(tricomi_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(tricomi_status status, const char* what)
{
    if (status != TRICOMI_OK) {
        throw ApiError(status, std::string(what) + ": " + tricomi_last_error());
    }
}

int exit_code(tricomi_status status)
{
    switch (status) {
    case TRICOMI_ERR_CONFIG:
        return kExitConfig;
    case TRICOMI_ERR_DOMAIN:
    case TRICOMI_ERR_SCOPE:
        return kExitDomain;
    default:
        return kExitFailure;
    }
}

// ------------------------------------------------------------------ results

struct Cell {
    bool is_text = false;
    double num = 0.0;
    std::string text;

    Cell(double x) : num(x) {}
    Cell(int x) : num(x) {}
    Cell(long x) : num(static_cast<double>(x)) {}
    Cell(bool x) : is_text(true), text(x ? "true" : "false") {}
    Cell(const char* s) : is_text(true), text(s) {}
    Cell(std::string s) : is_text(true), text(std::move(s)) {}
};

std::string csv_cell(const Cell& c)
{
    return c.is_text ? c.text : cli::fmt12(c.num);
}

json json_number(double x)
{
    if (!std::isfinite(x)) {
        return nullptr;
    }
    const double r = std::strtod(cli::fmt12(x).c_str(), nullptr);
    if (r == std::trunc(r) && std::abs(r) < 1e15) {
        return static_cast<long long>(r);
    }
    return r;
}

json json_cell(const Cell& c)
{
    if (c.is_text) {
        if (c.text == "true" || c.text == "false") {
            return c.text == "true";
        }
        return c.text;
    }
    return json_number(c.num);
}

struct CheckResult {
    std::string key;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

struct Result {
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<CheckResult> checks;
    json extra = json::object(); // JSON-only detail

    void add(const std::string& key, Cell value) { meta.emplace_back(key, std::move(value)); }
    void check_le(const std::string& key, double value, double limit)
    {
        checks.push_back({key, value, limit, std::isfinite(value) && value <= limit});
    }
};

json config_json(const Config& cfg)
{
    json out = json::object();
    for (const auto& [k, v] : cfg.resolved()) {
        const Key* key = nullptr;
        for (const Key& s : cfg.schema()) {
            if (s.name == k) {
                key = &s;
            }
        }
        const bool word = std::find(key->words.begin(), key->words.end(), v) != key->words.end();
        if (word || key->kind == Kind::Text || key->kind == Kind::RealList) {
            out[k] = v;
        } else if (key->kind == Kind::Flag) {
            out[k] = (v == "true");
        } else if (key->kind == Kind::Integer) {
            out[k] = std::stol(v);
        } else {
            const double x = std::strtod(v.c_str(), nullptr);
            if (x == std::trunc(x) && std::abs(x) < 1e15) {
                out[k] = static_cast<long long>(x);
            } else {
                out[k] = x;
            }
        }
    }
    return out;
}

json checks_json(const std::vector<CheckResult>& checks)
{
    json out = json::object();
    for (const CheckResult& c : checks) {
        out[c.key] = json{{"value", json_number(c.value)}, {"limit", json_number(c.limit)}, {"pass", c.pass}};
    }
    return out;
}

std::string render_csv(const Config& cfg, const Result& res)
{
    std::ostringstream out;
    out << "# subcommand = " << cfg.section() << "\n";
    for (const auto& [k, v] : cfg.resolved()) {
        out << "# " << k << " = " << v << "\n";
    }
    std::vector<std::string> columns = res.columns;
    std::vector<std::vector<Cell>> rows = res.rows;
    if (columns.empty()) {
        columns = {"key", "value"};
        for (const auto& [k, v] : res.meta) {
            rows.push_back({Cell(k), v});
        }
    } else {
        for (const auto& [k, v] : res.meta) {
            out << "# result." << k << " = " << csv_cell(v) << "\n";
        }
    }
    for (const CheckResult& c : res.checks) {
        out << "# check." << c.key << " = " << cli::fmt12(c.value) << " limit " << cli::fmt12(c.limit)
            << (c.pass ? " pass" : " fail") << "\n";
    }
    for (size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_cell(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_json(const Config& cfg, const Result& res)
{
    json doc = json::object();
    doc["subcommand"] = cfg.section();
    doc["config"] = config_json(cfg);
    json results = json::object();
    for (const auto& [k, v] : res.meta) {
        results[k] = json_cell(v);
    }
    doc["results"] = results;
    doc["checks"] = checks_json(res.checks);
    for (const auto& [k, v] : res.extra.items()) {
        doc[k] = v;
    }
    if (!res.columns.empty()) {
        json rows = json::array();
        for (const auto& row : res.rows) {
            json r = json::object();
            for (size_t i = 0; i < res.columns.size() && i < row.size(); ++i) {
                r[res.columns[i]] = json_cell(row[i]);
            }
            rows.push_back(r);
        }
        doc["rows"] = rows;
    }
    return doc.dump(2) + "\n";
}

std::string resolve_path(const std::string& path)
{
    if (path.empty() || path == "-") {
        return "";
    }
    std::filesystem::path p(path);
    const char* dir = std::getenv("TRICOMI_OUTPUT_DIR");
    if (dir != nullptr && *dir != '\0' && p.is_relative()) {
        p = std::filesystem::path(dir) / p;
    }
    return p.string();
}

void write_text(const std::string& path, const std::string& text)
{
    const std::string target = resolve_path(path);
    if (target.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::filesystem::path p(target);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + target + "'");
    }
    out << text;
}

// ------------------------------------------------------------------ schemas

std::vector<Key> run_keys(bool with_eps)
{
    tricomi_run_config d;
    tricomi_run_config_default(&d);
    auto s = cli::shortest;
    std::vector<Key> keys = {
        {"m", s(d.m), Kind::Real, "degeneracy exponent m >= 0", {}},
        {"n", std::to_string(d.n), Kind::Integer, "space dimension (1..3)", {}},
        {"p", s(d.p), Kind::Real, "power of the nonlinearity", {"crit"}},
        {"R", s(d.R), Kind::Real, "support radius of the data", {}},
    };
    if (with_eps) {
        keys.push_back({"eps", s(d.eps), Kind::Real, "amplitude of the data", {}});
    }
    std::vector<Key> rest = {
        {"dx", s(d.dx), Kind::Real, "radial grid spacing", {}},
        {"domain_radius", s(d.domain_radius), Kind::Real, "grid extent, 0 for cone plus margin", {}},
        {"t_max", s(d.t_max), Kind::Real, "censoring time", {}},
        {"cfl", s(d.cfl), Kind::Real, "CFL number", {}},
        {"blowup_threshold", s(d.blowup_threshold), Kind::Real, "max|u| defining blow-up", {}},
        {"confirm_threshold", s(d.confirm_threshold), Kind::Real, "lower threshold for the consistency check", {}},
        {"profile", tricomi_profile_name(d.profile), Kind::Text, "data profile (bump4 or smooth)", {}},
        {"u1_scale", s(d.u1_scale), Kind::Real, "u1 = u1_scale * u0", {}},
        {"nonlinear", d.nonlinear ? "true" : "false", Kind::Flag, "include |u|^p", {}},
        {"support_tol", s(d.support_tol), Kind::Real, "relative support threshold, 0 for dx^2", {}},
        {"f_interval", s(d.f_interval), Kind::Real, "time between F samples, 0 disables F", {}},
        {"q", "auto", Kind::Real, "test-function exponent for F", {"auto"}},
        {"lambda0", s(d.lambda0), Kind::Real, "upper lambda limit of the test function", {}},
        {"record_stride", std::to_string(d.record_stride), Kind::Integer, "record every k-th step", {}},
    };
    keys.insert(keys.end(), rest.begin(), rest.end());
    return keys;
}

std::vector<Key> schema_for(const std::string& sub)
{
    if (sub == "specfun") {
        return {
            {"a", "1", Kind::Real, "first parameter of M(a,b;z)", {}},
            {"b", "2", Kind::Real, "second parameter of M(a,b;z)", {}},
            {"z", "-50,-10,-1,0,1,2,10,20", Kind::RealList, "arguments (comma-separated)", {}},
        };
    }
    if (sub == "odecheck") {
        return {
            {"m", "1", Kind::Real, "degeneracy exponent", {}},
            {"lambda", "1", Kind::Real, "frequency", {}},
            {"t", "0.5,1,2,5,10,20", Kind::RealList, "evaluation times (comma-separated)", {}},
            {"s", "0", Kind::Real, "start time of the two-point solutions", {}},
            {"tol", "1e-11", Kind::Real, "oracle integrator tolerance", {}},
        };
    }
    if (sub == "testfun") {
        return {
            {"m", "1", Kind::Real, "degeneracy exponent", {}},
            {"n", "3", Kind::Integer, "space dimension", {}},
            {"p", "crit", Kind::Real, "power used by q = auto", {"crit"}},
            {"q", "auto", Kind::Real, "test-function exponent, auto = (n-1)/2 - 1/p", {"auto"}},
            {"lambda0", "0.5", Kind::Real, "upper limit of the lambda integral", {}},
            {"R", "1", Kind::Real, "support radius", {}},
            {"parts", "i,i-eta,ii,iii", Kind::Text, "bounds to check", {}},
            {"t_max", "1000", Kind::Real, "largest time", {}},
            {"t_first", "0.01", Kind::Real, "smallest positive time", {}},
            {"t_points", "13", Kind::Integer, "log-spaced times", {}},
            {"x_points", "3", Kind::Integer, "radial fractions", {}},
            {"s_points", "4", Kind::Integer, "slice fractions for part ii", {}},
            {"refine", "true", Kind::Flag, "repeat on a 2x refined grid", {}},
            {"refine_tol", "0.1", Kind::Real, "allowed relative change under refinement", {}},
        };
    }
    if (sub == "exponents") {
        return {
            {"m", "1", Kind::Real, "degeneracy exponent", {}},
            {"n", "3", Kind::Integer, "space dimension", {}},
            {"p", "crit", Kind::Real, "power, crit = p_crit(m,n)", {"crit"}},
            {"eps", "0.1", Kind::Real, "amplitude for the lifespan prediction", {}},
            {"constant", "1", Kind::Real, "constant of the lifespan prediction", {}},
            {"tol", "1e-9", Kind::Real, "|gamma| below which p counts as critical", {}},
        };
    }
    if (sub == "iterate") {
        return {
            {"m", "1", Kind::Real, "degeneracy exponent", {}},
            {"n", "1", Kind::Integer, "space dimension", {}},
            {"p", "2", Kind::Real, "power, crit = p_crit(m,n)", {"crit"}},
            {"mode", "auto", Kind::Text, "subcritical, critical or auto", {}},
            {"eps", "0.1", Kind::Real, "amplitude", {}},
            {"jmax", "40", Kind::Integer, "iterations", {}},
            {"T0", "1", Kind::Real, "start of the subcritical iteration", {}},
            {"C0", "1", Kind::Real, "constant of the iteration frame", {}},
            {"C2", "1", Kind::Real, "D1 = C2 eps^p", {}},
            {"C", "1", Kind::Real, "critical frame constant", {}},
            {"B1", "1", Kind::Real, "critical test-function constant", {}},
            {"N_denominator", "0", Kind::Real, "denominator of N, 0 for 3^2*7*(p+1)", {}},
            {"log_ceiling", "700", Kind::Real, "log of the threshold level", {}},
            {"scaling_eps", "auto", Kind::RealList, "amplitudes for the slope fit, auto = 2^-4..2^-12", {"auto", "none"}},
            {"scaling_jmax", "60", Kind::Integer, "iterations for the slope fit", {}},
        };
    }
    if (sub == "simulate") {
        return run_keys(true);
    }
    if (sub == "scan") {
        std::vector<Key> keys = run_keys(false);
        keys.push_back({"eps_min", "0.3", Kind::Real, "smallest amplitude", {}});
        keys.push_back({"eps_max", "1.2", Kind::Real, "largest amplitude", {}});
        keys.push_back({"eps_points", "6", Kind::Integer, "log-spaced amplitudes", {}});
        keys.push_back({"eps_list", "auto", Kind::RealList, "explicit amplitudes (overrides the range)", {"auto"}});
        keys.push_back({"threads", "0", Kind::Integer, "worker threads, 0 = hardware", {}});
        keys.push_back({"fit", "auto", Kind::Text, "subcritical, critical or auto", {}});
        return keys;
    }
    if (sub == "report") {
        return {
            {"require", "auto", Kind::Text, "comma-separated keys that must be present, auto = full pipeline", {}},
        };
    }
    throw ConfigError("unknown subcommand " + sub);
}

// ------------------------------------------------------------- subcommands

double resolve_p(const Config& cfg, double m, int n)
{
    if (cfg.has_word("p", "crit")) {
        double p = 0.0;
        check(tricomi_p_crit(m, n, &p), "p_crit");
        return p;
    }
    return cfg.real("p");
}

double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

Result run_specfun(const Config& cfg)
{
    Result res;
    const double a = cfg.real("a");
    const double b = cfg.real("b");
    res.columns = {"a", "b", "z", "value", "regime", "rel_error", "derivative", "derivative_fd_rel"};
    double worst = 0.0;
    for (double z : cfg.reals("z")) {
        double v = 0.0;
        double err = 0.0;
        double d = 0.0;
        int regime = 0;
        check(tricomi_kummer_m_eval(a, b, z, &v, &regime, &err), "kummer_m");
        check(tricomi_kummer_m_deriv(a, b, z, &d), "kummer_m_deriv");
        const double h = 1e-5 * std::max(1.0, std::abs(z));
        double fp = 0.0;
        double fm = 0.0;
        check(tricomi_kummer_m(a, b, z + h, &fp), "kummer_m");
        check(tricomi_kummer_m(a, b, z - h, &fm), "kummer_m");
        const double fd = (fp - fm) / (2.0 * h);
        const double dev = std::abs(fd - d) / std::max(std::abs(d), 1e-300);
        worst = std::max(worst, dev);
        res.rows.push_back({a, b, z, v, tricomi_kummer_regime_name(regime), err, d, dev});
    }
    res.check_le("derivative", worst, 1e-8);
    return res;
}

Result run_odecheck(const Config& cfg)
{
    Result res;
    const double m = cfg.real("m");
    const double lambda = cfg.real("lambda");
    const double s = cfg.real("s");
    const double tol = cfg.real("tol");
    res.columns = {"t",         "s",         "v1",          "dv1",         "v2",   "dv2",
                   "wronskian_residual", "oracle_v1", "oracle_v2", "oracle_dev", "phi1", "phi2"};
    double worst_w = 0.0;
    double worst_o = 0.0;
    for (double t : cfg.reals("t")) {
        tricomi_fundamental f{};
        check(tricomi_fundamental_pair(m, lambda, t, &f), "fundamental_pair");
        double o1 = 0.0;
        double o2 = 0.0;
        check(tricomi_ode_oracle(m, lambda, t, 1.0, 0.0, tol, &o1, nullptr), "ode_oracle");
        check(tricomi_ode_oracle(m, lambda, t, 0.0, 1.0, tol, &o2, nullptr), "ode_oracle");
        const double dev = std::max(std::abs(f.v1 - o1) / std::abs(o1), t > 0.0 ? std::abs(f.v2 - o2) / std::abs(o2) : 0.0);
        double p1 = kNaN;
        double p2 = kNaN;
        if (t >= s) {
            check(tricomi_phi1(t, s, m, lambda, &p1), "phi1");
            check(tricomi_phi2(t, s, m, lambda, &p2), "phi2");
        }
        // relative to the size of the products that cancel in v1 dv2 - dv1 v2
        const double scale = std::max(1.0, std::abs(f.v1 * f.dv2) + std::abs(f.dv1 * f.v2));
        worst_w = std::max(worst_w, std::abs(f.wronskian - 1.0) / scale);
        worst_o = std::max(worst_o, dev);
        res.rows.push_back({t, s, f.v1, f.dv1, f.v2, f.dv2, f.wronskian - 1.0, o1, o2, dev, p1, p2});
    }
    res.check_le("wronskian", worst_w, 1e-8);
    res.check_le("oracle", worst_o, 1e-6);
    return res;
}

Result run_testfun(const Config& cfg)
{
    Result res;
    tricomi_testfn_params params{};
    tricomi_testfn_params_default(&params);
    params.m = cfg.real("m");
    params.n = cfg.integer("n");
    params.lambda0 = cfg.real("lambda0");
    params.R = cfg.real("R");
    if (cfg.has_word("q", "auto")) {
        tricomi_context ctx{params.m, params.n, resolve_p(cfg, params.m, params.n)};
        check(tricomi_frame_q(&ctx, &params.q), "frame_q");
    } else {
        params.q = cfg.real("q");
    }
    tricomi_grid_spec grid{};
    tricomi_grid_spec_default(&grid);
    grid.t_max = cfg.real("t_max");
    grid.t_first = cfg.real("t_first");
    grid.t_points = cfg.integer("t_points");
    grid.x_points = cfg.integer("x_points");
    grid.s_points = cfg.integer("s_points");
    res.add("q", params.q);

    tricomi_bound_report* raw = nullptr;
    check(tricomi_envelope_report(&params, &grid, cfg.text("parts").c_str(), &raw), "envelope_report");
    std::unique_ptr<tricomi_bound_report, void (*)(tricomi_bound_report*)> report(raw, tricomi_bound_report_free);

    res.columns = {"part", "t", "s", "x_norm", "value", "envelope", "ratio"};
    for (size_t i = 0; i < tricomi_bound_report_row_count(report.get()); ++i) {
        tricomi_bound_row row{};
        check(tricomi_bound_report_row(report.get(), i, &row), "bound_report_row");
        res.rows.push_back({std::string(row.part), row.t, row.s, row.x_norm, row.value, row.envelope, row.ratio});
    }

    bool all = true;
    double worst_change = 0.0;
    json parts = json::object();
    for (size_t i = 0; i < tricomi_bound_report_part_count(report.get()); ++i) {
        tricomi_part_summary s{};
        check(tricomi_bound_report_part(report.get(), i, &s), "bound_report_part");
        const std::string name = s.part;
        res.add(name + ".kind", s.lower ? "inf" : "sup");
        res.add(name + ".constant", s.constant);
        res.add(name + ".points", s.points);
        res.add(name + ".excluded", s.excluded);
        res.add(name + ".ok", s.ok != 0);
        all = all && s.ok;
        if (cfg.flag("refine")) {
            tricomi_stability st{};
            check(tricomi_refinement_check(&params, &grid, s.part, cfg.real("refine_tol"), &st), "refinement_check");
            res.add(name + ".fine_constant", st.fine.constant);
            res.add(name + ".relative_change", st.relative_change);
            res.add(name + ".stable", st.stable != 0);
            all = all && st.stable && st.fine.ok;
            worst_change = std::max(worst_change, st.relative_change);
        }
    }
    // value is the largest change under refinement; pass also needs every
    // constant positive (inf bounds) or finite (sup bounds)
    res.checks.push_back({"envelopes", worst_change, cfg.real("refine_tol"), all});
    return res;
}

Result run_exponents(const Config& cfg)
{
    Result res;
    const double m = cfg.real("m");
    const int n = cfg.integer("n");
    const double p = resolve_p(cfg, m, n);
    tricomi_context ctx{m, n, p};

    double pc = kNaN;
    if (tricomi_p_crit(m, n, &pc) != TRICOMI_OK) {
        pc = kNaN;
    }
    double gamma = 0.0;
    check(tricomi_gamma(&ctx, &gamma), "gamma");
    int regime = 0;
    check(tricomi_classify(&ctx, cfg.real("tol"), &regime), "classify");
    double strauss = kNaN;
    if (n >= 2) {
        check(tricomi_strauss_exponent(n, &strauss), "strauss_exponent");
    }
    tricomi_iteration_exponents ex{};
    check(tricomi_exponents_of(&ctx, &ex), "iteration_exponents");
    double fq = 0.0;
    double frame = 0.0;
    double initiate = 0.0;
    check(tricomi_frame_q(&ctx, &fq), "frame_q");
    check(tricomi_critical_identities(&ctx, &frame, &initiate), "critical_identities");
    const double ab = ex.beta_it - ex.alpha_it - gamma / (2.0 * (p - 1.0));

    res.add("m", m);
    res.add("n", n);
    res.add("p", p);
    res.add("p_crit", pc);
    res.add("gamma", gamma);
    res.add("regime", tricomi_regime_name(regime));
    res.add("strauss", strauss);
    res.add("mu", ex.mu);
    res.add("a1", ex.a1);
    res.add("b1", ex.b1);
    res.add("alpha_it", ex.alpha_it);
    res.add("beta_it", ex.beta_it);
    res.add("alpha_beta_residual", ab);
    res.add("frame_q", fq);
    res.add("frame_residual", frame);
    res.add("initiate_residual", initiate);

    double lexp = kNaN;
    double pred = kNaN;
    if (regime == TRICOMI_SUBCRITICAL) {
        check(tricomi_lifespan_exponent(&ctx, &lexp), "lifespan_exponent");
    }
    if (regime != TRICOMI_SUPERCRITICAL) {
        check(tricomi_lifespan_prediction(&ctx, cfg.real("eps"), cfg.real("constant"), &pred), "lifespan_prediction");
    }
    res.add("lifespan_exponent", lexp);
    res.add("predicted_lifespan", pred);

    res.check_le("alpha_beta_identity", std::abs(ab), 1e-12);
    if (regime == TRICOMI_CRITICAL) {
        res.check_le("gamma_at_root", std::abs(gamma), 1e-12);
        res.check_le("frame_identity", std::abs(frame), 1e-10);
        res.check_le("initiate_identity", std::abs(initiate), 1e-10);
    }
    return res;
}

std::vector<double> scaling_eps(const Config& cfg)
{
    if (cfg.has_word("scaling_eps", "none")) {
        return {};
    }
    if (cfg.has_word("scaling_eps", "auto")) {
        std::vector<double> eps;
        for (int k = 4; k <= 12; ++k) {
            eps.push_back(std::ldexp(1.0, -k));
        }
        return eps;
    }
    return cfg.reals("scaling_eps");
}

void add_scaling(Result& res, const std::vector<tricomi_scaling_point>& pts, double slope, double theory)
{
    json points = json::array();
    for (const auto& pt : pts) {
        points.push_back(json{{"eps", json_number(pt.eps)},
                              {"log_T", json_number(pt.log_T)},
                              {"log_log_T", json_number(pt.log_log_T)},
                              {"j", pt.j}});
    }
    res.extra["scaling_points"] = points;
    res.add("scaling.slope", slope);
    res.add("scaling.theory_slope", theory);
    res.check_le("scaling_slope", std::abs(slope - theory) / std::abs(theory), 0.05);
}

Result run_iterate(const Config& cfg)
{
    Result res;
    const double m = cfg.real("m");
    const int n = cfg.integer("n");
    const double p = resolve_p(cfg, m, n);
    tricomi_context ctx{m, n, p};
    std::string mode = cfg.text("mode");
    if (mode == "auto") {
        int regime = 0;
        check(tricomi_classify(&ctx, 1e-9, &regime), "classify");
        mode = regime == TRICOMI_CRITICAL ? "critical" : "subcritical";
    }
    const double eps = cfg.real("eps");
    const int jmax = cfg.integer("jmax");
    const double ceiling = cfg.real("log_ceiling");
    const std::vector<double> seps = scaling_eps(cfg);
    res.add("mode", mode);
    res.add("p", p);

    if (mode == "subcritical") {
        tricomi_subcritical* raw = nullptr;
        check(tricomi_subcritical_run(&ctx, cfg.real("C2") * std::pow(eps, p), cfg.real("T0"), jmax, cfg.real("C0"),
                                      &raw),
              "subcritical_run");
        std::unique_ptr<tricomi_subcritical, void (*)(tricomi_subcritical*)> seq(raw, tricomi_subcritical_free);
        tricomi_subcritical_info info{};
        check(tricomi_subcritical_get_info(seq.get(), &info), "subcritical_info");
        res.columns = {"j", "a", "b", "log_D", "log_D_lower", "log_D_lower_closed", "log_D_bound"};
        double worst = 0.0;
        for (int j = 1; j <= info.size; ++j) {
            tricomi_subcritical_row r{};
            check(tricomi_subcritical_row_at(seq.get(), j, &r), "subcritical_row");
            worst = std::max({worst, rel_diff(r.a, r.a_closed), rel_diff(r.b, r.b_closed),
                              rel_diff(r.log_D_lower, r.log_D_lower_closed)});
            res.rows.push_back({j, r.a, r.b, r.log_D, r.log_D_lower, r.log_D_lower_closed, r.log_D_bound});
        }
        tricomi_crossing c{};
        check(tricomi_subcritical_threshold(seq.get(), ceiling, 1e300, &c), "subcritical_threshold");
        double jt = 0.0;
        double jc = 0.0;
        check(tricomi_j_threshold_closed_form(seq.get(), &jt), "j_threshold");
        check(tricomi_j_first_crossing(seq.get(), 1.0, 1e300, &jc), "j_first_crossing");
        tricomi_blowup_estimate be{};
        check(tricomi_blowup_time_estimate(&ctx, eps, cfg.real("C2"), cfg.real("T0"), cfg.real("C0"), &be),
              "blowup_time_estimate");
        res.add("alpha_it", info.alpha_it);
        res.add("beta_it", info.beta_it);
        res.add("log_C3", info.log_C3);
        res.add("Sp_inf", info.Sp_inf);
        res.add("threshold.found", c.found != 0);
        res.add("threshold.j", c.j);
        res.add("threshold.t", c.found ? c.t : kNaN);
        res.add("threshold.log_t", c.found ? c.log_t : kNaN);
        res.add("J_exceeds_one_at", jc);
        res.add("J_threshold_closed_form", jt);
        res.add("blowup_bound", be.bound);
        res.add("blowup_exponent", be.exponent);
        res.check_le("closed_forms", worst, 1e-12);
        if (!seps.empty()) {
            std::vector<tricomi_scaling_point> pts(seps.size());
            double slope = 0.0;
            double theory = 0.0;
            check(tricomi_subcritical_scaling(&ctx, seps.data(), seps.size(), cfg.real("C2"), cfg.real("T0"),
                                              cfg.integer("scaling_jmax"), ceiling, pts.data(), &slope, &theory),
                  "subcritical_scaling");
            add_scaling(res, pts, slope, theory);
        }
        return res;
    }
    if (mode != "critical") {
        throw ConfigError("mode must be subcritical, critical or auto, got '" + mode + "'");
    }
    tricomi_critical_constants k{};
    tricomi_critical_constants_default(&k);
    k.C = cfg.real("C");
    k.C0 = cfg.real("C0");
    k.B1 = cfg.real("B1");
    k.N_denominator = cfg.real("N_denominator");
    tricomi_critical* raw = nullptr;
    check(tricomi_critical_run(&ctx, eps, &k, jmax, &raw), "critical_run");
    std::unique_ptr<tricomi_critical, void (*)(tricomi_critical*)> seq(raw, tricomi_critical_free);
    tricomi_critical_info info{};
    check(tricomi_critical_get_info(seq.get(), &info), "critical_info");
    res.columns = {"j", "a", "b", "log_C", "log_C_rec", "l"};
    double worst = 0.0;
    for (int j = 0; j < info.size; ++j) {
        tricomi_critical_row r{};
        check(tricomi_critical_row_at(seq.get(), j, &r), "critical_row");
        if (j >= 1) {
            worst = std::max({worst, rel_diff(r.a, r.a_rec), rel_diff(r.b, r.b_rec), rel_diff(r.log_C, r.log_C_rec)});
        }
        res.rows.push_back({j, r.a, r.b, r.log_C, r.log_C_rec, r.l});
    }
    tricomi_crossing c{};
    check(tricomi_critical_threshold(seq.get(), ceiling, 1e300, &c), "critical_threshold");
    res.add("M", info.M);
    res.add("log_N", info.log_N);
    res.add("log_E", info.log_E);
    res.add("log_C1", info.log_C1);
    res.add("threshold.found", c.found != 0);
    res.add("threshold.j", c.j);
    res.add("threshold.log_t", c.found ? c.log_t : kNaN);
    res.add("threshold.log_log_t", c.found ? std::log(c.log_t) : kNaN);
    res.check_le("closed_forms", worst, 1e-12);
    if (!seps.empty()) {
        std::vector<tricomi_scaling_point> pts(seps.size());
        double slope = 0.0;
        double theory = 0.0;
        check(tricomi_critical_scaling(&ctx, seps.data(), seps.size(), &k, cfg.integer("scaling_jmax"), ceiling,
                                       pts.data(), &slope, &theory),
              "critical_scaling");
        add_scaling(res, pts, slope, theory);
    }
    return res;
}

tricomi_run_config run_config(const Config& cfg, bool with_eps)
{
    tricomi_run_config c{};
    tricomi_run_config_default(&c);
    c.m = cfg.real("m");
    c.n = cfg.integer("n");
    c.p = resolve_p(cfg, c.m, c.n);
    c.R = cfg.real("R");
    if (with_eps) {
        c.eps = cfg.real("eps");
    }
    c.dx = cfg.real("dx");
    c.domain_radius = cfg.real("domain_radius");
    c.t_max = cfg.real("t_max");
    c.cfl = cfg.real("cfl");
    c.blowup_threshold = cfg.real("blowup_threshold");
    c.confirm_threshold = cfg.real("confirm_threshold");
    check(tricomi_profile_from_name(cfg.text("profile").c_str(), &c.profile), "profile");
    c.u1_scale = cfg.real("u1_scale");
    c.nonlinear = cfg.flag("nonlinear") ? 1 : 0;
    c.support_tol = cfg.real("support_tol");
    c.f_interval = cfg.real("f_interval");
    c.q_auto = cfg.has_word("q", "auto") ? 1 : 0;
    c.q = c.q_auto ? 0.0 : cfg.real("q");
    c.lambda0 = cfg.real("lambda0");
    c.record_stride = cfg.integer("record_stride");
    check(tricomi_run_config_validate(&c), "run config");
    return c;
}

void add_record(Result& res, const tricomi_record& r)
{
    res.add("T_blowup", r.T_blowup);
    res.add("T_confirm", r.T_confirm);
    res.add("censored", r.censored != 0);
    res.add("threshold_consistent", r.threshold_consistent != 0);
    res.add("peak", r.peak);
    res.add("t_end", r.t_end);
    res.add("steps", r.steps);
}

Result run_simulate(const Config& cfg)
{
    Result res;
    const tricomi_run_config c = run_config(cfg, true);
    tricomi_run* raw = nullptr;
    check(tricomi_run_until_blowup(&c, &raw), "run_until_blowup");
    std::unique_ptr<tricomi_run, void (*)(tricomi_run*)> run(raw, tricomi_run_free);
    tricomi_record rec{};
    check(tricomi_run_get_record(run.get(), &rec), "record");
    add_record(res, rec);
    const double excess = tricomi_run_max_support_excess(run.get());
    res.add("max_support_excess", excess);
    res.columns = {"t", "max_u", "G", "F", "support", "Lp"};
    for (size_t i = 0; i < tricomi_run_series_count(run.get()); ++i) {
        tricomi_series_row r{};
        check(tricomi_run_series_row(run.get(), i, &r), "series_row");
        res.rows.push_back({r.t, r.max_u, r.G, r.F, r.support, r.Lp});
    }
    res.check_le("support", excess, 2.0 * c.dx);
    if (!rec.censored) {
        res.checks.push_back({"threshold_consistent", std::abs(rec.T_blowup / rec.T_confirm - 1.0), 0.02,
                              rec.threshold_consistent != 0});
    }
    return res;
}

struct ScanOutcome {
    Result records;
    json fit = nullptr;
    bool all_censored = false;
};

ScanOutcome run_scan(const Config& cfg)
{
    ScanOutcome out;
    Result& res = out.records;
    const tricomi_run_config c = run_config(cfg, false);

    std::vector<double> eps;
    if (cfg.has_word("eps_list", "auto")) {
        const int k = cfg.integer("eps_points");
        const double lo = cfg.real("eps_min");
        const double hi = cfg.real("eps_max");
        if (k < 1 || !(lo > 0.0) || !(hi >= lo)) {
            throw ConfigError("need eps_points >= 1 and 0 < eps_min <= eps_max");
        }
        for (int i = 0; i < k; ++i) {
            const double f = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
            eps.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
        }
    } else {
        eps = cfg.reals("eps_list");
        std::sort(eps.begin(), eps.end());
    }
    if (eps.empty()) {
        throw ConfigError("empty eps list");
    }

    tricomi_scan* raw = nullptr;
    check(tricomi_lifespan_scan(&c, eps.data(), eps.size(), cfg.integer("threads"), &raw), "lifespan_scan");
    std::unique_ptr<tricomi_scan, void (*)(tricomi_scan*)> scan(raw, tricomi_scan_free);

    std::vector<tricomi_record> recs(tricomi_scan_count(scan.get()));
    res.columns = {"eps", "T_blowup", "censored", "T_confirm", "threshold_consistent", "peak", "t_end", "steps"};
    for (size_t i = 0; i < recs.size(); ++i) {
        check(tricomi_scan_record(scan.get(), i, &recs[i]), "scan_record");
        const tricomi_record& r = recs[i];
        res.rows.push_back(
            {r.eps, r.T_blowup, r.censored != 0, r.T_confirm, r.threshold_consistent != 0, r.peak, r.t_end, r.steps});
    }
    const int censored = tricomi_scan_censored(scan.get());
    out.all_censored = censored == static_cast<int>(recs.size());
    res.add("runs", static_cast<int>(recs.size()));
    res.add("censored", censored);
    res.add("monotone", tricomi_scan_monotone(scan.get()) != 0);

    tricomi_context ctx{c.m, c.n, c.p};
    int regime = 0;
    check(tricomi_classify(&ctx, 1e-9, &regime), "classify");
    std::string mode = cfg.text("fit");
    if (mode == "auto") {
        mode = regime == TRICOMI_CRITICAL ? "critical" : "subcritical";
    }
    if (mode != "subcritical" && mode != "critical") {
        throw ConfigError("fit must be subcritical, critical or auto, got '" + mode + "'");
    }
    double theory = kNaN;
    if (mode == "critical") {
        theory = -c.p * (c.p - 1.0);
    } else if (regime == TRICOMI_SUBCRITICAL) {
        double e = 0.0;
        check(tricomi_lifespan_exponent(&ctx, &e), "lifespan_exponent");
        theory = -e;
    }

    tricomi_fit fit{};
    const tricomi_status st = tricomi_fit_scaling(recs.data(), recs.size(), mode == "critical" ? 1 : 0, &fit);
    res.add("fit.mode", mode);
    res.add("fit.theory_slope", theory);
    if (st == TRICOMI_OK) {
        res.add("fit.slope", fit.slope);
        res.add("fit.intercept", fit.intercept);
        res.add("fit.residual", fit.residual);
        res.add("fit.slope_stderr", fit.slope_stderr);
        res.add("fit.used", fit.used);
        res.add("fit.excluded", fit.excluded);
        out.fit = json{{"mode", mode},
                       {"slope", json_number(fit.slope)},
                       {"intercept", json_number(fit.intercept)},
                       {"residual", json_number(fit.residual)},
                       {"slope_stderr", json_number(fit.slope_stderr)},
                       {"theory_slope", json_number(theory)},
                       {"used", fit.used},
                       {"excluded", fit.excluded},
                       {"note", "the theory slope is the exponent of an upper bound on the lifespan; agreement "
                                "tests consistency, not sharpness"}};
        if (std::isfinite(theory)) {
            res.check_le("slope", std::abs(fit.slope - theory) / std::abs(theory), 0.2);
        }
    } else if (st == TRICOMI_ERR_FIT) {
        res.add("fit.error", std::string(tricomi_last_error()));
    } else {
        check(st, "fit_scaling");
    }
    return out;
}

// ------------------------------------------------------------------- report

const std::vector<std::string> kPipelineKeys = {
    "specfun.derivative",           "odecheck.wronskian",     "odecheck.oracle",
    "testfun.envelopes",            "exponents.gamma_at_root", "exponents.frame_identity",
    "exponents.initiate_identity",  "exponents.alpha_beta_identity",
    "iterate.closed_forms",         "iterate.scaling_slope",  "scan.slope",
};

int run_report(const Config& cfg, const std::vector<std::string>& inputs, const std::string& output)
{
    if (inputs.empty()) {
        std::cerr << "report: no inputs given\n";
        return kExitReportGap;
    }
    json summary = json::object();
    summary["subcommand"] = "report";
    summary["config"] = config_json(cfg);
    json sources = json::array();
    json checks = json::object();
    json fits = json::object();
    std::vector<std::string> gaps;

    for (const std::string& path : inputs) {
        std::ifstream in(path);
        if (!in && !resolve_path(path).empty()) {
            in.open(resolve_path(path));
        }
        if (!in) {
            gaps.push_back(path + ": cannot read");
            continue;
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            gaps.push_back(path + ": not valid JSON");
            continue;
        }
        if (!doc.is_object() || !doc.contains("subcommand") || !doc["subcommand"].is_string() ||
            !doc.contains("checks") || !doc["checks"].is_object()) {
            gaps.push_back(path + ": missing subcommand or checks");
            continue;
        }
        const std::string sub = doc["subcommand"].get<std::string>();
        sources.push_back(json{{"path", path}, {"subcommand", sub}});
        for (const auto& [k, v] : doc["checks"].items()) {
            if (!v.is_object() || !v.contains("pass") || !v["pass"].is_boolean()) {
                gaps.push_back(path + ": malformed check '" + k + "'");
                continue;
            }
            json entry = v;
            entry["source"] = path;
            checks[sub + "." + k] = entry;
        }
        if (doc.contains("fit") && doc["fit"].is_object()) {
            fits[sub] = doc["fit"];
        }
        if (sub == "iterate" && doc.contains("results")) {
            const json& r = doc["results"];
            if (r.contains("scaling.slope")) {
                fits["iterate"] = json{{"mode", r.value("mode", "")},
                                       {"slope", r["scaling.slope"]},
                                       {"theory_slope", r["scaling.theory_slope"]}};
            }
        }
    }

    std::vector<std::string> required;
    if (cfg.text("require") == "auto") {
        required = kPipelineKeys;
    } else if (cfg.text("require") != "none") {
        std::stringstream ss(cfg.text("require"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) {
                required.push_back(item);
            }
        }
    }
    json missing = json::array();
    for (const std::string& key : required) {
        if (!checks.contains(key)) {
            missing.push_back(key);
            gaps.push_back("missing key " + key);
        }
    }

    bool all_pass = true;
    json failed = json::array();
    for (const auto& [k, v] : checks.items()) {
        if (!v["pass"].get<bool>()) {
            all_pass = false;
            failed.push_back(k);
        }
    }
    summary["status"] = !gaps.empty() ? "incomplete" : (all_pass ? "pass" : "fail");
    summary["sources"] = sources;
    summary["checks"] = checks;
    summary["failed"] = failed;
    summary["missing"] = missing;
    summary["gaps"] = gaps;
    summary["fits"] = fits;
    write_text(output, summary.dump(2) + "\n");
    if (!gaps.empty()) {
        for (const std::string& g : gaps) {
            std::cerr << "report gap: " << g << "\n";
        }
        return kExitReportGap;
    }
    return 0;
}

// ------------------------------------------------------------------- driver

struct SubOptions {
    CLI::App* app = nullptr;
    std::string config;
    std::vector<std::string> sets;
    std::string output;
    std::string fit_output;
    std::string format;
    std::map<std::string, std::string> flags;
    std::vector<std::string> inputs;
};

std::string default_format(const std::string& sub)
{
    return (sub == "exponents" || sub == "report") ? "json" : "csv";
}

int dispatch(const std::string& sub, SubOptions& opt)
{
    Config cfg(sub, schema_for(sub));
    if (!opt.config.empty()) {
        cfg.load_file(opt.config, kSubcommands);
    }
    for (const std::string& s : opt.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + s + "'");
        }
        cfg.set(s.substr(0, eq), s.substr(eq + 1), "--set");
    }
    for (const Key& k : cfg.schema()) {
        if (opt.app->get_option("--" + k.name)->count() > 0) {
            cfg.set(k.name, opt.flags[k.name], "--" + k.name);
        }
    }
    const std::string format = opt.format.empty() ? default_format(sub) : opt.format;
    if (format != "csv" && format != "json") {
        throw ConfigError("--format must be csv or json, got '" + format + "'");
    }

    if (sub == "report") {
        return run_report(cfg, opt.inputs, opt.output);
    }

    auto emit = [&](const Result& res) {
        write_text(opt.output, format == "json" ? render_json(cfg, res) : render_csv(cfg, res));
    };

    if (sub == "scan") {
        ScanOutcome out = run_scan(cfg);
        if (format == "json") {
            out.records.extra["fit"] = out.fit;
        }
        emit(out.records);
        if (!opt.fit_output.empty()) {
            json doc = json::object();
            doc["subcommand"] = "scan";
            doc["config"] = config_json(cfg);
            doc["fit"] = out.fit;
            doc["checks"] = checks_json(out.records.checks);
            write_text(opt.fit_output, doc.dump(2) + "\n");
        }
        if (out.all_censored) {
            std::cerr << "scan: every run was censored (no blow-up before t_max)\n";
            return kExitCensored;
        }
        return 0;
    }

    Result res;
    if (sub == "specfun") {
        res = run_specfun(cfg);
    } else if (sub == "odecheck") {
        res = run_odecheck(cfg);
    } else if (sub == "testfun") {
        res = run_testfun(cfg);
    } else if (sub == "exponents") {
        res = run_exponents(cfg);
    } else if (sub == "iterate") {
        res = run_iterate(cfg);
    } else if (sub == "simulate") {
        res = run_simulate(cfg);
    }
    emit(res);
    return 0;
}

const char* describe(const std::string& sub)
{
    if (sub == "specfun") {
        return "Evaluate M(a,b;z) and report the regime used";
    }
    if (sub == "odecheck") {
        return "Fundamental system, Wronskian and ODE oracle deviation";
    }
    if (sub == "testfun") {
        return "Envelope constants of the test-function bounds";
    }
    if (sub == "exponents") {
        return "Exponent algebra: gamma, p_crit, iteration exponents";
    }
    if (sub == "iterate") {
        return "Iteration sequences, threshold times and scaling slopes";
    }
    if (sub == "simulate") {
        return "Single radial run until blow-up";
    }
    if (sub == "scan") {
        return "Lifespan sweep over eps with a scaling fit";
    }
    return "Merge checks of earlier JSON outputs into one summary";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tricomi: semilinear Tricomi-type wave equation toolkit"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(tricomi_version()));

    std::map<std::string, SubOptions> opts;
    for (const std::string& sub : kSubcommands) {
        SubOptions& o = opts[sub];
        o.app = app.add_subcommand(sub, describe(sub));
        o.app->add_option("--config", o.config, "config file (key = value with [sections], or a JSON output)");
        o.app->add_option("--set", o.sets, "override, key=value (repeatable)");
        o.app->add_option("-o,--output", o.output, "output file (default: standard output)");
        o.app->add_option("-f,--format", o.format, "csv or json");
        if (sub == "scan") {
            o.app->add_option("--fit-output", o.fit_output, "write the fit as JSON to this file");
        }
        if (sub == "report") {
            o.app->add_option("inputs", o.inputs, "JSON outputs of earlier runs");
        }
        for (const Key& k : schema_for(sub)) {
            o.app->add_option("--" + k.name, o.flags[k.name], k.help + " [" + k.fallback + "]");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return dispatch(sub, opts[sub]);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ApiError& e) {
        std::cerr << tricomi_status_name(e.status) << ": " << e.what() << "\n";
        return exit_code(e.status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
