#include "cli_app.hpp"

#include "wavecert/wavecert.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace wavecert::cli {
namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- output

std::string cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}
std::string cell(int v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

using CsvRows = std::vector<std::vector<std::string>>;

void write_csv(const std::string& path, const std::vector<std::string>& header, const CsvRows& rows) {
    if (path.empty()) {
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw std::invalid_argument("cannot open " + path + " for writing");
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            f << (j ? "," : "") << cells[j];
        }
        f << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

// Non-finite doubles have no JSON representation; they become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json config_json(const RunConfig& c) {
    json j;
    j["case"] = c.case_name;
    j["p0_table"] = c.p0_table;
    j["imax"] = c.imax;
    j["kmax"] = optional_json(c.kmax);
    j["dt"] = optional_json(c.dt);
    j["tmax"] = c.tmax;
    j["xi"] = c.xi;
    j["c"] = c.c;
    j["oracle"] = c.oracle;
    j["oracle_threshold"] = c.oracle_threshold;
    j["allow_fallback"] = c.allow_fallback;
    j["reconstruct"] = c.reconstruct;
    j["exact"] = c.exact;
    j["alpha3"] = optional_json(c.alpha3);
    j["C3"] = optional_json(c.C3);
    j["alpha4"] = optional_json(c.alpha4);
    j["C4"] = optional_json(c.C4);
    j["imax_list"] = c.imax_list;
    j["self_test"] = c.self_test;
    j["dx_min"] = c.dx_min;
    j["dx_max"] = c.dx_max;
    j["dt_min"] = c.dt_min;
    j["dt_max"] = c.dt_max;
    j["nx"] = c.nx;
    j["nt"] = c.nt;
    j["line_imax"] = c.line_imax;
    j["optimum"] = c.optimum;
    j["optimum_levels"] = c.optimum_levels;
    j["out"] = c.out;
    j["csv"] = c.csv;
    j["line_csv"] = c.line_csv;
    j["field_csv"] = c.field_csv;
    return j;
}

json grid_json(const GridSpec& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"i_max", g.i_max}, {"k_max", g.k_max},
            {"dx", g.dx},       {"dt", g.dt},       {"t_max", g.t_max}};
}

// ---------------------------------------------------------------- config file

std::string flag_name(const std::string& key) {
    std::string s = "--" + key;
    std::replace(s.begin(), s.end(), '_', '-');
    return s;
}

// Copies values from the JSON file into cfg for every key whose flag was not
// given on the command line.
void apply_config_file(const std::string& path, RunConfig& cfg, const CLI::App& sub) {
    std::ifstream f(path);
    if (!f) {
        throw std::invalid_argument("cannot read config file " + path);
    }
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config file must hold a JSON object");
    }
    auto given = [&](const std::string& key) {
        const CLI::Option* o = sub.get_option_no_throw(flag_name(key));
        return o != nullptr && o->count() > 0;
    };
    std::map<std::string, std::function<void(const json&)>> setters;
    auto plain = [&](const std::string& key, auto& field) {
        setters[key] = [&field](const json& v) { field = v.get<std::decay_t<decltype(field)>>(); };
    };
    auto maybe = [&](const std::string& key, auto& field) {
        setters[key] = [&field](const json& v) {
            if (v.is_null()) {
                field.reset();
            } else {
                field = v.get<typename std::decay_t<decltype(field)>::value_type>();
            }
        };
    };
    plain("case", cfg.case_name);
    plain("p0_table", cfg.p0_table);
    plain("imax", cfg.imax);
    maybe("kmax", cfg.kmax);
    maybe("dt", cfg.dt);
    plain("tmax", cfg.tmax);
    plain("xi", cfg.xi);
    plain("c", cfg.c);
    plain("oracle", cfg.oracle);
    plain("oracle_threshold", cfg.oracle_threshold);
    plain("allow_fallback", cfg.allow_fallback);
    plain("reconstruct", cfg.reconstruct);
    plain("exact", cfg.exact);
    maybe("alpha3", cfg.alpha3);
    maybe("C3", cfg.C3);
    maybe("alpha4", cfg.alpha4);
    maybe("C4", cfg.C4);
    plain("imax_list", cfg.imax_list);
    plain("self_test", cfg.self_test);
    plain("dx_min", cfg.dx_min);
    plain("dx_max", cfg.dx_max);
    plain("dt_min", cfg.dt_min);
    plain("dt_max", cfg.dt_max);
    plain("nx", cfg.nx);
    plain("nt", cfg.nt);
    plain("line_imax", cfg.line_imax);
    plain("optimum", cfg.optimum);
    plain("optimum_levels", cfg.optimum_levels);
    plain("out", cfg.out);
    plain("csv", cfg.csv);
    plain("line_csv", cfg.line_csv);
    plain("field_csv", cfg.field_csv);

    for (const auto& [key, value] : j.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
        if (given(key)) {
            continue;
        }
        try {
            it->second(value);
        } catch (const json::exception&) {
            throw std::invalid_argument("config key '" + key + "' has the wrong type");
        }
    }
}

// ---------------------------------------------------------------- problem setup

void validate_config(const RunConfig& c) {
    validate(PhysicsParams{c.c, c.xi});
    if (!(c.tmax > 0) || !std::isfinite(c.tmax)) {
        throw std::invalid_argument("tmax must be positive");
    }
    if (c.dt && c.kmax) {
        throw std::invalid_argument("give either --dt or --kmax, not both");
    }
    if (c.kmax && *c.kmax < 1) {
        throw std::invalid_argument("kmax must be at least 1");
    }
    if (c.case_name != "bump") {
        throw std::invalid_argument("unknown case '" + c.case_name + "' (available: bump)");
    }
    if (c.oracle != "auto" && c.oracle != "rational" && c.oracle != "mp256") {
        throw std::invalid_argument("oracle must be auto, rational or mp256");
    }
    if (c.reconstruct != "auto" && c.reconstruct != "on" && c.reconstruct != "off") {
        throw std::invalid_argument("reconstruct must be auto, on or off");
    }
    if (!(c.oracle_threshold > 0)) {
        throw std::invalid_argument("oracle threshold must be positive");
    }
    if (!(c.dx_min > 0 && c.dx_min <= c.dx_max && c.dt_min > 0 && c.dt_min <= c.dt_max)) {
        throw std::invalid_argument("sampling ranges must be positive and nonempty");
    }
    if (c.nx < 1 || c.nt < 1 || c.optimum_levels < 1) {
        throw std::invalid_argument("sample counts must be positive");
    }
}

PhysicsParams physics(const RunConfig& c) { return PhysicsParams{c.c, c.xi}; }

AnalyticCase analytic_case(const RunConfig& c) {
    AnalyticCase ac = bump_case();
    ac.c = c.c;
    if (c.alpha3) ac.regularity.alpha3 = *c.alpha3;
    if (c.C3) ac.regularity.C3 = *c.C3;
    if (c.alpha4) ac.regularity.alpha4 = *c.alpha4;
    if (c.C4) ac.regularity.C4 = *c.C4;
    validate(ac);
    return ac;
}

std::vector<double> read_table(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::invalid_argument("cannot read p0 table " + path);
    }
    std::vector<double> values;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream in(line);
        std::string tok;
        while (in >> tok) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) {
                throw std::invalid_argument("p0 table entry '" + tok + "' is not a number");
            }
            values.push_back(v);
        }
    }
    return values;
}

GridSpec grid_for(const RunConfig& c, int imax) {
    const PhysicsParams p = physics(c);
    if (imax < 2) {
        throw std::invalid_argument("imax must be at least 2");
    }
    const double dx = 1.0 / imax;
    double dt;
    if (c.dt) {
        dt = *c.dt;
    } else if (c.kmax) {
        dt = c.tmax / *c.kmax;
    } else {
        dt = cfl_line_dt(dx, p);
    }
    return make_grid(0.0, 1.0, imax, c.tmax, dt);
}

struct Problem {
    GridSpec grid;
    SchemeInputs<double> inputs;
    std::optional<AnalyticCase> analytic;
};

// Builds the grid and the discrete data for single-run commands.
Problem problem(const RunConfig& c, const CLI::App& sub) {
    Problem pr;
    if (!c.p0_table.empty()) {
        std::vector<double> p0 = read_table(c.p0_table);
        const CLI::Option* o = sub.get_option_no_throw("--imax");
        const bool imax_given = o != nullptr && o->count() > 0;
        const int imax = imax_given ? c.imax : static_cast<int>(p0.size()) - 1;
        if (static_cast<int>(p0.size()) != imax + 1) {
            throw std::invalid_argument("p0 table has " + std::to_string(p0.size()) + " entries, expected imax + 1 = " +
                                        std::to_string(imax + 1));
        }
        pr.grid = grid_for(c, imax);
        pr.inputs = SchemeInputs<double>::from_position(std::move(p0));
        validate_inputs(pr.inputs, pr.grid);
        return pr;
    }
    pr.analytic = analytic_case(c);
    pr.grid = grid_for(c, c.imax);
    pr.inputs = sample_inputs(*pr.analytic, pr.grid);
    return pr;
}

template <SchemeNumber T>
SchemeInputs<T> convert_inputs(const SchemeInputs<double>& in) {
    SchemeInputs<T> out;
    for (double v : in.p0) out.p0.push_back(from_double<T>(v));
    for (double v : in.p1) out.p1.push_back(from_double<T>(v));
    if (in.has_source()) out.source = convert_field<T>(*in.source);
    return out;
}

double slope_or_nan(const std::vector<Resolution>& res, const std::vector<double>& errs) {
    if (res.size() < 3) return std::nan("");
    return order_fit(res, errs);
}

// ---------------------------------------------------------------- commands

struct Outcome {
    json result;
    int code = kSuccess;
};

Outcome cmd_solve(const RunConfig& c, const CLI::App& sub) {
    const Problem pr = problem(c, sub);
    const GridSpec& g = pr.grid;
    const PhysicsParams p = physics(c);
    const Field2D<double> f = solve_scheme<double>(g, p, pr.inputs);
    const std::vector<double> energy = energy_series(f, p.c, g);

    double max_abs = 0;
    for (double v : f.values()) max_abs = std::max(max_abs, std::fabs(v));

    Outcome o;
    o.result["grid"] = grid_json(g);
    o.result["cfl"] = cfl_check(g, p);
    o.result["cfl_number"] = p.c * g.dt / g.dx;
    o.result["a"] = working_cfl_coefficient(g, p);
    o.result["final_norm"] = norm_dx(f.slice(g.k_max), g);
    o.result["max_abs"] = max_abs;
    o.result["energy_drift"] = number(relative_energy_drift(energy));
    json series = json::array();
    for (double e : energy) series.push_back(number(e));
    o.result["energy"] = std::move(series);

    CsvRows rows;
    for (int k = 0; k < g.k_max; ++k) rows.push_back({cell(k), cell(energy[static_cast<std::size_t>(k)])});
    write_csv(c.csv, {"k", "energy"}, rows);
    if (!c.field_csv.empty()) {
        CsvRows frows;
        for (int k = 0; k <= g.k_max; ++k) {
            for (int i = 0; i <= g.i_max; ++i) {
                frows.push_back({cell(i), cell(k), cell(g.x(i)), cell(g.t(k)), cell(f(i, k))});
            }
        }
        write_csv(c.field_csv, {"i", "k", "x", "t", "p"}, frows);
    }
    return o;
}

Outcome cmd_converge(const RunConfig& c) {
    if (c.imax_list.size() < 3) {
        throw std::invalid_argument("the sweep needs at least 3 resolutions");
    }
    if (c.dt || c.kmax) {
        throw std::invalid_argument("the sweep places dt on the CFL line; --dt and --kmax do not apply");
    }
    const PhysicsParams p = physics(c);
    std::vector<Resolution> res;
    std::vector<double> errs;
    CsvRows rows;
    json points = json::array();
    const std::optional<AnalyticCase> ac = c.self_test ? std::nullopt : std::optional(analytic_case(c));
    for (int n : c.imax_list) {
        const GridSpec g = grid_for(c, n);
        // The self-test replaces the solver by the manufactured error dx^2.
        const double err = c.self_test ? g.dx * g.dx : method_error(*ac, g, p).max_norm();
        res.push_back({g.dx, g.dt});
        errs.push_back(err);
        rows.push_back({cell(g.dx), cell(g.dt), cell(err)});
        points.push_back({{"imax", n}, {"dx", g.dx}, {"dt", g.dt}, {"max_k_norm_e", err}});
    }
    write_csv(c.csv, {"dx", "dt", "max_k_norm_e"}, rows);
    Outcome o;
    o.result["self_test"] = c.self_test;
    o.result["points"] = std::move(points);
    o.result["order"] = order_fit(res, errs);
    return o;
}

template <SchemeNumber T>
Outcome roundoff_in(const RunConfig& c, const Problem& pr, bool reconstruct) {
    const GridSpec& g = pr.grid;
    const PhysicsParams p = physics(c);
    const RoundoffStudy<T> study = run_roundoff_study<T>(g, p, pr.inputs, reconstruct);
    const std::vector<RoundoffLevel> levels = summarize_levels(study, g);

    bool delta_ok = true, global_ok = true;
    double max_delta = 0, worst_ratio = 0;
    CsvRows rows;
    for (const auto& lvl : levels) {
        delta_ok = delta_ok && lvl.max_abs_delta <= study.delta_bound;
        global_ok = global_ok && lvl.max_abs_global <= lvl.bound;
        max_delta = std::max(max_delta, lvl.max_abs_delta);
        worst_ratio = std::max(worst_ratio, lvl.max_abs_global / lvl.bound);
        rows.push_back({cell(lvl.k), cell(lvl.max_abs_delta), cell(lvl.max_abs_global), cell(lvl.global_norm_dx),
                        cell(lvl.bound)});
    }
    write_csv(c.csv, {"k", "max_abs_delta", "max_abs_global", "global_norm_dx", "bound"}, rows);

    Outcome o;
    o.result["grid"] = grid_json(g);
    o.result["preconditions"] = {{"a_error", study.preconditions.a_error},
                                 {"a_ok", study.preconditions.a_ok},
                                 {"max_abs_value", study.preconditions.max_abs_value},
                                 {"range_ok", study.preconditions.range_ok}};
    o.result["max_abs_delta"] = max_delta;
    o.result["delta_bound"] = study.delta_bound;
    o.result["delta_within_bound"] = delta_ok;
    o.result["global_within_bound"] = global_ok;
    o.result["max_global_to_bound_ratio"] = worst_ratio;

    bool reconstruction_failed = false;
    if (!study.reconstruction) {
        o.result["reconstruction_exact"] = nullptr;
    } else if constexpr (std::is_same_v<T, Rational>) {
        const bool exact = *study.reconstruction == study.global;
        o.result["reconstruction_exact"] = exact;
        reconstruction_failed = !exact;
    } else {
        // Only the rational oracle can decide exact equality.
        o.result["reconstruction_exact"] = nullptr;
        o.result["reconstruction_max_abs_difference"] = max_abs_difference(*study.reconstruction, study.global);
    }

    // The local bound is only claimed where its preconditions hold.
    const bool violation =
        !global_ok || reconstruction_failed || (study.preconditions.ok() && !delta_ok);
    o.code = violation ? kPropertyViolation : kSuccess;
    return o;
}

Outcome cmd_roundoff(const RunConfig& c, const CLI::App& sub) {
    const Problem pr = problem(c, sub);
    const GridSpec& g = pr.grid;
    const double cells = static_cast<double>(g.nodes()) * static_cast<double>(g.steps());

    std::string oracle = c.oracle;
    bool fell_back = false;
    if (oracle == "auto") {
        oracle = cells <= c.oracle_threshold ? "rational" : "mp256";
    } else if (oracle == "rational" && cells > c.oracle_threshold) {
        if (!c.allow_fallback) {
            throw std::invalid_argument("grid has " + std::to_string(static_cast<long long>(cells)) +
                                        " cells, above the rational oracle threshold; use --oracle mp256 or "
                                        "--allow-fallback");
        }
        oracle = "mp256";
        fell_back = true;
    }
    bool reconstruct = c.reconstruct == "on";
    if (c.reconstruct == "auto") {
        reconstruct = static_cast<double>(g.i_max) * g.k_max * g.k_max <= 1e5;
    }

    Outcome o = oracle == "rational" ? roundoff_in<Rational>(c, pr, reconstruct)
                                     : roundoff_in<Real256>(c, pr, reconstruct);
    o.result["oracle"] = oracle;
    o.result["oracle_fallback"] = fell_back;
    return o;
}

Outcome cmd_energy(const RunConfig& c, const CLI::App& sub) {
    const Problem pr = problem(c, sub);
    const GridSpec& g = pr.grid;
    const PhysicsParams p = physics(c);
    EnergyReport report;
    double tol = 0.0;
    if (c.exact) {
        const auto in = convert_inputs<Rational>(pr.inputs);
        report = energy_bounds_check(solve_scheme<Rational>(g, p, in), in, p, g);
    } else {
        tol = 1e-10;
        report = energy_bounds_check(solve_scheme<double>(g, p, pr.inputs), pr.inputs, p, g, tol);
    }
    CsvRows rows;
    for (const auto& r : report.rows) {
        rows.push_back({cell(r.k), cell(r.energy), cell(r.over_lhs), cell(r.over_rhs), cell(r.under_lhs),
                        cell(r.over_ok), cell(r.under_ok), cell(r.nonnegative)});
    }
    write_csv(c.csv, {"k", "energy", "over_lhs", "over_rhs", "under_lhs", "over_ok", "under_ok", "nonnegative"},
              rows);
    Outcome o;
    o.result["grid"] = grid_json(g);
    o.result["precision"] = c.exact ? "oracle_rational" : "working64";
    o.result["tolerance"] = tol;
    o.result["relative_drift"] = report.relative_drift;
    o.result["all_ok"] = report.all_ok();
    o.code = report.all_ok() ? kSuccess : kPropertyViolation;
    return o;
}

Outcome cmd_bound(const RunConfig& c) {
    if (c.dt || c.kmax) {
        throw std::invalid_argument("the bound command places dt itself; --dt and --kmax do not apply");
    }
    const PhysicsParams p = physics(c);
    const AnalyticCase ac = analytic_case(c);
    const BoundConstants k = bound_constants(ac, p, c.tmax);
    const double ratio = (1.0 - c.xi) / c.c;

    // Left panel: log-spaced surface.
    auto logspace = [](double lo, double hi, int n, int j) {
        return n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * j / (n - 1));
    };
    CsvRows surface;
    int valid_points = 0;
    for (int jt = 0; jt < c.nt; ++jt) {
        const double dt = logspace(c.dt_min, c.dt_max, c.nt, jt);
        for (int jx = 0; jx < c.nx; ++jx) {
            const double dx = logspace(c.dx_min, c.dx_max, c.nx, jx);
            const bool valid = total_bound_valid(dx, dt, k);
            valid_points += valid;
            surface.push_back({cell(dx), cell(dt), valid ? cell(total_error_bound(dx, dt, k)) : std::string(),
                               cell(c.c * dt / dx <= 1.0 - c.xi), cell(valid)});
        }
    }
    write_csv(c.csv, {"dx", "dt", "bound", "cfl_ok", "valid"}, surface);

    // Right panel: the CFL line, bound against the measured total error.
    CsvRows line;
    std::vector<Resolution> res;
    std::vector<double> bounds, effs;
    bool below = true;
    json points = json::array();
    for (int n : c.line_imax) {
        const GridSpec g = grid_for(c, n);
        const bool valid = total_bound_valid(g.dx, g.dt, k);
        const EffectiveError e = effective_total_error(ac, g, p);
        const double b = valid ? total_error_bound(g.dx, g.dt, k) : std::nan("");
        if (valid) {
            below = below && e.max_norm < b;
            res.push_back({g.dx, g.dt});
            bounds.push_back(b);
            effs.push_back(e.max_norm);
        }
        line.push_back({cell(g.dx), cell(g.dt), valid ? cell(b) : std::string(), cell(e.max_norm), cell(valid)});
        points.push_back({{"imax", n}, {"dx", g.dx}, {"dt", g.dt}, {"bound", number(b)},
                          {"effective_error", e.max_norm}, {"valid", valid}});
    }
    write_csv(c.line_csv, {"dx", "dt", "bound", "effective_error", "valid"}, line);

    const LineMinimum m = bound_minimum_on_line(k, ratio);
    Outcome o;
    o.result["constants"] = {{"alpha_e", k.alpha_e},     {"C_e", k.C_e},         {"mu", k.mu},
                             {"C_prime", k.C_prime},     {"C_second", k.C_second}, {"alpha_Delta", k.alpha_Delta},
                             {"C_Delta", k.C_Delta}};
    o.result["surface_points"] = c.nx * c.nt;
    o.result["surface_valid_points"] = valid_points;
    o.result["line_minimum"] = {{"dx", m.dx}, {"dt", m.dt}, {"bound", m.bound}, {"interior", m.interior}};
    o.result["line"] = std::move(points);
    o.result["effective_below_bound"] = below;
    const double s_eff = slope_or_nan(res, effs);
    const double s_bound = slope_or_nan(res, bounds);
    o.result["slopes"] = {{"effective", number(s_eff)},
                          {"bound", number(s_bound)},
                          {"difference", number(std::fabs(s_eff - s_bound))}};

    if (c.optimum) {
        const int n = static_cast<int>(std::lround(k.length / m.dx));
        const GridSpec g = grid_for(c, n);
        const EffectiveError e = effective_total_error(ac, g, p, c.optimum_levels);
        const double b = total_error_bound(g.dx, g.dt, k);
        below = below && e.max_norm < b;
        o.result["optimum"] = {{"imax", n},
                               {"kmax", g.k_max},
                               {"dx", g.dx},
                               {"dt", g.dt},
                               {"bound", b},
                               {"effective_error", e.max_norm},
                               {"worst_k", e.worst_k},
                               {"levels_observed", e.levels_observed},
                               {"gap", b / e.max_norm}};
        o.result["effective_below_bound"] = below;
    }
    o.code = below ? kSuccess : kPropertyViolation;
    return o;
}

// ---------------------------------------------------------------- wiring

void add_grid_options(CLI::App* s, RunConfig& cfg) {
    s->add_option("--case", cfg.case_name, "built-in test case (bump)");
    s->add_option("--imax", cfg.imax, "number of space intervals");
    s->add_option_function<int>("--kmax", [&cfg](const int& v) { cfg.kmax = v; }, "number of time steps (dt = tmax/kmax)");
    s->add_option_function<double>("--dt", [&cfg](const double& v) { cfg.dt = v; }, "time step");
    s->add_option("--tmax", cfg.tmax, "final time");
    s->add_option("--xi", cfg.xi, "CFL margin, c dt/dx <= 1 - xi");
    s->add_option("--c", cfg.c, "wave velocity");
}

void add_regularity_options(CLI::App* s, RunConfig& cfg) {
    s->add_option_function<double>("--alpha3", [&cfg](const double& v) { cfg.alpha3 = v; });
    s->add_option_function<double>("--C3", [&cfg](const double& v) { cfg.C3 = v; });
    s->add_option_function<double>("--alpha4", [&cfg](const double& v) { cfg.alpha4 = v; });
    s->add_option_function<double>("--C4", [&cfg](const double& v) { cfg.C4 = v; });
}

void add_output_options(CLI::App* s, RunConfig& cfg, std::string& config_path) {
    s->add_option("--config", config_path, "JSON config file; flags override its values");
    s->add_option("--out", cfg.out, "write the JSON summary to this file instead of stdout");
    s->add_option("--csv", cfg.csv, "CSV output path");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Three-point wave equation scheme: solves, error analysis and bounds", "wavecert"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string config_path;

    CLI::App* solve = app.add_subcommand("solve", "run the scheme and report norms and energy");
    add_grid_options(solve, cfg);
    add_output_options(solve, cfg, config_path);
    solve->add_option("--p0-table", cfg.p0_table, "initial position values at the nodes");
    solve->add_option("--field-csv", cfg.field_csv, "write the whole solution field");

    CLI::App* converge = app.add_subcommand("converge", "method error sweep along the CFL line");
    add_grid_options(converge, cfg);
    add_output_options(converge, cfg, config_path);
    converge->add_option("--imax-list", cfg.imax_list, "space resolutions")->delimiter(',');
    converge->add_flag("--self-test", cfg.self_test, "fit the manufactured error dx^2 instead of solving");

    CLI::App* roundoff = app.add_subcommand("roundoff", "local and global round-off errors against an oracle");
    add_grid_options(roundoff, cfg);
    add_output_options(roundoff, cfg, config_path);
    roundoff->add_option("--p0-table", cfg.p0_table, "initial position values at the nodes");
    roundoff->add_option("--oracle", cfg.oracle, "auto, rational or mp256");
    roundoff->add_option("--oracle-threshold", cfg.oracle_threshold, "largest (imax+1)(kmax+1) for the rational oracle");
    roundoff->add_flag("--allow-fallback", cfg.allow_fallback, "use mp256 when the rational oracle is too large");
    roundoff->add_option("--reconstruct", cfg.reconstruct, "auto, on or off: rebuild Delta from delta by convolution");

    CLI::App* bound = app.add_subcommand("bound", "total error bound surface and CFL line");
    add_grid_options(bound, cfg);
    add_output_options(bound, cfg, config_path);
    add_regularity_options(bound, cfg);
    bound->add_option("--line-csv", cfg.line_csv, "CSV for the CFL line");
    bound->add_option("--dx-min", cfg.dx_min);
    bound->add_option("--dx-max", cfg.dx_max);
    bound->add_option("--dt-min", cfg.dt_min);
    bound->add_option("--dt-max", cfg.dt_max);
    bound->add_option("--nx", cfg.nx, "surface samples in dx");
    bound->add_option("--nt", cfg.nt, "surface samples in dt");
    bound->add_option("--line-imax", cfg.line_imax, "resolutions on the CFL line")->delimiter(',');
    bound->add_flag("--optimum", cfg.optimum, "also measure the total error at the bound's optimal grid");
    bound->add_option("--optimum-levels", cfg.optimum_levels, "time levels sampled at the optimal grid");

    CLI::App* energy = app.add_subcommand("energy", "discrete energy series and its estimates");
    add_grid_options(energy, cfg);
    add_output_options(energy, cfg, config_path);
    energy->add_option("--p0-table", cfg.p0_table, "initial position values at the nodes");
    energy->add_flag("--exact", cfg.exact, "solve and check in exact rational arithmetic");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidationError;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    try {
        if (!config_path.empty()) {
            apply_config_file(config_path, cfg, *sub);
        }
        validate_config(cfg);

        Outcome o;
        if (sub == solve) {
            o = cmd_solve(cfg, *sub);
        } else if (sub == converge) {
            o = cmd_converge(cfg);
        } else if (sub == roundoff) {
            o = cmd_roundoff(cfg, *sub);
        } else if (sub == bound) {
            o = cmd_bound(cfg);
        } else {
            o = cmd_energy(cfg, *sub);
        }

        json summary;
        summary["command"] = cfg.command;
        summary["config"] = config_json(cfg);
        summary["result"] = std::move(o.result);
        summary["exit_code"] = o.code;
        const std::string text = summary.dump(2) + "\n";
        if (cfg.out.empty()) {
            out << text;
        } else {
            std::ofstream f(cfg.out);
            if (!f) {
                throw std::invalid_argument("cannot open " + cfg.out + " for writing");
            }
            f << text;
        }
        if (o.code == kPropertyViolation) {
            err << "wavecert: property violation, see the summary\n";
        }
        return o.code;
    } catch (const std::overflow_error& e) {
        err << "wavecert: " << e.what() << '\n';
        return kPropertyViolation;
    } catch (const std::exception& e) {
        err << "wavecert: " << e.what() << '\n';
        return kValidationError;
    }
}

}  // namespace wavecert::cli
