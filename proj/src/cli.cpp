#include "penrose/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "penrose/asymptotics.hpp"
#include "penrose/geometry.hpp"
#include "penrose/graph.hpp"
#include "penrose/mass.hpp"
#include "penrose/perturbation.hpp"
#include "penrose/quadrature.hpp"
#include "penrose/reflection.hpp"
#include "penrose/reilly.hpp"
#include "penrose/schwarzschild.hpp"
#include "penrose/util.hpp"

namespace penrose::cli {

namespace {

const std::map<std::string, Command>& command_names() {
    static const std::map<std::string, Command> names{
        {"schwarzschild", Command::schwarzschild},
        {"mass", Command::mass},
        {"verify-reilly", Command::verify_reilly},
        {"reflect-check", Command::reflect_check},
        {"fit-asymptotics", Command::fit_asymptotics},
        {"penrose", Command::penrose},
        {"perturb", Command::perturb},
        {"suite", Command::suite},
    };
    return names;
}

// keys accepted by every command
const std::set<std::string> kCommonKeys{"n",      "mass",   "quad-order", "tol",    "radii",
                                        "out",    "format", "config",     "threads", "timing"};

const std::set<std::string>& keys_for(Command c) {
    static const std::map<Command, std::set<std::string>> extra{
        {Command::schwarzschild, {"r", "r-max", "samples"}},
        {Command::mass, {"truncation", "fit-terms"}},
        {Command::verify_reilly, {"h"}},
        {Command::reflect_check, {"h", "half-width"}},
        {Command::fit_asymptotics, {"window", "samples"}},
        {Command::penrose, {"horizon", "fit-terms"}},
        {Command::perturb, {"amplitudes", "center", "bump-radius", "truncation"}},
        {Command::suite, {}},
    };
    return extra.at(c);
}

std::map<std::string, std::string> defaults_for(Command c) {
    std::map<std::string, std::string> d{{"n", "3"},      {"mass", "0.5"},  {"quad-order", "0"},
                                         {"out", "-"},    {"format", "json"}, {"threads", "0"}};
    switch (c) {
        case Command::schwarzschild:
            d["r"] = "2.0";
            d["r-max"] = "0";
            d["samples"] = "50";
            break;
        case Command::mass:
            d["truncation"] = "20";
            d["fit-terms"] = "2";
            d["tol"] = "5e-3";
            break;
        case Command::verify_reilly:
            d["radii"] = "1.5,2,5,10";
            d["tol"] = "1e-3";
            break;
        case Command::reflect_check:
            d["h"] = "1e-3";
            d["half-width"] = "0";
            d["tol"] = "1e-6";
            break;
        case Command::fit_asymptotics:
            d["window"] = "20,200";
            d["samples"] = "12";
            d["tol"] = "1e-3";
            break;
        case Command::penrose:
            d["horizon"] = "round";
            d["fit-terms"] = "3";
            d["tol"] = "1e-6";
            break;
        case Command::perturb:
            d["amplitudes"] = "0,0.01,0.05";
            d["center"] = "3,0,0";
            d["bump-radius"] = "1.0";
            d["truncation"] = "10";
            d["tol"] = "1e-2";
            break;
        case Command::suite:
            break;
    }
    return d;
}

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("invalid numeric value for --" + key + ": '" + value + "'");
    }
}

nlohmann::ordered_json check_to_json(const checks::Check& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["expected"] = c.expected;
    j["actual"] = c.actual;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

}  // namespace

const char* to_string(Command c) {
    for (const auto& [name, cmd] : command_names())
        if (cmd == c) return name.c_str();
    return "unknown";
}

int Invocation::get_int(const std::string& key) const {
    const double v = parse_double(key, params.at(key));
    if (v != std::floor(v)) throw UsageError("--" + key + " expects an integer");
    return static_cast<int>(v);
}

double Invocation::get_double(const std::string& key) const {
    return parse_double(key, params.at(key));
}

std::string Invocation::get(const std::string& key) const { return params.at(key); }

std::vector<double> Invocation::get_list(const std::string& key) const {
    std::vector<double> values;
    std::stringstream ss(params.at(key));
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) values.push_back(parse_double(key, item));
    if (values.empty()) throw UsageError("--" + key + " expects a comma-separated list");
    return values;
}

bool Invocation::get_flag(const std::string& key) const {
    const auto it = params.find(key);
    return it != params.end() && it->second != "0" && it->second != "false";
}

std::string usage_text() {
    std::ostringstream os;
    os << "usage: penrose-lab [command] [--key value ...]\n"
       << "commands: schwarzschild | mass | verify-reilly | reflect-check |\n"
       << "          fit-asymptotics | penrose | perturb | suite (default)\n"
       << "common flags: --n INT  --mass REAL  --quad-order INT  --radii a,b,c\n"
       << "              --out PATH|-  --format json|csv  --config FILE\n"
       << "              --threads INT  --tol REAL  --timing\n"
       << "exit codes: 0 checks pass, 1 check failure, 2 usage error, 3 I/O error\n";
    return os.str();
}

Invocation parse_invocation(const std::vector<std::string>& args) {
    Invocation inv;
    std::size_t i = 0;
    if (!args.empty() && !args[0].starts_with("--")) {
        const auto it = command_names().find(args[0]);
        if (it == command_names().end()) throw UsageError("unknown command: " + args[0]);
        inv.command = it->second;
        i = 1;
    }

    std::map<std::string, std::string> flags;
    for (; i < args.size(); ++i) {
        if (!args[i].starts_with("--")) throw UsageError("unexpected argument: " + args[i]);
        const std::string key = args[i].substr(2);
        if (key == "timing") {
            flags[key] = "1";
            continue;
        }
        if (i + 1 >= args.size()) throw UsageError("missing value for --" + key);
        flags[key] = args[++i];
    }

    const auto& extra = keys_for(inv.command);
    auto validate_key = [&](const std::string& key) {
        if (!kCommonKeys.count(key) && !extra.count(key))
            throw UsageError("unknown flag --" + key + " for command " +
                             std::string(to_string(inv.command)));
    };

    inv.params = defaults_for(inv.command);
    if (auto it = flags.find("config"); it != flags.end()) {
        for (const auto& [key, value] : load_config(it->second)) {
            validate_key(key);
            inv.params[key] = value;
        }
    }
    for (const auto& [key, value] : flags) {
        validate_key(key);
        inv.params[key] = value;
    }

    const int n = inv.get_int("n");
    if (n < 3 || n > 9) throw UsageError("--n must be in [3, 9]");
    if (!(inv.get_double("mass") > 0.0)) throw UsageError("--mass must be > 0");
    return inv;
}

namespace {

Report run_schwarzschild(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    const double r = inv.get_double("r");
    SchwarzschildProfile p(n, m);

    report.inputs = {{"n", n}, {"mass", m}, {"r", r}};
    const ProfileJet pj = profile_jet(p, r);
    report.results["horizon_radius"] = p.r_m;
    report.results["u"] = pj.u;
    report.results["u_prime"] = pj.u_prime;
    report.results["u_double_prime"] = pj.u_double_prime;

    const double r_max = inv.get_double("r-max");
    const int samples = inv.get_int("samples");
    std::vector<double> radii;
    const double hi = r_max > p.r_m ? r_max : 10.0 * p.r_m;
    for (int i = 0; i < samples; ++i)
        radii.push_back(p.r_m * 1.01 * std::pow(hi / (1.01 * p.r_m), double(i) / (samples - 1)));
    const RadialProfileTable table = sample_profile(p, radii);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < table.r.size(); ++i)
        rows.push_back({{"r", table.r[i]},
                        {"u", table.u[i]},
                        {"u_prime", table.u_prime[i]},
                        {"u_double_prime", table.u_double_prime[i]}});
    report.results["table"] = std::move(rows);

    const double residual = pj.u_prime * pj.u_prime * (std::pow(r, n - 2) - 2 * m) - 2 * m;
    report.checks.push_back(checks::absolute("profile equation residual", 0.0, residual, 1e-12));
    const ShapeData sd = shape_data(graph_jet(p, r * Eigen::VectorXd::Unit(n, 0)));
    report.checks.push_back(checks::absolute("S_2 at the sample point", 0.0, sd.s(2), 1e-10));
    report.checks.push_back(checks::absolute(
        "ellipticity (1 = elliptic_positive)", 1.0,
        sd.ellipticity == Ellipticity::elliptic_positive ? 1.0 : 0.0, 0.0));
    return report;
}

Report run_mass(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    SchwarzschildProfile p(n, m);
    SchwarzschildGraph g(p);

    MassFormulaOptions opts;
    opts.quad_order = inv.get_int("quad-order");
    opts.adm_fit_terms = inv.get_int("fit-terms");
    if (inv.params.count("radii"))
        opts.adm_radii = inv.get_list("radii");
    else
        for (double k : {10.0, 20.0, 40.0, 80.0}) opts.adm_radii.push_back(k * p.r_m);

    const double truncation = inv.get_double("truncation") * p.r_m;
    const MassReport mr = mass_formula_terms(g, HorizonShape::round_sphere(n, p.r_m), truncation, opts);
    const int effective_order =
        opts.quad_order > 0 ? opts.quad_order : default_sphere_order(n);

    report.inputs = {{"n", n}, {"mass", m}, {"truncation", truncation}};
    report.results = nlohmann::ordered_json::parse(to_json(mr));
    report.results["quad_order"] = effective_order;

    const double tol = inv.get_double("tol");
    report.checks.push_back(checks::relative("extrapolated ADM mass", m, mr.adm, tol));
    report.checks.push_back(checks::absolute("bulk term (scalar-flat)", 0.0, mr.bulk, 1e-8));
    report.checks.push_back(
        checks::absolute("mass formula residual / adm", 0.0,
                         std::abs(mr.residual_massform) / std::abs(mr.adm), 1e-2));
    return report;
}

Report run_verify_reilly(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    SchwarzschildProfile p(n, m);
    SchwarzschildGraph g(p);
    const int order = inv.get_int("quad-order");
    const double tol = inv.get_double("tol");

    report.inputs = {{"n", n}, {"mass", m}};
    nlohmann::ordered_json flux_rows = nlohmann::ordered_json::array();
    for (double k : inv.get_list("radii")) {
        const FluxRecord rec = normalized_boundary_flux(g, k * p.r_m, order);
        flux_rows.push_back(
            {{"r", rec.r}, {"flux", rec.normalized_flux}, {"quad_order", rec.quad_order}});
        report.checks.push_back(checks::relative(
            "normalized flux at " + format_double(k) + " r_m", m, rec.normalized_flux, tol));
    }
    report.results["flux_records"] = std::move(flux_rows);
    report.results["horizon_flux"] = horizon_flux(p.r_m, n);
    report.checks.push_back(checks::absolute("horizon flux = 0.5 r_m^{n-2}",
                                             0.5 * std::pow(p.r_m, n - 2),
                                             horizon_flux(p.r_m, n), 0.0));

    // pointwise divergence identity at a mid-range point
    const Eigen::VectorXd x = 2.0 * p.r_m * Eigen::VectorXd::Unit(n, 0);
    const double h = inv.params.count("h") ? inv.get_double("h") : 1e-4 * x.norm();
    report.results["divergence_residual"] = divergence_residual(g, x, h);
    report.checks.push_back(checks::absolute("divergence residual at 2 r_m", 0.0,
                                             divergence_residual(g, x, h), 1e-6));
    return report;
}

Report run_reflect_check(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    SchwarzschildProfile p(n, m);
    const double h = inv.get_double("h");
    double half_width = inv.get_double("half-width");
    if (half_width <= 0.0) half_width = 8 * h;

    Eigen::VectorXd base = Eigen::VectorXd::Zero(n);
    base(0) = p.r_m;
    const HorizonChart chart = build_doubled_chart(p, base, half_width, h);
    const MatchingReport rep = second_derivative_matching(chart);
    const DecompositionTerms t0 = decomposition_terms(chart, Eigen::VectorXd::Zero(n), true);

    report.inputs = {{"n", n}, {"mass", m}, {"h", h}, {"half_width", chart.half_width()}};
    report.results["u_nn_plus"] = rep.u_nn_plus;
    report.results["u_nn_minus"] = rep.u_nn_minus;
    report.results["jump_base"] = rep.jump_base;
    report.results["max_jump_gamma0"] = rep.max_jump_gamma0;
    report.results["max_mixed_jump"] = rep.max_mixed_jump;
    report.results["decomposition"] = nlohmann::ordered_json::parse(to_json(t0));

    const double tol = inv.get_double("tol");
    report.checks.push_back(checks::absolute("u_nn jump at the base point", 0.0, rep.jump_base, tol));
    report.checks.push_back(
        checks::absolute("mixed-derivative jump", 0.0, rep.max_mixed_jump, tol));
    if (n == 3) {
        report.checks.push_back(checks::absolute("D at origin", -2.0, t0.d, 1e-10));
        report.checks.push_back(checks::absolute("E at origin", 1.0, t0.e, 1e-10));
        report.checks.push_back(checks::absolute("F at origin", 0.0, t0.f, 1e-10));
        report.checks.push_back(
            checks::absolute("sum u_alpha_alpha at origin", -2.0, t0.sum_u_alpha_alpha, 1e-10));
        report.checks.push_back(
            checks::absolute("u_nn at origin", 1.0 / (4.0 * m), t0.u_nn, 1e-8));
    }
    report.checks.push_back(checks::absolute("decomposition residual", 0.0, t0.residual, 1e-8));
    return report;
}

Report run_fit_asymptotics(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    SchwarzschildProfile p(n, m);

    const auto window = inv.get_list("window");
    if (window.size() != 2) throw UsageError("--window expects lo,hi");
    const int samples = inv.get_int("samples");
    std::vector<std::pair<double, double>> data;
    for (double r : expansion_window(p.r_m, window[0], window[1], samples))
        data.emplace_back(r, profile_jet(p, r).u);
    const ExpansionFit fit = fit_expansion(data, n);

    report.inputs = {{"n", n}, {"mass", m}, {"window", {window[0], window[1]}}};
    report.results = nlohmann::ordered_json::parse(to_json(fit));
    const auto decay_rows = decay_check(SchwarzschildGraph(p), {100.0 * p.r_m, 1000.0 * p.r_m});
    nlohmann::ordered_json decay = nlohmann::ordered_json::array();
    for (const auto& row : decay_rows)
        decay.push_back({{"r", row.r},
                         {"grad_quantity", row.grad_quantity},
                         {"hess_quantity", row.hess_quantity},
                         {"third_quantity", row.third_quantity}});
    report.results["decay"] = std::move(decay);

    double a_expected;
    if (n == 3)
        a_expected = std::sqrt(8.0 * m);
    else if (n == 4)
        a_expected = std::sqrt(2.0 * m);
    else
        a_expected = -2.0 * std::sqrt(2.0 * m) / (n - 4);
    const double tol = inv.get_double("tol");
    report.checks.push_back(checks::relative("leading coefficient a", a_expected, fit.a, tol));
    report.checks.push_back(checks::relative("mass from tail", m, mass_from_tail(fit), 5e-3));
    report.checks.push_back(checks::relative("gradient decay limit", std::sqrt(2.0 * m),
                                             decay_rows.back().grad_quantity, 1e-2));
    return report;
}

Report run_penrose(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    SchwarzschildProfile p(n, m);
    SchwarzschildGraph g(p);

    HorizonShape horizon = HorizonShape::round_sphere(n, p.r_m);
    const std::string spec = inv.get("horizon");
    if (spec.rfind("ellipsoid:", 0) == 0) {
        std::stringstream ss(spec.substr(10));
        std::string a_s, c_s;
        if (!std::getline(ss, a_s, ',') || !std::getline(ss, c_s, ','))
            throw UsageError("--horizon ellipsoid:a,c");
        horizon = HorizonShape::spheroid(n, parse_double("horizon", a_s),
                                         parse_double("horizon", c_s));
    } else if (spec != "round") {
        throw UsageError("--horizon must be 'round' or 'ellipsoid:a,c'");
    }

    PenroseOptions opts;
    opts.quad_order = inv.get_int("quad-order");
    opts.fit_terms = inv.get_int("fit-terms");
    if (inv.params.count("radii")) opts.adm_radii = inv.get_list("radii");
    const PenroseCheckResult res = penrose_check(g, horizon, opts);

    report.inputs = {{"n", n}, {"mass", m}, {"horizon", spec}};
    report.results["adm"] = res.adm;
    report.results["penrose_rhs"] = res.penrose_rhs;
    report.results["slack"] = res.slack;
    report.results["af_valid"] = res.af_valid;
    if (res.af_valid) {
        report.results["af_lhs"] = res.af_lhs;
        report.results["af_rhs"] = res.af_rhs;
    }

    const double tol = inv.get_double("tol");
    if (spec == "round") {
        report.checks.push_back(checks::absolute("Penrose slack", 0.0, res.slack, tol));
        report.checks.push_back(
            checks::relative("AF equality for round horizon", res.af_rhs, res.af_lhs, 1e-6));
    } else {
        report.checks.push_back(
            checks::at_least("AF strict inequality margin", 1e-9, res.af_lhs - res.af_rhs));
    }
    return report;
}

Report run_perturb(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    SchwarzschildProfile p(n, m);

    BumpSpec spec;
    const auto center = inv.get_list("center");
    if (static_cast<int>(center.size()) != n)
        throw UsageError("--center must have n components");
    spec.center = Eigen::Map<const Eigen::VectorXd>(center.data(), n);
    spec.radius = inv.get_double("bump-radius");

    SweepOptions opts;
    opts.truncation_radius = inv.get_double("truncation");
    opts.quad_order = inv.get_int("quad-order") == 0 ? 24 : inv.get_int("quad-order");
    const auto amplitudes = inv.get_list("amplitudes");
    const auto rows = penrose_slack_sweep(p, spec, amplitudes, opts);

    report.inputs = {{"n", n},
                     {"mass", m},
                     {"center", center},
                     {"bump_radius", spec.radius},
                     {"amplitudes", amplitudes}};
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    const double tol = inv.get_double("tol");
    for (const auto& row : rows) {
        table.push_back({{"amplitude", row.amplitude},
                         {"adm_formula", row.adm_formula},
                         {"adm_flux", row.adm_flux},
                         {"slack", row.slack},
                         {"min_scalar_curvature", row.min_scalar_curvature}});
        report.checks.push_back(checks::relative(
            "mass cross-validation at amplitude " + format_double(row.amplitude),
            row.adm_flux, row.adm_formula, tol));
        if (row.min_scalar_curvature >= 0.0)
            report.checks.push_back(checks::at_least(
                "slack under R_g >= 0 at amplitude " + format_double(row.amplitude), -1e-6,
                row.slack));
    }
    report.results["sweep"] = std::move(table);
    BumpSpec unit = spec;
    unit.amplitude = 1.0;
    report.results["c2_norm_per_amplitude"] = bump_c2_norm(unit);
    return report;
}

Report run_suite(const Invocation& inv) {
    Report report;
    const int n = inv.get_int("n");
    const double m = inv.get_double("mass");
    report.inputs = {{"n", n}, {"mass", m}};
    report.checks = checks::suite_for(n, m);
    int passed = 0;
    for (const auto& c : report.checks) passed += c.pass ? 1 : 0;
    report.results["checks_total"] = static_cast<int>(report.checks.size());
    report.results["checks_passed"] = passed;
    return report;
}

void write_stream(std::ostream& os, const Report& report, const std::string& format,
                  bool include_timing) {
    if (format == "json") {
        nlohmann::ordered_json j;
        j["command"] = report.command;
        j["inputs"] = report.inputs;
        j["results"] = report.results;
        nlohmann::ordered_json checks_json = nlohmann::ordered_json::array();
        for (const auto& c : report.checks) checks_json.push_back(check_to_json(c));
        j["checks"] = std::move(checks_json);
        j["pass"] = report.pass;
        if (include_timing) j["timing"] = {{"elapsed_seconds", report.elapsed_seconds}};
        os << j.dump(2) << '\n';
        return;
    }
    // CSV: the command's main table when it has one, otherwise the checks.
    if (report.results.contains("flux_records")) {
        os << "r,flux,quad_order\n";
        for (const auto& row : report.results["flux_records"])
            os << format_double(row["r"].get<double>()) << ','
               << format_double(row["flux"].get<double>()) << ',' << row["quad_order"].get<int>()
               << '\n';
        return;
    }
    if (report.results.contains("flux_by_radius")) {
        const int order = report.results.value("quad_order", 0);
        os << "r,flux,quad_order\n";
        for (const auto& row : report.results["flux_by_radius"])
            os << format_double(row["r"].get<double>()) << ','
               << format_double(row["flux"].get<double>()) << ',' << order << '\n';
        return;
    }
    if (report.results.contains("table")) {
        os << "r,u,u_prime,u_double_prime\n";
        for (const auto& row : report.results["table"])
            os << format_double(row["r"].get<double>()) << ','
               << format_double(row["u"].get<double>()) << ','
               << format_double(row["u_prime"].get<double>()) << ','
               << format_double(row["u_double_prime"].get<double>()) << '\n';
        return;
    }
    if (report.results.contains("sweep")) {
        os << "amplitude,adm_formula,adm_flux,slack,min_scalar_curvature\n";
        for (const auto& row : report.results["sweep"])
            os << format_double(row["amplitude"].get<double>()) << ','
               << format_double(row["adm_formula"].get<double>()) << ','
               << format_double(row["adm_flux"].get<double>()) << ','
               << format_double(row["slack"].get<double>()) << ','
               << format_double(row["min_scalar_curvature"].get<double>()) << '\n';
        return;
    }
    if (report.results.contains("decay")) {
        os << "r,grad_quantity,hess_quantity,third_quantity\n";
        for (const auto& row : report.results["decay"])
            os << format_double(row["r"].get<double>()) << ','
               << format_double(row["grad_quantity"].get<double>()) << ','
               << format_double(row["hess_quantity"].get<double>()) << ','
               << format_double(row["third_quantity"].get<double>()) << '\n';
        return;
    }
    os << "name,expected,actual,tolerance,pass\n";
    for (const auto& c : report.checks)
        os << '"' << c.name << "\"," << format_double(c.expected) << ','
           << format_double(c.actual) << ',' << format_double(c.tolerance) << ','
           << (c.pass ? 1 : 0) << '\n';
}

}  // namespace

Report run(const Invocation& inv) {
    if (inv.params.count("threads") && inv.get_int("threads") > 0)
        set_worker_count(inv.get_int("threads"));

    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.command = to_string(inv.command);
    try {
        switch (inv.command) {
            case Command::schwarzschild: report = run_schwarzschild(inv); break;
            case Command::mass: report = run_mass(inv); break;
            case Command::verify_reilly: report = run_verify_reilly(inv); break;
            case Command::reflect_check: report = run_reflect_check(inv); break;
            case Command::fit_asymptotics: report = run_fit_asymptotics(inv); break;
            case Command::penrose: report = run_penrose(inv); break;
            case Command::perturb: report = run_perturb(inv); break;
            case Command::suite: report = run_suite(inv); break;
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& ex) {
        // module errors become failed checks, not crashes
        checks::Check failed;
        failed.name = "command execution";
        failed.pass = false;
        failed.note = ex.what();
        report.checks.push_back(std::move(failed));
    }
    report.command = to_string(inv.command);
    report.pass = checks::all_pass(report.checks);
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::size_t emit_report(const Report& report, const std::string& format, const std::string& path,
                        bool include_timing) {
    if (format != "json" && format != "csv")
        throw UsageError("--format must be json or csv");
    std::ostringstream buffer;
    write_stream(buffer, report, format, include_timing);
    const std::string payload = buffer.str();
    if (path == "-" || path.empty()) {
        std::cout << payload;
        std::cout.flush();
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open output path: " + path);
        out << payload;
        if (!out) throw IoError("write failed: " + path);
    }
    return payload.size();
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const Invocation inv = parse_invocation(args);
        const Report report = run(inv);
        emit_report(report, inv.get("format"), inv.get("out"), inv.get_flag("timing"));
        if (!report.pass) {
            for (const auto& c : report.checks)
                if (!c.pass)
                    std::cerr << "[FAIL] " << c.name << ": actual " << format_double(c.actual)
                              << " vs expected " << format_double(c.expected) << " (tol "
                              << format_double(c.tolerance) << ")"
                              << (c.note.empty() ? "" : " - " + c.note) << '\n';
            return 1;
        }
        return 0;
    } catch (const UsageError& ex) {
        std::cerr << "error: " << ex.what() << "\n\n" << usage_text();
        return 2;
    } catch (const IoError& ex) {
        std::cerr << "I/O error: " << ex.what() << '\n';
        return 3;
    }
}

}  // namespace penrose::cli
