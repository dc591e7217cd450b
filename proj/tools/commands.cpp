#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "cascade/correlation.hpp"
#include "cascade/dynamics.hpp"
#include "cascade/oracle.hpp"

namespace cascade::cli {
namespace {

// Sweep points are independent; results land in their own slot so the
// output order never depends on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = n;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

void require_method(Method method, std::initializer_list<Method> allowed, std::string_view command) {
    if (std::find(allowed.begin(), allowed.end(), method) == allowed.end()) {
        throw UsageError("--method not supported by '" + std::string(command) + "'");
    }
}

std::vector<double> analytic_g2(const RateParams& params, const PolarizerSetting& p1,
                                const PolarizerSetting& p2, std::span<const double> taus) {
    std::vector<double> out(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        out[i] = g2_general(params, p1, p2, taus[i]);
    }
    return out;
}

std::vector<double> contrast_curve(std::span<const double> co, std::span<const double> cross) {
    std::vector<double> out(co.size());
    for (std::size_t i = 0; i < co.size(); ++i) {
        out[i] = contrast(co[i], cross[i]).value;
    }
    return out;
}

std::string label(double value) {
    return format_number(value);
}

double parse_number(std::string_view text, std::string_view field) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ValidationError(std::string(field), "not a number: '" + std::string(text) + "'");
    }
    return value;
}

RateParams load_params(const std::string& path, const std::vector<std::string>& overrides) {
    nlohmann::json doc;
    if (path.empty()) {
        doc = params_to_json(figure_params(0.0, 0.0));
    } else {
        std::ifstream in(path);
        if (!in) {
            throw ValidationError("params", "cannot read '" + path + "'");
        }
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("params", std::string("malformed JSON: ") + e.what());
        }
    }
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--param expects key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        if (!doc.is_object()) {
            throw ValidationError("params", "top level must be an object");
        }
        doc[key] = parse_number(std::string_view(item).substr(eq + 1), key);
    }
    return normalize_to_gamma(params_from_json(doc));
}

BasisPair parse_basis(std::string_view text) {
    if (text == "rectilinear") {
        return rectilinear_basis();
    }
    if (text == "diagonal") {
        return diagonal_basis();
    }
    if (text == "circular") {
        return circular_basis();
    }
    return BasisPair::from(parse_setting(text));
}

class Output {
public:
    explicit Output(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) {
            throw ValidationError("out", "cannot write '" + path + "'");
        }
        stream_ = &file_;
    }
    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

nlohmann::json setting_json(const PolarizerSetting& s) {
    return {{"theta", s.theta()}, {"phi", s.phi()}};
}

} // namespace

Method parse_method(std::string_view text) {
    if (text == "analytic") {
        return Method::analytic;
    }
    if (text == "oracle") {
        return Method::oracle;
    }
    if (text == "both") {
        return Method::both;
    }
    if (text == "symmetric") {
        return Method::symmetric;
    }
    throw UsageError("unknown method '" + std::string(text) + "'");
}

void Grid::validate(std::string_view name) const {
    if (points < 2) {
        throw ValidationError(std::string(name), "needs at least 2 points");
    }
    if (!std::isfinite(start) || !std::isfinite(stop) || !(stop > start)) {
        throw ValidationError(std::string(name), "must be strictly increasing");
    }
}

std::vector<double> Grid::values() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    const double step = (stop - start) / (points - 1);
    for (int i = 0; i < points; ++i) {
        out[static_cast<std::size_t>(i)] = i + 1 == points ? stop : start + step * i;
    }
    return out;
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

void write_csv(const CsvTable& table, std::ostream& out) {
    std::string text;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        text += (i ? "," : "") + table.header[i];
    }
    text += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                text += ',';
            }
            text += format_number(row[i]);
        }
        text += '\n';
    }
    out << text;
}

RateParams figure_params(double delta, double dephasing) {
    return RateParams{.gamma1 = 0.5,
                      .gamma3 = 0.5,
                      .gamma2 = 1.0,
                      .gamma4 = 1.0,
                      .gamma_ab = dephasing,
                      .gamma_ba = dephasing,
                      .delta = delta};
}

CsvTable populations_table(const RateParams& params, const Grid& times, Method method) {
    require_method(method, {Method::analytic, Method::oracle, Method::both}, "populations");
    times.validate("t");
    if (times.start < 0.0) {
        throw ValidationError("t", "must start at or after 0");
    }
    derive(params);
    const auto ts = times.values();
    const auto initial = CascadeState::biexciton();

    std::vector<CascadeState> analytic;
    std::vector<CascadeState> reference;
    if (method != Method::oracle) {
        analytic.resize(ts.size());
        parallel_for(ts.size(), [&](std::size_t i) { analytic[i] = evolve_analytic(initial, params, ts[i]); });
    }
    if (method != Method::analytic) {
        const auto states = oracle::propagate(oracle::to_density(initial), oracle::Liouvillian(params), ts);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            reference.push_back(oracle::from_density(states[i], ts[i]));
        }
    }

    const std::vector<std::string> columns{"rho_ii", "rho_aa", "rho_bb", "rho_jj", "re_rho_ab", "im_rho_ab"};
    CsvTable table;
    table.header.push_back("t");
    for (const auto& c : columns) {
        table.header.push_back(c);
    }
    if (method == Method::both) {
        for (const auto& c : columns) {
            table.header.push_back("oracle_" + c);
        }
    }
    const auto append = [](std::vector<double>& row, const CascadeState& s) {
        for (double v : {s.rho_ii, s.rho_aa, s.rho_bb, s.rho_jj, s.rho_ab.real(), s.rho_ab.imag()}) {
            row.push_back(v);
        }
    };
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<double> row{ts[i]};
        if (!analytic.empty()) {
            append(row, analytic[i]);
        }
        if (!reference.empty()) {
            append(row, reference[i]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable g2_table(const RateParams& params, const PolarizerSetting& p1, const PolarizerSetting& p2,
                  const Grid& taus, Method method) {
    taus.validate("tau");
    if (taus.start < 0.0) {
        throw ValidationError("tau", "delays must be non-negative");
    }
    derive(params);
    const auto ts = taus.values();
    CsvTable table;
    std::vector<std::vector<double>> columns;
    switch (method) {
    case Method::analytic:
        table.header = {"tau", "value"};
        columns.push_back(analytic_g2(params, p1, p2, ts));
        break;
    case Method::oracle:
        table.header = {"tau", "value"};
        columns.push_back(oracle::g2_conditioned_curve(params, p1, p2, ts));
        break;
    case Method::both:
        table.header = {"tau", "analytic", "oracle"};
        columns.push_back(analytic_g2(params, p1, p2, ts));
        columns.push_back(oracle::g2_conditioned_curve(params, p1, p2, ts));
        break;
    case Method::symmetric: {
        if (p1.phi() != 0.0 || p2.phi() != 0.0) {
            throw ValidationError("setting", "the symmetric form only covers linear analyzers");
        }
        table.header = {"tau", "value"};
        std::vector<double> values(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            values[i] = g2_symmetric(params, p1.theta(), p2.theta(), ts[i]);
        }
        columns.push_back(std::move(values));
        break;
    }
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<double> row{ts[i]};
        for (const auto& c : columns) {
            row.push_back(c[i]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable degree_table(const RateParams& params, const BasisPair& basis, const Grid& taus,
                      Method method) {
    require_method(method, {Method::analytic, Method::oracle, Method::both}, "degree");
    taus.validate("tau");
    if (taus.start < 0.0) {
        throw ValidationError("tau", "delays must be non-negative");
    }
    derive(params);
    const auto ts = taus.values();
    const auto& p = basis.primary();
    const auto& q = basis.orthogonal();

    std::vector<std::vector<double>> columns;
    if (method != Method::oracle) {
        std::vector<double> values(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            values[i] = degree_of_correlation(params, basis, ts[i]).value;
        }
        columns.push_back(std::move(values));
    }
    if (method != Method::analytic) {
        std::vector<double> co;
        std::vector<double> cross;
        parallel_for(2, [&](std::size_t which) {
            (which == 0 ? co : cross) = oracle::g2_conditioned_curve(params, p, which == 0 ? p : q, ts);
        });
        columns.push_back(contrast_curve(co, cross));
    }

    CsvTable table;
    table.header = method == Method::both ? std::vector<std::string>{"tau", "analytic", "oracle"}
                                          : std::vector<std::string>{"tau", "value"};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<double> row{ts[i]};
        for (const auto& c : columns) {
            row.push_back(c[i]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable degree_avg_table(const RateParams& params, const Grid& thetas, double phi) {
    thetas.validate("theta");
    derive(params);
    const auto angles = thetas.values();
    std::vector<double> values(angles.size());
    parallel_for(angles.size(), [&](std::size_t i) {
        values[i] = degree_time_averaged(params, BasisPair::from(PolarizerSetting(angles[i], phi)));
    });
    CsvTable table;
    table.header = {"theta", "c_avg"};
    for (std::size_t i = 0; i < angles.size(); ++i) {
        table.rows.push_back({angles[i], values[i]});
    }
    return table;
}

std::vector<NamedTable> figure_tables(std::string_view id) {
    constexpr double kPi = std::numbers::pi;
    const Grid thetas{0.0, kPi, 181};
    const Grid taus{0.0, 5.0, 501};
    const auto right = preset("R");
    const auto left = preset("L");

    std::vector<NamedTable> out;
    const auto angle_sweep = [&](const std::string& prefix, const std::string& key, double delta,
                                 double dephasing, double value) {
        out.push_back({prefix + "_" + key + "_" + label(value) + ".csv",
                       degree_avg_table(figure_params(delta, dephasing), thetas, 0.0)});
    };
    const auto circular_pair = [&](const std::string& prefix, double delta, double dephasing) {
        const auto params = figure_params(delta, dephasing);
        const std::string stem = prefix + "_delta_" + label(delta);
        out.push_back({stem + "_RR.csv", g2_table(params, right, right, taus, Method::analytic)});
        out.push_back({stem + "_RL.csv", g2_table(params, right, left, taus, Method::analytic)});
    };

    if (id == "3a") {
        for (double delta : {0.0, 1.0, 2.0, 5.0, 10.0}) {
            angle_sweep("fig3a", "delta", delta, 0.0, delta);
        }
    } else if (id == "3b") {
        for (double delta : {0.0, 10.0}) {
            circular_pair("fig3b", delta, 0.0);
        }
    } else if (id == "4a" || id == "4b") {
        const double delta = id == "4a" ? 10.0 : 0.0;
        for (double dephasing : {0.0, 0.5, 1.0, 5.0, 10.0}) {
            angle_sweep("fig" + std::string(id), "dephasing", delta, dephasing, dephasing);
        }
    } else if (id == "5") {
        for (double delta : {0.0, 10.0}) {
            circular_pair("fig5", delta, 10.0);
        }
    } else {
        throw ValidationError("figure", "unknown figure '" + std::string(id) +
                                            "' (expected 3a, 3b, 4a, 4b or 5)");
    }
    return out;
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json doc;
    doc["grid"] = {{"cases", options.cases},
                   {"tau_start", options.taus.start},
                   {"tau_stop", options.taus.stop},
                   {"points", options.taus.points},
                   {"seed", options.seed},
                   {"random_params", !options.fixed_params.has_value()},
                   {"max_rate", options.max_rate},
                   {"max_delta", options.max_delta}};
    doc["tolerance"] = options.tolerance;
    doc["metric"] = "max |analytic - oracle| / max |analytic| per case";
    auto& list = doc["cases"] = nlohmann::json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        list.push_back({{"index", i},
                        {"params", params_to_json(c.params)},
                        {"first", setting_json(c.p1)},
                        {"second", setting_json(c.p2)},
                        {"max_abs_error", c.max_abs_error},
                        {"scale", c.scale},
                        {"relative_error", c.relative_error},
                        {"passed", c.relative_error < options.tolerance}});
    }
    doc["max_relative_error"] = max_relative_error;
    doc["passed"] = passed;
    return doc;
}

VerifyReport run_verification(const VerifyOptions& options) {
    if (options.cases < 1) {
        throw ValidationError("cases", "must be at least 1");
    }
    options.taus.validate("tau");
    if (options.taus.start < 0.0) {
        throw ValidationError("tau", "delays must be non-negative");
    }
    if (!(options.tolerance > 0.0)) {
        throw ValidationError("tolerance", "must be positive");
    }

    VerifyReport report;
    report.options = options;
    report.cases.resize(static_cast<std::size_t>(options.cases));

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto open_unit = [&] { return 1.0 - unit(rng); }; // (0, 1]
    const auto angle = [&] { return PolarizerSetting(std::numbers::pi * unit(rng),
                                                     std::numbers::pi * (2.0 * open_unit() - 1.0)); };
    for (auto& c : report.cases) {
        if (options.fixed_params) {
            c.params = *options.fixed_params;
        } else {
            // gamma1 + gamma3 = 1 fixes the unit; the rest are drawn in units of it
            c.params.gamma1 = open_unit();
            c.params.gamma3 = 1.0 - c.params.gamma1;
            if (c.params.gamma3 <= 0.0) {
                c.params.gamma1 = c.params.gamma3 = 0.5;
            }
            c.params.gamma2 = options.max_rate * open_unit();
            c.params.gamma4 = options.max_rate * open_unit();
            c.params.gamma_ab = options.max_rate * open_unit();
            c.params.gamma_ba = options.max_rate * open_unit();
            c.params.delta = options.max_delta * unit(rng);
        }
        c.p1 = angle();
        c.p2 = angle();
    }

    const auto ts = options.taus.values();
    parallel_for(report.cases.size(), [&](std::size_t i) {
        auto& c = report.cases[i];
        const auto analytic = analytic_g2(c.params, c.p1, c.p2, ts);
        const auto reference = oracle::g2_conditioned_curve(c.params, c.p1, c.p2, ts);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            c.max_abs_error = std::max(c.max_abs_error, std::abs(analytic[k] - reference[k]));
            c.scale = std::max(c.scale, std::abs(analytic[k]));
        }
        c.relative_error = c.scale > 0.0 ? c.max_abs_error / c.scale : c.max_abs_error;
    });

    for (const auto& c : report.cases) {
        report.max_relative_error = std::max(report.max_relative_error, c.relative_error);
    }
    report.passed = report.max_relative_error < options.tolerance;
    return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Polarization-resolved two-photon correlations of a biexciton-exciton cascade.\n"
                 "Rates are rescaled so that gamma1 + gamma3 = 1; times are in that unit."};
    app.require_subcommand(1);
    app.fallthrough();

    std::string params_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string method_text = "analytic";
    double tolerance = 1e-6;
    app.add_option("--params", params_path, "JSON file with gamma1, gamma3, gamma2, gamma4, "
                                            "gamma_ab, gamma_ba, delta, pump_rate");
    app.add_option("--param", overrides, "Override one rate, e.g. --param delta=10 (repeatable)");
    app.add_option("--out", out_path, "Output file ('-' for stdout); a directory for 'figure'");
    app.add_option("--method", method_text, "analytic, oracle, both, or symmetric (g2 only)")
        ->capture_default_str();
    app.add_option("--tolerance", tolerance, "Relative error bound for 'verify'")->capture_default_str();

    Grid times{0.0, 10.0, 101};
    auto* populations = app.add_subcommand("populations", "Level populations and coherence after a pulse");
    populations->add_option("--t-max", times.stop, "Last time")->capture_default_str();
    populations->add_option("--points", times.points, "Number of samples")->capture_default_str();

    Grid taus{0.0, 5.0, 101};
    std::string first = "H";
    std::string second = "H";
    auto* g2 = app.add_subcommand("g2", "Reduced coincidence rate against delay");
    g2->add_option("--first", first, "Analyzer on the first photon: H, V, D, Dprime, R, L, "
                                     "'theta,phi' or 'deg:theta,phi'")->capture_default_str();
    g2->add_option("--second", second, "Analyzer on the second photon")->capture_default_str();
    g2->add_option("--tau-max", taus.stop, "Last delay")->capture_default_str();
    g2->add_option("--points", taus.points, "Number of delays")->capture_default_str();

    std::string basis_text = "rectilinear";
    auto* degree = app.add_subcommand("degree", "Degree of correlation against delay");
    degree->add_option("--basis", basis_text, "rectilinear, diagonal, circular or an analyzer setting")
        ->capture_default_str();
    degree->add_option("--tau-max", taus.stop, "Last delay")->capture_default_str();
    degree->add_option("--points", taus.points, "Number of delays")->capture_default_str();

    Grid thetas{0.0, std::numbers::pi, 181};
    double phi = 0.0;
    auto* degree_avg = app.add_subcommand("degree-avg", "Time-averaged degree against basis angle");
    degree_avg->add_option("--points", thetas.points, "Number of angles in [0, pi]")->capture_default_str();
    degree_avg->add_option("--phi", phi, "Phase of the analyzer basis")->capture_default_str();

    std::string figure_id;
    auto* figure = app.add_subcommand("figure", "Write the CSV curves of a figure preset");
    figure->add_option("id", figure_id, "3a, 3b, 4a, 4b or 5")->required();

    VerifyOptions verify_options;
    auto* verify = app.add_subcommand("verify", "Compare closed forms with the master-equation oracle");
    verify->add_option("--cases", verify_options.cases, "Number of random cases")->capture_default_str();
    verify->add_option("--points", verify_options.taus.points, "Delays per case")->capture_default_str();
    verify->add_option("--tau-max", verify_options.taus.stop, "Last delay")->capture_default_str();
    verify->add_option("--seed", verify_options.seed, "Random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
    }

    try {
        const Method method = parse_method(method_text);
        const bool custom_params = !params_path.empty() || !overrides.empty();
        const RateParams params = load_params(params_path, overrides);

        if (*figure) {
            require_method(method, {Method::analytic}, "figure");
            const std::filesystem::path dir = out_path.empty() || out_path == "-" ? "." : out_path;
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            for (const auto& [name, table] : figure_tables(figure_id)) {
                const auto path = (dir / name).string();
                Output sink(path, out);
                write_csv(table, sink.stream());
                out << path << '\n';
            }
            return kSuccess;
        }

        Output sink(out_path, out);
        if (*populations) {
            write_csv(populations_table(params, times, method), sink.stream());
        } else if (*g2) {
            write_csv(g2_table(params, parse_setting(first), parse_setting(second), taus, method),
                      sink.stream());
        } else if (*degree) {
            write_csv(degree_table(params, parse_basis(basis_text), taus, method), sink.stream());
        } else if (*degree_avg) {
            require_method(method, {Method::analytic}, "degree-avg");
            write_csv(degree_avg_table(params, thetas, phi), sink.stream());
        } else if (*verify) {
            verify_options.tolerance = tolerance;
            if (custom_params) {
                verify_options.fixed_params = params;
            }
            const auto report = run_verification(verify_options);
            sink.stream() << report.to_json().dump(2) << '\n';
            if (!report.passed) {
                err << "verification failed: max relative error " << format_number(report.max_relative_error)
                    << " >= " << format_number(tolerance) << '\n';
                return kVerificationFailed;
            }
        }
        return kSuccess;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const oracle::IntegrationError& e) {
        err << "integration failed: " << e.what() << '\n';
        return kValidation;
    }
}

} // namespace cascade::cli
