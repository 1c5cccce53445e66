#include "forchheimer/study.hpp"

#include "forchheimer/mesh.hpp"
#include "forchheimer/time_solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace forch {

namespace {

std::vector<int> parse_mesh_sizes(const std::string& text)
{
    std::vector<int> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw UsageError("--mesh-sizes: malformed entry '" + item + "'");
        }
        if (used != item.size()) {
            throw UsageError("--mesh-sizes: malformed entry '" + item + "'");
        }
        sizes.push_back(value);
    }
    return sizes;
}

bool is_power_of_two(int v)
{
    return v > 0 && (v & (v - 1)) == 0;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_rate(const std::optional<double>& r)
{
    if (!r) {
        return "-";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *r);
    return buf;
}

} // namespace

double StudyConfig::dt_for(int n) const
{
    return dt_rule == DtRule::Fixed ? dt : t_final / static_cast<double>(n);
}

void validate(const StudyConfig& config)
{
    if (config.mesh_sizes.empty()) {
        throw UsageError("--mesh-sizes: at least one mesh size is required");
    }
    for (std::size_t i = 0; i < config.mesh_sizes.size(); ++i) {
        const int n = config.mesh_sizes[i];
        if (n < 1) {
            throw UsageError("--mesh-sizes: sizes must be positive");
        }
        if (i > 0) {
            const int first = config.mesh_sizes.front();
            if (n <= config.mesh_sizes[i - 1]) {
                throw UsageError("--mesh-sizes: sizes must be strictly increasing");
            }
            if (n % first != 0 || !is_power_of_two(n / first)) {
                throw UsageError("--mesh-sizes: each size must be a power-of-two multiple of the first "
                                 "(mesh sequence is not doubling)");
            }
        }
    }
    if (!(config.t_final > 0.0) || !std::isfinite(config.t_final)) {
        throw UsageError("--t-final must be positive");
    }
    if (!(config.nonlinear_tol > 0.0)) {
        throw UsageError("--tol must be positive");
    }
    if (config.max_picard < 1) {
        throw UsageError("--max-picard must be positive");
    }
    if (config.dt_rule == DtRule::Fixed) {
        if (!(config.dt > 0.0)) {
            throw UsageError("--dt must be positive");
        }
        if (config.dt > config.t_final) {
            throw UsageError("--dt must not exceed --t-final");
        }
        const double ratio = config.t_final / config.dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-12 * ratio) {
            throw UsageError("--t-final must be an integer multiple of --dt");
        }
    }
    try {
        (void)config.law();
    } catch (const std::exception& e) {
        throw UsageError(std::string("--g-coeffs/--g-exponents: ") + e.what());
    }
}

StudyConfig parse_config(int argc, const char* const* argv)
{
    StudyConfig config;
    CLI::App app{"Convergence study for the expanded mixed RT0 Forchheimer solver"};
    app.set_config("--config", "", "TOML/INI file with any of the options below");

    std::string mesh_sizes = "4,8,16,32,64";
    std::string dt_rule = "1/N";
    std::string format = "csv";
    std::string rates = "factor";
    std::string problem = "manufactured";
    std::optional<double> dt;

    app.add_option("--mesh-sizes", mesh_sizes, "Comma-separated squares per side, doubling")
        ->capture_default_str();
    app.add_option("--dt", dt, "Fixed time step (implies --dt-rule fixed)");
    app.add_option("--dt-rule", dt_rule, "Time step rule: 1/N (dt = t_final/N) or fixed")
        ->check(CLI::IsMember({"1/N", "fixed"}))
        ->capture_default_str();
    app.add_option("--t-final", config.t_final, "Final time")->capture_default_str();
    app.add_option("--tol", config.nonlinear_tol, "Picard tolerance on ||s^{k+1}-s^k||_L2")
        ->capture_default_str();
    app.add_option("--max-picard", config.max_picard, "Picard sweep limit")->capture_default_str();
    app.add_option("--g-coeffs", config.g_coeffs, "Coefficients a_0,...,a_N of g")->capture_default_str();
    app.add_option("--g-exponents", config.g_exponents, "Exponents alpha_1,...,alpha_N of g")
        ->capture_default_str();
    app.add_option("--problem", problem, "manufactured or zero")
        ->check(CLI::IsMember({"manufactured", "zero"}))
        ->capture_default_str();
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    app.add_option("--rates", rates, "factor (e_prev/e_next) or order (log2 of it)")
        ->check(CLI::IsMember({"factor", "order"}))
        ->capture_default_str();
    app.add_option("--out", config.output_path, "Report file (default: stdout)");
    app.add_option("--diagnostics", config.diagnostics_dir, "Directory for per-run diagnostics CSV files");
    app.add_option("--dump-mesh", config.mesh_dump_path, "Write the first mesh in plain-text form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    config.mesh_sizes = parse_mesh_sizes(mesh_sizes);
    config.dt_rule = dt_rule == "fixed" ? DtRule::Fixed : DtRule::OneOverN;
    if (dt) {
        config.dt_rule = DtRule::Fixed;
        config.dt = *dt;
    } else if (config.dt_rule == DtRule::Fixed) {
        throw UsageError("--dt-rule fixed requires --dt");
    }
    config.format = format == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv;
    config.rates = rates == "order" ? RateKind::Order : RateKind::Factor;
    config.problem = problem == "zero" ? StudyProblem::Zero : StudyProblem::Manufactured;
    validate(config);
    return config;
}

StudyConfig parse_config(const std::vector<std::string>& args)
{
    std::vector<const char*> argv;
    argv.push_back("forchheimer_study");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return parse_config(static_cast<int>(argv.size()), argv.data());
}

StudyReport run_study(const StudyConfig& config)
{
    validate(config);
    const ForchheimerPolynomial law = config.law();
    const ManufacturedSolution solution(law);

    StudyReport report;
    report.rates = config.rates;
    for (int n : config.mesh_sizes) {
        const StructuredTriMesh mesh(n);
        if (!config.mesh_dump_path.empty() && n == config.mesh_sizes.front()) {
            std::ofstream os(config.mesh_dump_path);
            mesh.write(os);
        }

        ProblemData data;
        if (config.problem == StudyProblem::Manufactured) {
            data = solution.problem(config.t_final);
        } else {
            data.law = law;
            data.t_final = config.t_final;
        }
        SolverConfig solver;
        solver.dt = config.dt_for(n);
        solver.nonlinear_tol = config.nonlinear_tol;
        solver.max_picard = config.max_picard;

        RunResult result;
        try {
            result = run(mesh, data, solver);
        } catch (const std::exception& e) {
            throw StudyError(n, e.what());
        }

        StudyRow row;
        row.n = n;
        row.dt = solver.dt;
        if (config.problem == StudyProblem::Manufactured) {
            row.errors = measure_errors(mesh, result.final_state, solution, config.t_final);
        } else {
            const ScalarField zero = [](const Vec2&) { return 0.0; };
            const VectorField zero_vec = [](const Vec2&) -> Vec2 { return Vec2::Zero(); };
            const auto& st = result.final_state;
            row.errors.p_l2 = error_p_L2(mesh, st.p, zero);
            row.errors.p_linf = error_p_Linf(mesh, st.p, zero);
            row.errors.s_lbeta = error_vec_Lbeta(mesh, VectorSpace::PiecewiseConstant, st.s, zero_vec, law.beta());
            row.errors.u_lbeta = error_vec_Lbeta(mesh, VectorSpace::RaviartThomas, st.u, zero_vec, law.beta());
        }
        for (const auto& d : result.diagnostics) {
            row.max_picard_iters = std::max(row.max_picard_iters, d.picard_iters);
        }
        report.rows.push_back(row);

        if (!config.diagnostics_dir.empty()) {
            std::filesystem::create_directories(config.diagnostics_dir);
            std::ofstream os(std::filesystem::path(config.diagnostics_dir) /
                             ("diagnostics_N" + std::to_string(n) + ".csv"));
            write_diagnostics_csv(os, result.diagnostics);
        }
    }

    auto column = [&](auto member) {
        std::vector<std::pair<int, double>> errors;
        for (const auto& r : report.rows) {
            errors.emplace_back(r.n, r.errors.*member);
        }
        return config.rates == RateKind::Order ? convergence_rates(errors) : reduction_factors(errors);
    };
    if (report.rows.size() >= 2) {
        const auto rp = column(&ErrorTriple::p_l2);
        const auto rs = column(&ErrorTriple::s_lbeta);
        const auto ru = column(&ErrorTriple::u_lbeta);
        for (std::size_t i = 1; i < report.rows.size(); ++i) {
            report.rows[i].rate_p = rp[i - 1];
            report.rows[i].rate_s = rs[i - 1];
            report.rows[i].rate_u = ru[i - 1];
        }
    }
    return report;
}

void write_csv(std::ostream& os, const StudyReport& report)
{
    auto rate = [](const std::optional<double>& r) { return r ? format_rate(r) : std::string(); };
    os << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        os << r.n << ',' << format_number(r.errors.p_l2) << ',' << rate(r.rate_p) << ','
           << format_number(r.errors.s_lbeta) << ',' << rate(r.rate_s) << ','
           << format_number(r.errors.u_lbeta) << ',' << rate(r.rate_u) << '\n';
    }
}

void write_markdown(std::ostream& os, const StudyReport& report)
{
    const char* rate = report.rates == RateKind::Order ? "Order" : "Rates";
    os << "| N | p error (L2) | " << rate << " | s error (L^beta) | " << rate << " | u error (L^beta) | " << rate
       << " |\n";
    os << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : report.rows) {
        os << "| " << r.n << " | " << format_number(r.errors.p_l2) << " | " << format_rate(r.rate_p) << " | "
           << format_number(r.errors.s_lbeta) << " | " << format_rate(r.rate_s) << " | "
           << format_number(r.errors.u_lbeta) << " | " << format_rate(r.rate_u) << " |\n";
    }
}

void write_report(std::ostream& os, const StudyReport& report, ReportFormat format)
{
    if (format == ReportFormat::Markdown) {
        write_markdown(os, report);
    } else {
        write_csv(os, report);
    }
}

} // namespace forch
