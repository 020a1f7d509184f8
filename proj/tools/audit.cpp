// audit: command-line front end for sweeps, certifier checks and kernel moments.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhaudit/hhaudit.hpp"

namespace {

using namespace hhaudit;

constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

// Without --config: every catalog function over the default soundness grid.
sweep::SweepConfig default_config() {
    sweep::SweepConfig cfg;
    cfg.functions = sweep::catalog_entries();
    cfg.grid.alpha = {0.25, 0.5, 0.75, 1.0};
    cfg.grid.m = {0.25, 0.5, 0.75, 1.0};
    cfg.grid.q = {1.0, 2.0, 4.0};
    return cfg;
}

void print_summary(const sweep::SweepSummary& s, std::ostream& out) {
    out << "cells: " << s.cells << "  quadrature failures: " << s.quadrature_failures
        << "  asserted counterexamples: " << s.asserted_counterexamples << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %-10s %6s %6s %6s %12s %12s %6s %6s\n", "theorem", "variant", "ok", "na",
                 "err", "min_tight", "max_tight", "viol", "cviol");
    out << line;
    for (const auto& v : s.per_bound) {
        const auto t = [](const std::optional<double>& x) { return x ? format_number(*x).substr(0, 12) : "-"; };
        std::snprintf(line, sizeof line, "%-12s %-10s %6ld %6ld %6ld %12s %12s %6ld %6ld\n",
                     std::string(to_string(v.theorem)).c_str(), std::string(to_string(v.variant)).c_str(),
                     v.applicable, v.not_applicable, v.errors, t(v.min_tightness).c_str(),
                     t(v.max_tightness).c_str(), v.violations, v.certified_violations);
        out << line;
    }
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
    return sweep::detail::parse_list(text, what);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical audit of trapezoid-gap bounds for (alpha, m)-log-convex derivatives"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a parameter sweep and write reports");
    std::string config_path;
    std::string out_dir;
    std::string format;
    bool strict_published = false;
    unsigned threads = 1;
    std::string seed_text;
    run->add_option("--config", config_path, "Sweep config file (default: built-in catalog)");
    run->add_option("--out-dir", out_dir, "Report directory (overrides the config)");
    run->add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    run->add_flag("--strict-published", strict_published, "Count printed-formula violations as failures");
    run->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    run->add_option("--seed", seed_text, "Certifier sampling seed (hex)");

    // check-function
    auto* check = app.add_subcommand("check-function", "Run the convexity certifier on one function");
    std::string family;
    std::string params_text;
    double alpha = 1.0;
    double m = 1.0;
    double upper = 1.0;
    double power = 1.0;
    std::string table_x;
    std::string table_f;
    check->add_option("--family", family, "Function family")->required();
    check->add_option("--params", params_text, "Parameters as k=v,...");
    check->add_option("--alpha", alpha, "alpha in (0, 1]");
    check->add_option("--m", m, "m in (0, 1]");
    check->add_option("--upper", upper, "Certify on [0, upper]");
    check->add_option("--power", power, "Certify |f'|^power");
    check->add_option("--table-x", table_x, "Tabulated nodes x0,x1,...");
    check->add_option("--table-f", table_f, "Tabulated values f0,f1,...");

    // moments
    auto* moments = app.add_subcommand("moments", "Evaluate a kernel moment");
    std::string kind_text = "abs_exp";
    double c = 0.5;
    double p = 1.0;
    bool oracle = false;
    moments->add_option("--kind", kind_text, "abs_pow, exp, abs_exp or abs_exp_mirror");
    moments->add_option("--c", c, "Base c > 0");
    moments->add_option("--p", p, "Exponent p > 0 (abs_pow)");
    moments->add_flag("--oracle", oracle, "Also integrate numerically and compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            sweep::SweepConfig cfg = config_path.empty() ? default_config() : sweep::load_config(config_path);
            if (!out_dir.empty())
                cfg.out_dir = out_dir;
            if (format == "csv") cfg.format = sweep::ReportFormat::Csv;
            else if (format == "json") cfg.format = sweep::ReportFormat::Json;
            else if (format == "both") cfg.format = sweep::ReportFormat::Both;
            if (strict_published)
                cfg.strict_published = true;
            if (!seed_text.empty())
                cfg.options.plan.seed = sweep::detail::parse_seed(seed_text, "--seed");

            const auto report = sweep::run_sweep(cfg, threads);
            const auto files = sweep::write_reports(report, cfg.out_dir, cfg.format);
            print_summary(report.summary, std::cout);
            for (const auto& f : files.paths)
                std::cout << "wrote " << f.string() << '\n';
            return sweep::exit_code(report.summary, cfg.strict_published);
        }

        if (*check) {
            FunctionSpec spec = [&] {
                if (parse_family(family) == Family::Tabulated)
                    return FunctionSpec::tabulated(parse_numbers(table_x, "--table-x"),
                                                   parse_numbers(table_f, "--table-f"));
                const auto maps = sweep::detail::parse_param_alternatives(params_text, "--params");
                if (maps.size() != 1)
                    throw sweep::ConfigError("--params", "alternatives are not allowed here");
                return FunctionSpec::from_params(family, maps.front(), Interval(0.0, upper));
            }();
            const Certificate cert = certify_am_log_convex(spec, alpha, m, upper, {}, power);
            std::cout << "status: " << to_string(cert.status) << '\n'
                      << "samples: " << cert.samples_checked << '\n'
                      << "max_violation: " << format_number(cert.max_violation) << '\n';
            if (cert.witness)
                std::cout << "witness: x=" << format_number(cert.witness->x)
                          << " y=" << format_number(cert.witness->y)
                          << " t=" << format_number(cert.witness->t) << '\n';
            return cert.status == CertStatus::NoCounterexampleFound ? 0 : 1;
        }

        if (*moments) {
            const auto kind = kernel::parse_moment_kind(kind_text);
            if (!kind)
                throw sweep::ConfigError("--kind", "unknown moment kind '" + kind_text + "'");
            const double parameter = *kind == kernel::MomentKind::AbsPow ? p : c;
            const auto v = kernel::moment_value(*kind, parameter);
            std::cout << "value: " << format_number(v.value) << '\n'
                      << "method: " << kernel::to_string(v.method) << '\n';
            if (oracle) {
                const auto o = kernel::moment_oracle(*kind, parameter);
                std::cout << "oracle: " << format_number(o.value) << '\n'
                          << "oracle_error_estimate: " << format_number(o.error_estimate) << '\n'
                          << "relative_difference: " << format_number(std::abs(v.value - o.value) / std::abs(o.value))
                          << '\n';
            }
            return 0;
        }
    } catch (const sweep::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const quad::NonConvergenceError& e) {
        std::cerr << "quadrature did not converge: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
