#pragma once

// Parameter sweeps: config parsing, parallel execution over grid cells, and
// CSV / JSON reports whose bytes do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hhaudit/audit.hpp"
#include "hhaudit/core.hpp"
#include "hhaudit/format.hpp"
#include "hhaudit/funcmodel.hpp"

namespace hhaudit::sweep {

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration; path() names the offending key, e.g. "grid.alpha".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class ReportFormat { Csv, Json, Both };

struct FunctionEntry {
    std::string name;
    std::string family;
    // One ParamMap per combination of the listed alternatives.
    std::vector<ParamMap> instances{ParamMap{}};
    std::optional<double> domain_upper;
    std::vector<double> table_x;
    std::vector<double> table_f;
    bool assert_valid = false;
};

struct GridSpec {
    std::vector<double> a{0.0};
    std::vector<double> b{1.0};
    std::vector<double> alpha{1.0};
    std::vector<double> m{1.0};
    std::vector<double> q{2.0};
    std::vector<double> p;  // empty: conjugate of q
    std::vector<YoungWeights> young{YoungWeights{}};
};

struct SweepConfig {
    std::vector<FunctionEntry> functions;
    GridSpec grid;
    audit::AuditOptions options;
    ReportFormat format = ReportFormat::Csv;
    std::string out_dir = "report";
    bool strict_published = false;
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view text, const std::string& path) {
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value))
        throw ConfigError(path, "expected a finite number, got '" + std::string(text) + "'");
    return value;
}

/// Comma-separated numbers; an empty value is an empty list.
inline std::vector<double> parse_list(std::string_view text, const std::string& path) {
    std::vector<double> out;
    if (trim(text).empty())
        return out;
    for (auto item : split(text, ','))
        out.push_back(parse_double(item, path));
    return out;
}

inline bool parse_bool(std::string_view text, const std::string& path) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(path, "expected true or false, got '" + std::string(text) + "'");
}

inline std::uint64_t parse_seed(std::string_view text, const std::string& path) {
    text = trim(text);
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
        base = 16;
    }
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
        throw ConfigError(path, "expected an integer seed, got '" + std::string(text) + "'");
    return value;
}

inline int parse_count(std::string_view text, const std::string& path) {
    const double v = parse_double(text, path);
    if (v < 0.0 || v != std::floor(v) || v > 1e8)
        throw ConfigError(path, "expected a nonnegative integer");
    return static_cast<int>(v);
}

/// "A=1, lambda=0.5|1|2" expands to one map per alternative, last key fastest.
inline std::vector<ParamMap> parse_param_alternatives(std::string_view text, const std::string& path) {
    std::vector<ParamMap> out{ParamMap{}};
    if (trim(text).empty())
        return out;
    std::set<std::string> seen;
    for (auto item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path, "expected key=value, got '" + std::string(item) + "'");
        const std::string key(trim(item.substr(0, eq)));
        if (key.empty() || !seen.insert(key).second)
            throw ConfigError(path, "empty or repeated parameter '" + key + "'");
        std::vector<double> values;
        for (auto alt : split(item.substr(eq + 1), '|'))
            values.push_back(parse_double(alt, path + "." + key));
        std::vector<ParamMap> next;
        for (const auto& base : out)
            for (double v : values) {
                ParamMap m = base;
                m[key] = v;
                next.push_back(std::move(m));
            }
        out = std::move(next);
    }
    return out;
}

struct YoungKeys {
    std::optional<std::vector<double>> mu, mu1, tau1, mu2, tau2;
};

inline std::vector<std::pair<double, double>> young_pairs(const std::optional<std::vector<double>>& mu,
                                                          const std::optional<std::vector<double>>& tau,
                                                          const std::string& tau_path) {
    const std::vector<double> mus = mu ? *mu : std::vector<double>{0.5};
    std::vector<std::pair<double, double>> out;
    if (!tau) {
        for (double v : mus)
            out.emplace_back(v, 1.0 - v);
        return out;
    }
    if (tau->size() != mus.size())
        throw ConfigError(tau_path, "must list as many values as the matching mu key");
    for (std::size_t i = 0; i < mus.size(); ++i)
        out.emplace_back(mus[i], (*tau)[i]);
    return out;
}

inline std::vector<YoungWeights> build_young(const YoungKeys& k) {
    std::vector<YoungWeights> out;
    if (k.mu) {
        if (k.mu1 || k.mu2 || k.tau1 || k.tau2)
            throw ConfigError("grid.mu", "cannot be combined with mu1, tau1, mu2 or tau2");
        for (double v : *k.mu)
            out.push_back({v, 1.0 - v, v, 1.0 - v});
        return out;
    }
    for (auto [m1, t1] : young_pairs(k.mu1, k.tau1, "grid.tau1"))
        for (auto [m2, t2] : young_pairs(k.mu2, k.tau2, "grid.tau2"))
            out.push_back({m1, t1, m2, t2});
    return out;
}

inline void require_unit_interval(const std::vector<double>& values, const std::string& path) {
    for (double v : values)
        if (!(v > 0.0 && v <= 1.0))
            throw ConfigError(path, "values must lie in (0, 1]");
}

}  // namespace detail

/// Flat sectioned text: [function] (repeatable), [grid], [quadrature],
/// [report]. '#' and ';' start comments. Unknown sections or keys are errors.
inline SweepConfig parse_config(std::istream& in) {
    SweepConfig cfg;
    detail::YoungKeys young;
    std::string section;
    std::set<std::string> seen;  // "section.key" per section instance
    int function_index = -1;
    std::string line;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto c = view.find_first_of("#;"); c != std::string_view::npos)
            view = view.substr(0, c);
        view = detail::trim(view);
        if (view.empty())
            continue;

        if (view.front() == '[') {
            if (view.back() != ']')
                throw ConfigError("line " + std::to_string(line_no), "malformed section header");
            section = std::string(detail::trim(view.substr(1, view.size() - 2)));
            if (section == "function") {
                cfg.functions.emplace_back();
                ++function_index;
                std::erase_if(seen, [](const std::string& k) { return k.rfind("function.", 0) == 0; });
            } else if (section != "grid" && section != "quadrature" && section != "report") {
                throw ConfigError(section, "unknown section");
            } else if (seen.count("[" + section + "]")) {
                throw ConfigError(section, "section appears more than once");
            }
            seen.insert("[" + section + "]");
            continue;
        }

        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        const std::string key(detail::trim(view.substr(0, eq)));
        const std::string_view value = detail::trim(view.substr(eq + 1));
        if (section.empty())
            throw ConfigError(key, "key outside of any section");
        const std::string path = section == "function"
                                     ? "function[" + std::to_string(function_index) + "]." + key
                                     : section + "." + key;
        if (!seen.insert(section + "." + key).second)
            throw ConfigError(path, "duplicate key");

        if (section == "function") {
            FunctionEntry& f = cfg.functions.back();
            if (key == "family") {
                if (!parse_family(value))
                    throw ConfigError(path, "unknown family '" + std::string(value) + "'");
                f.family = std::string(value);
            } else if (key == "params") {
                f.instances = detail::parse_param_alternatives(value, path);
            } else if (key == "name") {
                f.name = std::string(value);
            } else if (key == "domain_upper") {
                f.domain_upper = detail::parse_double(value, path);
            } else if (key == "table_x") {
                f.table_x = detail::parse_list(value, path);
            } else if (key == "table_f") {
                f.table_f = detail::parse_list(value, path);
            } else if (key == "assert_valid") {
                f.assert_valid = detail::parse_bool(value, path);
            } else {
                throw ConfigError(path, "unknown key");
            }
        } else if (section == "grid") {
            auto& g = cfg.grid;
            if (key == "a") g.a = detail::parse_list(value, path);
            else if (key == "b") g.b = detail::parse_list(value, path);
            else if (key == "alpha") g.alpha = detail::parse_list(value, path);
            else if (key == "m") g.m = detail::parse_list(value, path);
            else if (key == "q") g.q = detail::parse_list(value, path);
            else if (key == "p") g.p = detail::parse_list(value, path);
            else if (key == "mu") young.mu = detail::parse_list(value, path);
            else if (key == "mu1") young.mu1 = detail::parse_list(value, path);
            else if (key == "tau1") young.tau1 = detail::parse_list(value, path);
            else if (key == "mu2") young.mu2 = detail::parse_list(value, path);
            else if (key == "tau2") young.tau2 = detail::parse_list(value, path);
            else if (key == "cert_grid_xy") cfg.options.plan.grid_xy = detail::parse_count(value, path);
            else if (key == "cert_grid_t") cfg.options.plan.grid_t = detail::parse_count(value, path);
            else if (key == "cert_random") cfg.options.plan.random_triples = detail::parse_count(value, path);
            else if (key == "cert_seed") cfg.options.plan.seed = detail::parse_seed(value, path);
            else throw ConfigError(path, "unknown key");
        } else if (section == "quadrature") {
            if (key == "rel_tol_1d") cfg.options.rel_tol_1d = detail::parse_double(value, path);
            else if (key == "rel_tol_2d") cfg.options.rel_tol_2d = detail::parse_double(value, path);
            else throw ConfigError(path, "unknown key");
            if (key == "rel_tol_1d" && !(cfg.options.rel_tol_1d >= 1e-13))
                throw ConfigError(path, "must be >= 1e-13");
            if (key == "rel_tol_2d" && !(cfg.options.rel_tol_2d >= 1e-12))
                throw ConfigError(path, "must be >= 1e-12");
        } else {  // report
            if (key == "format") {
                if (value == "csv") cfg.format = ReportFormat::Csv;
                else if (value == "json") cfg.format = ReportFormat::Json;
                else if (value == "both") cfg.format = ReportFormat::Both;
                else throw ConfigError(path, "expected csv, json or both");
            } else if (key == "out_dir") {
                cfg.out_dir = std::string(value);
            } else if (key == "strict_published") {
                cfg.strict_published = detail::parse_bool(value, path);
            } else if (key == "certify") {
                cfg.options.certify = detail::parse_bool(value, path);
            } else {
                throw ConfigError(path, "unknown key");
            }
        }
    }

    for (std::size_t i = 0; i < cfg.functions.size(); ++i)
        if (cfg.functions[i].family.empty())
            throw ConfigError("function[" + std::to_string(i) + "].family", "missing");
    detail::require_unit_interval(cfg.grid.alpha, "grid.alpha");
    detail::require_unit_interval(cfg.grid.m, "grid.m");
    for (double v : cfg.grid.a)
        if (!(v >= 0.0))
            throw ConfigError("grid.a", "values must be >= 0");
    for (double v : cfg.grid.q)
        if (!(v >= 1.0))
            throw ConfigError("grid.q", "values must be >= 1");
    cfg.grid.young = detail::build_young(young);
    return cfg;
}

inline SweepConfig parse_config_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

inline SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// Cells

struct Cell {
    std::size_t function_index;
    std::string label;
    FunctionSpec spec;
    BoundParams params;
    bool assert_valid;
};

namespace detail {

inline FunctionSpec build_function(const FunctionEntry& f, const ParamMap& params, double upper,
                                   const std::string& path) {
    try {
        if (*parse_family(f.family) == Family::Tabulated) {
            if (!f.table_x.empty() || !f.table_f.empty())
                return FunctionSpec::tabulated(f.table_x, f.table_f);
            throw DomainError("tabulated family needs table_x and table_f");
        }
        return FunctionSpec::from_params(f.family, params, Interval(0.0, upper));
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace detail

/// Expands the config into cells: function instances outermost, then a, b,
/// alpha, m, q, p, Young weights. Pairs with a >= b are skipped.
inline std::vector<Cell> expand_cells(const SweepConfig& cfg) {
    const auto& g = cfg.grid;
    double default_upper = 1.0;
    if (!g.b.empty() && !g.m.empty())
        default_upper = *std::max_element(g.b.begin(), g.b.end()) / *std::min_element(g.m.begin(), g.m.end());

    std::vector<Cell> cells;
    for (std::size_t fi = 0; fi < cfg.functions.size(); ++fi) {
        const FunctionEntry& f = cfg.functions[fi];
        const std::string path = "function[" + std::to_string(fi) + "]";
        for (const ParamMap& pm : f.instances) {
            const double upper = f.domain_upper.value_or(default_upper);
            if (!(upper > 0.0))
                throw ConfigError(path + ".domain_upper", "must be > 0");
            FunctionSpec spec = detail::build_function(f, pm, upper, path);
            const std::string label = f.name.empty() ? std::string(to_string(spec.family())) : f.name;
            for (double a : g.a)
                for (double b : g.b) {
                    if (!(a < b))
                        continue;
                    for (double alpha : g.alpha)
                        for (double m : g.m)
                            for (double q : g.q) {
                                std::vector<std::optional<double>> ps;
                                if (g.p.empty())
                                    ps.push_back(conjugate_exponent(q));
                                else
                                    for (double p : g.p)
                                        ps.push_back(p);
                                for (const auto& p : ps)
                                    for (const YoungWeights& w : g.young) {
                                        BoundParams bp{Interval(a, b), alpha, m, p, q, w};
                                        if (!spec.domain().contains(bp.interval))
                                            throw ConfigError(path + ".domain_upper",
                                                              "function domain does not cover [a, b]");
                                        cells.push_back({fi, label, spec, bp, f.assert_valid});
                                    }
                            }
                }
        }
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Running

struct VariantSummary {
    TheoremId theorem;
    Variant variant;
    long applicable = 0;
    long not_applicable = 0;
    long errors = 0;
    std::optional<double> min_tightness;
    std::optional<double> max_tightness;
    long violations = 0;            // all cells
    long certified_violations = 0;  // cells whose hypothesis holds
};

struct SweepSummary {
    long cells = 0;
    long quadrature_failures = 0;
    long asserted_counterexamples = 0;
    std::vector<VariantSummary> per_bound;  // kAllTheorems x kAllVariants

    const VariantSummary* find(TheoremId id, Variant v) const {
        for (const auto& s : per_bound)
            if (s.theorem == id && s.variant == v)
                return &s;
        return nullptr;
    }

    long certified_violations(Variant v) const {
        long n = 0;
        for (const auto& s : per_bound)
            if (s.variant == v)
                n += s.certified_violations;
        return n;
    }
};

struct SweepReport {
    std::vector<audit::AuditRecord> records;
    std::vector<bool> asserted;  // per record: function asserted valid
    SweepSummary summary;
};

/// Reduction in record order, so the result does not depend on scheduling.
inline SweepSummary summarize(const std::vector<audit::AuditRecord>& records, const std::vector<bool>& asserted) {
    SweepSummary s;
    s.cells = static_cast<long>(records.size());
    for (TheoremId id : kAllTheorems)
        for (Variant v : kAllVariants)
            s.per_bound.push_back(VariantSummary{id, v, 0, 0, 0, std::nullopt, std::nullopt, 0, 0});
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!r.quadrature_converged)
            ++s.quadrature_failures;
        if (i < asserted.size() && asserted[i] && r.any_counterexample())
            ++s.asserted_counterexamples;
        for (std::size_t k = 0; k < r.bounds.size(); ++k) {
            const auto& e = r.bounds[k];
            VariantSummary& vs = s.per_bound[k];
            switch (e.result.status) {
            case BoundStatus::Ok: ++vs.applicable; break;
            case BoundStatus::NotApplicable:
            case BoundStatus::NegativeBracket: ++vs.not_applicable; break;
            case BoundStatus::Error: ++vs.errors; break;
            }
            if (e.tightness) {
                vs.min_tightness = vs.min_tightness ? std::min(*vs.min_tightness, *e.tightness) : *e.tightness;
                vs.max_tightness = vs.max_tightness ? std::max(*vs.max_tightness, *e.tightness) : *e.tightness;
            }
            if (e.violation) {
                ++vs.violations;
                if (e.hypothesis_holds)
                    ++vs.certified_violations;
            }
        }
    }
    return s;
}

/// 0 clean; 1 Rederived violation where the hypothesis holds, counterexample on
/// an asserted-valid function, or (strict) AsPublished violation; 3 quadrature
/// non-convergence, which takes precedence.
inline int exit_code(const SweepSummary& s, bool strict_published) {
    if (s.quadrature_failures > 0)
        return 3;
    if (s.certified_violations(Variant::Rederived) > 0 || s.asserted_counterexamples > 0)
        return 1;
    if (strict_published && s.certified_violations(Variant::AsPublished) > 0)
        return 1;
    return 0;
}

inline SweepReport run_sweep(const std::vector<Cell>& cells, const audit::AuditOptions& options,
                             unsigned threads = 1) {
    SweepReport report;
    report.records.resize(cells.size());
    report.asserted.resize(cells.size());
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1))));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(threads);
    const auto worker = [&](unsigned w) {
        try {
            for (std::size_t i = next++; i < cells.size(); i = next++) {
                audit::AuditRecord rec = audit::run_audit(cells[i].spec, cells[i].params, options);
                rec.label = cells[i].label;
                report.records[i] = std::move(rec);
                report.asserted[i] = cells[i].assert_valid;
            }
        } catch (...) {
            failures[w] = std::current_exception();
            next = cells.size();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(worker, w);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);
    report.summary = summarize(report.records, report.asserted);
    return report;
}

inline SweepReport run_sweep(const SweepConfig& cfg, unsigned threads = 1) {
    return run_sweep(expand_cells(cfg), cfg.options, threads);
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline std::string column_prefix(TheoremId id, Variant v) {
    return std::string(to_string(id)) + "_" + std::string(to_string(v));
}

inline std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v))
        return v;
    return nullptr;
}

inline nlohmann::ordered_json json_number(const std::optional<double>& v) {
    return v ? json_number(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

inline std::vector<std::string> csv_header() {
    std::vector<std::string> cols{"schema_version", "family", "fam_params", "a",   "b",   "alpha",
                                  "m",              "p",      "q",          "mu1", "tau1", "mu2",
                                  "tau2",           "eta",    "eta_case",   "gap", "lemma1_residual"};
    for (TheoremId id : kAllTheorems)
        for (Variant v : kAllVariants) {
            const std::string pre = detail::column_prefix(id, v);
            cols.push_back(pre);
            cols.push_back(pre + "_tightness");
            cols.push_back(pre + "_violation");
        }
    cols.emplace_back("certifier_status");
    return cols;
}

inline std::vector<std::string> csv_row(const audit::AuditRecord& r) {
    const auto& p = r.params;
    const YoungWeights w = p.young.value_or(YoungWeights{});
    std::vector<std::string> row{std::to_string(kSchemaVersion),
                                 r.family,
                                 r.fam_params,
                                 format_number(p.interval.lower()),
                                 format_number(p.interval.upper()),
                                 format_number(p.alpha),
                                 format_number(p.m),
                                 detail::opt_number(p.p),
                                 detail::opt_number(p.q),
                                 format_number(w.mu1),
                                 format_number(w.tau1),
                                 format_number(w.mu2),
                                 format_number(w.tau2),
                                 detail::opt_number(r.eta),
                                 r.eta_case ? std::string(to_string(*r.eta_case)) : "",
                                 format_number(r.gap),
                                 format_number(r.lemma1_residual)};
    for (const auto& e : r.bounds) {
        switch (e.result.status) {
        case BoundStatus::Ok: row.push_back(format_number(*e.result.value)); break;
        case BoundStatus::Error: row.emplace_back("ERR"); break;
        default: row.emplace_back("NA"); break;
        }
        row.push_back(detail::opt_number(e.tightness));
        row.emplace_back(e.violation ? "1" : "0");
    }
    row.push_back(r.certifier_status());
    return row;
}

inline void write_csv(const SweepReport& report, std::ostream& out) {
    const auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out << ',';
            out << detail::csv_quote(cells[i]);
        }
        out << '\n';
    };
    emit(csv_header());
    for (const auto& r : report.records)
        emit(csv_row(r));
}

inline void write_summary_csv(const SweepSummary& s, std::ostream& out) {
    out << "theorem,variant,applicable,not_applicable,errors,min_tightness,max_tightness,violations,"
           "certified_violations\n";
    for (const auto& v : s.per_bound)
        out << to_string(v.theorem) << ',' << to_string(v.variant) << ',' << v.applicable << ','
            << v.not_applicable << ',' << v.errors << ',' << detail::opt_number(v.min_tightness) << ','
            << detail::opt_number(v.max_tightness) << ',' << v.violations << ',' << v.certified_violations
            << '\n';
}

inline nlohmann::ordered_json to_json(const audit::AuditRecord& r) {
    using nlohmann::ordered_json;
    const auto& p = r.params;
    const YoungWeights w = p.young.value_or(YoungWeights{});
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["label"] = r.label;
    j["family"] = r.family;
    j["fam_params"] = r.fam_params;
    j["a"] = p.interval.lower();
    j["b"] = p.interval.upper();
    j["alpha"] = p.alpha;
    j["m"] = p.m;
    j["p"] = detail::json_number(p.p);
    j["q"] = detail::json_number(p.q);
    j["mu1"] = w.mu1;
    j["tau1"] = w.tau1;
    j["mu2"] = w.mu2;
    j["tau2"] = w.tau2;
    j["eta"] = detail::json_number(r.eta);
    j["eta_case"] = r.eta_case ? ordered_json(std::string(to_string(*r.eta_case))) : ordered_json(nullptr);
    j["gap"] = detail::json_number(r.gap);
    j["lemma1_residual"] = detail::json_number(r.lemma1_residual);
    j["quadrature_converged"] = r.quadrature_converged;
    if (!r.quadrature_message.empty())
        j["quadrature_message"] = r.quadrature_message;
    j["approximate_derivative"] = r.approximate_derivative;
    ordered_json bounds = ordered_json::array();
    for (const auto& e : r.bounds) {
        ordered_json b;
        b["theorem"] = std::string(to_string(e.result.theorem));
        b["variant"] = std::string(to_string(e.result.variant));
        b["status"] = std::string(to_string(e.result.status));
        b["value"] = detail::json_number(e.result.value);
        b["tightness"] = detail::json_number(e.tightness);
        b["violation"] = e.violation;
        b["hypothesis"] = e.hypothesis;
        b["hypothesis_holds"] = e.hypothesis_holds;
        if (!e.result.message.empty())
            b["message"] = e.result.message;
        bounds.push_back(std::move(b));
    }
    j["bounds"] = std::move(bounds);
    ordered_json certs = ordered_json::array();
    for (const auto& c : r.certificates) {
        ordered_json cj;
        cj["label"] = c.label;
        cj["status"] = std::string(c.status());
        if (c.certificate) {
            cj["samples_checked"] = c.certificate->samples_checked;
            cj["max_violation"] = detail::json_number(c.certificate->max_violation);
            if (c.certificate->witness)
                cj["witness"] = {c.certificate->witness->x, c.certificate->witness->y, c.certificate->witness->t};
        } else {
            cj["error"] = c.error;
        }
        certs.push_back(std::move(cj));
    }
    j["certificates"] = std::move(certs);
    j["certifier_status"] = r.certifier_status();
    return j;
}

inline nlohmann::ordered_json to_json(const SweepSummary& s) {
    nlohmann::ordered_json j;
    j["cells"] = s.cells;
    j["quadrature_failures"] = s.quadrature_failures;
    j["asserted_counterexamples"] = s.asserted_counterexamples;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& v : s.per_bound) {
        nlohmann::ordered_json r;
        r["theorem"] = std::string(to_string(v.theorem));
        r["variant"] = std::string(to_string(v.variant));
        r["applicable"] = v.applicable;
        r["not_applicable"] = v.not_applicable;
        r["errors"] = v.errors;
        r["min_tightness"] = detail::json_number(v.min_tightness);
        r["max_tightness"] = detail::json_number(v.max_tightness);
        r["violations"] = v.violations;
        r["certified_violations"] = v.certified_violations;
        rows.push_back(std::move(r));
    }
    j["bounds"] = std::move(rows);
    return j;
}

inline void write_json(const SweepReport& report, std::ostream& out) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& r : report.records)
        records.push_back(to_json(r));
    j["records"] = std::move(records);
    j["summary"] = to_json(report.summary);
    out << j.dump(2) << '\n';
}

struct ReportFiles {
    std::vector<std::filesystem::path> paths;
};

/// Writes report.csv + summary.csv and/or report.json into out_dir.
inline ReportFiles write_reports(const SweepReport& report, const std::filesystem::path& out_dir,
                                 ReportFormat format) {
    std::filesystem::create_directories(out_dir);
    ReportFiles files;
    const auto open = [&](const char* name) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        files.paths.push_back(path);
        return out;
    };
    if (format == ReportFormat::Csv || format == ReportFormat::Both) {
        auto out = open("report.csv");
        write_csv(report, out);
        auto summary = open("summary.csv");
        write_summary_csv(report.summary, summary);
    }
    if (format == ReportFormat::Json || format == ReportFormat::Both) {
        auto out = open("report.json");
        write_json(report, out);
    }
    return files;
}

/// Runs the sweep described by cfg and writes its reports.
inline ReportFiles sweep(const SweepConfig& cfg, unsigned threads = 1) {
    return write_reports(run_sweep(cfg, threads), cfg.out_dir, cfg.format);
}

// ---------------------------------------------------------------------------
// Built-in catalog: functions whose hypotheses are known, used by the
// soundness suite and `audit run` without a config.

struct CatalogEntry {
    std::string name;
    std::string family;
    ParamMap params;
};

inline std::vector<CatalogEntry> builtin_catalog() {
    return {
        {"exp", "exp_affine", {{"A", 1.0}, {"lambda", 1.0}, {"C", 0.0}}},
        {"exp_shallow", "exp_affine", {{"A", 0.05}, {"lambda", 1.0}, {"C", 1.0}}},
        {"linear_gentle", "linear_affine", {{"slope", 0.5}, {"intercept", 1.0}}},
        {"linear_steep", "linear_affine", {{"slope", 3.0}, {"intercept", 1.0}}},
        {"gauss_tail", "exp_quadratic", {{"beta", 1.0}, {"gamma", 0.0}, {"delta", -1.0}, {"C", 1.0}}},
        {"exp_decay", "exp_affine", {{"A", 1.0}, {"lambda", -1.0}, {"C", 2.0}}},
    };
}

inline std::vector<FunctionEntry> catalog_entries() {
    std::vector<FunctionEntry> out;
    for (const auto& c : builtin_catalog()) {
        FunctionEntry f;
        f.name = c.name;
        f.family = c.family;
        f.instances = {c.params};
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace hhaudit::sweep
