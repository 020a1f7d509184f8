#pragma once

// Ground-truth measurements and the per-cell audit: the trapezoid gap, the
// integral identity behind every bound, the classic Hermite-Hadamard sandwich,
// and run_audit, which puts every bound next to the measured gap.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hhaudit/bounds.hpp"
#include "hhaudit/core.hpp"
#include "hhaudit/format.hpp"
#include "hhaudit/funcmodel.hpp"
#include "hhaudit/quad.hpp"

namespace hhaudit::audit {

inline constexpr double kHermiteHadamardSlack = 1e-10;
/// A bound is violated when gap > bound + kViolationTolerance * max(1, bound).
inline constexpr double kViolationTolerance = 1e-9;

namespace detail {

inline void require_within_domain(const FunctionSpec& spec, const Interval& interval) {
    if (!spec.domain().contains(interval))
        throw DomainError("interval [" + format_number(interval.lower()) + ", " +
                          format_number(interval.upper()) + "] is not inside the function domain");
}

inline quad::QuadratureResult converged_or_throw(quad::QuadratureResult r, const char* what) {
    if (!r.converged)
        throw quad::NonConvergenceError(std::string(what) + " did not converge", r);
    return r;
}

}  // namespace detail

struct GapMeasurement {
    double gap;           // |(f(a)+f(b))/2 - mean|
    double signed_gap;    // (f(a)+f(b))/2 - mean
    double mean;          // (1/(b-a)) int_a^b f
    double error_estimate;
};

inline GapMeasurement measure_gap(const FunctionSpec& spec, const Interval& interval,
                                  double rel_tol = quad::kDefaultRelTol1d) {
    detail::require_within_domain(spec, interval);
    const double a = interval.lower();
    const double b = interval.upper();
    const auto r = detail::converged_or_throw(
        quad::integrate_1d([&spec](double x) { return spec.evaluate_unchecked(x).f; }, a, b, rel_tol),
        "gap quadrature");
    const double mean = r.value / interval.width();
    const double signed_gap = 0.5 * (spec.f(a) + spec.f(b)) - mean;
    return {std::abs(signed_gap), signed_gap, mean, r.error_estimate / interval.width()};
}

/// |(f(a)+f(b))/2 - (1/(b-a)) int_a^b f|; throws NonConvergenceError with the
/// partial quadrature result if the integral does not converge.
inline double trapezoid_gap(const FunctionSpec& spec, const Interval& interval,
                            double rel_tol = quad::kDefaultRelTol1d) {
    return measure_gap(spec, interval, rel_tol).gap;
}

struct IdentityCheck {
    double lhs;           // (f(a)+f(b))/2 - mean
    double rhs;           // (b-a)/2 int int [f'(ta+(1-t)b) - f'(sa+(1-s)b)](s-t) dt ds
    double residual;      // |lhs - rhs|
    double error_budget;  // combined quadrature error estimates of both sides
};

/// Both sides of the integral identity behind the bounds, measured
/// independently (1D quadrature of f versus 2D quadrature of f').
inline IdentityCheck lemma1_check(const FunctionSpec& spec, const Interval& interval,
                                  double rel_tol = quad::kDefaultRelTol1d,
                                  double rel_tol_2d = 1e-10) {
    const GapMeasurement g = measure_gap(spec, interval, rel_tol);
    const double a = interval.lower();
    const double b = interval.upper();
    const auto r = detail::converged_or_throw(
        quad::integrate_2d_unit_square(
            [&spec, a, b](double s, double t) {
                const double dt = spec.fprime_unchecked(t * a + (1.0 - t) * b);
                const double ds = spec.fprime_unchecked(s * a + (1.0 - s) * b);
                return (dt - ds) * (s - t);
            },
            rel_tol_2d),
        "identity quadrature");
    const double half = 0.5 * interval.width();
    const double rhs = half * r.value;
    return {g.signed_gap, rhs, std::abs(g.signed_gap - rhs), g.error_estimate + half * r.error_estimate};
}

inline double lemma1_residual(const FunctionSpec& spec, const Interval& interval,
                              double rel_tol = quad::kDefaultRelTol1d) {
    return lemma1_check(spec, interval, rel_tol).residual;
}

struct HermiteHadamardTerms {
    double midpoint;   // f((a+b)/2)
    double mean;       // (1/(b-a)) int f
    double trapezoid;  // (f(a)+f(b))/2
};

inline HermiteHadamardTerms hh_terms(const FunctionSpec& spec, const Interval& interval,
                                     double rel_tol = quad::kDefaultRelTol1d) {
    const GapMeasurement g = measure_gap(spec, interval, rel_tol);
    const double a = interval.lower();
    const double b = interval.upper();
    return {spec.f(0.5 * (a + b)), g.mean, 0.5 * (spec.f(a) + spec.f(b))};
}

/// f((a+b)/2) <= mean <= (f(a)+f(b))/2, each within 1e-10.
inline bool hh_sanity(const FunctionSpec& spec, const Interval& interval) {
    const auto t = hh_terms(spec, interval);
    return t.midpoint <= t.mean + kHermiteHadamardSlack &&
           t.mean <= t.trapezoid + kHermiteHadamardSlack;
}

// ---------------------------------------------------------------------------
// Per-cell audit

struct AuditOptions {
    double rel_tol_1d = quad::kDefaultRelTol1d;
    double rel_tol_2d = quad::kDefaultRelTol2d;
    SamplingPlan plan;
    bool certify = true;
};

struct BoundEntry {
    BoundResult result;
    std::optional<double> tightness;  // gap / bound, when the bound applies
    bool violation = false;
    std::string hypothesis;           // certificate label the bound relies on
    bool hypothesis_holds = true;     // certified, or assumed when not certifying
};

struct NamedCertificate {
    std::string label;
    std::optional<Certificate> certificate;
    std::string error;

    std::string_view status() const {
        if (!certificate)
            return "err";
        return to_string(certificate->status);
    }
};

struct AuditRecord {
    std::string label;
    std::string family;
    std::string fam_params;
    BoundParams params{Interval(0.0, 1.0), 1.0, 1.0, std::nullopt, std::nullopt, std::nullopt};
    std::optional<double> eta;
    std::optional<EtaCase> eta_case;
    double gap = std::nan("");
    double lemma1_residual = std::nan("");
    double lemma1_budget = std::nan("");
    bool quadrature_converged = true;
    std::string quadrature_message;
    bool approximate_derivative = false;
    std::vector<BoundEntry> bounds;  // kAllTheorems x kAllVariants, in that order
    std::vector<NamedCertificate> certificates;

    /// "am=ok;m=ok;alpha=cex" in a fixed label order.
    std::string certifier_status() const {
        if (certificates.empty())
            return "skipped";
        std::string out;
        for (const auto& c : certificates) {
            if (!out.empty())
                out += ';';
            out += c.label;
            out += '=';
            out += c.status();
        }
        return out;
    }

    bool any_counterexample() const {
        for (const auto& c : certificates)
            if (c.certificate && c.certificate->status == CertStatus::Counterexample)
                return true;
        return false;
    }

    const BoundEntry* find(TheoremId id, Variant v) const {
        for (const auto& b : bounds)
            if (b.result.theorem == id && b.result.variant == v)
                return &b;
        return nullptr;
    }
};

/// Which convexity statement a bound assumes: on |f'|^power with the pinned
/// (alpha, m), over [0, b/m].
struct Hypothesis {
    std::string label;
    double alpha;
    double m;
    double upper;
    double power;
};

inline std::optional<Hypothesis> hypothesis_for(TheoremId id, const BoundParams& cell) {
    const BoundParams p = bounds::pinned_params(id, cell);
    std::string kind = "am";
    if (id == TheoremId::T1CorM || id == TheoremId::T2CorM22 || id == TheoremId::T3CorM)
        kind = "m";
    else if (id == TheoremId::T1CorAlpha || id == TheoremId::T2CorAlpha || id == TheoremId::T3CorAlpha)
        kind = "alpha";

    double power = 1.0;
    const int family = theorem_family(id);
    if (family == 2 || family == 3) {
        if (!p.q)
            return std::nullopt;
        power = *p.q;
    }
    std::string label = kind;
    if (power != 1.0)
        label += (id == TheoremId::T2CorM22 ? "^2" : "^q");
    return Hypothesis{label, p.alpha, p.m, p.interval.upper() / p.m, power};
}

namespace detail {

inline BoundEntry score(BoundResult result, double gap) {
    BoundEntry e;
    e.result = std::move(result);
    if (e.result.applicable() && std::isfinite(gap)) {
        const double bound = *e.result.value;
        if (bound > 0.0)
            e.tightness = gap / bound;
        else
            e.tightness = gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        e.violation = gap > bound + kViolationTolerance * std::max(1.0, bound);
    }
    return e;
}

}  // namespace detail

/// Audits one (function, parameters) cell. Sub-failures are recorded in the
/// record (quadrature flags, per-bound errors, certificate errors); only
/// invalid alpha/m or an interval outside the function domain throw.
inline AuditRecord run_audit(const FunctionSpec& spec, const BoundParams& params,
                             const AuditOptions& options = {}) {
    params.validate_common();
    detail::require_within_domain(spec, params.interval);

    AuditRecord rec;
    rec.family = std::string(to_string(spec.family()));
    rec.fam_params = spec.param_string();
    rec.params = params;
    rec.approximate_derivative = spec.approximate_derivative();

    try {
        rec.gap = measure_gap(spec, params.interval, options.rel_tol_1d).gap;
    } catch (const quad::NonConvergenceError& e) {
        rec.quadrature_converged = false;
        rec.quadrature_message = e.what();
        const double partial = e.partial().value / params.interval.width();
        rec.gap = std::abs(0.5 * (spec.f(params.interval.lower()) + spec.f(params.interval.upper())) -
                           partial);
    } catch (const quad::EvaluationError& e) {
        rec.quadrature_converged = false;
        rec.quadrature_message = e.what();
    }

    try {
        const IdentityCheck id = lemma1_check(spec, params.interval, options.rel_tol_1d, options.rel_tol_2d);
        rec.lemma1_residual = id.residual;
        rec.lemma1_budget = id.error_budget;
    } catch (const quad::NonConvergenceError& e) {
        rec.quadrature_converged = false;
        if (rec.quadrature_message.empty())
            rec.quadrature_message = e.what();
    } catch (const quad::EvaluationError& e) {
        rec.quadrature_converged = false;
        if (rec.quadrature_message.empty())
            rec.quadrature_message = e.what();
    }

    try {
        const auto data = bounds::endpoint_data(spec, params);
        rec.eta = data.eta;
        rec.eta_case = data.eta_case;
    } catch (const DomainError&) {
        // eta undefined (domain too small or zero derivative); bounds record why.
    }

    // One entry per label; the sampling itself is shared between labels that
    // reduce to the same (alpha, m, upper, power).
    std::map<std::tuple<double, double, double, double>, NamedCertificate> computed;
    std::map<std::string, std::size_t> by_label;
    const auto certify = [&](const Hypothesis& h) -> const NamedCertificate& {
        if (const auto it = by_label.find(h.label); it != by_label.end())
            return rec.certificates[it->second];
        const auto key = std::make_tuple(h.alpha, h.m, h.upper, h.power);
        auto it = computed.find(key);
        if (it == computed.end()) {
            NamedCertificate nc;
            try {
                nc.certificate = certify_am_log_convex(spec, h.alpha, h.m, h.upper, options.plan, h.power);
            } catch (const DomainError& e) {
                nc.error = e.what();
            }
            it = computed.emplace(key, std::move(nc)).first;
        }
        NamedCertificate named = it->second;
        named.label = h.label;
        by_label.emplace(h.label, rec.certificates.size());
        rec.certificates.push_back(std::move(named));
        return rec.certificates.back();
    };

    for (TheoremId id : kAllTheorems) {
        std::optional<Hypothesis> hyp;
        bool holds = true;
        if (options.certify) {
            hyp = hypothesis_for(id, params);
            if (hyp) {
                const NamedCertificate& nc = certify(*hyp);
                holds = nc.certificate && nc.certificate->status == CertStatus::NoCounterexampleFound;
            }
        }
        for (Variant v : kAllVariants) {
            BoundResult result;
            try {
                result = bounds::evaluate({spec, params, id, v});
            } catch (const DomainError& e) {
                result.theorem = id;
                result.variant = v;
                result.status = BoundStatus::Error;
                result.message = e.what();
            }
            BoundEntry entry = detail::score(std::move(result), rec.quadrature_converged ? rec.gap : std::nan(""));
            if (hyp) {
                entry.hypothesis = hyp->label;
                entry.hypothesis_holds = holds;
            }
            rec.bounds.push_back(std::move(entry));
        }
    }
    return rec;
}

}  // namespace hhaudit::audit
