#pragma once

// Moments of the |s - t| weight over the unit square. Every bound in the
// audit reduces to one of
//
//   abs_pow(p)  = int int |s - t|^p        dt ds = 2 / ((p + 1)(p + 2))
//   exp(c)      = int int c^t              dt ds = (c - 1) / ln c
//   abs_exp(c)  = int int |s - t| c^t      dt ds
//               = (c - 1)/(2L) - (c + 1)/L^2 + 2(c - 1)/L^3,   L = ln c
//
// The last two have a removable singularity at c = 1; near it both switch to
// Taylor series.

#include <cmath>
#include <string_view>

#include "hhaudit/core.hpp"
#include "hhaudit/quad.hpp"

namespace hhaudit::kernel {

/// moment_exp uses its series for |c - 1| <= this.
inline constexpr double kExpSeriesBand = 1e-4;
/// moment_abs_exp uses its series for |ln c| <= this. The closed form loses
/// roughly eps / |ln c|^3 to cancellation, so the band is wider than for exp.
inline constexpr double kAbsExpSeriesBand = 0.2;

enum class MomentMethod { ClosedForm, Series, Oracle };

enum class MomentKind {
    AbsPow,        // |s - t|^p
    Exp,           // c^t
    AbsExp,        // |s - t| c^t
    AbsExpMirror,  // |s - t| c^s
};

struct MomentValue {
    double value = 0.0;
    MomentMethod method = MomentMethod::ClosedForm;
    double error_estimate = 0.0;
};

inline std::string_view to_string(MomentMethod m) {
    switch (m) {
    case MomentMethod::ClosedForm: return "closed_form";
    case MomentMethod::Series: return "series";
    case MomentMethod::Oracle: return "oracle";
    }
    return "?";
}

namespace detail {

inline void require_positive_base(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw DomainError("moment base c must be finite and > 0");
}

inline double exp_closed(double c) { return (c - 1.0) / std::log(c); }

// d / log1p(d) = 1 + d/2 - d^2/12 + d^3/24 - 19 d^4/720 + 3 d^5/160
inline double exp_series(double c) {
    const double d = c - 1.0;
    return 1.0 + d * (1.0 / 2 + d * (-1.0 / 12 + d * (1.0 / 24 + d * (-19.0 / 720 + d * (3.0 / 160)))));
}

inline double abs_exp_closed(double c) {
    const double L = std::log(c);
    return (c - 1.0) / (2.0 * L) - (c + 1.0) / (L * L) + 2.0 * (c - 1.0) / (L * L * L);
}

// int_0^1 (t^2 - t + 1/2) e^{L t} dt
//   = sum_k L^k / k! * (k^2 + 3k + 4) / (2 (k+1)(k+2)(k+3))
inline double abs_exp_series_in_log(double L) {
    double sum = 0.0;
    double power = 1.0;  // L^k / k!
    for (int k = 0; k < 60; ++k) {
        const double kk = k;
        const double coeff = (kk * kk + 3.0 * kk + 4.0) / (2.0 * (kk + 1.0) * (kk + 2.0) * (kk + 3.0));
        const double term = power * coeff;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
        power *= L / (kk + 1.0);
    }
    return sum;
}

inline double abs_exp_series(double c) { return abs_exp_series_in_log(std::log(c)); }

}  // namespace detail

/// int int |s - t|^p over [0,1]^2, p > 0.
inline double moment_abs_pow(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw DomainError("moment_abs_pow requires finite p > 0");
    return 2.0 / ((p + 1.0) * (p + 2.0));
}

/// int int c^t over [0,1]^2 = (c - 1) / ln c, continuous through c = 1.
inline double moment_exp(double c) {
    detail::require_positive_base(c);
    if (std::abs(c - 1.0) <= kExpSeriesBand)
        return detail::exp_series(c);
    return detail::exp_closed(c);
}

/// int int |s - t| c^t over [0,1]^2, continuous through c = 1 (value 1/3).
inline double moment_abs_exp(double c) {
    detail::require_positive_base(c);
    if (std::abs(std::log(c)) <= kAbsExpSeriesBand)
        return detail::abs_exp_series(c);
    return detail::abs_exp_closed(c);
}

inline MomentMethod moment_abs_exp_method(double c) {
    detail::require_positive_base(c);
    return std::abs(std::log(c)) <= kAbsExpSeriesBand ? MomentMethod::Series
                                                       : MomentMethod::ClosedForm;
}

/// Ground truth by 2D quadrature. `parameter` is p for AbsPow and c otherwise.
inline MomentValue moment_oracle(MomentKind kind, double parameter, double rel_tol = 1e-10) {
    quad::QuadratureResult r;
    switch (kind) {
    case MomentKind::AbsPow: {
        if (!(parameter > 0.0) || !std::isfinite(parameter))
            throw DomainError("abs_pow oracle requires finite p > 0");
        const double p = parameter;
        r = quad::integrate_2d_unit_square(
            [p](double s, double t) { return std::pow(std::abs(s - t), p); }, rel_tol);
        break;
    }
    case MomentKind::Exp: {
        detail::require_positive_base(parameter);
        const double L = std::log(parameter);
        r = quad::integrate_2d_unit_square([L](double, double t) { return std::exp(L * t); },
                                           rel_tol);
        break;
    }
    case MomentKind::AbsExp: {
        detail::require_positive_base(parameter);
        const double L = std::log(parameter);
        r = quad::integrate_2d_unit_square(
            [L](double s, double t) { return std::abs(s - t) * std::exp(L * t); }, rel_tol);
        break;
    }
    case MomentKind::AbsExpMirror: {
        detail::require_positive_base(parameter);
        const double L = std::log(parameter);
        r = quad::integrate_2d_unit_square(
            [L](double s, double t) { return std::abs(s - t) * std::exp(L * s); }, rel_tol);
        break;
    }
    }
    if (!r.converged)
        throw quad::NonConvergenceError("moment oracle did not converge", r);
    return {r.value, MomentMethod::Oracle, r.error_estimate};
}

inline std::optional<MomentKind> parse_moment_kind(std::string_view name) {
    if (name == "abs_pow") return MomentKind::AbsPow;
    if (name == "exp") return MomentKind::Exp;
    if (name == "abs_exp") return MomentKind::AbsExp;
    if (name == "abs_exp_mirror") return MomentKind::AbsExpMirror;
    return std::nullopt;
}

/// Closed-form (or series) value for the kinds that have one.
inline MomentValue moment_value(MomentKind kind, double parameter) {
    switch (kind) {
    case MomentKind::AbsPow: return {moment_abs_pow(parameter), MomentMethod::ClosedForm, 0.0};
    case MomentKind::Exp: {
        const double v = moment_exp(parameter);
        const auto method = std::abs(parameter - 1.0) <= kExpSeriesBand ? MomentMethod::Series
                                                                        : MomentMethod::ClosedForm;
        return {v, method, 0.0};
    }
    case MomentKind::AbsExp:
    case MomentKind::AbsExpMirror:
        // Same integral after relabelling s <-> t.
        return {moment_abs_exp(parameter), moment_abs_exp_method(parameter), 0.0};
    }
    return {};
}

}  // namespace hhaudit::kernel
