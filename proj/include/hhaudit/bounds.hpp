#pragma once

// Upper bounds on the trapezoid gap |(f(a)+f(b))/2 - mean of f over [a,b]|.
//
// Every theorem is evaluated in two variants:
//   AsPublished - the printed closed form, transcribed as printed;
//   Rederived   - the value of the proof's own final integrals, computed
//                 through the kernel moments.
// Where the two disagree, the disagreement is reported, not repaired.
//
// Common symbols: M = |f'(b/m)|^m, eta = |f'(a)| / M. Only the eta = 1 and
// eta < 1 cases are covered; eta > 1 yields NotApplicable.

#include <cmath>
#include <string>

#include "hhaudit/core.hpp"
#include "hhaudit/format.hpp"
#include "hhaudit/funcmodel.hpp"
#include "hhaudit/kernel.hpp"

namespace hhaudit::bounds {

/// Below this |argument| the printed fractions are evaluated through their
/// (algebraically identical) Taylor series; literal evaluation cancels.
inline constexpr double kPrintedSeriesBand = 0.5;

namespace published {

/// (-x^2 - 2x + 2e^x - 2) / x^3 with x = alpha ln(eta); tends to 1/3 as x -> 0.
inline double thm1_fraction(double x) {
    if (std::abs(x) < kPrintedSeriesBand) {
        // 2 sum_{k>=3} x^{k-3} / k!
        double sum = 0.0;
        double term = 1.0 / 6.0;
        for (int k = 3; k < 40; ++k) {
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum))
                break;
            term *= x / (k + 1);
        }
        return 2.0 * sum;
    }
    return (-x * x - 2.0 * x + 2.0 * std::exp(x) - 2.0) / (x * x * x);
}

/// The m-corollary's printed fraction (-ln^2 eta - 2 ln eta + 2 eta - 2) / ln^3 eta.
inline double thm1_cor_m_fraction(double log_eta) {
    const double L = log_eta;
    return (-L * L - 2.0 * L + 2.0 * std::exp(L) - 2.0) / (L * L * L);
}

/// The alpha-corollary's printed fraction
/// (4 eta^alpha - 4 alpha ln eta - 2 alpha^2 ln^2 eta - 4) / (2 alpha^3 ln^3 eta).
inline double thm1_cor_alpha_fraction(double alpha, double log_eta) {
    const double aL = alpha * log_eta;
    return (4.0 * std::exp(aL) - 4.0 * aL - 2.0 * aL * aL - 4.0) / (2.0 * aL * aL * aL);
}

/// (phi - 1) / ln(phi) with ln(phi) = ell.
inline double eta_ratio(double ell) {
    if (ell == 0.0)
        return 1.0;
    return std::expm1(ell) / ell;
}

/// First power-mean bracket: (2phi - 2)/ln^3 phi - (phi + 1)/ln^2 phi - (1 - phi)/(2 ln phi).
inline double thm3_first_bracket(double ell) {
    if (std::abs(ell) < kPrintedSeriesBand)
        return kernel::detail::abs_exp_series_in_log(ell);
    const double phi = std::exp(ell);
    return (2.0 * phi - 2.0) / (ell * ell * ell) - (phi + 1.0) / (ell * ell) -
           (1.0 - phi) / (2.0 * ell);
}

/// Second power-mean bracket: (phi - 1)/ln^2 phi - (phi + 1)/(2 ln phi).
inline double thm3_second_bracket(double ell) {
    if (std::abs(ell) < kPrintedSeriesBand) {
        // sum_{n>=3} (2 - n) / (2 n!) ell^{n-2}
        double sum = 0.0;
        double power = ell / 6.0;  // ell^{n-2} / n! at n = 3
        for (int n = 3; n < 40; ++n) {
            const double term = (2.0 - n) / 2.0 * power;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum))
                break;
            power *= ell / (n + 1);
        }
        return sum;
    }
    const double phi = std::exp(ell);
    return (phi - 1.0) / (ell * ell) - (phi + 1.0) / (2.0 * ell);
}

/// 2 mu^3 / ((2 mu + 1)(mu + 1))
inline double young_mu_term(double mu) { return 2.0 * mu * mu * mu / ((2.0 * mu + 1.0) * (mu + 1.0)); }

}  // namespace published

/// Endpoint quantities shared by all bounds for one (function, a, b, m).
struct EndpointData {
    double width;    // b - a
    double scale;    // M
    double eta;      // |f'(a)| / M
    double log_eta;  // computed from the logs of the magnitudes
    EtaCase eta_case;

    static EndpointData from_eta(double width, double scale, double eta) {
        if (!(width > 0.0) || !(scale > 0.0) || !(eta > 0.0))
            throw DomainError("width, scale and eta must be positive");
        return {width, scale, eta, std::log(eta), classify_eta(eta)};
    }
};

/// Evaluates f' at a and b/m; the function domain must contain [0, b/m].
inline EndpointData endpoint_data(const FunctionSpec& spec, const BoundParams& params) {
    params.validate_common();
    const double a = params.interval.lower();
    const double b = params.interval.upper();
    const double upper = b / params.m;
    if (spec.domain().lower() > 0.0 || spec.domain().upper() < upper)
        throw DomainError("function domain [" + format_number(spec.domain().lower()) + ", " +
                          format_number(spec.domain().upper()) + "] must contain [0, b/m] = [0, " +
                          format_number(upper) + "]");
    const double fa = std::abs(spec.fprime(a));
    const double fbm = std::abs(spec.fprime(upper));
    if (!(fa > 0.0) || !(fbm > 0.0))
        throw DomainError("|f'| must be strictly positive at a and b/m");
    const EtaValue eta = EtaValue::from_magnitudes(fa, fbm, params.m);
    return {b - a, std::pow(fbm, params.m), eta.base, std::log(fa) - params.m * std::log(fbm),
            eta.eta_case};
}

/// Parameters with the corollary's specialisation applied.
inline BoundParams pinned_params(TheoremId id, BoundParams params) {
    switch (id) {
    case TheoremId::T1CorM:
    case TheoremId::T3CorM: params.alpha = 1.0; break;
    case TheoremId::T2CorM22:
        params.alpha = 1.0;
        params.p = 2.0;
        params.q = 2.0;
        break;
    case TheoremId::T1CorAlpha:
    case TheoremId::T2CorAlpha:
    case TheoremId::T3CorAlpha: params.m = 1.0; break;
    case TheoremId::T4CorSym:
        if (params.young)
            params.young = YoungWeights{params.young->mu1, params.young->tau1, params.young->mu1,
                                        params.young->tau1};
        break;
    default: break;
    }
    return params;
}

namespace detail {

inline double thm1(const EndpointData& d, const BoundParams& pr, Variant v) {
    if (d.eta_case == EtaCase::EqualOne) {
        if (v == Variant::AsPublished)
            return d.width / 3.0 * d.scale;
        return d.width / 2.0 * d.scale * 2.0 * kernel::moment_abs_pow(1.0);
    }
    const double x = pr.alpha * d.log_eta;
    if (v == Variant::AsPublished)
        return d.width / 2.0 * d.scale * published::thm1_fraction(x);
    // Both |s-t|-weighted integrals equal moment_abs_exp(eta^alpha) after the
    // power-lemma relaxation eta^{t^alpha} <= eta^{alpha t}.
    return d.width / 2.0 * d.scale * 2.0 * kernel::moment_abs_exp(std::exp(x));
}

inline double thm2(const EndpointData& d, const BoundParams& pr, Variant v) {
    const double p = *pr.p;
    const double q = *pr.q;
    if (v == Variant::AsPublished) {
        const double weight = std::pow(2.0 / ((p + 1.0) * (p + 2.0)), 1.0 / p);
        if (d.eta_case == EtaCase::EqualOne)
            return d.width * d.scale * weight;
        return d.width * d.scale * weight *
               std::pow(published::eta_ratio(pr.alpha * q * d.log_eta), 1.0 / q);
    }
    const double weight = std::pow(kernel::moment_abs_pow(p), 1.0 / p);
    const double c = d.eta_case == EtaCase::EqualOne ? 1.0 : std::exp(pr.alpha * q * d.log_eta);
    return d.width * d.scale * weight * std::pow(kernel::moment_exp(c), 1.0 / q);
}

struct Thm3Value {
    double value;
    bool negative_bracket;
    std::string message;
};

inline Thm3Value thm3(const EndpointData& d, const BoundParams& pr, Variant v) {
    const double q = *pr.q;
    if (v == Variant::AsPublished) {
        if (d.eta_case == EtaCase::EqualOne)
            return {d.width / 3.0 * d.scale, false, {}};
        const double ell = pr.alpha * q * d.log_eta;
        const double first = published::thm3_first_bracket(ell);
        const double second = published::thm3_second_bracket(ell);
        if (first < 0.0 || second < 0.0)
            return {std::nan(""), true,
                    "printed bracket negative (first=" + format_number(first) +
                        ", second=" + format_number(second) + ")"};
        return {d.width / 2.0 * std::pow(1.0 / 3.0, 1.0 - 1.0 / q) * d.scale *
                    (std::pow(first, 1.0 / q) + std::pow(second, 1.0 / q)),
                false,
                {}};
    }
    const double c = d.eta_case == EtaCase::EqualOne ? 1.0 : std::exp(pr.alpha * q * d.log_eta);
    // The two proof integrals coincide under s <-> t, hence the factor 2.
    return {d.width / 2.0 * std::pow(kernel::moment_abs_pow(1.0), 1.0 - 1.0 / q) * d.scale * 2.0 *
                std::pow(kernel::moment_abs_exp(c), 1.0 / q),
            false,
            {}};
}

inline double thm4(const EndpointData& d, const BoundParams& pr, Variant v) {
    const YoungWeights& w = *pr.young;
    const bool unit = d.eta_case == EtaCase::EqualOne;
    double bracket = 0.0;
    if (v == Variant::AsPublished) {
        bracket = published::young_mu_term(w.mu1) + published::young_mu_term(w.mu2);
        if (unit) {
            bracket += w.tau1 + w.tau2;
        } else {
            bracket += w.tau1 * published::eta_ratio(pr.alpha / w.tau1 * d.log_eta) +
                       w.tau2 * published::eta_ratio(pr.alpha / w.tau2 * d.log_eta);
        }
    } else {
        bracket = w.mu1 * kernel::moment_abs_pow(1.0 / w.mu1) +
                  w.mu2 * kernel::moment_abs_pow(1.0 / w.mu2);
        const double c1 = unit ? 1.0 : std::exp(pr.alpha / w.tau1 * d.log_eta);
        const double c2 = unit ? 1.0 : std::exp(pr.alpha / w.tau2 * d.log_eta);
        bracket += w.tau1 * kernel::moment_exp(c1) + w.tau2 * kernel::moment_exp(c2);
    }
    return d.width / 2.0 * d.scale * bracket;
}

}  // namespace detail

/// Evaluates one bound from precomputed endpoint data. `params` must already
/// be pinned for the corollary and valid for the theorem.
inline BoundResult evaluate_at(TheoremId id, Variant variant, const EndpointData& data,
                               const BoundParams& params) {
    BoundResult r;
    r.theorem = id;
    r.variant = variant;
    r.eta = data.eta;
    r.eta_case = data.eta_case;
    if (data.eta_case == EtaCase::AboveOne) {
        r.status = BoundStatus::NotApplicable;
        r.message = "eta > 1 is outside the inequality's cases";
        return r;
    }
    switch (theorem_family(id)) {
    case 1: r.value = detail::thm1(data, params, variant); break;
    case 2: r.value = detail::thm2(data, params, variant); break;
    case 3: {
        auto v = detail::thm3(data, params, variant);
        if (v.negative_bracket) {
            r.status = BoundStatus::NegativeBracket;
            r.message = std::move(v.message);
            return r;
        }
        r.value = v.value;
        break;
    }
    case 4: r.value = detail::thm4(data, params, variant); break;
    default: throw DomainError("unknown theorem id");
    }
    r.status = BoundStatus::Ok;
    return r;
}

struct BoundRequest {
    FunctionSpec spec;
    BoundParams params;
    TheoremId theorem = TheoremId::T1;
    Variant variant = Variant::Rederived;
};

/// Full evaluation: pins corollary parameters, validates, reads the endpoint
/// derivatives and evaluates. Invalid parameters throw DomainError.
inline BoundResult evaluate(const BoundRequest& req) {
    const BoundParams params = pinned_params(req.theorem, req.params);
    params.validate_for(req.theorem);
    const EndpointData data = endpoint_data(req.spec, params);
    return evaluate_at(req.theorem, req.variant, data, params);
}

namespace detail {
inline BoundResult evaluate_as(TheoremId id, BoundRequest req) {
    req.theorem = id;
    return evaluate(req);
}
}  // namespace detail

inline BoundResult thm1_bound(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T1, req); }
inline BoundResult thm1_cor_m(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T1CorM, req); }
inline BoundResult thm1_cor_alpha(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T1CorAlpha, req); }
inline BoundResult thm2_bound(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T2, req); }
inline BoundResult thm2_cor_m22(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T2CorM22, req); }
inline BoundResult thm2_cor_alpha(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T2CorAlpha, req); }
inline BoundResult thm3_bound(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T3, req); }
inline BoundResult thm3_cor_m(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T3CorM, req); }
inline BoundResult thm3_cor_alpha(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T3CorAlpha, req); }
inline BoundResult thm4_bound(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T4, req); }
inline BoundResult thm4_cor_sym(const BoundRequest& req) { return detail::evaluate_as(TheoremId::T4CorSym, req); }

}  // namespace hhaudit::bounds
