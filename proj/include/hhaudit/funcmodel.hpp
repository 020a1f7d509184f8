#pragma once

// Test-function families with exact f and f', and sampling-based falsifiers
// for the (alpha, m)-logarithmic convexity hypotheses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "hhaudit/core.hpp"
#include "hhaudit/format.hpp"
#include "hhaudit/quad.hpp"

namespace hhaudit {

enum class Family { ExpAffine, ExpQuadratic, LinearAffine, Polynomial, Tabulated };

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::ExpAffine: return "exp_affine";
    case Family::ExpQuadratic: return "exp_quadratic";
    case Family::LinearAffine: return "linear_affine";
    case Family::Polynomial: return "polynomial";
    case Family::Tabulated: return "tabulated";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view name) {
    if (name == "exp_affine") return Family::ExpAffine;
    if (name == "exp_quadratic") return Family::ExpQuadratic;
    if (name == "linear_affine") return Family::LinearAffine;
    if (name == "polynomial") return Family::Polynomial;
    if (name == "tabulated") return Family::Tabulated;
    return std::nullopt;
}

using ParamMap = std::map<std::string, double>;

struct Evaluation {
    double f;
    double fprime;
};

class FunctionSpec {
    // f'(x) = A e^{lambda x};  f = (A/lambda) e^{lambda x} + C, or A x + C at lambda = 0.
    struct ExpAffine {
        double A, lambda, C;
    };
    // f'(x) = exp(beta x^2 + gamma x + delta);  f(x) = C + int_0^x f'.
    struct ExpQuadratic {
        double beta, gamma, delta, C;
    };
    struct LinearAffine {
        double slope, intercept;
    };
    // f(x) = sum_k coeffs[k] x^k
    struct Polynomial {
        std::vector<double> coeffs;
    };
    // Piecewise-linear f through the nodes; f' from finite differences at the
    // nodes, interpolated linearly. Approximate by construction.
    struct Tabulated {
        std::vector<double> xs, fs, dfs;
    };

public:
    static FunctionSpec exp_affine(double A, double lambda, double C, Interval domain) {
        if (!(A > 0.0) || !std::isfinite(A) || !std::isfinite(lambda) || !std::isfinite(C))
            throw DomainError("exp_affine requires finite parameters with A > 0");
        FunctionSpec spec(Family::ExpAffine, ExpAffine{A, lambda, C}, domain);
        // f is increasing (f' > 0), so positivity at the left end suffices.
        spec.require_positive_at(domain.lower());
        return spec;
    }

    static FunctionSpec exp_quadratic(double beta, double gamma, double delta, double C,
                                      Interval domain) {
        if (!(beta >= 0.0))
            throw DomainError("exp_quadratic requires beta >= 0 (log f' convex)");
        return exp_quadratic_unchecked(beta, gamma, delta, C, domain);
    }

    /// As exp_quadratic but admits beta < 0; used to build non-log-convex
    /// inputs for the certifiers.
    static FunctionSpec exp_quadratic_unchecked(double beta, double gamma, double delta, double C,
                                                Interval domain) {
        if (!std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(delta) ||
            !std::isfinite(C))
            throw DomainError("exp_quadratic parameters must be finite");
        FunctionSpec spec(Family::ExpQuadratic, ExpQuadratic{beta, gamma, delta, C}, domain);
        spec.require_positive_at(domain.lower());
        return spec;
    }

    static FunctionSpec linear_affine(double slope, double intercept, Interval domain) {
        if (slope == 0.0 || !std::isfinite(slope) || !std::isfinite(intercept))
            throw DomainError("linear_affine requires a finite nonzero slope");
        FunctionSpec spec(Family::LinearAffine, LinearAffine{slope, intercept}, domain);
        spec.require_positive_at(domain.lower());
        spec.require_positive_at(domain.upper());
        return spec;
    }

    /// Polynomial sum_k coeffs[k] x^k. Positivity is not enforced, so classic
    /// examples such as x^2 on [0, 1] are admissible for the gap checks.
    static FunctionSpec polynomial(std::vector<double> coeffs, Interval domain) {
        if (coeffs.empty())
            throw DomainError("polynomial requires at least one coefficient");
        for (double c : coeffs)
            if (!std::isfinite(c))
                throw DomainError("polynomial coefficients must be finite");
        return FunctionSpec(Family::Polynomial, Polynomial{std::move(coeffs)}, domain);
    }

    static FunctionSpec tabulated(std::vector<double> xs, std::vector<double> fs) {
        if (xs.size() != fs.size() || xs.size() < 3)
            throw DomainError("tabulated requires matching x/f lists with at least 3 nodes");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(xs[i]) || !std::isfinite(fs[i]))
                throw DomainError("tabulated nodes must be finite");
            if (i > 0 && !(xs[i] > xs[i - 1]))
                throw DomainError("tabulated x nodes must be strictly increasing");
            if (!(fs[i] > 0.0))
                throw DomainError("tabulated f values must be > 0");
        }
        const std::size_t n = xs.size();
        std::vector<double> dfs(n);
        dfs[0] = (fs[1] - fs[0]) / (xs[1] - xs[0]);
        dfs[n - 1] = (fs[n - 1] - fs[n - 2]) / (xs[n - 1] - xs[n - 2]);
        for (std::size_t i = 1; i + 1 < n; ++i)
            dfs[i] = (fs[i + 1] - fs[i - 1]) / (xs[i + 1] - xs[i - 1]);
        Interval domain(xs.front(), xs.back());
        return FunctionSpec(Family::Tabulated, Tabulated{std::move(xs), std::move(fs), std::move(dfs)},
                            domain);
    }

    /// Builds a family by name from named parameters (the config/CLI surface).
    /// Unknown or missing parameter names are rejected.
    static FunctionSpec from_params(std::string_view family_name, const ParamMap& params,
                                    Interval domain) {
        const auto family = parse_family(family_name);
        if (!family)
            throw DomainError("unknown function family '" + std::string(family_name) + "'");
        const auto take = [&](std::initializer_list<std::pair<const char*, std::optional<double>>> keys) {
            for (const auto& [key, value] : params) {
                bool known = false;
                for (const auto& k : keys)
                    known = known || key == k.first;
                if (!known)
                    throw DomainError("unknown parameter '" + key + "' for family " +
                                      std::string(family_name));
            }
            std::vector<double> out;
            for (const auto& [name, fallback] : keys) {
                const auto it = params.find(name);
                if (it != params.end())
                    out.push_back(it->second);
                else if (fallback)
                    out.push_back(*fallback);
                else
                    throw DomainError("missing parameter '" + std::string(name) + "' for family " +
                                      std::string(family_name));
            }
            return out;
        };
        switch (*family) {
        case Family::ExpAffine: {
            const auto v = take({{"A", std::nullopt}, {"lambda", std::nullopt}, {"C", 0.0}});
            return exp_affine(v[0], v[1], v[2], domain);
        }
        case Family::ExpQuadratic: {
            const auto v = take({{"beta", std::nullopt}, {"gamma", 0.0}, {"delta", 0.0}, {"C", 1.0}});
            return exp_quadratic(v[0], v[1], v[2], v[3], domain);
        }
        case Family::LinearAffine: {
            const auto v = take({{"slope", std::nullopt}, {"intercept", std::nullopt}});
            return linear_affine(v[0], v[1], domain);
        }
        case Family::Polynomial: {
            std::vector<double> coeffs;
            for (const auto& [key, value] : params) {
                if (key.size() < 2 || key[0] != 'c' ||
                    key.find_first_not_of("0123456789", 1) != std::string::npos)
                    throw DomainError("polynomial parameters are named c0, c1, ...; got '" + key + "'");
                const std::size_t k = std::stoul(key.substr(1));
                if (k > 32)
                    throw DomainError("polynomial degree above 32 is not supported");
                if (coeffs.size() <= k)
                    coeffs.resize(k + 1, 0.0);
                coeffs[k] = value;
            }
            return polynomial(std::move(coeffs), domain);
        }
        case Family::Tabulated:
            throw DomainError("tabulated functions are built from node lists, not parameters");
        }
        throw DomainError("unreachable family");
    }

    Family family() const noexcept { return family_; }
    const Interval& domain() const noexcept { return domain_; }
    bool approximate_derivative() const noexcept { return family_ == Family::Tabulated; }

    /// "A=1;lambda=1;C=0" style rendering, stable across runs.
    std::string param_string() const {
        std::string out;
        const auto add = [&out](std::string_view key, double value) {
            if (!out.empty())
                out += ';';
            out += key;
            out += '=';
            out += format_number(value);
        };
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ExpAffine>) {
                    add("A", p.A);
                    add("lambda", p.lambda);
                    add("C", p.C);
                } else if constexpr (std::is_same_v<T, ExpQuadratic>) {
                    add("beta", p.beta);
                    add("gamma", p.gamma);
                    add("delta", p.delta);
                    add("C", p.C);
                } else if constexpr (std::is_same_v<T, LinearAffine>) {
                    add("slope", p.slope);
                    add("intercept", p.intercept);
                } else if constexpr (std::is_same_v<T, Polynomial>) {
                    for (std::size_t k = 0; k < p.coeffs.size(); ++k)
                        add("c" + std::to_string(k), p.coeffs[k]);
                } else {
                    out = "nodes=" + std::to_string(p.xs.size());
                }
            },
            params_);
        return out;
    }

    /// Same function on a different domain; positivity is re-checked.
    FunctionSpec with_domain(Interval domain) const {
        if (family_ == Family::Tabulated && !domain_.contains(domain))
            throw DomainError("tabulated function cannot be extended beyond its nodes");
        FunctionSpec copy = *this;
        copy.domain_ = domain;
        if (family_ != Family::Polynomial) {
            copy.require_positive_at(domain.lower());
            copy.require_positive_at(domain.upper());
        }
        return copy;
    }

    Evaluation evaluate(double x) const {
        if (!domain_.contains(x))
            throw DomainError("x = " + format_number(x) + " lies outside the function domain [" +
                              format_number(domain_.lower()) + ", " +
                              format_number(domain_.upper()) + "]");
        return evaluate_unchecked(x);
    }

    double f(double x) const { return evaluate(x).f; }
    double fprime(double x) const { return evaluate(x).fprime; }

    /// Derivative without the domain check; certifiers and quadrature stay
    /// inside the domain by construction.
    double fprime_unchecked(double x) const {
        return std::visit(
            [x](const auto& p) -> double {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ExpAffine>) {
                    return p.A * std::exp(p.lambda * x);
                } else if constexpr (std::is_same_v<T, ExpQuadratic>) {
                    return std::exp((p.beta * x + p.gamma) * x + p.delta);
                } else if constexpr (std::is_same_v<T, LinearAffine>) {
                    return p.slope;
                } else if constexpr (std::is_same_v<T, Polynomial>) {
                    double acc = 0.0;
                    for (std::size_t k = p.coeffs.size(); k-- > 1;)
                        acc = acc * x + static_cast<double>(k) * p.coeffs[k];
                    return acc;
                } else {
                    return interpolate(p.xs, p.dfs, x);
                }
            },
            params_);
    }

    Evaluation evaluate_unchecked(double x) const {
        const double df = fprime_unchecked(x);
        const double fv = std::visit(
            [x](const auto& p) -> double {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ExpAffine>) {
                    if (p.lambda == 0.0)
                        return p.A * x + p.C;
                    // (A/lambda)(e^{lambda x}) + C; expm1 keeps small lambda accurate
                    // after absorbing A/lambda into C.
                    return p.A * std::expm1(p.lambda * x) / p.lambda + (p.A / p.lambda + p.C);
                } else if constexpr (std::is_same_v<T, ExpQuadratic>) {
                    if (x == 0.0)
                        return p.C;
                    const auto fp = [&p](double s) {
                        return std::exp((p.beta * s + p.gamma) * s + p.delta);
                    };
                    const auto r = quad::integrate_1d(fp, 0.0, x, 1e-13);
                    return p.C + r.value;
                } else if constexpr (std::is_same_v<T, LinearAffine>) {
                    return p.slope * x + p.intercept;
                } else if constexpr (std::is_same_v<T, Polynomial>) {
                    double acc = 0.0;
                    for (std::size_t k = p.coeffs.size(); k-- > 0;)
                        acc = acc * x + p.coeffs[k];
                    return acc;
                } else {
                    return interpolate(p.xs, p.fs, x);
                }
            },
            params_);
        return {fv, df};
    }

private:
    using Params = std::variant<ExpAffine, ExpQuadratic, LinearAffine, Polynomial, Tabulated>;

    FunctionSpec(Family family, Params params, Interval domain)
        : family_(family), params_(std::move(params)), domain_(domain) {}

    void require_positive_at(double x) const {
        const double v = evaluate_unchecked(x).f;
        if (!(v > 0.0))
            throw DomainError(std::string(to_string(family_)) + " with " + param_string() +
                              " is not positive on the domain (f(" + format_number(x) +
                              ") = " + format_number(v) + ")");
    }

    static double interpolate(const std::vector<double>& xs, const std::vector<double>& ys,
                              double x) {
        if (x <= xs.front())
            return ys.front();
        if (x >= xs.back())
            return ys.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        const std::size_t lo = hi - 1;
        const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return ys[lo] + w * (ys[hi] - ys[lo]);
    }

    Family family_;
    Params params_;
    Interval domain_;
};

// ---------------------------------------------------------------------------
// Convexity certifiers

/// Deterministic sample set: a grid over (x, y, t) plus seeded random triples.
struct SamplingPlan {
    int grid_xy = 41;  // points per axis for x and y on [0, upper]
    int grid_t = 21;   // points for t on [0, 1]
    int random_triples = 10000;
    std::uint64_t seed = 0x5EED;
};

enum class CertStatus { NoCounterexampleFound, Counterexample };

inline std::string_view to_string(CertStatus s) {
    return s == CertStatus::NoCounterexampleFound ? "ok" : "cex";
}

struct Witness {
    double x;
    double y;
    double t;

    friend auto operator<=>(const Witness&, const Witness&) = default;
};

struct Certificate {
    CertStatus status = CertStatus::NoCounterexampleFound;
    std::optional<Witness> witness;
    long samples_checked = 0;
    double max_violation = 0.0;  // largest (lhs - rhs) / max(1, rhs), clamped at 0
};

inline constexpr double kCertifierTolerance = 1e-10;

/// Excess of |g(tx + m(1-t)y)| over |g(x)|^{t^alpha} |g(y)|^{m(1-t^alpha)},
/// scaled by max(1, rhs), with g = |f'|^power.
inline double am_log_convex_excess(const FunctionSpec& spec, double alpha, double m, double power,
                                   const Witness& w) {
    const double z = w.t * w.x + m * (1.0 - w.t) * w.y;
    const double ta = std::pow(w.t, alpha);
    const double gz = std::pow(std::abs(spec.fprime_unchecked(z)), power);
    const double gx = std::pow(std::abs(spec.fprime_unchecked(w.x)), power);
    const double gy = std::pow(std::abs(spec.fprime_unchecked(w.y)), power);
    const double rhs = std::pow(gx, ta) * std::pow(gy, m * (1.0 - ta));
    return (gz - rhs) / std::max(1.0, rhs);
}

namespace detail {

// splitmix64: portable, so the random triples are the same on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline double grid_point(int i, int n, double upper) {
    return n <= 1 ? 0.0 : upper * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace detail

/// Searches for a counterexample to (alpha, m)-log-convexity of |f'|^power on
/// [0, upper]. A clean result is evidence, not proof. The reported witness is
/// the lexicographically smallest violating (x, y, t).
inline Certificate certify_am_log_convex(const FunctionSpec& spec, double alpha, double m,
                                         double upper, const SamplingPlan& plan = {},
                                         double power = 1.0) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in (0, 1]");
    if (!(m > 0.0 && m <= 1.0))
        throw DomainError("m must lie in (0, 1]");
    if (!(power > 0.0) || !std::isfinite(power))
        throw DomainError("certifier power must be finite and > 0");
    if (!(upper > 0.0) || !std::isfinite(upper))
        throw DomainError("certifier upper bound must be finite and > 0");
    if (spec.domain().lower() > 0.0 || spec.domain().upper() < upper)
        throw DomainError("function domain [" + format_number(spec.domain().lower()) + ", " +
                          format_number(spec.domain().upper()) + "] does not contain [0, " +
                          format_number(upper) + "]");
    if (plan.grid_xy < 0 || plan.grid_t < 0 || plan.random_triples < 0)
        throw DomainError("sampling plan counts must be nonnegative");

    Certificate cert;
    const auto check = [&](const Witness& w) {
        ++cert.samples_checked;
        const double excess = am_log_convex_excess(spec, alpha, m, power, w);
        if (!(excess <= kCertifierTolerance)) {
            cert.status = CertStatus::Counterexample;
            if (!cert.witness || w < *cert.witness)
                cert.witness = w;
        }
        if (std::isnan(excess))
            cert.max_violation = std::numeric_limits<double>::infinity();
        else
            cert.max_violation = std::max(cert.max_violation, excess);
    };

    for (int i = 0; i < plan.grid_xy; ++i)
        for (int j = 0; j < plan.grid_xy; ++j)
            for (int k = 0; k < plan.grid_t; ++k)
                check({detail::grid_point(i, plan.grid_xy, upper),
                       detail::grid_point(j, plan.grid_xy, upper),
                       detail::grid_point(k, plan.grid_t, 1.0)});

    detail::SplitMix64 rng(plan.seed);
    for (int n = 0; n < plan.random_triples; ++n) {
        const double x = upper * rng.uniform();
        const double y = upper * rng.uniform();
        const double t = rng.uniform();
        check({x, y, t});
    }
    return cert;
}

/// m-log-convexity: the alpha = 1 case.
inline Certificate certify_m_log_convex(const FunctionSpec& spec, double m, double upper,
                                        const SamplingPlan& plan = {}, double power = 1.0) {
    return certify_am_log_convex(spec, 1.0, m, upper, plan, power);
}

/// alpha-log-convexity: the m = 1 case.
inline Certificate certify_alpha_log_convex(const FunctionSpec& spec, double alpha, double upper,
                                            const SamplingPlan& plan = {}, double power = 1.0) {
    return certify_am_log_convex(spec, alpha, 1.0, upper, plan, power);
}

}  // namespace hhaudit
