#pragma once

// Shared value types for the inequality audit: intervals, bound parameters,
// the endpoint-derivative ratio eta and its case split, and bound results.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hhaudit {

/// Thrown when an argument lies outside the documented domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// |eta - 1| at or below this is treated as the exact eta = 1 branch.
inline constexpr double kEtaUnitTolerance = 1e-9;
/// Slack for the conjugate-exponent and Young-weight identities.
inline constexpr double kConstraintTolerance = 1e-12;

/// Closed interval [a, b] with 0 <= a < b < inf.
class Interval {
public:
    Interval(double a, double b) : a_(a), b_(b) {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw DomainError("interval endpoints must be finite");
        if (a < 0.0)
            throw DomainError("interval lower endpoint must be >= 0");
        if (!(a < b))
            throw DomainError("interval requires a < b");
    }

    double lower() const noexcept { return a_; }
    double upper() const noexcept { return b_; }
    double width() const noexcept { return b_ - a_; }

    bool contains(double x) const noexcept { return x >= a_ && x <= b_; }
    bool contains(const Interval& other) const noexcept {
        return other.a_ >= a_ && other.b_ <= b_;
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double a_;
    double b_;
};

enum class TheoremId {
    T1,
    T1CorM,
    T1CorAlpha,
    T2,
    T2CorM22,
    T2CorAlpha,
    T3,
    T3CorM,
    T3CorAlpha,
    T4,
    T4CorSym,
};

inline constexpr TheoremId kAllTheorems[] = {
    TheoremId::T1, TheoremId::T1CorM,     TheoremId::T1CorAlpha, TheoremId::T2,
    TheoremId::T2CorM22, TheoremId::T2CorAlpha, TheoremId::T3,     TheoremId::T3CorM,
    TheoremId::T3CorAlpha, TheoremId::T4, TheoremId::T4CorSym,
};

enum class Variant { AsPublished, Rederived };

inline constexpr Variant kAllVariants[] = {Variant::AsPublished, Variant::Rederived};

enum class EtaCase { EqualOne, BelowOne, AboveOne };

inline std::string_view to_string(TheoremId id) {
    switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T1CorM: return "T1CorM";
    case TheoremId::T1CorAlpha: return "T1CorAlpha";
    case TheoremId::T2: return "T2";
    case TheoremId::T2CorM22: return "T2CorM22";
    case TheoremId::T2CorAlpha: return "T2CorAlpha";
    case TheoremId::T3: return "T3";
    case TheoremId::T3CorM: return "T3CorM";
    case TheoremId::T3CorAlpha: return "T3CorAlpha";
    case TheoremId::T4: return "T4";
    case TheoremId::T4CorSym: return "T4CorSym";
    }
    return "?";
}

inline std::string_view to_string(Variant v) {
    return v == Variant::AsPublished ? "published" : "rederived";
}

inline std::string_view to_string(EtaCase c) {
    switch (c) {
    case EtaCase::EqualOne: return "equal_one";
    case EtaCase::BelowOne: return "below_one";
    case EtaCase::AboveOne: return "above_one";
    }
    return "?";
}

/// Which theorem the id belongs to (1..4); corollaries map to their parent.
inline int theorem_family(TheoremId id) {
    switch (id) {
    case TheoremId::T1:
    case TheoremId::T1CorM:
    case TheoremId::T1CorAlpha: return 1;
    case TheoremId::T2:
    case TheoremId::T2CorM22:
    case TheoremId::T2CorAlpha: return 2;
    case TheoremId::T3:
    case TheoremId::T3CorM:
    case TheoremId::T3CorAlpha: return 3;
    case TheoremId::T4:
    case TheoremId::T4CorSym: return 4;
    }
    return 0;
}

/// Weights for the weighted AM-GM (Young) step: mu_i + tau_i = 1.
struct YoungWeights {
    double mu1 = 0.5;
    double tau1 = 0.5;
    double mu2 = 0.5;
    double tau2 = 0.5;
};

struct BoundParams {
    Interval interval;
    double alpha = 1.0;
    double m = 1.0;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<YoungWeights> young;

    /// alpha, m in (0, 1].
    void validate_common() const {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw DomainError("alpha must lie in (0, 1]");
        if (!(m > 0.0 && m <= 1.0))
            throw DomainError("m must lie in (0, 1]");
    }

    /// Checks the constraints a given theorem places on the parameters.
    void validate_for(TheoremId id) const {
        validate_common();
        switch (theorem_family(id)) {
        case 2: validate_holder(); break;
        case 3: validate_power_mean(); break;
        case 4: validate_young(); break;
        default: break;
        }
    }

    void validate_holder() const {
        if (!p || !q)
            throw DomainError("Hoelder bound requires both p and q");
        if (!(*p > 1.0) || !(*q > 1.0))
            throw DomainError("Hoelder bound requires p > 1 and q > 1");
        if (!std::isfinite(*p) || !std::isfinite(*q))
            throw DomainError("Hoelder exponents must be finite");
        if (std::abs(1.0 / *p + 1.0 / *q - 1.0) > kConstraintTolerance)
            throw DomainError("Hoelder exponents must satisfy 1/p + 1/q = 1");
    }

    void validate_power_mean() const {
        if (!q)
            throw DomainError("power-mean bound requires q");
        if (!(*q >= 1.0) || !std::isfinite(*q))
            throw DomainError("power-mean bound requires finite q >= 1");
    }

    void validate_young() const {
        if (!young)
            throw DomainError("Young bound requires mu1, tau1, mu2, tau2");
        const auto& w = *young;
        if (!(w.mu1 > 0.0 && w.tau1 > 0.0 && w.mu2 > 0.0 && w.tau2 > 0.0))
            throw DomainError("Young weights must be positive");
        if (std::abs(w.mu1 + w.tau1 - 1.0) > kConstraintTolerance ||
            std::abs(w.mu2 + w.tau2 - 1.0) > kConstraintTolerance)
            throw DomainError("Young weights must satisfy mu + tau = 1");
    }
};

/// Conjugate Hoelder exponent; q = 1 has no finite conjugate.
inline std::optional<double> conjugate_exponent(double q) {
    if (!(q > 1.0) || !std::isfinite(q))
        return std::nullopt;
    return q / (q - 1.0);
}

inline EtaCase classify_eta(double base) {
    if (std::abs(base - 1.0) <= kEtaUnitTolerance)
        return EtaCase::EqualOne;
    return base < 1.0 ? EtaCase::BelowOne : EtaCase::AboveOne;
}

/// eta = |f'(a)| / |f'(b/m)|^m together with its case.
struct EtaValue {
    double base;
    EtaCase eta_case;

    static EtaValue from_magnitudes(double fprime_at_a_abs, double fprime_at_bm_abs, double m) {
        if (!(fprime_at_a_abs > 0.0) || !(fprime_at_bm_abs > 0.0))
            throw DomainError("eta requires strictly positive derivative magnitudes");
        if (!(m > 0.0 && m <= 1.0))
            throw DomainError("m must lie in (0, 1]");
        const double base = fprime_at_a_abs / std::pow(fprime_at_bm_abs, m);
        return {base, classify_eta(base)};
    }
};

/// Two-slot ratio |f'(a)|^u / |f'(b/m)|^(m v); eta_general(.., 1, 1) is eta.
inline double eta_general(double fprime_at_a_abs, double fprime_at_bm_abs, double m, double u,
                          double v) {
    if (!(fprime_at_a_abs > 0.0) || !(fprime_at_bm_abs > 0.0))
        throw DomainError("eta requires strictly positive derivative magnitudes");
    if (!(m > 0.0 && m <= 1.0))
        throw DomainError("m must lie in (0, 1]");
    return std::pow(fprime_at_a_abs, u) / std::pow(fprime_at_bm_abs, m * v);
}

/// k^(m^n) <= k^(m n) on (0,1]^3, with 1e-15 slack for rounding.
inline bool power_lemma_holds(double k, double m, double n) {
    const auto in_unit = [](double x) { return x > 0.0 && x <= 1.0; };
    if (!in_unit(k) || !in_unit(m) || !in_unit(n))
        throw DomainError("power lemma arguments must lie in (0, 1]");
    return std::pow(k, std::pow(m, n)) <= std::pow(k, m * n) + 1e-15;
}

enum class BoundStatus {
    Ok,
    NotApplicable,    // eta > 1: no branch of the inequality covers it
    NegativeBracket,  // printed bracket negative under a fractional power
    Error,            // parameters rejected; message says why
};

inline std::string_view to_string(BoundStatus s) {
    switch (s) {
    case BoundStatus::Ok: return "ok";
    case BoundStatus::NotApplicable: return "not_applicable";
    case BoundStatus::NegativeBracket: return "negative_bracket";
    case BoundStatus::Error: return "error";
    }
    return "?";
}

struct BoundResult {
    TheoremId theorem = TheoremId::T1;
    Variant variant = Variant::Rederived;
    BoundStatus status = BoundStatus::Error;
    std::optional<double> value;
    double eta = std::nan("");
    EtaCase eta_case = EtaCase::AboveOne;
    std::string message;

    bool applicable() const noexcept { return status == BoundStatus::Ok; }
};

}  // namespace hhaudit
