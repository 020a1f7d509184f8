#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>

#include "hhaudit/core.hpp"
#include "hhaudit/format.hpp"
#include "support.hpp"

using namespace hhaudit;
using testing_support::Gen;

TEST(Interval, AcceptsOrderedNonnegativeEndpoints) {
    const Interval i(0.5, 2.0);
    EXPECT_EQ(i.lower(), 0.5);
    EXPECT_EQ(i.upper(), 2.0);
    EXPECT_EQ(i.width(), 1.5);
    EXPECT_TRUE(i.contains(0.5));
    EXPECT_TRUE(i.contains(2.0));
    EXPECT_FALSE(i.contains(2.0000001));
    EXPECT_TRUE(Interval(0.0, 3.0).contains(i));
    EXPECT_FALSE(Interval(1.0, 3.0).contains(i));
}

TEST(Interval, RejectsDegenerateOrNegative) {
    EXPECT_THROW(Interval(1.0, 1.0), DomainError);
    EXPECT_THROW(Interval(2.0, 1.0), DomainError);
    EXPECT_THROW(Interval(-0.1, 1.0), DomainError);
    EXPECT_THROW(Interval(0.0, std::numeric_limits<double>::infinity()), DomainError);
    EXPECT_THROW(Interval(std::nan(""), 1.0), DomainError);
}

TEST(Names, TheoremsVariantsAndCases) {
    EXPECT_EQ(to_string(TheoremId::T1), "T1");
    EXPECT_EQ(to_string(TheoremId::T2CorM22), "T2CorM22");
    EXPECT_EQ(to_string(TheoremId::T4CorSym), "T4CorSym");
    EXPECT_EQ(to_string(Variant::AsPublished), "published");
    EXPECT_EQ(to_string(Variant::Rederived), "rederived");
    EXPECT_EQ(to_string(EtaCase::BelowOne), "below_one");
    EXPECT_EQ(std::size(kAllTheorems), 11u);
    EXPECT_EQ(theorem_family(TheoremId::T1CorAlpha), 1);
    EXPECT_EQ(theorem_family(TheoremId::T2CorM22), 2);
    EXPECT_EQ(theorem_family(TheoremId::T3CorM), 3);
    EXPECT_EQ(theorem_family(TheoremId::T4CorSym), 4);
}

namespace {
BoundParams unit_params() {
    BoundParams p{Interval(0.0, 1.0), 1.0, 1.0, 2.0, 2.0, YoungWeights{}};
    return p;
}
}  // namespace

TEST(BoundParams, AlphaAndMMustLieInUnitInterval) {
    auto p = unit_params();
    EXPECT_NO_THROW(p.validate_common());
    p.alpha = 0.0;
    EXPECT_THROW(p.validate_common(), DomainError);
    p.alpha = 1.5;
    EXPECT_THROW(p.validate_common(), DomainError);
    p.alpha = 1.0;
    p.m = 0.0;
    EXPECT_THROW(p.validate_for(TheoremId::T1), DomainError);
}

TEST(BoundParams, HoelderExponentsMustBeConjugate) {
    auto p = unit_params();
    EXPECT_NO_THROW(p.validate_for(TheoremId::T2));
    p.p = 3.0;
    EXPECT_THROW(p.validate_for(TheoremId::T2), DomainError);
    p.p = std::nullopt;
    p.q = 1.0;
    EXPECT_THROW(p.validate_for(TheoremId::T2), DomainError);
    p.p = 1.5;
    p.q = 3.0;
    EXPECT_NO_THROW(p.validate_for(TheoremId::T2));
}

TEST(BoundParams, PowerMeanNeedsQAtLeastOne) {
    auto p = unit_params();
    p.q = 1.0;
    EXPECT_NO_THROW(p.validate_for(TheoremId::T3));
    p.q = 0.5;
    EXPECT_THROW(p.validate_for(TheoremId::T3), DomainError);
    p.q = std::nullopt;
    EXPECT_THROW(p.validate_for(TheoremId::T3), DomainError);
}

TEST(BoundParams, YoungWeightsMustSumToOne) {
    auto p = unit_params();
    EXPECT_NO_THROW(p.validate_for(TheoremId::T4));
    p.young = YoungWeights{0.5, 0.4, 0.5, 0.5};
    EXPECT_THROW(p.validate_for(TheoremId::T4), DomainError);
    p.young = YoungWeights{1.0, 0.0, 0.5, 0.5};
    EXPECT_THROW(p.validate_for(TheoremId::T4), DomainError);
    p.young = std::nullopt;
    EXPECT_THROW(p.validate_for(TheoremId::T4), DomainError);
}

TEST(ConjugateExponent, Values) {
    EXPECT_EQ(*conjugate_exponent(2.0), 2.0);
    EXPECT_DOUBLE_EQ(*conjugate_exponent(4.0), 4.0 / 3.0);
    EXPECT_FALSE(conjugate_exponent(1.0).has_value());
    EXPECT_FALSE(conjugate_exponent(0.5).has_value());
}

TEST(Eta, ClassificationAndMagnitudes) {
    EXPECT_EQ(classify_eta(1.0), EtaCase::EqualOne);
    EXPECT_EQ(classify_eta(1.0 - 1e-10), EtaCase::EqualOne);
    EXPECT_EQ(classify_eta(1.0 - 1e-6), EtaCase::BelowOne);
    EXPECT_EQ(classify_eta(1.1), EtaCase::AboveOne);

    const auto e = EtaValue::from_magnitudes(1.0, std::exp(1.0), 1.0);
    EXPECT_NEAR(e.base, std::exp(-1.0), 1e-16);
    EXPECT_EQ(e.eta_case, EtaCase::BelowOne);
    // m < 1 raises |f'(b/m)| to the power m.
    EXPECT_NEAR(EtaValue::from_magnitudes(1.0, std::exp(4.0), 0.25).base, std::exp(-1.0), 1e-15);
    EXPECT_THROW(EtaValue::from_magnitudes(0.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(EtaValue::from_magnitudes(1.0, 1.0, 0.0), DomainError);

    EXPECT_DOUBLE_EQ(eta_general(2.0, 4.0, 1.0, 1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(eta_general(2.0, 4.0, 0.5, 2.0, 2.0), 1.0);
}

TEST(PowerLemma, HoldsOnSeededSamples) {
    Gen gen(20240607);
    for (int i = 0; i < 100000; ++i) {
        const double k = gen.unit_open_closed();
        const double m = gen.unit_open_closed();
        const double n = gen.unit_open_closed();
        ASSERT_TRUE(power_lemma_holds(k, m, n)) << k << ' ' << m << ' ' << n;
    }
}

TEST(PowerLemma, CornersAndDomain) {
    EXPECT_TRUE(power_lemma_holds(1.0, 1.0, 1.0));
    EXPECT_TRUE(power_lemma_holds(1e-300, 1e-3, 1.0));
    EXPECT_TRUE(power_lemma_holds(0.5, 1.0, 1e-9));
    EXPECT_THROW(power_lemma_holds(0.0, 0.5, 0.5), DomainError);
    EXPECT_THROW(power_lemma_holds(0.5, 1.5, 0.5), DomainError);
}

TEST(FormatNumber, RoundTripsAndSpecials) {
    Gen gen(7);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(gen.uniform(-1.0, 1.0), gen.integer(-300, 300));
        const std::string s = format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        ASSERT_EQ(back, x) << s;
    }
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}
