#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hhaudit/audit.hpp"
#include "support.hpp"

using namespace hhaudit;
using namespace hhaudit::audit;
using testing_support::rel_err;

namespace {

FunctionSpec exp_x(double upper = 2.0) { return FunctionSpec::exp_affine(1.0, 1.0, 0.0, Interval(0.0, upper)); }
FunctionSpec cubic_plus_one(double upper = 2.0) { return FunctionSpec::polynomial({1, 0, 0, 1}, Interval(0.0, upper)); }
FunctionSpec linear(double upper = 2.0) { return FunctionSpec::linear_affine(3.0, 1.0, Interval(0.0, upper)); }

BoundParams cell(double a, double b, double alpha = 1.0, double m = 1.0, double q = 2.0) {
    return BoundParams{Interval(a, b), alpha, m, conjugate_exponent(q), q, YoungWeights{}};
}

}  // namespace

TEST(TrapezoidGap, KnownValues) {
    EXPECT_LE(trapezoid_gap(linear(), Interval(0.0, 2.0)), 1e-14);
    EXPECT_NEAR(trapezoid_gap(exp_x(), Interval(0.0, 1.0)), (3.0 - std::numbers::e) / 2.0, 1e-13);
    const auto sq = FunctionSpec::polynomial({0, 0, 1}, Interval(0.0, 1.0));
    EXPECT_NEAR(trapezoid_gap(sq, Interval(0.0, 1.0)), 1.0 / 6.0, 1e-14);
    EXPECT_THROW(trapezoid_gap(exp_x(1.0), Interval(0.0, 1.5)), DomainError);
}

TEST(IntegralIdentity, ResidualsAreQuadratureNoise) {
    for (const auto& f : {exp_x(), cubic_plus_one(), linear()})
        for (const Interval& i : {Interval(0.0, 1.0), Interval(0.5, 2.0)}) {
            const auto c = lemma1_check(f, i);
            EXPECT_LE(c.residual, 1e-8) << to_string(f.family());
            EXPECT_LE(c.residual, 10.0 * c.error_budget + 1e-15) << to_string(f.family());
        }
    EXPECT_LE(lemma1_residual(linear(), Interval(0.0, 2.0)), 1e-12);
    const auto cube = FunctionSpec::polynomial({0, 0, 0, 1}, Interval(0.0, 2.0));
    EXPECT_LE(lemma1_residual(cube, Interval(0.0, 2.0)), 1e-8);
}

TEST(IntegralIdentity, BothSidesAgreeWithClosedForm) {
    const auto c = lemma1_check(exp_x(), Interval(0.0, 1.0));
    EXPECT_NEAR(c.lhs, (3.0 - std::numbers::e) / 2.0, 1e-12);
    EXPECT_NEAR(c.rhs, (3.0 - std::numbers::e) / 2.0, 1e-10);
}

TEST(HermiteHadamard, ConvexExamplesHold) {
    const auto sq = FunctionSpec::polynomial({0, 0, 1}, Interval(0.0, 1.0));
    EXPECT_TRUE(hh_sanity(sq, Interval(0.0, 1.0)));
    const auto t = hh_terms(sq, Interval(0.0, 1.0));
    EXPECT_NEAR(t.midpoint, 0.25, 1e-15);
    EXPECT_NEAR(t.mean, 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(t.trapezoid, 0.5, 1e-15);
    EXPECT_TRUE(hh_sanity(exp_x(), Interval(0.0, 1.0)));
    EXPECT_TRUE(hh_sanity(linear(), Interval(0.0, 2.0)));
}

TEST(HermiteHadamard, ConcaveFunctionFails) {
    const auto concave = FunctionSpec::polynomial({1, 2, -1}, Interval(0.0, 1.0));
    EXPECT_FALSE(hh_sanity(concave, Interval(0.0, 1.0)));
}

TEST(RunAudit, LinearCellIsTight) {
    const auto rec = run_audit(linear(), cell(0.0, 2.0));
    EXPECT_LE(rec.gap, 1e-14);
    EXPECT_TRUE(rec.quadrature_converged);
    ASSERT_EQ(rec.bounds.size(), std::size(kAllTheorems) * 2);
    for (const auto& b : rec.bounds) {
        ASSERT_EQ(b.result.status, BoundStatus::Ok) << to_string(b.result.theorem);
        EXPECT_GT(*b.result.value, 0.0);
        EXPECT_FALSE(b.violation);
    }
}

TEST(RunAudit, ExpCellValues) {
    const auto rec = run_audit(exp_x(), cell(0.0, 1.0));
    EXPECT_NEAR(rec.gap, 0.14085908577047738, 1e-12);
    EXPECT_EQ(rec.eta_case, EtaCase::BelowOne);
    EXPECT_LE(rel_err(*rec.find(TheoremId::T1, Variant::Rederived)->result.value, 0.57742274268856785), 1e-13);
    EXPECT_LE(rel_err(*rec.find(TheoremId::T2, Variant::Rederived)->result.value, 0.72967207811286995), 1e-13);
    for (const auto& b : rec.bounds) {
        if (b.result.variant == Variant::Rederived) {
            EXPECT_FALSE(b.violation) << to_string(b.result.theorem);
        }
    }
    EXPECT_EQ(rec.certifier_status(), "am=ok;m=ok;alpha=ok;am^q=ok;m^2=ok;alpha^q=ok;m^q=ok");
    EXPECT_FALSE(rec.any_counterexample());
}

TEST(RunAudit, AlphaBelowOneRecordsDisagreement) {
    const auto rec = run_audit(exp_x(), cell(0.0, 1.0, 0.5));
    const auto* pub = rec.find(TheoremId::T1, Variant::AsPublished);
    const auto* red = rec.find(TheoremId::T1, Variant::Rederived);
    ASSERT_TRUE(pub->result.value && red->result.value);
    EXPECT_GT(std::abs(*pub->result.value - *red->result.value), 1e-3);
    // e^x is not alpha-log-convex for alpha < 1.
    EXPECT_FALSE(red->hypothesis_holds);
    EXPECT_EQ(red->hypothesis, "am");
    EXPECT_TRUE(rec.any_counterexample());
}

TEST(RunAudit, TightnessAndViolationAreConsistent) {
    for (double alpha : {0.25, 1.0})
        for (double m : {0.25, 1.0})
            for (double q : {1.0, 2.0}) {
                const auto rec = run_audit(exp_x(4.0), cell(0.0, 1.0, alpha, m, q));
                for (const auto& b : rec.bounds) {
                    if (!b.result.applicable()) {
                        EXPECT_FALSE(b.tightness.has_value());
                        EXPECT_FALSE(b.violation);
                        continue;
                    }
                    ASSERT_TRUE(b.tightness.has_value());
                    if (b.violation) {
                        EXPECT_GT(*b.tightness, 1.0);
                    }
                    if (*b.tightness > 1.0 + 1e-8) {
                        EXPECT_TRUE(b.violation);
                    }
                }
            }
}

TEST(RunAudit, InapplicableAndInvalidCellsBecomeEntries) {
    const auto decay = FunctionSpec::exp_affine(1.0, -1.0, 2.0, Interval(0.0, 1.0));
    const auto rec = run_audit(decay, cell(0.0, 1.0, 1.0, 1.0, 1.0));
    for (const auto& b : rec.bounds) {
        if (theorem_family(b.result.theorem) == 2 && b.result.theorem != TheoremId::T2CorM22) {
            EXPECT_EQ(b.result.status, BoundStatus::Error);  // q = 1 has no Hoelder partner
        } else {
            EXPECT_EQ(b.result.status, BoundStatus::NotApplicable);
        }
    }
    EXPECT_THROW(run_audit(decay, cell(0.0, 1.0, 0.0)), DomainError);
}

TEST(RunAudit, CertifiersCanBeSkipped) {
    AuditOptions opt;
    opt.certify = false;
    const auto rec = run_audit(exp_x(), cell(0.0, 1.0, 0.5), opt);
    EXPECT_TRUE(rec.certificates.empty());
    EXPECT_EQ(rec.certifier_status(), "skipped");
    for (const auto& b : rec.bounds)
        EXPECT_TRUE(b.hypothesis_holds);
}

TEST(RunAudit, HypothesisLabels) {
    const auto p = cell(0.0, 1.0, 0.5, 0.5, 4.0);
    EXPECT_EQ(hypothesis_for(TheoremId::T1, p)->label, "am");
    EXPECT_EQ(hypothesis_for(TheoremId::T1CorM, p)->label, "m");
    EXPECT_EQ(hypothesis_for(TheoremId::T3CorAlpha, p)->label, "alpha^q");
    EXPECT_EQ(hypothesis_for(TheoremId::T3CorAlpha, p)->power, 4.0);
    EXPECT_EQ(hypothesis_for(TheoremId::T3CorAlpha, p)->upper, 1.0);
    const auto m22 = *hypothesis_for(TheoremId::T2CorM22, p);
    EXPECT_EQ(m22.label, "m^2");
    EXPECT_EQ(m22.power, 2.0);
    EXPECT_EQ(m22.alpha, 1.0);
    EXPECT_EQ(m22.upper, 2.0);
}
