#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hhaudit/quad.hpp"
#include "support.hpp"

using namespace hhaudit;
using hhaudit::quad::integrate_1d;
using hhaudit::quad::integrate_2d_unit_square;
using testing_support::rel_err;

namespace {

struct Case1d {
    const char* name;
    double (*g)(double);
    double a, b, exact;
};

const std::vector<Case1d>& cases_1d() {
    static const std::vector<Case1d> cases = {
        {"x^5", [](double x) { return std::pow(x, 5); }, 0.0, 1.0, 1.0 / 6.0},
        {"exp", [](double x) { return std::exp(x); }, 0.0, 1.0, std::numbers::e - 1.0},
        {"kink", [](double x) { return std::abs(x - 1.0 / 3.0); }, 0.0, 1.0, 5.0 / 18.0},
        {"sqrt", [](double x) { return std::sqrt(x); }, 0.0, 1.0, 2.0 / 3.0},
        {"runge", [](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0, 0.4 * std::atan(5.0)},
        {"cos_osc", [](double x) { return std::cos(40.0 * x); }, 0.0, 2.0, std::sin(80.0) / 40.0},
        {"log_sing", [](double x) { return std::log(x); }, 0.0, 1.0, -1.0},
    };
    return cases;
}

}  // namespace

TEST(Integrate1d, ReachesToleranceOnSuite) {
    for (const auto& c : cases_1d()) {
        const auto r = integrate_1d(c.g, c.a, c.b, 1e-12);
        EXPECT_TRUE(r.converged) << c.name;
        EXPECT_LE(std::abs(r.value - c.exact), 1e-11 * std::abs(c.exact) + 1e-15) << c.name;
    }
}

TEST(Integrate1d, ErrorEstimateIsHonest) {
    // The estimate bounds the true error (with a small factor for roundoff).
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-13}) {
        for (const auto& c : cases_1d()) {
            const auto r = integrate_1d(c.g, c.a, c.b, tol);
            EXPECT_LE(std::abs(r.value - c.exact), 10.0 * r.error_estimate + 1e-15)
                << c.name << " tol=" << tol;
        }
    }
}

TEST(Integrate1d, PolynomialsAreExactOnOnePanel) {
    // G7/K15 integrates degree <= 13 exactly.
    const auto r = integrate_1d([](double x) { return std::pow(x, 13) - 3.0 * x * x; }, 0.0, 2.0, 1e-13);
    EXPECT_NEAR(r.value, std::pow(2.0, 14) / 14.0 - 8.0, 1e-9);
    EXPECT_EQ(r.evaluations, 15);
}

TEST(Integrate1d, Deterministic) {
    const auto g = [](double x) { return std::exp(-x) * std::sin(7.0 * x); };
    const auto r1 = integrate_1d(g, 0.0, 5.0, 1e-11);
    const auto r2 = integrate_1d(g, 0.0, 5.0, 1e-11);
    EXPECT_EQ(r1.value, r2.value);
    EXPECT_EQ(r1.error_estimate, r2.error_estimate);
    EXPECT_EQ(r1.evaluations, r2.evaluations);
}

TEST(Integrate1d, NonConvergenceReturnsPartial) {
    const auto r = integrate_1d([](double x) { return std::sin(1e7 * x); }, 0.0, 1.0, 1e-13);
    EXPECT_FALSE(r.converged);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_GT(r.evaluations, 0);
}

TEST(Integrate1d, NonFiniteIntegrandReportsAbscissa) {
    try {
        integrate_1d([](double x) { return x > 0.5 ? std::nan("") : 1.0; }, 0.0, 1.0);
        FAIL() << "expected EvaluationError";
    } catch (const quad::EvaluationError& e) {
        EXPECT_GT(e.abscissa(), 0.5);
        EXPECT_FALSE(e.second_abscissa().has_value());
    }
}

TEST(Integrate1d, RejectsBadArguments) {
    const auto one = [](double) { return 1.0; };
    EXPECT_THROW(integrate_1d(one, 1.0, 1.0), DomainError);
    EXPECT_THROW(integrate_1d(one, 1.0, 0.0), DomainError);
    EXPECT_THROW(integrate_1d(one, 0.0, 1.0, 1e-14), DomainError);
    EXPECT_THROW(integrate_1d(one, 0.0, std::nan("")), DomainError);
}

TEST(Integrate2d, AbsDifferenceMatchesClosedFormAndMidpointOracle) {
    const auto r = integrate_2d_unit_square([](double s, double t) { return std::abs(s - t); }, 1e-12);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-13);

    // Brute-force midpoint rule: independent of the adaptive machinery.
    const int n = 2000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sum += std::abs((i + 0.5) / n - (j + 0.5) / n);
    const double midpoint = sum / (double(n) * n);
    EXPECT_NEAR(midpoint, 1.0 / 3.0, 1e-6);
    EXPECT_NEAR(r.value, midpoint, 1e-6);
}

TEST(Integrate2d, SeparableAndDiagonalKinks) {
    const auto prod = integrate_2d_unit_square([](double s, double t) { return s * t; });
    EXPECT_NEAR(prod.value, 0.25, 1e-13);
    const auto ex = integrate_2d_unit_square([](double s, double t) { return std::exp(s + t); }, 1e-12);
    EXPECT_LE(rel_err(ex.value, std::pow(std::numbers::e - 1.0, 2)), 1e-12);
    const auto sq = integrate_2d_unit_square([](double s, double t) { return (s - t) * (s - t); });
    EXPECT_NEAR(sq.value, 1.0 / 6.0, 1e-13);
    const auto p = integrate_2d_unit_square([](double s, double t) { return std::pow(std::abs(s - t), 0.5); });
    EXPECT_LE(rel_err(p.value, 2.0 / (1.5 * 2.5)), 1e-9);
}

TEST(Integrate2d, ZeroIntegrandConverges) {
    const auto r = integrate_2d_unit_square([](double, double) { return 0.0; });
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.value, 0.0);
}

TEST(Integrate2d, RejectsTightTolerance) {
    EXPECT_THROW(integrate_2d_unit_square([](double, double) { return 1.0; }, 1e-13), DomainError);
}

TEST(Integrate2d, NonFiniteReportsBothCoordinates) {
    try {
        integrate_2d_unit_square([](double s, double t) { return s + t > 1.5 ? INFINITY : 1.0; });
        FAIL() << "expected EvaluationError";
    } catch (const quad::EvaluationError& e) {
        ASSERT_TRUE(e.second_abscissa().has_value());
        EXPECT_GT(e.abscissa() + *e.second_abscissa(), 1.5);
    }
}
