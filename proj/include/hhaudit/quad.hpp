#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature on intervals and on the unit
// square. The square is always cut along the diagonal s = t first, so the
// |s - t| kink of the kernel integrands sits on panel boundaries only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hhaudit/core.hpp"

namespace hhaudit::quad {

inline constexpr double kDefaultRelTol1d = 1e-10;
inline constexpr double kDefaultRelTol2d = 1e-9;
inline constexpr int kMaxDepth = 40;
inline constexpr std::size_t kMaxPanels = 20000;

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Integrand returned NaN or inf; carries the offending abscissa.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(double x, std::optional<double> y = std::nullopt)
        : std::runtime_error(make_message(x, y)), x_(x), y_(y) {}

    double abscissa() const noexcept { return x_; }
    std::optional<double> second_abscissa() const noexcept { return y_; }

private:
    static std::string make_message(double x, std::optional<double> y) {
        std::string msg = "non-finite integrand at x=" + std::to_string(x);
        if (y)
            msg += ", y=" + std::to_string(*y);
        return msg;
    }

    double x_;
    std::optional<double> y_;
};

/// Quadrature stopped before reaching its tolerance; carries the partial value.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_(partial) {}

    const QuadratureResult& partial() const noexcept { return partial_; }

private:
    QuadratureResult partial_;
};

namespace detail {

// Kronrod abscissae (descending, last is the centre) and weights; Gauss
// weights apply to the odd-indexed Kronrod nodes plus the centre.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double abs_value;  // integral of |g|, for the roundoff floor
    int depth;
};

template <class F>
Panel gk15(F& g, double a, double b, int depth) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const auto sample = [&](double x) {
        const double y = static_cast<double>(g(x));
        if (!std::isfinite(y))
            throw EvaluationError(x);
        return y;
    };

    const double fc = sample(centre);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    double abs_sum = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = sample(centre - dx);
        const double f2 = sample(centre + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1)
            gauss += kWg[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);

    const double eps = std::numeric_limits<double>::epsilon();
    const double error = std::max(std::abs(kronrod - gauss), 50.0 * eps * abs_sum);
    return {a, b, kronrod, error, abs_sum, depth};
}

struct WorstFirst {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error)
            return x.error < y.error;
        return x.a > y.a;
    }
};

template <class F>
QuadratureResult adaptive(F& g, double a, double b, double rel_tol, double abs_tol,
                          double* abs_integral = nullptr) {
    std::priority_queue<Panel, std::vector<Panel>, WorstFirst> queue;
    const Panel whole = gk15(g, a, b, 0);
    queue.push(whole);
    long evaluations = 15;

    double total = whole.value;
    double total_error = whole.error;
    double total_abs = whole.abs_value;
    const double eps = std::numeric_limits<double>::epsilon();
    const auto target = [&] {
        return std::max({rel_tol * std::abs(total), abs_tol, 50.0 * eps * total_abs});
    };

    bool capped = false;
    while (total_error > target()) {
        if (queue.top().depth >= kMaxDepth || queue.size() >= kMaxPanels) {
            capped = true;
            break;
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk15(g, worst.a, mid, worst.depth + 1);
        const Panel right = gk15(g, mid, worst.b, worst.depth + 1);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        queue.push(left);
        queue.push(right);
    }

    // Final sums in left-to-right panel order so the result does not depend on
    // the order in which panels were refined.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    total = 0.0;
    total_error = 0.0;
    total_abs = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        total_error += p.error;
        total_abs += p.abs_value;
    }

    QuadratureResult result;
    result.value = total;
    result.error_estimate = total_error;
    result.evaluations = evaluations;
    result.converged = !capped && total_error <= target() * (1.0 + 1e-12);
    if (abs_integral)
        *abs_integral = total_abs;
    return result;
}

}  // namespace detail

/// Integral of g over [a, b] to relative tolerance rel_tol (>= 1e-13).
///
/// The tolerance is floored at the roundoff level 50 eps * integral of |g|,
/// so a converged result always satisfies error_estimate <= that target.
/// Refinement stops at depth 40 or 20000 panels; the partial value is then
/// returned with converged = false.
template <class F>
QuadratureResult integrate_1d(F&& g, double a, double b, double rel_tol = kDefaultRelTol1d,
                              double abs_tol = 0.0) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw DomainError("integrate_1d requires finite a < b");
    if (!(rel_tol >= 1e-13))
        throw DomainError("integrate_1d requires rel_tol >= 1e-13");
    return detail::adaptive(g, a, b, rel_tol, abs_tol);
}

/// Integral of g(s, t) over [0,1]^2, evaluated as the two triangles t < s and
/// t > s with iterated adaptive rules (outer in s, inner in t).
template <class G>
QuadratureResult integrate_2d_unit_square(G&& g, double rel_tol = kDefaultRelTol2d) {
    if (!(rel_tol >= 1e-12))
        throw DomainError("integrate_2d_unit_square requires rel_tol >= 1e-12");

    const double inner_rel = std::max(rel_tol * 1e-2, 1e-13);
    long evaluations = 0;
    double inner_error_sup = 0.0;
    bool inner_converged = true;

    double abs_total = 0.0;
    const auto triangle = [&](bool lower) {
        auto outer = [&](double s) {
            auto row = [&](double t) {
                const double y = static_cast<double>(g(s, t));
                if (!std::isfinite(y))
                    throw EvaluationError(s, t);
                return y;
            };
            const double lo = lower ? 0.0 : s;
            const double hi = lower ? s : 1.0;
            if (!(lo < hi))
                return 0.0;
            const QuadratureResult r = detail::adaptive(row, lo, hi, inner_rel, 0.0);
            evaluations += r.evaluations;
            inner_error_sup = std::max(inner_error_sup, r.error_estimate);
            inner_converged = inner_converged && r.converged;
            return r.value;
        };
        double abs_part = 0.0;
        QuadratureResult r = detail::adaptive(outer, 0.0, 1.0, rel_tol, 0.0, &abs_part);
        abs_total += abs_part;
        return r;
    };

    const QuadratureResult below = triangle(true);
    const QuadratureResult above = triangle(false);

    QuadratureResult result;
    result.value = below.value + above.value;
    // Inner errors enter through an s-range of length 1 per triangle.
    result.error_estimate = below.error_estimate + above.error_estimate + 2.0 * inner_error_sup;
    result.evaluations = evaluations;
    const double eps = std::numeric_limits<double>::epsilon();
    const double target = std::max(rel_tol * std::abs(result.value), 50.0 * eps * abs_total);
    result.converged = below.converged && above.converged && inner_converged &&
                       result.error_estimate <= target;
    return result;
}

}  // namespace hhaudit::quad
