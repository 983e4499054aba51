#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "eqfd/error.hpp"

namespace eqfd {

struct QuadratureOptions {
    double rel_tol = 1e-11;
    double abs_tol = 0.0;
    std::size_t max_subintervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

// Kronrod 15-point abscissae on [-1, 1] (nonnegative half) and weights;
// the odd-indexed abscissae are the embedded 7-point Gauss nodes.
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel kronrod_panel(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kronrod_w[7];
    double gauss = fc * gauss_w[3];
    double abs_sum = std::abs(kronrod);
    for (std::size_t k = 0; k < 7; ++k) {
        const double dx = half * kronrod_x[k];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kronrod_w[k] * (f1 + f2);
        abs_sum += kronrod_w[k] * (std::abs(f1) + std::abs(f2));
        if (k % 2 == 1) gauss += gauss_w[k / 2] * (f1 + f2);
    }
    const double value = kronrod * half;
    double error = std::abs((kronrod - gauss) * half);
    // QUADPACK's roundoff floor: the estimate cannot drop below ~50 eps of |f| mass.
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(half);
    error = std::max(error, roundoff);
    return {lo, hi, value, error};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) integration of f over [lo, hi].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol·|I|). Throws NumericalError with
/// the achieved value when the subdivision budget runs out.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opts = {}) {
    if (lo == hi) return {0.0, 0.0, 0};
    if (!(std::isfinite(lo) && std::isfinite(hi))) throw InputError("integrate: non-finite bounds");
    const double sign = hi < lo ? -1.0 : 1.0;
    if (hi < lo) std::swap(lo, hi);

    std::priority_queue<detail::Panel> panels;
    panels.push(detail::kronrod_panel(f, lo, hi));
    double value = panels.top().value;
    double error = panels.top().error;
    std::size_t evaluations = 15;

    const auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
    while (error > tolerance()) {
        if (panels.size() >= opts.max_subintervals) {
            throw NumericalError("adaptive quadrature did not converge (estimate " + std::to_string(value) +
                                     ", error " + std::to_string(error) + ")",
                                 sign * value);
        }
        const detail::Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(worst.lo < mid && mid < worst.hi)) {
            // Panel has collapsed to adjacent doubles; further bisection is meaningless.
            break;
        }
        panels.pop();
        const detail::Panel left = detail::kronrod_panel(f, worst.lo, mid);
        const detail::Panel right = detail::kronrod_panel(f, mid, worst.hi);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from scratch so the running update's cancellation does not leak into the result.
    double total = 0.0;
    double total_error = 0.0;
    std::vector<detail::Panel> pieces;
    pieces.reserve(panels.size());
    while (!panels.empty()) {
        pieces.push_back(panels.top());
        panels.pop();
    }
    std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (const auto& p : pieces) {
        total += p.value;
        total_error += p.error;
    }
    return {sign * total, total_error, evaluations};
}

/// Integrates piecewise across the given breakpoints (those strictly inside
/// (lo, hi) are used), so kinks in f never sit inside a Kronrod panel.
template <class F>
QuadratureResult integrate_piecewise(F&& f, double lo, double hi, std::span<const double> breakpoints,
                                     const QuadratureOptions& opts = {}) {
    const double a = std::min(lo, hi);
    const double b = std::max(lo, hi);
    QuadratureResult out;
    double left = a;
    for (double bp : breakpoints) {
        if (bp <= left || bp >= b) continue;
        const auto piece = integrate(f, left, bp, opts);
        out.value += piece.value;
        out.error += piece.error;
        out.evaluations += piece.evaluations;
        left = bp;
    }
    const auto piece = integrate(f, left, b, opts);
    out.value += piece.value;
    out.error += piece.error;
    out.evaluations += piece.evaluations;
    if (hi < lo) out.value = -out.value;
    return out;
}

}  // namespace eqfd
