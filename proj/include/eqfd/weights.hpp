#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "eqfd/error.hpp"
#include "eqfd/interval.hpp"

namespace eqfd {

namespace weight {

struct Constant {
    double level = 1.0;
};

/// g(x) = 1 − depth·exp(−((x − center)/width)²); depth ∈ [0, 1) keeps min g = 1 − depth > 0.
struct GaussianWell {
    double depth = 0.0;
    double center = 0.0;
    double width = 1.0;
};

/// Piecewise-linear interpolation through (abscissae[k], values[k]); no extrapolation.
struct Table {
    std::vector<double> abscissae;
    std::vector<double> values;
};

}  // namespace weight

/**
 * Mesh-density monitor g(x) on one axis.
 *
 * Small g means fine spacing. Only relative values matter: the mesh generator
 * normalizes by the total integral of 1/g, so Constant(k) yields the same mesh
 * for every k > 0.
 */
class WeightSpec {
public:
    using Variant = std::variant<weight::Constant, weight::GaussianWell, weight::Table>;

    static WeightSpec constant(double level) {
        if (!std::isfinite(level) || level <= 0.0) {
            throw ValidationError("constant weight level must be finite and > 0, got " + std::to_string(level));
        }
        return WeightSpec(weight::Constant{level});
    }

    static WeightSpec gaussian_well(double depth, double center, double width) {
        if (!std::isfinite(depth) || depth < 0.0 || depth >= 1.0) {
            throw ValidationError("gaussian_well depth must lie in [0, 1), got " + std::to_string(depth));
        }
        if (!std::isfinite(center)) throw ValidationError("gaussian_well center must be finite");
        if (!std::isfinite(width) || width <= 0.0) {
            throw ValidationError("gaussian_well width must be finite and > 0, got " + std::to_string(width));
        }
        return WeightSpec(weight::GaussianWell{depth, center, width});
    }

    /// Positivity of the values is checked by validate(), not here.
    static WeightSpec table(std::vector<double> abscissae, std::vector<double> values) {
        if (abscissae.size() != values.size()) {
            throw ValidationError("table weight: abscissae and values differ in length");
        }
        if (abscissae.size() < 2) throw ValidationError("table weight needs at least 2 samples");
        for (std::size_t k = 0; k < abscissae.size(); ++k) {
            if (!std::isfinite(abscissae[k]) || !std::isfinite(values[k])) {
                throw ValidationError("table weight: non-finite sample");
            }
            if (k > 0 && !(abscissae[k] > abscissae[k - 1])) {
                throw ValidationError("table weight: abscissae must be strictly ascending");
            }
        }
        return WeightSpec(weight::Table{std::move(abscissae), std::move(values)});
    }

    const Variant& variant() const { return variant_; }

    /// g(x). Throws InputError for non-finite x and DomainError outside a table's hull.
    double operator()(double x) const {
        if (!std::isfinite(x)) throw InputError("weight evaluated at non-finite x");
        return std::visit([x](const auto& w) { return eval(w, x); }, variant_);
    }

    /// Points where g is not smooth (table knots) inside the interval, ascending.
    std::vector<double> breakpoints(Interval dom) const {
        std::vector<double> out;
        if (const auto* t = std::get_if<weight::Table>(&variant_)) {
            for (double x : t->abscissae) {
                if (x > dom.lo && x < dom.hi) out.push_back(x);
            }
        }
        return out;
    }

    /// Candidate interior extrema of g inside the interval.
    std::vector<double> critical_points(Interval dom) const {
        std::vector<double> out = breakpoints(dom);
        if (const auto* w = std::get_if<weight::GaussianWell>(&variant_)) {
            if (dom.contains(w->center)) out.push_back(w->center);
        }
        return out;
    }

    /// Interval on which g is defined; the whole real line for analytic variants.
    Interval hull() const {
        if (const auto* t = std::get_if<weight::Table>(&variant_)) {
            return {t->abscissae.front(), t->abscissae.back()};
        }
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {-inf, inf};
    }

private:
    explicit WeightSpec(Variant v) : variant_(std::move(v)) {}

    static double eval(const weight::Constant& w, double) { return w.level; }

    static double eval(const weight::GaussianWell& w, double x) {
        const double u = (x - w.center) / w.width;
        return 1.0 - w.depth * std::exp(-u * u);
    }

    static double eval(const weight::Table& t, double x) {
        const auto& xs = t.abscissae;
        if (x < xs.front() || x > xs.back()) {
            throw DomainError("table weight evaluated at x=" + std::to_string(x) + " outside [" +
                              std::to_string(xs.front()) + ", " + std::to_string(xs.back()) + "]");
        }
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.end()) return t.values.back();
        const auto k = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double s = (x - xs[k]) / (xs[k + 1] - xs[k]);
        return (1.0 - s) * t.values[k] + s * t.values[k + 1];
    }

    Variant variant_;
};

inline double evaluate(const WeightSpec& spec, double x) { return spec(x); }

/// Anything usable as a 1D weight: a callable double -> double.
template <class W>
concept WeightFunction = std::copy_constructible<W> && requires(const W& w, double x) {
    { w(x) } -> std::convertible_to<double>;
};

template <WeightFunction W>
std::vector<double> breakpoints_of(const W& w, Interval dom) {
    if constexpr (requires { { w.breakpoints(dom) } -> std::convertible_to<std::vector<double>>; }) {
        return w.breakpoints(dom);
    } else {
        return {};
    }
}

template <WeightFunction W>
std::vector<double> critical_points_of(const W& w, Interval dom) {
    if constexpr (requires { { w.critical_points(dom) } -> std::convertible_to<std::vector<double>>; }) {
        return w.critical_points(dom);
    } else {
        return breakpoints_of(w, dom);
    }
}

struct ValidationReport {
    double min_value = 0.0;
    double max_value = 0.0;
    double argmin = 0.0;
    double argmax = 0.0;
    bool positive = false;
    bool bounded = false;
    std::string message;

    bool valid() const { return positive && bounded; }
};

/// Samples g densely on [a, b] (plus known critical points) and checks that
/// it is finite and strictly positive there.
template <WeightFunction W>
ValidationReport validate(const W& g, Interval dom, std::size_t samples) {
    dom.require_nonempty();
    if (samples < 2) throw InputError("validate: need at least 2 samples");

    std::vector<double> xs;
    xs.reserve(samples + 8);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(samples - 1);
        xs.push_back(k + 1 == samples ? dom.hi : dom.lo + t * dom.length());
    }
    for (double c : critical_points_of(g, dom)) xs.push_back(c);

    ValidationReport r;
    r.min_value = std::numeric_limits<double>::infinity();
    r.max_value = -std::numeric_limits<double>::infinity();
    r.bounded = true;
    for (double x : xs) {
        double v = 0.0;
        try {
            v = static_cast<double>(g(x));
        } catch (const DomainError& e) {
            r.positive = false;
            r.bounded = false;
            r.message = std::string("weight undefined on part of the domain: ") + e.what();
            return r;
        }
        if (!std::isfinite(v)) {
            r.bounded = false;
            continue;
        }
        if (v < r.min_value) {
            r.min_value = v;
            r.argmin = x;
        }
        if (v > r.max_value) {
            r.max_value = v;
            r.argmax = x;
        }
    }
    r.positive = r.min_value > 0.0;
    if (!r.bounded) {
        r.message = "weight is not finite everywhere on the domain";
    } else if (!r.positive) {
        r.message = "positivity violated: min g = " + std::to_string(r.min_value) + " at x = " +
                    std::to_string(r.argmin);
    }
    return r;
}

template <WeightFunction W>
void require_valid(const W& g, Interval dom, std::size_t samples = 1000) {
    const auto report = validate(g, dom, samples);
    if (!report.valid()) throw ValidationError(report.message);
}

namespace weight {

/// Separable 2D weight gx(x)·gy(y).
struct Product {
    WeightSpec x;
    WeightSpec y;
};

/// Non-separable well 1 − depth·exp(−((x−cx)² + (y−cy)²)/width²).
struct RadialWell {
    double depth = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;
    double width = 1.0;
};

}  // namespace weight

/// Joint weight g(x, y) for 2D grid generation.
class Weight2D {
public:
    using Variant = std::variant<weight::Product, weight::RadialWell>;

    static Weight2D product(WeightSpec gx, WeightSpec gy) {
        return Weight2D(weight::Product{std::move(gx), std::move(gy)});
    }

    static Weight2D radial_well(double depth, double center_x, double center_y, double width) {
        if (!std::isfinite(depth) || depth < 0.0 || depth >= 1.0) {
            throw ValidationError("radial_well depth must lie in [0, 1), got " + std::to_string(depth));
        }
        if (!std::isfinite(center_x) || !std::isfinite(center_y)) {
            throw ValidationError("radial_well center must be finite");
        }
        if (!std::isfinite(width) || width <= 0.0) throw ValidationError("radial_well width must be > 0");
        return Weight2D(weight::RadialWell{depth, center_x, center_y, width});
    }

    const Variant& variant() const { return variant_; }
    bool separable() const { return std::holds_alternative<weight::Product>(variant_); }

    double operator()(double x, double y) const {
        if (const auto* p = std::get_if<weight::Product>(&variant_)) return p->x(x) * p->y(y);
        const auto& r = std::get<weight::RadialWell>(variant_);
        const double dx = x - r.center_x;
        const double dy = y - r.center_y;
        return 1.0 - r.depth * std::exp(-(dx * dx + dy * dy) / (r.width * r.width));
    }

    /// g(·, y) as a 1D weight.
    auto along_x(double y) const { return Slice{this, y, true}; }
    /// g(x, ·) as a 1D weight.
    auto along_y(double x) const { return Slice{this, x, false}; }

    struct Slice {
        const Weight2D* parent;
        double fixed;
        bool along_x;

        double operator()(double t) const { return along_x ? (*parent)(t, fixed) : (*parent)(fixed, t); }

        std::vector<double> breakpoints(Interval dom) const {
            if (const auto* p = std::get_if<weight::Product>(&parent->variant_)) {
                return along_x ? p->x.breakpoints(dom) : p->y.breakpoints(dom);
            }
            return {};
        }
    };

private:
    explicit Weight2D(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

}  // namespace eqfd
