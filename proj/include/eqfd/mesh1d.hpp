#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eqfd/error.hpp"
#include "eqfd/interval.hpp"
#include "eqfd/quadrature.hpp"
#include "eqfd/weights.hpp"

namespace eqfd {

struct MeshOptions {
    /// Inversion tolerance relative to S_total.
    double inversion_rel_tol = 1e-10;
    /// Precomputed S-table panels per mesh segment.
    std::size_t panels_per_segment = 32;
    std::size_t validation_samples = 1000;
    QuadratureOptions quadrature{};
};

/**
 * S(x) = ∫_a^x 1/g(s) ds on a fixed interval, tabulated on a fine panel grid.
 *
 * Evaluation adds one adaptive quadrature from the nearest table knot, so the
 * table only controls cost, never accuracy. inverse() brackets the target in
 * the table and finishes with safeguarded Newton (S' = 1/g).
 */
template <WeightFunction W>
class CumulativeIntegral {
public:
    CumulativeIntegral(W g, Interval domain, std::size_t panels, QuadratureOptions quad = {})
        : g_(std::move(g)), domain_(domain), quad_(quad) {
        domain_.require_nonempty();
        panels = std::max<std::size_t>(panels, 1);
        const auto breaks = breakpoints_of(g_, domain_);
        knots_.reserve(panels + breaks.size() + 1);
        for (std::size_t k = 0; k <= panels; ++k) {
            knots_.push_back(k == panels ? domain_.hi
                                         : domain_.lo + domain_.length() * static_cast<double>(k) /
                                                            static_cast<double>(panels));
        }
        knots_.insert(knots_.end(), breaks.begin(), breaks.end());
        std::sort(knots_.begin(), knots_.end());
        knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());

        cumulative_.assign(knots_.size(), 0.0);
        for (std::size_t k = 1; k < knots_.size(); ++k) {
            cumulative_[k] = cumulative_[k - 1] + panel_integral(knots_[k - 1], knots_[k]);
        }
    }

    const W& weight() const { return g_; }
    Interval domain() const { return domain_; }
    double total() const { return cumulative_.back(); }

    double operator()(double x) const {
        if (!(x >= domain_.lo && x <= domain_.hi)) {
            throw DomainError("S(x) requested at x=" + std::to_string(x) + " outside the mesh domain");
        }
        if (x == domain_.lo) return 0.0;
        if (x == domain_.hi) return total();
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        const auto k = static_cast<std::size_t>(it - knots_.begin()) - 1;
        return cumulative_[k] + panel_integral(knots_[k], x);
    }

    /// x with |S(x) − target| ≤ abs_tol; endpoints map exactly to a and b.
    double inverse(double target, double abs_tol) const {
        const double st = total();
        if (!(target >= -abs_tol && target <= st + abs_tol)) {
            throw InputError("inverse S: target " + std::to_string(target) + " outside [0, " +
                             std::to_string(st) + "]");
        }
        if (target <= 0.0) return domain_.lo;
        if (target >= st) return domain_.hi;

        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        auto k = static_cast<std::size_t>(it - cumulative_.begin());
        k = std::clamp<std::size_t>(k, 1, knots_.size() - 1) - 1;
        double lo = knots_[k];
        double hi = knots_[k + 1];
        const double base = cumulative_[k];
        if (target == base) return lo;

        // f(x) = S(x) − target is increasing with f(lo) ≤ 0 ≤ f(hi).
        const double anchor = knots_[k];
        double x = lo + (target - base) / (cumulative_[k + 1] - base) * (hi - lo);
        const double goal = 0.01 * abs_tol;
        for (int iter = 0; iter < 200; ++iter) {
            const double f = base + panel_integral(anchor, x) - target;
            if (std::abs(f) <= goal) return x;
            if (f < 0.0) {
                lo = x;
            } else {
                hi = x;
            }
            double next = x - f * g_(x);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (next == x || std::nextafter(lo, hi) >= hi) return x;
            x = next;
        }
        return x;
    }

private:
    double panel_integral(double lo, double hi) const {
        auto inv = [this](double s) { return 1.0 / static_cast<double>(g_(s)); };
        const auto breaks = breakpoints_of(g_, Interval{std::min(lo, hi), std::max(lo, hi)});
        return integrate_piecewise(inv, lo, hi, breaks, quad_).value;
    }

    W g_;
    Interval domain_;
    QuadratureOptions quad_;
    std::vector<double> knots_;
    std::vector<double> cumulative_;
};

/// Strictly increasing node array x_0 = a < ... < x_N = b.
class Mesh1D {
public:
    struct Equidistribution {
        double s_total = 0.0;
        double residual = 0.0;   // max_i |S(x_{i+1}) − S(x_i) − S_total/N|
        double tolerance = 0.0;  // inversion tolerance, absolute in S units
    };

    /// Wraps arbitrary nodes (no equidistribution metadata).
    static Mesh1D from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 2) throw InputError("a mesh needs at least 2 nodes");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!std::isfinite(nodes[i])) throw InputError("mesh node is not finite");
            if (i > 0 && !(nodes[i] > nodes[i - 1])) throw InputError("mesh nodes must be strictly increasing");
        }
        return Mesh1D(std::move(nodes), std::nullopt);
    }

    /// Nodes produced by equidistribution, with their metadata.
    static Mesh1D equidistributed(std::vector<double> nodes, Equidistribution info) {
        auto mesh = from_nodes(std::move(nodes));
        mesh.info_ = info;
        return mesh;
    }

    static Mesh1D uniform(Interval dom, std::size_t segments) {
        dom.require_nonempty();
        if (segments < 1) throw InputError("uniform mesh needs at least one segment");
        std::vector<double> x(segments + 1);
        for (std::size_t i = 0; i <= segments; ++i) {
            x[i] = dom.lo + dom.length() * static_cast<double>(i) / static_cast<double>(segments);
        }
        x.back() = dom.hi;
        return Mesh1D(std::move(x), Equidistribution{dom.length(), 0.0, 0.0});
    }

    Interval domain() const { return {nodes_.front(), nodes_.back()}; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> spacings() const { return spacings_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t segments() const { return spacings_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }

    double min_spacing() const { return *std::min_element(spacings_.begin(), spacings_.end()); }
    double max_spacing() const { return *std::max_element(spacings_.begin(), spacings_.end()); }

    const std::optional<Equidistribution>& equidistribution() const { return info_; }
    double s_total() const { return info_ ? info_->s_total : domain().length(); }
    double equidist_residual() const { return info_ ? info_->residual : 0.0; }

    /// CSV with header `i,x_i,h_i`; h_N is left empty.
    template <class Format>
    void write_csv(std::ostream& os, Format&& fmt) const {
        os << "i,x_i,h_i\n";
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            os << i << ',' << fmt(nodes_[i]) << ',';
            if (i < spacings_.size()) os << fmt(spacings_[i]);
            os << '\n';
        }
    }

private:
    Mesh1D(std::vector<double> nodes, std::optional<Equidistribution> info)
        : nodes_(std::move(nodes)), info_(info) {
        spacings_.resize(nodes_.size() - 1);
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) spacings_[i] = nodes_[i + 1] - nodes_[i];
    }

    std::vector<double> nodes_;
    std::vector<double> spacings_;
    std::optional<Equidistribution> info_;
};

/// S(x) = ∫_a^x 1/g(s) ds by adaptive quadrature.
template <WeightFunction W>
double cumulative_s(const W& g, Interval dom, double x, const QuadratureOptions& quad = {}) {
    dom.require_nonempty();
    if (!std::isfinite(x)) throw InputError("cumulative_s: non-finite x");
    if (!dom.contains(x)) {
        throw DomainError("cumulative_s: x=" + std::to_string(x) + " outside [" + std::to_string(dom.lo) + ", " +
                          std::to_string(dom.hi) + "]");
    }
    if (x == dom.lo) return 0.0;
    auto inv = [&g](double s) { return 1.0 / static_cast<double>(g(s)); };
    const auto breaks = breakpoints_of(g, Interval{dom.lo, x});
    return integrate_piecewise(inv, dom.lo, x, breaks, quad).value;
}

/// Solves S(x) = target on [a, b] to 1e-10·S_total (by default).
template <WeightFunction W>
double invert_s(const W& g, Interval dom, double target, const MeshOptions& opts = {}) {
    require_valid(g, dom, opts.validation_samples);
    const CumulativeIntegral<W> s(g, dom, 256, opts.quadrature);
    return s.inverse(target, opts.inversion_rel_tol * s.total());
}

/**
 * Equidistributed mesh with N segments: x_i = S⁻¹(i/N · S_total).
 *
 * Nodes sit where S takes equal increments, so the spacing is locally
 * proportional to g. Endpoints are pinned exactly to a and b.
 */
template <WeightFunction W>
Mesh1D generate_mesh(const W& g, Interval dom, std::size_t segments, const MeshOptions& opts = {}) {
    dom.require_nonempty();
    if (segments < 2) throw InputError("generate_mesh: need N >= 2 segments, got " + std::to_string(segments));
    require_valid(g, dom, opts.validation_samples);

    const CumulativeIntegral<W> s(g, dom, opts.panels_per_segment * segments, opts.quadrature);
    const double total = s.total();
    const double tol = opts.inversion_rel_tol * total;

    std::vector<double> x(segments + 1);
    x.front() = dom.lo;
    x.back() = dom.hi;
    for (std::size_t i = 1; i < segments; ++i) {
        x[i] = s.inverse(total * static_cast<double>(i) / static_cast<double>(segments), tol);
    }
    for (std::size_t i = 1; i <= segments; ++i) {
        if (!(x[i] > x[i - 1])) {
            throw NumericalError("generate_mesh: inversion produced non-increasing nodes at i=" + std::to_string(i),
                                 x[i] - x[i - 1]);
        }
    }

    const double target = total / static_cast<double>(segments);
    double residual = 0.0;
    double previous = 0.0;
    for (std::size_t i = 1; i <= segments; ++i) {
        const double current = s(x[i]);
        residual = std::max(residual, std::abs(current - previous - target));
        previous = current;
    }
    return Mesh1D::equidistributed(std::move(x), {total, residual, tol});
}

}  // namespace eqfd
