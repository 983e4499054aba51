#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eqfd/error.hpp"
#include "eqfd/mesh1d.hpp"

namespace eqfd {

/// Three-point weights: f^(order)_i ≈ a·f_{i−1} + b·f_i + c·f_{i+1}.
struct StencilCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int order = 0;
};

namespace detail {
inline void require_spacings(double h_left, double h_right) {
    if (!(std::isfinite(h_left) && std::isfinite(h_right)) || h_left <= 0.0 || h_right <= 0.0) {
        throw InputError("stencil spacings must be finite and > 0 (h_left=" + std::to_string(h_left) +
                         ", h_right=" + std::to_string(h_right) + ")");
    }
}
}  // namespace detail

// The closed forms below are written so that h_left == h_right reproduces the
// classical central differences bit-for-bit: the ratios collapse to exactly 1
// and the middle first-derivative weight (h_r² − h_l²)/(h_r h_l (h_r + h_l))
// is cancelled down to (h_r − h_l)/(h_r h_l), which is exactly 0.

inline StencilCoeffs first_derivative_coeffs(double h_left, double h_right) {
    detail::require_spacings(h_left, h_right);
    const double sum = h_left + h_right;
    return {-(h_right / h_left) / sum, (h_right - h_left) / (h_right * h_left), (h_left / h_right) / sum, 1};
}

inline StencilCoeffs second_derivative_coeffs(double h_left, double h_right) {
    detail::require_spacings(h_left, h_right);
    const double sum = h_left + h_right;
    return {2.0 / (h_left * sum), -2.0 / (h_left * h_right), 2.0 / (h_right * sum), 2};
}

inline StencilCoeffs derivative_coeffs(int order, double h_left, double h_right) {
    switch (order) {
        case 1: return first_derivative_coeffs(h_left, h_right);
        case 2: return second_derivative_coeffs(h_left, h_right);
        default: throw InputError("derivative order must be 1 or 2, got " + std::to_string(order));
    }
}

/// Derivative at the interior nodes 1..N−1 of the mesh (boundary nodes excluded).
inline std::vector<double> differentiate(const Mesh1D& mesh, std::span<const double> f, int order) {
    if (f.size() != mesh.size()) {
        throw InputError("differentiate: " + std::to_string(f.size()) + " samples for a mesh of " +
                         std::to_string(mesh.size()) + " nodes");
    }
    if (mesh.segments() < 2) throw InputError("differentiate: need at least 2 segments");
    const auto h = mesh.spacings();
    std::vector<double> out(mesh.size() - 2);
    for (std::size_t i = 1; i + 1 < mesh.size(); ++i) {
        const auto s = derivative_coeffs(order, h[i - 1], h[i]);
        out[i - 1] = s.a * f[i - 1] + s.b * f[i] + s.c * f[i + 1];
    }
    return out;
}

}  // namespace eqfd
