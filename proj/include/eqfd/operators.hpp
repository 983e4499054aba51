#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eqfd/error.hpp"
#include "eqfd/mesh1d.hpp"
#include "eqfd/sparse.hpp"
#include "eqfd/stencil.hpp"
#include "eqfd/tensor_mesh.hpp"

// All operators act on interior nodes only; boundary values are zero
// (Dirichlet) and their columns are dropped. 2D lattices are flattened
// row-major with the x index fastest: row = (j − 1)·(Nx − 1) + (i − 1).

namespace eqfd {

namespace detail {

inline SparseMatrix assemble_1d(const Mesh1D& mesh, int order) {
    if (mesh.size() < 3) throw InputError("operator assembly needs at least 3 mesh nodes");
    const std::size_t n = mesh.size() - 2;
    const auto h = mesh.spacings();
    TripletBuilder b(n, n);
    b.reserve(3 * n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto s = derivative_coeffs(order, h[r], h[r + 1]);
        if (r > 0) b.add(r, r - 1, s.a);
        b.add(r, r, s.b);
        if (r + 1 < n) b.add(r, r + 1, s.c);
    }
    return std::move(b).finalize();
}

/// Trapezoid/control-volume weights (h_{i−1} + h_i)/2 at interior nodes.
inline std::vector<double> cell_weights(const Mesh1D& mesh) {
    const auto h = mesh.spacings();
    std::vector<double> w(mesh.size() - 2);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * (h[i] + h[i + 1]);
    return w;
}

}  // namespace detail

inline SparseMatrix assemble_d2_1d(const Mesh1D& mesh) { return detail::assemble_1d(mesh, 2); }

inline SparseMatrix assemble_d1_1d(const Mesh1D& mesh) { return detail::assemble_1d(mesh, 1); }

/// Interior unknown count of a tensor mesh: Π (N_d − 1) over axes, i.e. nodes minus boundary.
inline std::size_t interior_size(const TensorMesh& mesh) {
    std::size_t n = 1;
    for (const auto& a : mesh.axes()) n *= a.size() - 2;
    return n;
}

/// Nonuniform 5-point Laplacian D2x ⊕ D2y on the interior lattice of a 2D tensor mesh.
inline SparseMatrix assemble_laplacian_2d(const TensorMesh& mesh) {
    if (mesh.dimension() != 2) {
        throw UnsupportedDimensionError("assemble_laplacian_2d: mesh dimension is " +
                                        std::to_string(mesh.dimension()) + ", expected 2");
    }
    const auto& mx = mesh.axis(0);
    const auto& my = mesh.axis(1);
    if (mx.size() < 3 || my.size() < 3) throw InputError("assemble_laplacian_2d: need >= 3 nodes per axis");
    const std::size_t nx = mx.size() - 2;
    const std::size_t ny = my.size() - 2;
    const auto hx = mx.spacings();
    const auto hy = my.spacings();

    TripletBuilder b(nx * ny, nx * ny);
    b.reserve(5 * nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const auto sy = second_derivative_coeffs(hy[j], hy[j + 1]);
        for (std::size_t i = 0; i < nx; ++i) {
            const auto sx = second_derivative_coeffs(hx[i], hx[i + 1]);
            const std::size_t row = j * nx + i;
            if (j > 0) b.add(row, row - nx, sy.a);
            if (i > 0) b.add(row, row - 1, sx.a);
            b.add(row, row, sx.b + sy.b);
            if (i + 1 < nx) b.add(row, row + 1, sx.c);
            if (j + 1 < ny) b.add(row, row + nx, sy.c);
        }
    }
    return std::move(b).finalize();
}

/// Interior cell weights of a 1D or 2D tensor mesh (product across axes, x fastest).
inline std::vector<double> interior_weights(const TensorMesh& mesh) {
    if (mesh.dimension() == 1) return detail::cell_weights(mesh.axis(0));
    if (mesh.dimension() != 2) throw UnsupportedDimensionError("interior weights implemented for 1D and 2D");
    const auto wx = detail::cell_weights(mesh.axis(0));
    const auto wy = detail::cell_weights(mesh.axis(1));
    std::vector<double> w;
    w.reserve(wx.size() * wy.size());
    for (double b : wy) {
        for (double a : wx) w.push_back(a * b);
    }
    return w;
}

struct SymmetrizedOperator {
    SparseMatrix matrix;          // W^{1/2}·A·W^{−1/2}
    std::vector<double> weights;  // diagonal of W
};

/**
 * Diagonal similarity W^{1/2}·A·W^{−1/2} with w_i = (h_{i−1} + h_i)/2 per axis.
 *
 * For the nonuniform second-difference operator w_i·A_{i,i+1} = 1/h_i =
 * w_{i+1}·A_{i+1,i}, so the result is symmetric and has the same spectrum.
 * Eigenvectors map back by v = W^{−1/2}·u. Whether the result actually is
 * symmetric is recorded in matrix.symmetric(), not assumed.
 */
inline SymmetrizedOperator symmetrize(const SparseMatrix& a, const TensorMesh& mesh) {
    auto w = interior_weights(mesh);
    if (a.rows() != w.size() || a.cols() != w.size()) {
        throw InputError("symmetrize: operator is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " but the mesh has " + std::to_string(w.size()) + " interior nodes");
    }
    std::vector<double> root(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) root[i] = std::sqrt(w[i]);

    TripletBuilder b(a.rows(), a.cols());
    b.reserve(a.nnz());
    for (const auto& t : a.triplets()) b.add(t.row, t.col, root[t.row] * t.value / root[t.col]);
    return {std::move(b).finalize(), std::move(w)};
}

inline SymmetrizedOperator symmetrize(const SparseMatrix& a, const Mesh1D& mesh) {
    return symmetrize(a, TensorMesh({mesh}));
}

}  // namespace eqfd
