#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "eqfd/error.hpp"
#include "eqfd/interval.hpp"
#include "eqfd/mesh1d.hpp"
#include "eqfd/quadrature.hpp"
#include "eqfd/tensor_mesh.hpp"
#include "eqfd/weights.hpp"

namespace eqfd {

struct Rectangle {
    Interval x;
    Interval y;

    double diameter() const { return std::hypot(x.length(), y.length()); }
};

struct WinslowOptions {
    /// Stopping tolerance relative to the domain diameter.
    double tol = 1e-8;
    std::size_t max_iter = 200;
    MeshOptions boundary{};
    QuadratureOptions face_quadrature{1e-12, 0.0, 4000};
};

/// Structured 2D grid x(ξ, η), y(ξ, η) on an nx × ny computational lattice (ξ index fastest).
class MappedGrid2D {
public:
    MappedGrid2D(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), x_(nx * ny), y_(nx * ny) {}

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double x(std::size_t i, std::size_t j) const { return x_[j * nx_ + i]; }
    double y(std::size_t i, std::size_t j) const { return y_[j * nx_ + i]; }
    double& x(std::size_t i, std::size_t j) { return x_[j * nx_ + i]; }
    double& y(std::size_t i, std::size_t j) { return y_[j * nx_ + i]; }

    /// Final PDE residual: largest Jacobi displacement over the diameter.
    double residual() const { return residual_; }
    /// Picard linear solves performed.
    std::size_t iterations() const { return iterations_; }

    /// Smallest corner cross product over all cells; > 0 means no folded cell.
    double min_jacobian() const {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j + 1 < ny_; ++j) {
            for (std::size_t i = 0; i + 1 < nx_; ++i) {
                // Corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1).
                const std::size_t ci[4] = {i, i + 1, i + 1, i};
                const std::size_t cj[4] = {j, j, j + 1, j + 1};
                for (int c = 0; c < 4; ++c) {
                    const int n = (c + 1) % 4;
                    const int p = (c + 3) % 4;
                    const double ax = x(ci[n], cj[n]) - x(ci[c], cj[c]);
                    const double ay = y(ci[n], cj[n]) - y(ci[c], cj[c]);
                    const double bx = x(ci[p], cj[p]) - x(ci[c], cj[c]);
                    const double by = y(ci[p], cj[p]) - y(ci[c], cj[c]);
                    worst = std::min(worst, ax * by - ay * bx);
                }
            }
        }
        return worst;
    }

    /// Max node distance (max norm over both coordinates) to a 2D tensor mesh of the same shape.
    double max_discrepancy(const TensorMesh& mesh) const {
        if (mesh.dimension() != 2 || mesh.axis(0).size() != nx_ || mesh.axis(1).size() != ny_) {
            throw InputError("max_discrepancy: tensor mesh shape differs from the mapped grid");
        }
        double worst = 0.0;
        for (std::size_t j = 0; j < ny_; ++j) {
            for (std::size_t i = 0; i < nx_; ++i) {
                worst = std::max({worst, std::abs(x(i, j) - mesh.axis(0)[i]), std::abs(y(i, j) - mesh.axis(1)[j])});
            }
        }
        return worst;
    }

    /// Reads the grid back as a tensor product; throws if any row/column deviates by more than tol.
    TensorMesh to_tensor_mesh(double tol) const {
        std::vector<double> xs(nx_), ys(ny_);
        for (std::size_t i = 0; i < nx_; ++i) xs[i] = x(i, 0);
        for (std::size_t j = 0; j < ny_; ++j) ys[j] = y(0, j);
        TensorMesh mesh({Mesh1D::from_nodes(xs), Mesh1D::from_nodes(ys)});
        const double gap = max_discrepancy(mesh);
        if (gap > tol) {
            throw NumericalError("mapped grid is not a tensor product (deviation " + std::to_string(gap) + ")", gap);
        }
        return mesh;
    }

    /// CSV with header `i,j,x,y`, i fastest.
    template <class Format>
    void write_csv(std::ostream& os, Format&& fmt) const {
        os << "i,j,x,y\n";
        for (std::size_t j = 0; j < ny_; ++j) {
            for (std::size_t i = 0; i < nx_; ++i) os << i << ',' << j << ',' << fmt(x(i, j)) << ',' << fmt(y(i, j)) << '\n';
        }
    }

private:
    friend MappedGrid2D solve_winslow(const Weight2D&, Rectangle, std::size_t, std::size_t, const WinslowOptions&);

    std::size_t nx_, ny_;
    std::vector<double> x_, y_;
    double residual_ = 0.0;
    std::size_t iterations_ = 0;
};

namespace detail {

/// Mean of 1/g along the straight physical segment between two nodes.
inline double segment_mean_inverse(const Weight2D& g, double x0, double y0, double x1, double y1,
                                   const QuadratureOptions& quad) {
    auto inv = [&](double t) { return 1.0 / g(x0 + t * (x1 - x0), y0 + t * (y1 - y0)); };
    if (x0 == x1 && y0 == y1) return inv(0.0);
    return integrate(inv, 0.0, 1.0, quad).value;
}

}  // namespace detail

/**
 * Solves ∇_ξ·((1/g)∇_ξ x) = 0 for x(ξ, η) and y(ξ, η) on [0,1]² by Picard iteration.
 *
 * Discretization is conservative on the uniform computational lattice:
 * each face carries (mean of 1/g along the physical segment) · (Δcoordinate)
 * divided by Δξ² or Δη². In 1D that flux is exactly the increment of S
 * between neighbours, so a separable g reproduces the equidistributed
 * tensor mesh to inversion accuracy. Each Picard step freezes the face
 * coefficients at the current coordinates and solves both coordinate fields
 * with one sparse Cholesky factorization. Boundary nodes come from 1D
 * equidistribution of g restricted to each edge; the interior starts as a
 * uniform lattice.
 */
inline MappedGrid2D solve_winslow(const Weight2D& g, Rectangle dom, std::size_t nx, std::size_t ny,
                                  const WinslowOptions& opts = {}) {
    dom.x.require_nonempty();
    dom.y.require_nonempty();
    if (nx < 3 || ny < 3) throw InputError("solve_winslow: need at least 3 nodes per direction");

    auto sample = [&](auto&& fn) {
        for (std::size_t j = 0; j < 65; ++j) {
            for (std::size_t i = 0; i < 65; ++i) {
                fn(dom.x.lo + dom.x.length() * static_cast<double>(i) / 64.0,
                   dom.y.lo + dom.y.length() * static_cast<double>(j) / 64.0);
            }
        }
    };
    sample([&](double px, double py) {
        const double v = g(px, py);
        if (!std::isfinite(v) || v <= 0.0) {
            throw ValidationError("2D weight is not finite and positive at (" + std::to_string(px) + ", " +
                                  std::to_string(py) + ")");
        }
    });

    const double diameter = dom.diameter();
    MappedGrid2D grid(nx, ny);

    const Mesh1D bottom = generate_mesh(g.along_x(dom.y.lo), dom.x, nx - 1, opts.boundary);
    const Mesh1D top = generate_mesh(g.along_x(dom.y.hi), dom.x, nx - 1, opts.boundary);
    const Mesh1D left = generate_mesh(g.along_y(dom.x.lo), dom.y, ny - 1, opts.boundary);
    const Mesh1D right = generate_mesh(g.along_y(dom.x.hi), dom.y, ny - 1, opts.boundary);

    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            grid.x(i, j) = dom.x.lo + dom.x.length() * static_cast<double>(i) / static_cast<double>(nx - 1);
            grid.y(i, j) = dom.y.lo + dom.y.length() * static_cast<double>(j) / static_cast<double>(ny - 1);
        }
    }
    for (std::size_t i = 0; i < nx; ++i) {
        grid.x(i, 0) = bottom[i];
        grid.y(i, 0) = dom.y.lo;
        grid.x(i, ny - 1) = top[i];
        grid.y(i, ny - 1) = dom.y.hi;
    }
    for (std::size_t j = 0; j < ny; ++j) {
        grid.x(0, j) = dom.x.lo;
        grid.y(0, j) = left[j];
        grid.x(nx - 1, j) = dom.x.hi;
        grid.y(nx - 1, j) = right[j];
    }

    const double wxi = static_cast<double>((nx - 1) * (nx - 1));   // 1/Δξ²
    const double weta = static_cast<double>((ny - 1) * (ny - 1));  // 1/Δη²
    // Face (i+½, j) stored at xi_face[j*(nx-1)+i]; face (i, j+½) at eta_face[j*nx+i].
    std::vector<double> xi_face((nx - 1) * ny), eta_face(nx * (ny - 1));

    const auto update_faces = [&] {
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i + 1 < nx; ++i) {
                xi_face[j * (nx - 1) + i] =
                    wxi * detail::segment_mean_inverse(g, grid.x(i, j), grid.y(i, j), grid.x(i + 1, j),
                                                       grid.y(i + 1, j), opts.face_quadrature);
            }
        }
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                eta_face[j * nx + i] =
                    weta * detail::segment_mean_inverse(g, grid.x(i, j), grid.y(i, j), grid.x(i, j + 1),
                                                        grid.y(i, j + 1), opts.face_quadrature);
            }
        }
    };

    struct Neighbour {
        std::size_t i, j;
        double coeff;
    };
    const auto neighbours = [&](std::size_t i, std::size_t j) {
        return std::array<Neighbour, 4>{Neighbour{i - 1, j, xi_face[j * (nx - 1) + i - 1]},
                                        Neighbour{i + 1, j, xi_face[j * (nx - 1) + i]},
                                        Neighbour{i, j - 1, eta_face[(j - 1) * nx + i]},
                                        Neighbour{i, j + 1, eta_face[j * nx + i]}};
    };

    const auto residual = [&] {
        double worst = 0.0;
        for (std::size_t j = 1; j + 1 < ny; ++j) {
            for (std::size_t i = 1; i + 1 < nx; ++i) {
                double sx = 0.0, sy = 0.0, diag = 0.0;
                for (const auto& nb : neighbours(i, j)) {
                    sx += nb.coeff * (grid.x(nb.i, nb.j) - grid.x(i, j));
                    sy += nb.coeff * (grid.y(nb.i, nb.j) - grid.y(i, j));
                    diag += nb.coeff;
                }
                worst = std::max({worst, std::abs(sx) / diag, std::abs(sy) / diag});
            }
        }
        return worst / diameter;
    };

    const std::size_t mx = nx - 2;
    const std::size_t my = ny - 2;
    const auto unknown = [mx](std::size_t i, std::size_t j) {
        return static_cast<Eigen::Index>((j - 1) * mx + (i - 1));
    };
    const auto n = static_cast<Eigen::Index>(mx * my);

    double displacement = 0.0;
    std::size_t iter = 0;
    while (true) {
        update_faces();
        const double res = residual();
        grid.residual_ = res;
        if (res <= opts.tol && displacement <= opts.tol * diameter) break;
        if (iter >= opts.max_iter) {
            throw ConvergenceError("Winslow solve did not converge in " + std::to_string(opts.max_iter) +
                                       " iterations (residual " + std::to_string(res) + ")",
                                   res);
        }

        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(5 * n));
        Eigen::VectorXd bx = Eigen::VectorXd::Zero(n), by = Eigen::VectorXd::Zero(n);
        for (std::size_t j = 1; j + 1 < ny; ++j) {
            for (std::size_t i = 1; i + 1 < nx; ++i) {
                const auto row = unknown(i, j);
                double diag = 0.0;
                for (const auto& nb : neighbours(i, j)) {
                    diag += nb.coeff;
                    const bool boundary = nb.i == 0 || nb.j == 0 || nb.i == nx - 1 || nb.j == ny - 1;
                    if (boundary) {
                        bx(row) += nb.coeff * grid.x(nb.i, nb.j);
                        by(row) += nb.coeff * grid.y(nb.i, nb.j);
                    } else {
                        trips.emplace_back(row, unknown(nb.i, nb.j), -nb.coeff);
                    }
                }
                trips.emplace_back(row, row, diag);
            }
        }
        Eigen::SparseMatrix<double> a(n, n);
        a.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
        if (solver.info() != Eigen::Success) throw NumericalError("Winslow linear system factorization failed", res);
        const Eigen::VectorXd sx = solver.solve(bx);
        const Eigen::VectorXd sy = solver.solve(by);

        displacement = 0.0;
        for (std::size_t j = 1; j + 1 < ny; ++j) {
            for (std::size_t i = 1; i + 1 < nx; ++i) {
                const auto row = unknown(i, j);
                displacement = std::max({displacement, std::abs(sx(row) - grid.x(i, j)), std::abs(sy(row) - grid.y(i, j))});
                grid.x(i, j) = sx(row);
                grid.y(i, j) = sy(row);
            }
        }
        ++iter;
    }
    grid.iterations_ = iter;

    const double jac = grid.min_jacobian();
    if (!(jac > 0.0)) throw MeshFoldError("Winslow grid has a folded cell (min Jacobian " + std::to_string(jac) + ")", jac);
    return grid;
}

}  // namespace eqfd
