#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eqfd/error.hpp"
#include "eqfd/sparse.hpp"

namespace eqfd {

enum class EigenMethod { automatic, lanczos, dense };

inline const char* to_string(EigenMethod m) {
    switch (m) {
        case EigenMethod::automatic: return "auto";
        case EigenMethod::lanczos: return "lanczos";
        case EigenMethod::dense: return "dense";
    }
    return "?";
}

struct EigenOptions {
    /// Residual tolerance relative to the spectral scale (largest |Ritz value| seen).
    double tol = 1e-9;
    std::uint64_t seed = 1;
    EigenMethod method = EigenMethod::automatic;
    /// automatic picks the dense solver up to this dimension.
    std::size_t dense_threshold = 1000;
    /// Matrix-vector budget; 0 means 5·dim.
    std::size_t max_matvecs = 0;
    /// Krylov basis cap per restart; 0 means dim.
    std::size_t max_basis = 0;
};

struct EigenResult {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // orthonormal, sign-fixed
    std::vector<double> residuals;             // ‖A·v − λ·v‖₂
    double scale = 0.0;                        // spectral scale estimate used for the tolerance
    std::string method;
    std::size_t iterations = 0;                // matrix-vector products (0 for dense)
    bool converged = false;
};

/// Lanczos ran out of budget; partial() holds whatever had converged.
class EigenConvergenceError : public ConvergenceError {
public:
    EigenConvergenceError(const std::string& what, double last_residual, EigenResult partial)
        : ConvergenceError(what, last_residual), partial_(std::move(partial)) {}
    const EigenResult& partial() const { return partial_; }

private:
    EigenResult partial_;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

/// Largest-magnitude component made positive; near-ties resolve to the lowest index.
inline void fix_sign(std::span<double> v) {
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    for (double x : v) {
        if (std::abs(x) >= (1.0 - 1e-6) * peak) {
            if (x < 0.0) {
                for (double& y : v) y = -y;
            }
            return;
        }
    }
}

/// Uniform(−1, 1) from the top 53 bits of a 64-bit Mersenne Twister; identical on every platform.
inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    return v;
}

/// Two passes of classical Gram–Schmidt against every vector in the sets.
inline void orthogonalize(std::span<double> w, const std::vector<std::vector<double>>& a,
                          const std::vector<std::vector<double>>& b) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto* set : {&a, &b}) {
            for (const auto& q : *set) axpy(-dot(q, w), q, w);
        }
    }
}

inline double residual_norm(const SparseMatrix& a, std::span<const double> v, double lambda) {
    auto av = a * v;
    axpy(-lambda, v, av);
    return norm(av);
}

inline void require_symmetric_problem(const SparseMatrix& a, std::size_t k) {
    if (a.rows() != a.cols()) throw ContractError("eigensolver needs a square matrix");
    if (!a.symmetric()) {
        throw ContractError("eigensolver needs a symmetric matrix (asymmetry " + std::to_string(a.asymmetry()) +
                            ")");
    }
    if (k < 1 || k + 2 > a.rows()) {
        throw InputError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(a.rows()) +
                         "-dim matrix (need 1 <= k <= dim-2)");
    }
}

inline EigenResult dense_lowest(const SparseMatrix& a, std::size_t k) {
    const std::size_t n = a.rows();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& t : a.triplets()) m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericalError("dense symmetric eigensolver failed", 0.0);

    EigenResult r;
    r.method = "dense";
    r.converged = true;
    r.scale = solver.eigenvalues().cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < k; ++i) {
        const auto col = solver.eigenvectors().col(static_cast<Eigen::Index>(i));
        std::vector<double> v(col.data(), col.data() + n);
        fix_sign(v);
        r.values.push_back(solver.eigenvalues()(static_cast<Eigen::Index>(i)));
        r.residuals.push_back(residual_norm(a, v, r.values.back()));
        r.vectors.push_back(std::move(v));
    }
    return r;
}

/**
 * Lanczos with full reorthogonalization, locking and restarts.
 *
 * Each restart builds a Krylov basis orthogonal to all locked eigenvectors
 * until the lowest k Ritz pairs of the deflated operator converge, then locks
 * them. A single Krylov sequence only sees one direction per eigenspace, so
 * degenerate copies are picked up by later restarts. The search ends once the
 * deflated operator's lowest converged Ritz value is not below the k-th
 * smallest locked value.
 */
inline EigenResult lanczos_lowest(const SparseMatrix& a, std::size_t k, const EigenOptions& opts) {
    const std::size_t n = a.rows();
    const std::size_t budget = opts.max_matvecs ? opts.max_matvecs : 5 * n;
    const std::size_t basis_cap = opts.max_basis ? std::min(opts.max_basis, n) : n;

    std::mt19937_64 rng(opts.seed);
    std::vector<std::vector<double>> locked;
    std::vector<double> locked_values;
    std::size_t matvecs = 0;
    double scale = 0.0;
    double last_residual = std::numeric_limits<double>::infinity();
    std::vector<double> restart_vector;

    const auto kth_locked = [&] {
        std::vector<double> v = locked_values;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
        return v[k - 1];
    };

    const auto partial_result = [&] {
        EigenResult r;
        r.method = "lanczos";
        r.iterations = matvecs;
        r.scale = scale;
        std::vector<std::size_t> order(locked.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto i, auto j) { return locked_values[i] < locked_values[j]; });
        for (std::size_t idx = 0; idx < std::min(k, order.size()); ++idx) {
            auto v = locked[order[idx]];
            fix_sign(v);
            r.values.push_back(locked_values[order[idx]]);
            r.residuals.push_back(residual_norm(a, v, r.values.back()));
            r.vectors.push_back(std::move(v));
        }
        return r;
    };

    while (true) {
        const std::size_t free_dims = n - locked.size();
        if (free_dims == 0) break;
        const std::size_t cap = std::min(basis_cap, free_dims);
        const std::size_t want = std::min(k, cap);

        std::vector<double> v = restart_vector.empty() ? random_vector(rng, n) : std::move(restart_vector);
        restart_vector.clear();
        orthogonalize(v, locked, {});
        double vn = norm(v);
        if (vn < 1e-10) {
            v = random_vector(rng, n);
            orthogonalize(v, locked, {});
            vn = norm(v);
        }
        for (double& x : v) x /= vn;

        std::vector<std::vector<double>> basis{std::move(v)};
        std::vector<double> alpha, beta;
        std::vector<double> w(n);

        Eigen::VectorXd ritz;
        Eigen::MatrixXd ritz_vecs;
        std::vector<bool> converged;
        std::size_t next_check = std::min<std::size_t>(std::max<std::size_t>(want + 4, 10), cap);
        bool exhausted = false;

        while (true) {
            const std::size_t j = basis.size() - 1;
            if (matvecs >= budget) {
                throw EigenConvergenceError("Lanczos exceeded " + std::to_string(budget) + " matrix-vector products",
                                            last_residual, partial_result());
            }
            a.multiply(basis[j], w);
            ++matvecs;
            alpha.push_back(dot(basis[j], w));
            axpy(-alpha[j], basis[j], w);
            if (j > 0) axpy(-beta[j - 1], basis[j - 1], w);
            orthogonalize(w, locked, basis);
            const double b = norm(w);
            beta.push_back(b);

            const std::size_t m = alpha.size();
            const bool invariant = b <= 1e-14 * std::max(scale, std::abs(alpha[j]));
            if (m >= next_check || m == cap || invariant) {
                Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(m));
                Eigen::VectorXd off = Eigen::VectorXd::Zero(std::max<Eigen::Index>(static_cast<Eigen::Index>(m) - 1, 0));
                for (std::size_t q = 0; q + 1 < m; ++q) off(static_cast<Eigen::Index>(q)) = beta[q];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
                tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
                ritz = tri.eigenvalues();
                ritz_vecs = tri.eigenvectors();
                scale = std::max(scale, ritz.cwiseAbs().maxCoeff());

                converged.assign(m, false);
                std::size_t ready = 0;
                last_residual = 0.0;
                for (std::size_t q = 0; q < std::min(want, m); ++q) {
                    const double est = invariant ? 0.0 : b * std::abs(ritz_vecs(static_cast<Eigen::Index>(m - 1),
                                                                                static_cast<Eigen::Index>(q)));
                    converged[q] = est <= opts.tol * scale;
                    if (converged[q]) ++ready;
                    last_residual = std::max(last_residual, est);
                }
                if (invariant || ready == std::min(want, m) || m == cap) {
                    exhausted = invariant || m == free_dims;
                    break;
                }
                next_check = std::min(cap, m + std::max<std::size_t>(5, m / 8));
            }
            for (double& x : w) x /= b;
            basis.push_back(w);
        }

        const std::size_t m = alpha.size();
        const auto ritz_vector = [&](std::size_t q) {
            std::vector<double> y(n, 0.0);
            for (std::size_t p = 0; p < m; ++p) {
                axpy(ritz_vecs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)), basis[p], y);
            }
            return y;
        };

        // The deflated operator's smallest remaining eigenvalue is ritz(0) once converged.
        if (locked.size() >= k && !converged.empty() && converged[0] && ritz(0) >= kth_locked() - opts.tol * scale) {
            break;
        }

        std::vector<double> pending(n, 0.0);
        bool unfinished = false;
        for (std::size_t q = 0; q < std::min(want, m); ++q) {
            auto y = ritz_vector(q);
            if (!(converged[q] || exhausted)) {
                // Unconverged wanted directions seed the next restart.
                axpy(1.0, y, pending);
                unfinished = true;
                continue;
            }
            orthogonalize(y, locked, {});
            const double yn = norm(y);
            if (yn < 0.5) continue;  // direction already captured by a locked vector
            for (double& x : y) x /= yn;
            locked.push_back(std::move(y));
            locked_values.push_back(ritz(static_cast<Eigen::Index>(q)));
        }
        if (unfinished) restart_vector = std::move(pending);
    }

    if (locked.size() < k) {
        throw EigenConvergenceError("Lanczos found only " + std::to_string(locked.size()) + " eigenpairs",
                                    last_residual, partial_result());
    }
    auto r = partial_result();
    r.converged = true;
    return r;
}

}  // namespace detail

/// The k smallest eigenpairs of a symmetric sparse matrix.
inline EigenResult lowest_eigenpairs(const SparseMatrix& a, std::size_t k, const EigenOptions& opts = {}) {
    detail::require_symmetric_problem(a, k);
    const bool dense = opts.method == EigenMethod::dense ||
                       (opts.method == EigenMethod::automatic && a.rows() <= opts.dense_threshold);
    return dense ? detail::dense_lowest(a, k) : detail::lanczos_lowest(a, k, opts);
}

}  // namespace eqfd
