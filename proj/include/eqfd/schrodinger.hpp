#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "eqfd/error.hpp"
#include "eqfd/harmonic_map.hpp"
#include "eqfd/mesh1d.hpp"
#include "eqfd/operators.hpp"
#include "eqfd/sparse.hpp"
#include "eqfd/spectral.hpp"
#include "eqfd/tensor_mesh.hpp"
#include "eqfd/weights.hpp"

// Units: lengths in fm, energies in MeV. ħ and m enter only through ħc and
// mc², so ħ²/2m = (ħc)²/(2mc²) in MeV·fm². (ħω = 10 MeV ≈ 1.6022e-12 J.)

namespace eqfd {

/// CODATA 2018 values.
struct PhysicalConstants {
    static constexpr double hbar_c = 197.3269804;           // MeV·fm
    static constexpr double proton_mass_c2 = 938.27208816;  // MeV
};

enum class MeshKind { uniform, variable, harmonic_map };
enum class NodeCounting { nodes, segments };

inline const char* to_string(MeshKind k) {
    switch (k) {
        case MeshKind::uniform: return "uniform";
        case MeshKind::variable: return "variable";
        case MeshKind::harmonic_map: return "harmonic";
    }
    return "?";
}

/// 2D isotropic harmonic oscillator V = ½mω²(x² + y²) for a proton in a square box.
struct HOProblem {
    Interval domain{-25.0, 25.0};
    /// Per-axis count; boundary nodes included when counting == nodes.
    std::size_t nodes_per_axis = 50;
    NodeCounting counting = NodeCounting::nodes;
    double hbar_omega = 10.0;
    /// Variable-mesh weight g = 1 − depth·exp(−(x/width)²).
    double weight_depth = 0.9;
    /// 0 selects the domain length b − a.
    double weight_width = 0.0;
    MeshKind mesh_kind = MeshKind::variable;

    static constexpr double kinetic_prefactor() {
        return PhysicalConstants::hbar_c * PhysicalConstants::hbar_c / (2.0 * PhysicalConstants::proton_mass_c2);
    }

    /// b = √(ħ/(mω)), the ground-state width.
    double oscillator_length() const {
        return std::sqrt(PhysicalConstants::hbar_c * PhysicalConstants::hbar_c /
                         (PhysicalConstants::proton_mass_c2 * hbar_omega));
    }

    /// ½mω²r² = (ħω)²·r²/(4·ħ²/2m).
    double potential(double x, double y) const {
        return hbar_omega * hbar_omega / (4.0 * kinetic_prefactor()) * (x * x + y * y);
    }

    std::size_t segments_per_axis() const {
        return counting == NodeCounting::nodes ? nodes_per_axis - 1 : nodes_per_axis;
    }

    double effective_weight_width() const { return weight_width > 0.0 ? weight_width : domain.length(); }

    WeightSpec axis_weight() const {
        if (mesh_kind == MeshKind::uniform) return WeightSpec::constant(1.0);
        return WeightSpec::gaussian_well(weight_depth, 0.0, effective_weight_width());
    }

    void validate() const {
        domain.require_nonempty();
        if (segments_per_axis() < 3) throw ValidationError("HO problem needs at least 3 segments per axis");
        if (!std::isfinite(hbar_omega) || hbar_omega <= 0.0) throw ValidationError("hbar_omega must be > 0");
        if (!std::isfinite(weight_width) || weight_width < 0.0) throw ValidationError("weight_width must be >= 0");
        (void)axis_weight();
    }
};

static_assert(HOProblem::kinetic_prefactor() > 20.7497 && HOProblem::kinetic_prefactor() < 20.7499,
              "hbar^2/2m drifted from 20.7498 MeV fm^2");

/// Same grid on both axes, generated according to problem.mesh_kind.
inline TensorMesh build_mesh(const HOProblem& problem, const WinslowOptions& winslow = {}) {
    problem.validate();
    const std::size_t n = problem.segments_per_axis();
    const WeightSpec g = problem.axis_weight();
    if (problem.mesh_kind == MeshKind::harmonic_map) {
        const auto grid = solve_winslow(Weight2D::product(g, g), Rectangle{problem.domain, problem.domain}, n + 1, n + 1,
                                        winslow);
        return grid.to_tensor_mesh(1e-6 * problem.domain.length());
    }
    const Mesh1D axis = generate_mesh(g, problem.domain, n);
    return TensorMesh({axis, axis});
}

struct Hamiltonian {
    SparseMatrix matrix;          // symmetrized W^{1/2}·H·W^{−1/2}
    std::vector<double> weights;  // interior cell weights w_ij
};

/// H = −(ħ²/2m)·Δ_h + V on the interior lattice (Dirichlet-zero walls), returned symmetrized.
inline Hamiltonian build_hamiltonian(const HOProblem& problem, const TensorMesh& mesh) {
    if (mesh.dimension() != 2) throw InputError("build_hamiltonian: mesh must be 2D");
    for (const auto& axis : mesh.axes()) {
        if (axis.domain().lo != problem.domain.lo || axis.domain().hi != problem.domain.hi) {
            throw InputError("build_hamiltonian: mesh does not cover the problem domain");
        }
    }
    const auto lap = assemble_laplacian_2d(mesh);
    const auto& mx = mesh.axis(0);
    const auto& my = mesh.axis(1);
    const std::size_t nx = mx.size() - 2;
    const double k = HOProblem::kinetic_prefactor();

    TripletBuilder b(lap.rows(), lap.cols());
    b.reserve(lap.nnz());
    for (const auto& t : lap.triplets()) b.add(t.row, t.col, -k * t.value);
    for (std::size_t r = 0; r < lap.rows(); ++r) {
        b.add(r, r, problem.potential(mx[r % nx + 1], my[r / nx + 1]));
    }
    auto sym = symmetrize(std::move(b).finalize(), mesh);
    return {std::move(sym.matrix), std::move(sym.weights)};
}

/// Sorted exact levels ħω(n + 1), level n repeated n + 1 times.
inline std::vector<double> analytic_levels(double hbar_omega, std::size_t count) {
    std::vector<double> out;
    for (std::size_t n = 0; out.size() < count; ++n) {
        for (std::size_t d = 0; d <= n && out.size() < count; ++d) out.push_back(hbar_omega * static_cast<double>(n + 1));
    }
    return out;
}

/// Shell index n = n_x + n_y of the s-th state in sorted order.
inline std::size_t shell_of(std::size_t s) {
    std::size_t n = 0;
    while ((n + 1) * (n + 2) / 2 <= s) ++n;
    return n;
}

/// Normalized 1D oscillator eigenfunction φ_n(x) (Hermite recurrence).
inline double oscillator_function(std::size_t n, double x, double b) {
    const double u = x / b;
    double prev = 0.0;
    double cur = std::exp(-0.5 * u * u) / std::sqrt(std::sqrt(std::numbers::pi) * b);
    for (std::size_t m = 0; m < n; ++m) {
        const double next = std::sqrt(2.0 / static_cast<double>(m + 1)) * u * cur -
                            std::sqrt(static_cast<double>(m) / static_cast<double>(m + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

struct HOSolution {
    HOProblem problem;
    TensorMesh mesh;
    EigenResult spectrum;
    /// Interior wavefunctions ψ = W^{−1/2}u, normalized so Σ w_ij ψ_ij² = 1.
    std::vector<std::vector<double>> psi;
    std::vector<double> weights;
    std::vector<double> analytic;
    std::vector<double> abs_errors;
    /// Norm of each state's projection onto its exact degenerate shell.
    std::vector<double> shell_overlaps;

    std::size_t dimension() const { return weights.size(); }
    std::size_t interior_nx() const { return mesh.axis(0).size() - 2; }

    /// ψ at lattice node (i, j), zero on the boundary.
    double value(std::size_t state, std::size_t i, std::size_t j) const {
        const auto& mx = mesh.axis(0);
        const auto& my = mesh.axis(1);
        if (i == 0 || j == 0 || i + 1 == mx.size() || j + 1 == my.size()) return 0.0;
        return psi[state][(j - 1) * interior_nx() + (i - 1)];
    }

    /// `index,energy_MeV,abs_error_MeV`
    template <class Format>
    void write_spectrum_csv(std::ostream& os, Format&& fmt) const {
        os << "index,energy_MeV,abs_error_MeV\n";
        for (std::size_t s = 0; s < spectrum.values.size(); ++s) {
            os << s << ',' << fmt(spectrum.values[s]) << ',' << fmt(abs_errors[s]) << '\n';
        }
    }

    /// `i,j,x,y,psi` over the full lattice including the zero boundary.
    template <class Format>
    void write_eigenfunction_csv(std::ostream& os, std::size_t state, Format&& fmt) const {
        const auto& mx = mesh.axis(0);
        const auto& my = mesh.axis(1);
        os << "i,j,x,y,psi\n";
        for (std::size_t j = 0; j < my.size(); ++j) {
            for (std::size_t i = 0; i < mx.size(); ++i) {
                os << i << ',' << j << ',' << fmt(mx[i]) << ',' << fmt(my[j]) << ',' << fmt(value(state, i, j)) << '\n';
            }
        }
    }
};

/// Lowest k states of the oscillator on the problem's mesh.
inline HOSolution solve_ho(const HOProblem& problem, std::size_t k, const EigenOptions& opts = {},
                           const WinslowOptions& winslow = {}) {
    if (k < 1) throw InputError("solve_ho: k must be >= 1");
    TensorMesh mesh = build_mesh(problem, winslow);
    const Hamiltonian h = build_hamiltonian(problem, mesh);
    EigenResult spectrum = lowest_eigenpairs(h.matrix, k, opts);

    HOSolution sol{problem, std::move(mesh), std::move(spectrum), {}, h.weights, {}, {}, {}};
    sol.analytic = analytic_levels(problem.hbar_omega, k);

    const auto& mx = sol.mesh.axis(0);
    const auto& my = sol.mesh.axis(1);
    const std::size_t nx = mx.size() - 2;
    const double b = problem.oscillator_length();
    for (std::size_t s = 0; s < k; ++s) {
        std::vector<double> psi(h.weights.size());
        for (std::size_t r = 0; r < psi.size(); ++r) psi[r] = sol.spectrum.vectors[s][r] / std::sqrt(h.weights[r]);
        detail::fix_sign(psi);
        sol.abs_errors.push_back(std::abs(sol.spectrum.values[s] - sol.analytic[s]));

        const std::size_t shell = shell_of(s);
        double overlap2 = 0.0;
        for (std::size_t a = 0; a <= shell; ++a) {
            double proj = 0.0;
            for (std::size_t r = 0; r < psi.size(); ++r) {
                proj += h.weights[r] * psi[r] * oscillator_function(a, mx[r % nx + 1], b) *
                        oscillator_function(shell - a, my[r / nx + 1], b);
            }
            overlap2 += proj * proj;
        }
        sol.shell_overlaps.push_back(std::sqrt(overlap2));
        sol.psi.push_back(std::move(psi));
    }
    return sol;
}

struct MeshStats {
    double min_spacing = 0.0;
    double max_spacing = 0.0;
    std::size_t nodes_per_axis = 0;
};

inline MeshStats mesh_stats(const TensorMesh& mesh) {
    MeshStats s{mesh.axis(0).min_spacing(), mesh.axis(0).max_spacing(), mesh.axis(0).size()};
    for (const auto& a : mesh.axes()) {
        s.min_spacing = std::min(s.min_spacing, a.min_spacing());
        s.max_spacing = std::max(s.max_spacing, a.max_spacing());
    }
    return s;
}

struct ComparisonReport {
    HOSolution uniform;
    HOSolution variable;

    MeshStats uniform_stats() const { return mesh_stats(uniform.mesh); }
    MeshStats variable_stats() const { return mesh_stats(variable.mesh); }
    bool same_dimension() const { return uniform.dimension() == variable.dimension(); }
    /// |E0 − ħω| uniform over variable; > 1 means the graded mesh is more accurate.
    double ground_error_ratio() const { return uniform.abs_errors.front() / variable.abs_errors.front(); }

    /// `index,analytic_MeV,uniform_MeV,uniform_abs_error_MeV,variable_MeV,variable_abs_error_MeV`
    template <class Format>
    void write_csv(std::ostream& os, Format&& fmt) const {
        os << "index,analytic_MeV,uniform_MeV,uniform_abs_error_MeV,variable_MeV,variable_abs_error_MeV\n";
        for (std::size_t s = 0; s < uniform.analytic.size(); ++s) {
            os << s << ',' << fmt(uniform.analytic[s]) << ',' << fmt(uniform.spectrum.values[s]) << ','
               << fmt(uniform.abs_errors[s]) << ',' << fmt(variable.spectrum.values[s]) << ','
               << fmt(variable.abs_errors[s]) << '\n';
        }
    }

    /// key = value summary lines.
    template <class Format>
    void write_summary(std::ostream& os, Format&& fmt) const {
        const auto us = uniform_stats();
        const auto vs = variable_stats();
        os << "hamiltonian_dimension_uniform = " << uniform.dimension() << '\n'
           << "hamiltonian_dimension_variable = " << variable.dimension() << '\n'
           << "nodes_per_axis = " << us.nodes_per_axis << '\n'
           << "uniform_spacing = " << fmt(us.min_spacing) << '\n'
           << "variable_min_spacing = " << fmt(vs.min_spacing) << '\n'
           << "variable_max_spacing = " << fmt(vs.max_spacing) << '\n'
           << "ground_error_uniform_MeV = " << fmt(uniform.abs_errors.front()) << '\n'
           << "ground_error_variable_MeV = " << fmt(variable.abs_errors.front()) << '\n'
           << "ground_error_ratio = " << fmt(ground_error_ratio()) << '\n';
    }
};

/// Solves the problem on a uniform and on a weight-driven mesh of identical size.
inline ComparisonReport compare_meshes(const HOProblem& problem, std::size_t k, const EigenOptions& opts = {}) {
    HOProblem uniform = problem;
    uniform.mesh_kind = MeshKind::uniform;
    HOProblem variable = problem;
    if (variable.mesh_kind == MeshKind::uniform) variable.mesh_kind = MeshKind::variable;

    auto pending = std::async(std::launch::async, [&] { return solve_ho(uniform, k, opts); });
    HOSolution var = solve_ho(variable, k, opts);
    ComparisonReport report{pending.get(), std::move(var)};
    if (!report.same_dimension()) throw ContractError("compare_meshes: Hamiltonian sizes differ");
    return report;
}

}  // namespace eqfd
