#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "eqfd/error.hpp"
#include "eqfd/mesh1d.hpp"
#include "eqfd/weights.hpp"

namespace eqfd {

/// Separable nD grid stored as one Mesh1D per axis; node (i, j, ...) is (x_i, y_j, ...).
class TensorMesh {
public:
    explicit TensorMesh(std::vector<Mesh1D> axes) : axes_(std::move(axes)) {
        if (axes_.empty()) throw InputError("tensor mesh needs at least one axis");
    }

    std::size_t dimension() const { return axes_.size(); }
    const Mesh1D& axis(std::size_t d) const { return axes_.at(d); }
    std::span<const Mesh1D> axes() const { return axes_; }

    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> out;
        for (const auto& a : axes_) out.push_back(a.size());
        return out;
    }

    /// Per-axis normalization constant k_d (the axis' S_total).
    double normalization(std::size_t d) const { return axes_.at(d).s_total(); }

    /// 2D lattice CSV, columns `i,j,x_i,y_j`, x index fastest.
    template <class Format>
    void write_csv(std::ostream& os, Format&& fmt) const {
        if (dimension() != 2) throw UnsupportedDimensionError("lattice CSV export is 2D only");
        const auto& mx = axes_[0];
        const auto& my = axes_[1];
        os << "i,j,x_i,y_j\n";
        for (std::size_t j = 0; j < my.size(); ++j) {
            for (std::size_t i = 0; i < mx.size(); ++i) {
                os << i << ',' << j << ',' << fmt(mx[i]) << ',' << fmt(my[j]) << '\n';
            }
        }
    }

private:
    std::vector<Mesh1D> axes_;
};

/// One independent equidistribution per axis.
inline TensorMesh generate_tensor_mesh(std::span<const WeightSpec> specs, std::span<const Interval> domains,
                                       std::span<const std::size_t> segments, const MeshOptions& opts = {}) {
    if (specs.size() != domains.size() || specs.size() != segments.size()) {
        throw InputError("generate_tensor_mesh: specs, domains and segment counts differ in length");
    }
    if (specs.empty()) throw InputError("generate_tensor_mesh: no axes");
    std::vector<Mesh1D> axes;
    axes.reserve(specs.size());
    for (std::size_t d = 0; d < specs.size(); ++d) {
        axes.push_back(generate_mesh(specs[d], domains[d], segments[d], opts));
    }
    return TensorMesh(std::move(axes));
}

}  // namespace eqfd
