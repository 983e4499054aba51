#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "eqfd/error.hpp"

namespace eqfd {

class SparseMatrix;

/// Accumulates (row, col, value) triplets; duplicates are summed on finalize().
class TripletBuilder {
public:
    TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    void add(std::size_t row, std::size_t col, double value) {
        if (row >= rows_ || col >= cols_) {
            throw InputError("triplet (" + std::to_string(row) + ", " + std::to_string(col) +
                             ") outside a " + std::to_string(rows_) + "x" + std::to_string(cols_) + " matrix");
        }
        entries_.push_back({row, col, value});
    }

    void reserve(std::size_t n) { entries_.reserve(n); }

    SparseMatrix finalize() &&;

private:
    struct Entry {
        std::size_t row, col;
        double value;
    };
    std::size_t rows_, cols_;
    std::vector<Entry> entries_;
};

/// Compressed-row sparse matrix. Immutable once built.
class SparseMatrix {
public:
    struct Triplet {
        std::size_t row, col;
        double value;
    };

    SparseMatrix() = default;

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::size_t> row_offsets() const { return row_ptr_; }
    std::span<const std::size_t> column_indices() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// True iff max|A_ij − A_ji| ≤ 1e-12·max|A|, checked when the matrix was built.
    bool symmetric() const { return symmetric_; }

    double coeff(std::size_t r, std::size_t c) const {
        const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
        const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
        const auto it = std::lower_bound(begin, end, c);
        return (it != end && *it == c) ? values_[static_cast<std::size_t>(it - col_idx_.begin())] : 0.0;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    /// y = A·x
    void multiply(std::span<const double> x, std::span<double> y) const {
        if (x.size() != cols_ || y.size() != rows_) throw InputError("multiply: dimension mismatch");
        for (std::size_t r = 0; r < rows_; ++r) {
            double acc = 0.0;
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
            y[r] = acc;
        }
    }

    std::vector<double> operator*(std::span<const double> x) const {
        std::vector<double> y(rows_);
        multiply(x, y);
        return y;
    }

    /// max|A_ij − A_ji|.
    double asymmetry() const {
        if (rows_ != cols_) return std::numeric_limits<double>::infinity();
        double worst = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                worst = std::max(worst, std::abs(values_[k] - coeff(col_idx_[k], r)));
            }
        }
        return worst;
    }

    std::vector<Triplet> triplets() const {
        std::vector<Triplet> out;
        out.reserve(nnz());
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, col_idx_[k], values_[k]});
        }
        return out;
    }

    /// Row-major dense copy, for small-matrix checks.
    std::vector<double> to_dense() const {
        std::vector<double> d(rows_ * cols_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d[r * cols_ + col_idx_[k]] = values_[k];
        }
        return d;
    }

    static SparseMatrix diagonal(std::span<const double> d) {
        TripletBuilder b(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) b.add(i, i, d[i]);
        return std::move(b).finalize();
    }

    /// Coordinate text: header `nrows ncols nnz`, then one `row col value` line per entry (0-based).
    template <class Format>
    void write_coordinate(std::ostream& os, Format&& fmt) const {
        os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
        for (const auto& t : triplets()) os << t.row << ' ' << t.col << ' ' << fmt(t.value) << '\n';
    }

private:
    friend class TripletBuilder;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
    bool symmetric_ = false;
};

inline SparseMatrix TripletBuilder::finalize() && {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    SparseMatrix m;
    m.rows_ = rows_;
    m.cols_ = cols_;
    m.row_ptr_.assign(rows_ + 1, 0);
    for (std::size_t k = 0; k < entries_.size();) {
        const Entry& e = entries_[k];
        double sum = 0.0;
        std::size_t next = k;
        while (next < entries_.size() && entries_[next].row == e.row && entries_[next].col == e.col) {
            sum += entries_[next].value;
            ++next;
        }
        m.col_idx_.push_back(e.col);
        m.values_.push_back(sum);
        ++m.row_ptr_[e.row + 1];
        k = next;
    }
    for (std::size_t r = 0; r < rows_; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    entries_.clear();
    m.symmetric_ = rows_ == cols_ && m.asymmetry() <= 1e-12 * m.max_abs();
    return m;
}

}  // namespace eqfd
