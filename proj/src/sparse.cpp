#include "pipeflow/sparse.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace pipeflow {

SparseSym::SparseSym(int dim, const std::vector<Triplet>& upper) : dim_(dim) {
    if (dim <= 0) throw NumericError("SparseSym: dimension must be positive");

    // Mirror the upper triangle, then sort stably by (row, col) so duplicate
    // entries are summed in input order (deterministic assembly).
    std::vector<Triplet> full;
    full.reserve(upper.size() * 2);
    for (const auto& t : upper) {
        if (t.row < 0 || t.col < 0 || t.row >= dim || t.col >= dim || t.row > t.col) {
            throw NumericError("SparseSym: triplet outside the upper triangle");
        }
        full.push_back(t);
        if (t.row != t.col) full.push_back({t.col, t.row, t.value});
    }
    std::stable_sort(full.begin(), full.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    row_ptr_.assign(dim + 1, 0);
    cols_.reserve(full.size());
    vals_.reserve(full.size());
    for (std::size_t i = 0; i < full.size();) {
        std::size_t j = i;
        double v = 0.0;
        while (j < full.size() && full[j].row == full[i].row && full[j].col == full[i].col) {
            v += full[j].value;
            ++j;
        }
        cols_.push_back(full[i].col);
        vals_.push_back(v);
        ++row_ptr_[full[i].row + 1];
        i = j;
    }
    std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());

    diag_.assign(dim, 0.0);
    for (int r = 0; r < dim; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (cols_[k] == r) diag_[r] = vals_[k];
        }
    }
}

void SparseSym::apply(std::span<const double> x, std::span<double> y) const {
#pragma omp parallel for schedule(static) if (dim_ >= 4096)
    for (std::int64_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            s += vals_[k] * x[cols_[k]];
        }
        y[r] = s;
    }
}

void SparseSym::apply_serial(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            s += vals_[k] * x[cols_[k]];
        }
        y[r] = s;
    }
}

double SparseSym::entry(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        if (cols_[k] == j) return vals_[k];
    }
    return 0.0;
}

SparseSym submatrix(const SparseSym& A, std::span<const char> keep,
                    std::vector<int>& new_index) {
    const int n = A.dim();
    new_index.assign(n, -1);
    int m = 0;
    for (int i = 0; i < n; ++i) {
        if (keep[i]) new_index[i] = m++;
    }
    std::vector<Triplet> upper;
    for (int r = 0; r < n; ++r) {
        if (!keep[r]) continue;
        for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
            const int c = A.cols()[k];
            if (c >= r && keep[c]) {
                upper.push_back({new_index[r], new_index[c], A.vals()[k]});
            }
        }
    }
    return SparseSym(m, upper);
}

} // namespace pipeflow
