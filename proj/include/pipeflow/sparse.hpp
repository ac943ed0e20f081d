#pragma once

#include <span>
#include <vector>

#include "pipeflow/errors.hpp"

namespace pipeflow {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Sparse symmetric matrix. Assembled from upper-triangle triplets
/// (row <= col, duplicates summed in input order); the mirrored full CSR
/// pattern is stored so matrix-vector products parallelize by row without
/// write conflicts. Symmetry holds by construction.
class SparseSym {
public:
    SparseSym() = default;
    SparseSym(int dim, const std::vector<Triplet>& upper);

    int dim() const { return dim_; }
    std::size_t nnz() const { return vals_.size(); }

    /// y = A x, one OpenMP task per row; deterministic for any thread count.
    void apply(std::span<const double> x, std::span<double> y) const;
    /// Plain serial reference loop.
    void apply_serial(std::span<const double> x, std::span<double> y) const;

    /// Stored value at (i, j); zero when outside the pattern.
    double entry(int i, int j) const;

    std::span<const double> diag() const { return diag_; }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& cols() const { return cols_; }
    const std::vector<double>& vals() const { return vals_; }

private:
    int dim_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> cols_;
    std::vector<double> vals_;
    std::vector<double> diag_;
};

/// Principal submatrix on the rows/cols with keep[i] != 0.
/// new_index maps old vertex index -> new index (or -1 when dropped).
SparseSym submatrix(const SparseSym& A, std::span<const char> keep,
                    std::vector<int>& new_index);

} // namespace pipeflow
