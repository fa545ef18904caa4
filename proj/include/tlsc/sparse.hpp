#pragma once

#include <span>
#include <vector>

namespace tlsc {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Compressed-row sparse matrix. Column indices are sorted and unique within
/// each row; duplicate triplets are summed on finalization and entries below
/// 1e-300 magnitude are dropped. Immutable once built.
class CsrMatrix {
public:
    CsrMatrix() = default;

    static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& column_indices() const { return column_indices_; }
    const std::vector<double>& values() const { return values_; }

    /// Stored value at (i,j), 0 if the entry is not present.
    double coeff(int i, int j) const;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    std::vector<double> diagonal() const;

    /// Pattern-merging sum of two equally sized matrices.
    static CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b);

    /// Restriction to a subset of indices (same set for rows and columns).
    CsrMatrix restrict_to(std::span<const int> keep) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> column_indices_;
    std::vector<double> values_;
};

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x);

enum class Preconditioner { None, Jacobi };

struct PcgOptions {
    double tol = 1e-9;       // relative residual target
    int max_iterations = 0;  // 0 = 10*sqrt(dim) + 200
    Preconditioner preconditioner = Preconditioner::Jacobi;
};

struct PcgResult {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
    std::vector<double> residual_norms;  // ||b - A x_k||, one entry per iteration
};

/// Conjugate gradients for SPD systems. Throws ConvergenceError if the
/// residual target is not met within max_iterations or if negative curvature
/// is detected (matrix not positive definite).
PcgResult pcg_solve(const CsrMatrix& A, std::span<const double> b,
                    const PcgOptions& options = {},
                    std::span<const double> initial_guess = {});

}  // namespace tlsc
