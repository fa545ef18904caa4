#include "tlsc/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tlsc/errors.hpp"

namespace tlsc {

namespace {

double dot_product(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot_product(a, a)); }

}  // namespace

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw Error("CsrMatrix: triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.column_indices_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t k = 0;
    for (int r = 0; r < rows; ++r) {
        while (k < entries.size() && entries[k].row == r) {
            const int c = entries[k].col;
            double v = entries[k].value;
            ++k;
            while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
                v += entries[k].value;
                ++k;
            }
            if (std::abs(v) >= 1e-300) {
                m.column_indices_.push_back(c);
                m.values_.push_back(v);
            }
        }
        m.row_offsets_[static_cast<std::size_t>(r) + 1] = static_cast<int>(m.values_.size());
    }
    return m;
}

double CsrMatrix::coeff(int i, int j) const {
    const int begin = row_offsets_[static_cast<std::size_t>(i)];
    const int end = row_offsets_[static_cast<std::size_t>(i) + 1];
    const auto first = column_indices_.begin() + begin;
    const auto last = column_indices_.begin() + end;
    const auto it = std::lower_bound(first, last, j);
    if (it != last && *it == j)
        return values_[static_cast<std::size_t>(it - column_indices_.begin())];
    return 0.0;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != static_cast<std::size_t>(cols_) || y.size() != static_cast<std::size_t>(rows_))
        throw Error("spmv: dimension mismatch");
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int k = row_offsets_[static_cast<std::size_t>(r)]; k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
            s += values_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(column_indices_[static_cast<std::size_t>(k)])];
        y[static_cast<std::size_t>(r)] = s;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(rows_));
    multiply(x, y);
    return y;
}

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x) { return A.multiply(x); }

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(static_cast<std::size_t>(rows_), 0.0);
    for (int r = 0; r < rows_ && r < cols_; ++r) d[static_cast<std::size_t>(r)] = coeff(r, r);
    return d;
}

CsrMatrix CsrMatrix::add(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw Error("CsrMatrix::add: dimension mismatch");
    CsrMatrix m;
    m.rows_ = a.rows_;
    m.cols_ = a.cols_;
    m.row_offsets_.assign(static_cast<std::size_t>(a.rows_) + 1, 0);
    m.column_indices_.reserve(a.nnz() + b.nnz());
    m.values_.reserve(a.nnz() + b.nnz());
    for (int r = 0; r < a.rows_; ++r) {
        int ia = a.row_offsets_[static_cast<std::size_t>(r)];
        const int ea = a.row_offsets_[static_cast<std::size_t>(r) + 1];
        int ib = b.row_offsets_[static_cast<std::size_t>(r)];
        const int eb = b.row_offsets_[static_cast<std::size_t>(r) + 1];
        while (ia < ea || ib < eb) {
            int col;
            double v;
            if (ib >= eb || (ia < ea && a.column_indices_[static_cast<std::size_t>(ia)] < b.column_indices_[static_cast<std::size_t>(ib)])) {
                col = a.column_indices_[static_cast<std::size_t>(ia)];
                v = a.values_[static_cast<std::size_t>(ia)];
                ++ia;
            } else if (ia >= ea || b.column_indices_[static_cast<std::size_t>(ib)] < a.column_indices_[static_cast<std::size_t>(ia)]) {
                col = b.column_indices_[static_cast<std::size_t>(ib)];
                v = b.values_[static_cast<std::size_t>(ib)];
                ++ib;
            } else {
                col = a.column_indices_[static_cast<std::size_t>(ia)];
                v = a.values_[static_cast<std::size_t>(ia)] + b.values_[static_cast<std::size_t>(ib)];
                ++ia;
                ++ib;
            }
            if (std::abs(v) >= 1e-300) {
                m.column_indices_.push_back(col);
                m.values_.push_back(v);
            }
        }
        m.row_offsets_[static_cast<std::size_t>(r) + 1] = static_cast<int>(m.values_.size());
    }
    return m;
}

CsrMatrix CsrMatrix::restrict_to(std::span<const int> keep) const {
    std::vector<int> map(static_cast<std::size_t>(std::max(rows_, cols_)), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) map[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);

    CsrMatrix m;
    m.rows_ = static_cast<int>(keep.size());
    m.cols_ = static_cast<int>(keep.size());
    m.row_offsets_.assign(keep.size() + 1, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const int r = keep[i];
        for (int k = row_offsets_[static_cast<std::size_t>(r)]; k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k) {
            const int c = map[static_cast<std::size_t>(column_indices_[static_cast<std::size_t>(k)])];
            if (c >= 0) {
                m.column_indices_.push_back(c);
                m.values_.push_back(values_[static_cast<std::size_t>(k)]);
            }
        }
        m.row_offsets_[i + 1] = static_cast<int>(m.values_.size());
    }
    return m;
}

PcgResult pcg_solve(const CsrMatrix& A, std::span<const double> b,
                    const PcgOptions& options, std::span<const double> initial_guess) {
    const int n = A.rows();
    if (A.cols() != n || b.size() != static_cast<std::size_t>(n))
        throw Error("pcg_solve: dimension mismatch");
    if (!(options.tol > 0.0)) throw Error("pcg_solve: tol must be positive");

    const int maxit = options.max_iterations > 0
                          ? options.max_iterations
                          : static_cast<int>(10.0 * std::sqrt(double(n))) + 200;

    std::vector<double> inv_diag;
    if (options.preconditioner == Preconditioner::Jacobi) {
        inv_diag = A.diagonal();
        for (double& d : inv_diag) {
            if (!(d > 0.0)) throw Error("pcg_solve: nonpositive diagonal, matrix not SPD");
            d = 1.0 / d;
        }
    }
    const auto apply_precond = [&](std::span<const double> r, std::span<double> z) {
        if (inv_diag.empty()) {
            std::copy(r.begin(), r.end(), z.begin());
        } else {
            for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = inv_diag[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
        }
    };

    PcgResult result;
    result.x.assign(static_cast<std::size_t>(n), 0.0);
    const double norm_b = norm2(b);
    if (norm_b == 0.0) return result;  // x = 0 solves exactly
    const double target = options.tol * norm_b;

    std::vector<double> r(b.begin(), b.end());
    if (!initial_guess.empty()) {
        if (initial_guess.size() != static_cast<std::size_t>(n))
            throw Error("pcg_solve: initial guess dimension mismatch");
        std::copy(initial_guess.begin(), initial_guess.end(), result.x.begin());
        const std::vector<double> ax = A.multiply(result.x);
        for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] -= ax[static_cast<std::size_t>(i)];
    }

    std::vector<double> z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
    apply_precond(r, z);
    std::copy(z.begin(), z.end(), p.begin());
    double rho = dot_product(r, z);
    double res_norm = norm2(r);

    int it = 0;
    while (res_norm > target) {
        if (it >= maxit) {
            std::ostringstream os;
            os << "pcg_solve: no convergence after " << maxit
               << " iterations, relative residual " << res_norm / norm_b;
            throw ConvergenceError(os.str(), res_norm / norm_b);
        }
        A.multiply(p, q);
        const double curvature = dot_product(p, q);
        if (!(curvature > 0.0)) {
            throw ConvergenceError("pcg_solve: negative curvature, matrix not SPD",
                                   res_norm / norm_b);
        }
        const double alpha = rho / curvature;
        for (int i = 0; i < n; ++i) {
            result.x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(i)] -= alpha * q[static_cast<std::size_t>(i)];
        }
        apply_precond(r, z);
        const double rho_next = dot_product(r, z);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
        res_norm = norm2(r);
        result.residual_norms.push_back(res_norm);
        ++it;
    }
    result.iterations = it;
    result.relative_residual = res_norm / norm_b;
    return result;
}

}  // namespace tlsc
