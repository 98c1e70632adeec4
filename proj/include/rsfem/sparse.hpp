#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

namespace rsfem {

using Vector = std::vector<double>;

/// Compressed-sparse-row matrix. Column indices are sorted within each row.
/// `symmetric` records that the stored pattern and values are symmetric.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<int> cols,
              std::vector<double> vals, bool symmetric);

    /// Sums duplicate (row, col) entries.
    [[nodiscard]] static CsrMatrix from_triplets(std::size_t n,
                                                 std::span<const std::tuple<int, int, double>> triplets,
                                                 bool symmetric = true);
    [[nodiscard]] static CsrMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t nnz() const noexcept { return vals_.size(); }
    [[nodiscard]] bool symmetric() const noexcept { return symmetric_; }
    [[nodiscard]] std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    [[nodiscard]] std::span<const int> cols() const noexcept { return cols_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return vals_; }

    /// Entry (i, j); zero when not stored.
    [[nodiscard]] double at(std::size_t i, std::size_t j) const;
    [[nodiscard]] Vector diagonal() const;
    /// max |i - j| over stored entries
    [[nodiscard]] std::size_t bandwidth() const;

    /// y = A x, no allocation. Sizes must match.
    void multiply(std::span<const double> x, std::span<double> y) const;

    /// Largest |A_ij - A_ji| over stored entries.
    [[nodiscard]] double asymmetry() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<int> cols_;
    std::vector<double> vals_;
    bool symmetric_ = false;
};

using SparseSymMatrix = CsrMatrix;

/// a*A + b*B over the union of both patterns.
[[nodiscard]] CsrMatrix add_scaled(double a, const CsrMatrix& A, double b, const CsrMatrix& B);

[[nodiscard]] Vector matvec(const CsrMatrix& A, std::span<const double> x);

struct SolveStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Solves A x = b for symmetric positive definite A.
///
/// Systems with n <= 64 use a dense Cholesky factorization; larger ones use
/// Jacobi-preconditioned conjugate gradients capped at 10 n iterations.
/// Throws SolverFailure when ||Ax - b|| / ||b|| > tol at the cap.
[[nodiscard]] Vector solve_spd(const CsrMatrix& A, std::span<const double> b, double tol = 1e-12,
                               SolveStats* stats = nullptr);

/// Banded Cholesky factorization A = L L^T, stored by rows within the band.
class BandedCholesky {
public:
    explicit BandedCholesky(const CsrMatrix& A);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t bandwidth() const noexcept { return bw_; }
    void solve_in_place(std::span<double> x) const;
    [[nodiscard]] Vector solve(std::span<const double> b) const;

private:
    [[nodiscard]] double& l(std::size_t i, std::size_t j) { return band_[i * (bw_ + 1) + (j + bw_ - i)]; }
    [[nodiscard]] double l(std::size_t i, std::size_t j) const { return band_[i * (bw_ + 1) + (j + bw_ - i)]; }

    std::size_t n_ = 0;
    std::size_t bw_ = 0;
    std::vector<double> band_;
};

/// Reusable SPD solver for a fixed matrix: a banded factorization when the
/// band is narrow, otherwise PCG with the Jacobi preconditioner.
class SpdSolver {
public:
    explicit SpdSolver(CsrMatrix A, double tol = 1e-12);

    [[nodiscard]] const CsrMatrix& matrix() const noexcept { return A_; }
    [[nodiscard]] bool direct() const noexcept { return chol_.has_value(); }
    [[nodiscard]] Vector solve(std::span<const double> b) const;

private:
    CsrMatrix A_;
    double tol_;
    std::optional<BandedCholesky> chol_;
};

/// Euclidean helpers shared by the solvers and the tests.
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm2(std::span<const double> a);
/// y += a x
void axpy(double a, std::span<const double> x, std::span<double> y);

} // namespace rsfem
