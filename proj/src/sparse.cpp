#include "rsfem/sparse.hpp"

#include "rsfem/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

namespace rsfem {

namespace {

void require_size(std::size_t expected, std::size_t got, const char* what)
{
    if (expected != got) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(expected) +
                              " vs " + std::to_string(got) + ")");
    }
}

Vector dense_cholesky_solve(const CsrMatrix& A, std::span<const double> b)
{
    const std::size_t n = A.size();
    std::vector<double> L(n * n, 0.0);
    const auto rp = A.row_ptr();
    const auto cols = A.cols();
    const auto vals = A.values();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
            L[i * n + static_cast<std::size_t>(cols[k])] = vals[k];
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        double d = L[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            d -= L[j * n + k] * L[j * n + k];
        }
        if (!(d > 0.0)) {
            throw SolverFailure("solve_spd: matrix is not positive definite", std::nan(""), 0);
        }
        d = std::sqrt(d);
        L[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = L[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                s -= L[i * n + k] * L[j * n + k];
            }
            L[i * n + j] = s / d;
        }
    }
    Vector x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= L[i * n + k] * x[k];
        }
        x[i] = s / L[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            s -= L[k * n + i] * x[k];
        }
        x[i] = s / L[i * n + i];
    }
    return x;
}

Vector pcg(const CsrMatrix& A, std::span<const double> b, double tol, SolveStats* stats)
{
    const std::size_t n = A.size();
    const double bnorm = norm2(b);
    Vector x(n, 0.0);
    if (bnorm == 0.0) {
        if (stats) {
            *stats = {0, 0.0};
        }
        return x;
    }
    Vector inv_diag = A.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) {
            throw SolverFailure("solve_spd: non-positive diagonal entry", std::nan(""), 0);
        }
        d = 1.0 / d;
    }
    Vector r(b.begin(), b.end());
    Vector z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = inv_diag[i] * r[i];
    }
    p = z;
    double rz = dot(r, z);
    const std::size_t cap = 10 * n;
    double rel = 1.0;
    for (std::size_t it = 1; it <= cap; ++it) {
        A.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            throw SolverFailure("solve_spd: matrix is not positive definite", rel, it);
        }
        const double step = rz / pq;
        axpy(step, p, x);
        axpy(-step, q, r);
        rel = norm2(r) / bnorm;
        if (rel <= tol) {
            // recursive residual drifts; confirm with the true one
            Vector ax(n);
            A.multiply(x, ax);
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = b[i] - ax[i];
            }
            rel = norm2(r) / bnorm;
            if (rel <= tol) {
                if (stats) {
                    *stats = {it, rel};
                }
                return x;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
        }
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    throw SolverFailure("solve_spd: conjugate gradients did not converge within " + std::to_string(cap) +
                            " iterations (relative residual " + std::to_string(rel) + ")",
                        rel, cap);
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

void axpy(double a, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += a * x[i];
    }
}

CsrMatrix::CsrMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<int> cols,
                     std::vector<double> vals, bool symmetric)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)), symmetric_(symmetric)
{
    if (row_ptr_.size() != n_ + 1 || cols_.size() != vals_.size() || row_ptr_.back() != vals_.size()) {
        throw InvalidArgument("CsrMatrix: inconsistent compressed row structure");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (cols_[k] < 0 || static_cast<std::size_t>(cols_[k]) >= n_) {
                throw InvalidArgument("CsrMatrix: column index out of range");
            }
            if (k > row_ptr_[i] && cols_[k] <= cols_[k - 1]) {
                throw InvalidArgument("CsrMatrix: column indices must be strictly increasing per row");
            }
            if (!std::isfinite(vals_[k])) {
                throw InvalidArgument("CsrMatrix: non-finite value");
            }
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n, std::span<const std::tuple<int, int, double>> triplets,
                                   bool symmetric)
{
    std::vector<std::tuple<int, int, double>> t(triplets.begin(), triplets.end());
    std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::size_t> row_ptr(n + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(t.size());
    vals.reserve(t.size());
    int last_r = -1;
    int last_c = -1;
    for (const auto& [r, c, v] : t) {
        if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= n || static_cast<std::size_t>(c) >= n) {
            throw InvalidArgument("CsrMatrix::from_triplets: index out of range");
        }
        if (r == last_r && c == last_c) {
            vals.back() += v;
            continue;
        }
        cols.push_back(c);
        vals.push_back(v);
        ++row_ptr[static_cast<std::size_t>(r) + 1];
        last_r = r;
        last_c = c;
    }
    std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
    return CsrMatrix(n, std::move(row_ptr), std::move(cols), std::move(vals), symmetric);
}

CsrMatrix CsrMatrix::identity(std::size_t n)
{
    std::vector<std::size_t> rp(n + 1);
    std::iota(rp.begin(), rp.end(), std::size_t{0});
    std::vector<int> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    return CsrMatrix(n, std::move(rp), std::move(cols), std::vector<double>(n, 1.0), true);
}

double CsrMatrix::at(std::size_t i, std::size_t j) const
{
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<int>(j));
    if (it == last || *it != static_cast<int>(j)) {
        return 0.0;
    }
    return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

Vector CsrMatrix::diagonal() const
{
    Vector d(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        d[i] = at(i, i);
    }
    return d;
}

std::size_t CsrMatrix::bandwidth() const
{
    std::size_t bw = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const auto j = static_cast<std::size_t>(cols_[k]);
            bw = std::max(bw, i > j ? i - j : j - i);
        }
    }
    return bw;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    require_size(n_, x.size(), "CsrMatrix::multiply");
    require_size(n_, y.size(), "CsrMatrix::multiply");
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            s += vals_[k] * x[static_cast<std::size_t>(cols_[k])];
        }
        y[i] = s;
    }
}

double CsrMatrix::asymmetry() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const auto j = static_cast<std::size_t>(cols_[k]);
            worst = std::max(worst, std::abs(vals_[k] - at(j, i)));
        }
    }
    return worst;
}

CsrMatrix add_scaled(double a, const CsrMatrix& A, double b, const CsrMatrix& B)
{
    require_size(A.size(), B.size(), "add_scaled");
    const std::size_t n = A.size();
    std::vector<std::size_t> rp(n + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(std::max(A.nnz(), B.nnz()));
    vals.reserve(cols.capacity());
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ka = A.row_ptr()[i];
        std::size_t kb = B.row_ptr()[i];
        const std::size_t ea = A.row_ptr()[i + 1];
        const std::size_t eb = B.row_ptr()[i + 1];
        while (ka < ea || kb < eb) {
            const int ca = ka < ea ? A.cols()[ka] : std::numeric_limits<int>::max();
            const int cb = kb < eb ? B.cols()[kb] : std::numeric_limits<int>::max();
            if (ca == cb) {
                cols.push_back(ca);
                vals.push_back(a * A.values()[ka++] + b * B.values()[kb++]);
            } else if (ca < cb) {
                cols.push_back(ca);
                vals.push_back(a * A.values()[ka++]);
            } else {
                cols.push_back(cb);
                vals.push_back(b * B.values()[kb++]);
            }
        }
        rp[i + 1] = cols.size();
    }
    return CsrMatrix(n, std::move(rp), std::move(cols), std::move(vals), A.symmetric() && B.symmetric());
}

Vector matvec(const CsrMatrix& A, std::span<const double> x)
{
    require_size(A.size(), x.size(), "matvec");
    Vector y(A.size());
    A.multiply(x, y);
    return y;
}

Vector solve_spd(const CsrMatrix& A, std::span<const double> b, double tol, SolveStats* stats)
{
    require_size(A.size(), b.size(), "solve_spd");
    if (norm2(b) == 0.0) {
        if (stats) {
            *stats = {0, 0.0};
        }
        return Vector(A.size(), 0.0);
    }
    if (A.size() <= 64) {
        Vector x = dense_cholesky_solve(A, b);
        if (stats) {
            Vector r = matvec(A, x);
            for (std::size_t i = 0; i < r.size(); ++i) {
                r[i] -= b[i];
            }
            *stats = {0, norm2(r) / norm2(b)};
        }
        return x;
    }
    return pcg(A, b, tol, stats);
}

BandedCholesky::BandedCholesky(const CsrMatrix& A)
    : n_(A.size()), bw_(A.bandwidth()), band_(A.size() * (A.bandwidth() + 1), 0.0)
{
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) {
            const auto j = static_cast<std::size_t>(A.cols()[k]);
            if (j <= i) {
                l(i, j) = A.values()[k];
            }
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > bw_ ? i - bw_ : 0;
        for (std::size_t j = j0; j <= i; ++j) {
            const std::size_t k0 = std::max(j0, j > bw_ ? j - bw_ : 0);
            double s = l(i, j);
            for (std::size_t k = k0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            if (j == i) {
                if (!(s > 0.0)) {
                    throw SolverFailure("BandedCholesky: matrix is not positive definite (pivot " +
                                            std::to_string(i) + ")",
                                        std::nan(""), 0);
                }
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
}

void BandedCholesky::solve_in_place(std::span<double> x) const
{
    require_size(n_, x.size(), "BandedCholesky::solve");
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > bw_ ? i - bw_ : 0;
        double s = x[i];
        for (std::size_t k = j0; k < i; ++k) {
            s -= l(i, k) * x[k];
        }
        x[i] = s / l(i, i);
    }
    for (std::size_t i = n_; i-- > 0;) {
        x[i] /= l(i, i);
        const double xi = x[i];
        const std::size_t j0 = i > bw_ ? i - bw_ : 0;
        for (std::size_t k = j0; k < i; ++k) {
            x[k] -= l(i, k) * xi;
        }
    }
}

Vector BandedCholesky::solve(std::span<const double> b) const
{
    Vector x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

SpdSolver::SpdSolver(CsrMatrix A, double tol)
    : A_(std::move(A)), tol_(tol)
{
    // banded storage costs n * (bw + 1) doubles; stay below ~512 MB
    const std::size_t bw = A_.bandwidth();
    if (A_.size() * (bw + 1) <= (std::size_t{1} << 26)) {
        chol_.emplace(A_);
    }
}

Vector SpdSolver::solve(std::span<const double> b) const
{
    if (chol_) {
        return chol_->solve(b);
    }
    return solve_spd(A_, b, tol_);
}

} // namespace rsfem
