#include "nitsche_iga/linalg.hpp"

#include "nitsche_iga/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace niga {

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                           std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), values_(std::move(values)) {
    if (row_ptr_.size() != n_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != cols_.size() ||
        values_.size() != cols_.size())
        raise(ErrorCode::InvalidArgument, "inconsistent CSR arrays");
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            if (cols_[p] >= n_) raise(ErrorCode::InvalidArgument, "CSR column index out of range");
            if (p > row_ptr_[i] && cols_[p] <= cols_[p - 1])
                raise(ErrorCode::InvalidArgument, "CSR columns must be sorted and unique");
        }
    }
}

SparseMatrix SparseMatrix::from_pattern(std::size_t n, std::vector<std::vector<std::size_t>> rows) {
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::size_t> cols;
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        cols.insert(cols.end(), r.begin(), r.end());
        row_ptr.push_back(cols.size());
    }
    row_ptr.resize(n + 1, cols.size());
    std::vector<double> values(cols.size(), 0.0);
    return SparseMatrix(n, std::move(row_ptr), std::move(cols), std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<std::size_t> row_ptr(n + 1), cols(n);
    for (std::size_t i = 0; i <= n; ++i) row_ptr[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    return SparseMatrix(n, std::move(row_ptr), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense, double drop) {
    const auto n = static_cast<std::size_t>(dense.rows());
    std::vector<std::size_t> row_ptr{0}, cols;
    std::vector<double> values;
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        for (Eigen::Index j = 0; j < dense.cols(); ++j) {
            if (std::abs(dense(i, j)) > drop) {
                cols.push_back(static_cast<std::size_t>(j));
                values.push_back(dense(i, j));
            }
        }
        row_ptr.push_back(cols.size());
    }
    return SparseMatrix(n, std::move(row_ptr), std::move(cols), std::move(values));
}

std::ptrdiff_t SparseMatrix::find(std::size_t i, std::size_t j) const {
    if (i >= n_) return -1;
    const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return -1;
    return it - cols_.begin();
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
    const auto p = find(i, j);
    return p < 0 ? 0.0 : values_[static_cast<std::size_t>(p)];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) raise(ErrorCode::InvalidArgument, "matrix-vector size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) acc += values_[p] * x[cols_[p]];
        y[i] = acc;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    multiply(x, y);
    return y;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
    return n_ == other.n_ && row_ptr_ == other.row_ptr_ && cols_ == other.cols_;
}

SparseMatrix& SparseMatrix::add_scaled(const SparseMatrix& other, double s) {
    if (!same_pattern(other)) raise(ErrorCode::InvalidArgument, "add_scaled needs identical sparsity patterns");
    for (std::size_t p = 0; p < values_.size(); ++p) values_[p] += s * other.values_[p];
    return *this;
}

double SparseMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return std::sqrt(acc);
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols_[p])) = values_[p];
    return d;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(values_.size());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            trip.emplace_back(static_cast<int>(i), static_cast<int>(cols_[p]), values_[p]);
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

double norm2(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

// ---------------------------------------------------------------------------

struct SparseSolver::Impl {
    SparseMatrix matrix;
    SolverOptions options;
    double frobenius = 0.0;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseSolver::SparseSolver(const SparseMatrix& matrix, SolverOptions options) : impl_(std::make_unique<Impl>()) {
    impl_->matrix = matrix;
    impl_->options = options;
    if (impl_->options.max_iterations == 0) impl_->options.max_iterations = 10 * matrix.rows();
    impl_->frobenius = matrix.frobenius_norm();
    if (matrix.rows() == 0) return;
    impl_->lu.analyzePattern(matrix.to_eigen());
    impl_->lu.factorize(matrix.to_eigen());
    if (impl_->lu.info() != Eigen::Success)
        raise(ErrorCode::SingularMatrix, "sparse LU failed: " + impl_->lu.lastErrorMessage());
}

SparseSolver::~SparseSolver() = default;
SparseSolver::SparseSolver(SparseSolver&&) noexcept = default;
SparseSolver& SparseSolver::operator=(SparseSolver&&) noexcept = default;

std::vector<double> SparseSolver::solve(std::span<const double> rhs) const {
    const SparseMatrix& A = impl_->matrix;
    const std::size_t n = A.rows();
    if (rhs.size() != n) raise(ErrorCode::InvalidArgument, "right-hand side has wrong length");
    if (n == 0) return {};
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd x = impl_->lu.solve(b);
    if (!x.allFinite()) raise(ErrorCode::SingularMatrix, "solution is not finite");

    const double bnorm = b.norm();
    auto residual = [&](const Eigen::VectorXd& xv) {
        std::vector<double> ax = A.multiply(std::span<const double>(xv.data(), n));
        Eigen::VectorXd r = b - Eigen::Map<Eigen::VectorXd>(ax.data(), static_cast<Eigen::Index>(n));
        return r;
    };
    Eigen::VectorXd r = residual(x);
    const std::size_t max_refine = std::min<std::size_t>(impl_->options.max_iterations, 10);
    for (std::size_t it = 0; it < max_refine; ++it) {
        if (r.norm() <= impl_->options.tol * (impl_->frobenius * x.norm() + bnorm)) break;
        x += impl_->lu.solve(r);
        r = residual(x);
    }
    const double bound = 1e-10 * (impl_->frobenius * x.norm() + bnorm);
    if (!(r.norm() <= bound)) {
        std::ostringstream os;
        os << "residual " << r.norm() << " exceeds bound " << bound;
        raise(ErrorCode::ConvergenceFailure, os.str());
    }
    return std::vector<double>(x.data(), x.data() + n);
}

std::vector<double> solve_sparse(const SparseMatrix& matrix, std::span<const double> rhs,
                                 const SolverOptions& options) {
    return SparseSolver(matrix, options).solve(rhs);
}

// ---------------------------------------------------------------------------

GeneralizedEigenpairs generalized_symmetric_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        raise(ErrorCode::InvalidArgument, "generalized eigenproblem needs square matrices of equal size");
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) raise(ErrorCode::NotSPD, "Cholesky factorization of B failed");
    const Eigen::MatrixXd L = llt.matrixL();
    // C = L^{-1} A L^{-T}
    Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
    C = 0.5 * (C + C.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) raise(ErrorCode::ConvergenceFailure, "symmetric eigensolver failed");
    GeneralizedEigenpairs out;
    out.values = es.eigenvalues();
    out.vectors = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    return out;
}

double max_scaled_singular_value(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) raise(ErrorCode::NotSPD, "Cholesky factorization of B failed");
    const Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(A);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    return svd.singularValues()[0];
}

}  // namespace niga
