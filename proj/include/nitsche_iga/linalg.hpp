#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace niga {

// Square compressed-sparse-row matrix with sorted, unique column indices.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                 std::vector<double> values);

    // Zero matrix with the given per-row column sets (sorted and deduplicated here).
    static SparseMatrix from_pattern(std::size_t n, std::vector<std::vector<std::size_t>> rows);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix from_dense(const Eigen::MatrixXd& dense, double drop = 0.0);

    std::size_t rows() const { return n_; }
    std::size_t nnz() const { return cols_.size(); }
    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& cols() const { return cols_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Position of (i,j) in the value array, or -1 when outside the pattern.
    std::ptrdiff_t find(std::size_t i, std::size_t j) const;
    double at(std::size_t i, std::size_t j) const;

    std::vector<double> multiply(std::span<const double> x) const;
    void multiply(std::span<const double> x, std::span<double> y) const;

    // this += s * other; patterns must match.
    SparseMatrix& add_scaled(const SparseMatrix& other, double s);
    bool same_pattern(const SparseMatrix& other) const;

    double frobenius_norm() const;
    Eigen::MatrixXd to_dense() const;
    Eigen::SparseMatrix<double> to_eigen() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

struct SolverOptions {
    double tol = 1e-12;
    std::size_t max_iterations = 0;  // 0 means 10 n
};

// Sparse LU factorization with residual-checked solves. Immutable once built.
class SparseSolver {
public:
    explicit SparseSolver(const SparseMatrix& matrix, SolverOptions options = {});
    ~SparseSolver();
    SparseSolver(SparseSolver&&) noexcept;
    SparseSolver& operator=(SparseSolver&&) noexcept;

    // Guarantees ||Ax - b|| <= 1e-10 (||A||_F ||x|| + ||b||), refining toward
    // options.tol; throws ConvergenceFailure otherwise.
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<double> solve_sparse(const SparseMatrix& matrix, std::span<const double> rhs,
                                 const SolverOptions& options = {});

struct GeneralizedEigenpairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // B-orthonormal columns
};

// A v = lambda B v with A symmetric, B SPD, via Cholesky reduction of B.
// Throws NotSPD when B fails to factor.
GeneralizedEigenpairs generalized_symmetric_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// Largest singular value of L^{-1} A L^{-T} where B = L L^T.
double max_scaled_singular_value(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

double norm2(std::span<const double> x);

}  // namespace niga
