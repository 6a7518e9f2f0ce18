#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <random>

using namespace niga;

namespace {

Eigen::MatrixXd random_matrix(std::size_t n, unsigned seed, double diag) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = (std::abs(static_cast<int>(i) - static_cast<int>(j)) <= 2) ? u(rng) : 0.0;
    a.diagonal().array() += diag;
    return a;
}

}  // namespace

TEST_CASE("CSR construction and lookup") {
    SparseMatrix m = SparseMatrix::from_pattern(3, {{2, 0, 0}, {1}, {0, 2}});
    CHECK(m.nnz() == 5);
    CHECK(m.row_ptr() == std::vector<std::size_t>{0, 2, 3, 5});
    CHECK(m.find(0, 1) == -1);
    m.values()[static_cast<std::size_t>(m.find(2, 2))] = 4.0;
    CHECK(m.at(2, 2) == 4.0);
    CHECK(m.at(0, 1) == 0.0);
    CHECK_THROWS_AS(SparseMatrix(2, {0, 2, 3}, {1, 0, 1}, {1, 1, 1}), Error);
}

TEST_CASE("matrix-vector product and scaled addition") {
    const Eigen::MatrixXd d = random_matrix(12, 3, 4.0);
    SparseMatrix a = SparseMatrix::from_dense(d);
    std::vector<double> x(12);
    for (std::size_t i = 0; i < 12; ++i) x[i] = std::sin(static_cast<double>(i));
    const std::vector<double> y = a.multiply(x);
    const Eigen::VectorXd ref = d * Eigen::Map<const Eigen::VectorXd>(x.data(), 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(y[i] == doctest::Approx(ref[static_cast<Eigen::Index>(i)]));
    SparseMatrix b = a;
    b.add_scaled(a, -1.0);
    CHECK(b.frobenius_norm() == 0.0);
    CHECK(a.same_pattern(b));
    CHECK((a.to_dense() - d).norm() == 0.0);
}

TEST_CASE("sparse solve agrees with dense Gaussian elimination") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const std::size_t n = 40;
        const Eigen::MatrixXd d = random_matrix(n, seed, 3.0);
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = std::cos(0.3 * static_cast<double>(i * seed));
        const std::vector<double> x = solve_sparse(SparseMatrix::from_dense(d), rhs);
        const std::vector<double> ref = oracle::lu_solve(testing::to_oracle(d), rhs);
        for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-11));
    }
}

TEST_CASE("singular matrices are reported") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(4, 4);
    d(2, 2) = 0.0;
    d(2, 1) = 0.0;
    try {
        SparseSolver s(SparseMatrix::from_dense(d, -1.0));
        s.solve(std::vector<double>{1, 1, 1, 1});
        FAIL("expected SingularMatrix");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularMatrix);
        CHECK_FALSE(is_config_error(e.code()));
    }
}

TEST_CASE("generalized symmetric eigenvalues agree with the Jacobi oracle") {
    const std::size_t n = 15;
    Eigen::MatrixXd a = random_matrix(n, 9, 0.0);
    a = 0.5 * (a + a.transpose()).eval();
    Eigen::MatrixXd b = random_matrix(n, 10, 0.0);
    b = (b * b.transpose()).eval();
    b.diagonal().array() += 1.0;
    const GeneralizedEigenpairs e = generalized_symmetric_eig(a, b);
    const std::vector<double> ref = oracle::generalized_eigenvalues(testing::to_oracle(a), testing::to_oracle(b));
    REQUIRE(e.values.size() == static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) CHECK(e.values[static_cast<Eigen::Index>(i)] == doctest::Approx(ref[i]).epsilon(1e-10));
    // A v = lambda B v
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
        const Eigen::VectorXd v = e.vectors.col(j);
        CHECK((a * v - e.values[j] * (b * v)).norm() <= 1e-10 * (1.0 + std::abs(e.values[j])));
    }
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(n, n);
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(generalized_symmetric_eig(a, bad), Error);
}

TEST_CASE("scaled singular value of a B-orthogonal problem") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(3, 3) * 4.0;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 1) = 8.0;
    a(2, 2) = -2.0;
    CHECK(max_scaled_singular_value(a, b) == doctest::Approx(2.0));
    CHECK(norm2(std::vector<double>{3, 4}) == 5.0);
}
