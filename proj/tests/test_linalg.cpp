#include <doctest.h>

#include <stdexcept>

#include "hvacmpc/linalg.hpp"
#include "hvacmpc/rng.hpp"

using namespace hvacmpc;
using linalg::Matrix;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (double& x : m.data) x = rng.uniform(-2.0, 2.0);
    return m;
}

Matrix naive_nt(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.rows; ++j)
            for (std::size_t r = 0; r < a.cols; ++r) c(i, j) += a(i, r) * b(j, r);
    return c;
}

}  // namespace

TEST_CASE("gemm kernels match a naive triple loop") {
    Rng rng(123);
    const Matrix a = random_matrix(17, 9, rng);
    const Matrix b = random_matrix(13, 9, rng);
    const Matrix expect = naive_nt(a, b);
    Matrix c;
    linalg::gemm_nt(a, b, c);
    REQUIRE(c.rows == 17);
    REQUIRE(c.cols == 13);
    for (std::size_t i = 0; i < c.data.size(); ++i)
        CHECK(c.data[i] == doctest::Approx(expect.data[i]).epsilon(1e-12));
}

TEST_CASE("serial and parallel kernels agree bit-for-bit") {
    Rng rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t m = 1 + rng.bounded(40);
        const std::size_t k = 1 + rng.bounded(40);
        const std::size_t n = 1 + rng.bounded(40);

        const Matrix ant = random_matrix(m, k, rng);
        const Matrix bnt = random_matrix(n, k, rng);
        Matrix cs, cp;
        linalg::gemm_nt_serial(ant, bnt, cs);
        linalg::gemm_nt_parallel(ant, bnt, cp);
        CHECK(cs.data == cp.data);

        const Matrix atn = random_matrix(k, m, rng);
        const Matrix btn = random_matrix(k, n, rng);
        linalg::gemm_tn_serial(atn, btn, cs);
        linalg::gemm_tn_parallel(atn, btn, cp);
        CHECK(cs.data == cp.data);

        const Matrix ann = random_matrix(m, k, rng);
        const Matrix bnn = random_matrix(k, n, rng);
        linalg::gemm_nn_serial(ann, bnn, cs);
        linalg::gemm_nn_parallel(ann, bnn, cp);
        CHECK(cs.data == cp.data);
    }
}

TEST_CASE("gemm dimension mismatch throws") {
    Matrix a(3, 4), b(3, 5), c;
    CHECK_THROWS_AS(linalg::gemm_nt(a, b, c), std::invalid_argument);
    Matrix a2(4, 3), b2(5, 3);
    CHECK_THROWS_AS(linalg::gemm_tn(a2, b2, c), std::invalid_argument);
    CHECK_THROWS_AS(linalg::gemm_nn(a2, b2, c), std::invalid_argument);
}

TEST_CASE("elementwise helpers") {
    Matrix m(2, 3);
    m.data = {-1.0, 0.0, 2.0, 3.0, -4.0, 5.0};
    Matrix pre = m;
    linalg::relu_inplace(m);
    CHECK(m.data == std::vector<double>{0.0, 0.0, 2.0, 3.0, 0.0, 5.0});

    Matrix grad(2, 3);
    grad.data = {10, 20, 30, 40, 50, 60};
    linalg::relu_backward_inplace(pre, grad);
    CHECK(grad.data == std::vector<double>{0, 0, 30, 40, 0, 60});

    linalg::add_row_vector(m, {1.0, 2.0, 3.0});
    CHECK(m.data == std::vector<double>{1, 2, 5, 4, 2, 8});

    const auto sums = linalg::col_sums(m);
    CHECK(sums == std::vector<double>{5, 4, 13});
}
