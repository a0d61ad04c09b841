#pragma once

#include <cstddef>
#include <vector>

namespace hvacmpc::linalg {

// Dense row-major matrix of doubles. Rows are contiguous, so the GEMM
// kernels below can walk them with plain pointer arithmetic.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    void resize(std::size_t r, std::size_t c) {
        rows = r;
        cols = c;
        data.assign(r * c, 0.0);
    }

    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Kernel dispatch. When enabled (the default if built with OpenMP), the
// gemm_* entry points run the OpenMP variants; otherwise the serial
// reference. Every kernel accumulates each output element in a fixed
// serial order, so serial and parallel results are bit-identical and
// independent of thread count.
void set_parallel(bool enabled);
bool parallel_enabled();

// C = A * B^T   (A: m x k, B: n x k, C: m x n)
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c);
// C = A^T * B   (A: r x m, B: r x n, C: m x n)
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c);
// C = A * B     (A: m x k, B: k x n, C: m x n)
void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c);

// Serial reference implementations, kept callable for tests and the
// kernel benchmark.
void gemm_nt_serial(const Matrix& a, const Matrix& b, Matrix& c);
void gemm_tn_serial(const Matrix& a, const Matrix& b, Matrix& c);
void gemm_nn_serial(const Matrix& a, const Matrix& b, Matrix& c);

void gemm_nt_parallel(const Matrix& a, const Matrix& b, Matrix& c);
void gemm_tn_parallel(const Matrix& a, const Matrix& b, Matrix& c);
void gemm_nn_parallel(const Matrix& a, const Matrix& b, Matrix& c);

// m += row vector v added to every row.
void add_row_vector(Matrix& m, const std::vector<double>& v);
// Elementwise max(x, 0).
void relu_inplace(Matrix& m);
// grad *= 1[pre > 0], the rectifier backward mask.
void relu_backward_inplace(const Matrix& pre, Matrix& grad);
// Column sums (length m.cols).
std::vector<double> col_sums(const Matrix& m);

}  // namespace hvacmpc::linalg
