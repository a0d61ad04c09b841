#include "hvacmpc/linalg.hpp"

#include <atomic>
#include <stdexcept>

namespace hvacmpc::linalg {

namespace {

std::atomic<bool> g_parallel{
#ifdef _OPENMP
    true
#else
    false
#endif
};

void check_dims(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("linalg: dimension mismatch in ") + what);
}

}  // namespace

void set_parallel(bool enabled) { g_parallel.store(enabled); }
bool parallel_enabled() { return g_parallel.load(); }

// ---------------------------------------------------------------------------
// C = A * B^T. Rows of both operands are contiguous, so each output element
// is a dot product of two contiguous runs. This is the hot kernel (MLP
// forward over a batch of states or trajectories).

void gemm_nt_serial(const Matrix& a, const Matrix& b, Matrix& c) {
    check_dims(a.cols == b.cols, "gemm_nt");
    c.resize(a.rows, b.rows);
    const std::size_t k = a.cols;
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* bj = b.row(j);
            double s = 0.0;
            for (std::size_t r = 0; r < k; ++r) s += ai[r] * bj[r];
            ci[j] = s;
        }
    }
}

void gemm_nt_parallel(const Matrix& a, const Matrix& b, Matrix& c) {
    check_dims(a.cols == b.cols, "gemm_nt");
    c.resize(a.rows, b.rows);
    const std::size_t k = a.cols;
    const long m = static_cast<long>(a.rows);
#pragma omp parallel for schedule(static) if (m >= 4)
    for (long i = 0; i < m; ++i) {
        const double* ai = a.row(static_cast<std::size_t>(i));
        double* ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* bj = b.row(j);
            double s = 0.0;
            for (std::size_t r = 0; r < k; ++r) s += ai[r] * bj[r];
            ci[j] = s;
        }
    }
}

// ---------------------------------------------------------------------------
// C = A^T * B with A, B sharing their row count (weight gradients:
// dW = dZ^T * X). Each output row i accumulates over the shared dimension
// in ascending order, serially, regardless of scheduling.

void gemm_tn_serial(const Matrix& a, const Matrix& b, Matrix& c) {
    check_dims(a.rows == b.rows, "gemm_tn");
    c.resize(a.cols, b.cols);
    for (std::size_t i = 0; i < a.cols; ++i) {
        double* ci = c.row(i);
        for (std::size_t r = 0; r < a.rows; ++r) {
            const double av = a(r, i);
            if (av == 0.0) continue;
            const double* br = b.row(r);
            for (std::size_t j = 0; j < b.cols; ++j) ci[j] += av * br[j];
        }
    }
}

void gemm_tn_parallel(const Matrix& a, const Matrix& b, Matrix& c) {
    check_dims(a.rows == b.rows, "gemm_tn");
    c.resize(a.cols, b.cols);
    const long m = static_cast<long>(a.cols);
#pragma omp parallel for schedule(static) if (m >= 4)
    for (long i = 0; i < m; ++i) {
        double* ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t r = 0; r < a.rows; ++r) {
            const double av = a(r, static_cast<std::size_t>(i));
            if (av == 0.0) continue;
            const double* br = b.row(r);
            for (std::size_t j = 0; j < b.cols; ++j) ci[j] += av * br[j];
        }
    }
}

// ---------------------------------------------------------------------------
// C = A * B (activation gradients: dX = dZ * W).

void gemm_nn_serial(const Matrix& a, const Matrix& b, Matrix& c) {
    check_dims(a.cols == b.rows, "gemm_nn");
    c.resize(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t r = 0; r < a.cols; ++r) {
            const double av = ai[r];
            if (av == 0.0) continue;
            const double* br = b.row(r);
            for (std::size_t j = 0; j < b.cols; ++j) ci[j] += av * br[j];
        }
    }
}

void gemm_nn_parallel(const Matrix& a, const Matrix& b, Matrix& c) {
    check_dims(a.cols == b.rows, "gemm_nn");
    c.resize(a.rows, b.cols);
    const long m = static_cast<long>(a.rows);
#pragma omp parallel for schedule(static) if (m >= 4)
    for (long i = 0; i < m; ++i) {
        const double* ai = a.row(static_cast<std::size_t>(i));
        double* ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t r = 0; r < a.cols; ++r) {
            const double av = ai[r];
            if (av == 0.0) continue;
            const double* br = b.row(r);
            for (std::size_t j = 0; j < b.cols; ++j) ci[j] += av * br[j];
        }
    }
}

void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c) {
    if (parallel_enabled())
        gemm_nt_parallel(a, b, c);
    else
        gemm_nt_serial(a, b, c);
}

void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c) {
    if (parallel_enabled())
        gemm_tn_parallel(a, b, c);
    else
        gemm_tn_serial(a, b, c);
}

void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c) {
    if (parallel_enabled())
        gemm_nn_parallel(a, b, c);
    else
        gemm_nn_serial(a, b, c);
}

void add_row_vector(Matrix& m, const std::vector<double>& v) {
    check_dims(m.cols == v.size(), "add_row_vector");
    for (std::size_t i = 0; i < m.rows; ++i) {
        double* mi = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) mi[j] += v[j];
    }
}

void relu_inplace(Matrix& m) {
    for (double& x : m.data)
        if (x < 0.0) x = 0.0;
}

void relu_backward_inplace(const Matrix& pre, Matrix& grad) {
    check_dims(pre.rows == grad.rows && pre.cols == grad.cols, "relu_backward");
    for (std::size_t i = 0; i < pre.data.size(); ++i)
        if (pre.data[i] <= 0.0) grad.data[i] = 0.0;
}

std::vector<double> col_sums(const Matrix& m) {
    std::vector<double> s(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* mi = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) s[j] += mi[j];
    }
    return s;
}

}  // namespace hvacmpc::linalg
