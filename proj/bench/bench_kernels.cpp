// Compares the serial reference kernels against the OpenMP variants on
// the shapes the project actually runs: training batches (512 rows) and
// planner trajectory batches, plus a full batched ensemble step. Also
// verifies the two paths agree bit-for-bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hvacmpc/linalg.hpp"
#include "hvacmpc/mlp.hpp"
#include "hvacmpc/rng.hpp"

using hvacmpc::linalg::Matrix;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, hvacmpc::Rng& rng) {
    Matrix m(r, c);
    for (double& x : m.data) x = rng.uniform(-1.0, 1.0);
    return m;
}

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm-up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        d = std::max(d, std::fabs(a.data[i] - b.data[i]));
    return d;
}

enum class Kind { NT, TN, NN };

// Shapes: NT: (m x k) * (n x k)^T; TN: (k x m)^T * (k x n); NN: (m x k) * (k x n).
void bench_gemm(const char* name, std::size_t m, std::size_t k, std::size_t n,
                void (*serial)(const Matrix&, const Matrix&, Matrix&),
                void (*parallel)(const Matrix&, const Matrix&, Matrix&), Kind kind) {
    hvacmpc::Rng rng(42);
    const Matrix a = kind == Kind::TN ? random_matrix(k, m, rng) : random_matrix(m, k, rng);
    const Matrix b = kind == Kind::NT ? random_matrix(n, k, rng) : random_matrix(k, n, rng);
    Matrix cs, cp;
    const double flops = 2.0 * static_cast<double>(m) * k * n;
    const int reps = std::max(1, static_cast<int>(2e8 / flops));

    const double ts = time_ms([&] { serial(a, b, cs); }, reps);
    const double tp = time_ms([&] { parallel(a, b, cp); }, reps);
    const double diff = max_abs_diff(cs, cp);
    std::printf("%-10s %4zux%3zux%3zu  serial %8.3f ms (%6.2f GF/s)  omp %8.3f ms (%6.2f GF/s)"
                "  speedup %.2fx  max|diff| %g\n",
                name, m, k, n, ts, flops / ts / 1e6, tp, flops / tp / 1e6, ts / tp, diff);
}

void bench_mlp_batch(std::size_t batch, std::size_t in, std::size_t hidden, std::size_t out) {
    hvacmpc::Rng rng(7);
    auto params = hvacmpc::xavier_init({in, hidden, hidden, out}, 11);
    const Matrix x = random_matrix(batch, in, rng);
    Matrix ys, yp;

    hvacmpc::linalg::set_parallel(false);
    const double ts = time_ms([&] { hvacmpc::forward(params, x, ys); }, 20);
    hvacmpc::linalg::set_parallel(true);
    const double tp = time_ms([&] { hvacmpc::forward(params, x, yp); }, 20);
    std::printf("mlp fwd    batch %4zu [%zu,%zu,%zu,%zu]  serial %8.3f ms  omp %8.3f ms"
                "  speedup %.2fx  max|diff| %g\n",
                batch, in, hidden, hidden, out, ts, tp, ts / tp, max_abs_diff(ys, yp));
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp; both paths are serial\n");
#endif

    using namespace hvacmpc::linalg;
    // training shapes
    bench_gemm("gemm_nt", 512, 47, 200, gemm_nt_serial, gemm_nt_parallel, Kind::NT);
    bench_gemm("gemm_nt", 512, 200, 200, gemm_nt_serial, gemm_nt_parallel, Kind::NT);
    bench_gemm("gemm_tn", 200, 512, 200, gemm_tn_serial, gemm_tn_parallel, Kind::TN);
    bench_gemm("gemm_nn", 512, 200, 200, gemm_nn_serial, gemm_nn_parallel, Kind::NN);
    // planner trajectory-batch shapes
    bench_gemm("gemm_nt", 1000, 47, 200, gemm_nt_serial, gemm_nt_parallel, Kind::NT);
    bench_gemm("gemm_nt", 1000, 200, 25, gemm_nt_serial, gemm_nt_parallel, Kind::NT);

    bench_mlp_batch(512, 47, 200, 25);
    bench_mlp_batch(1000, 47, 200, 25);
    bench_mlp_batch(128, 47, 96, 25);
    return 0;
}
