#include "hvacmpc/normalize.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hvacmpc/rng.hpp"

namespace hvacmpc {

NormStats fit_norm_stats(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("fit_norm_stats: empty sample");
    const std::size_t d = rows.front().size();
    NormStats s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    for (const auto& r : rows) {
        if (r.size() != d) throw std::invalid_argument("fit_norm_stats: ragged rows");
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    }
    for (double& m : s.mean) m /= static_cast<double>(rows.size());
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = r[j] - s.mean[j];
            s.stddev[j] += dv * dv;
        }
    for (double& v : s.stddev) {
        v = std::sqrt(v / static_cast<double>(rows.size()));
        if (v <= 1e-12) v = 1.0;  // degenerate-feature rule
    }
    return s;
}

std::vector<double> standardize(const std::vector<double>& x, const NormStats& stats) {
    if (x.size() != stats.dim()) throw std::invalid_argument("standardize: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - stats.mean[i]) / stats.stddev[i];
    return out;
}

std::vector<double> destandardize(const std::vector<double>& x, const NormStats& stats) {
    if (x.size() != stats.dim()) throw std::invalid_argument("destandardize: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * stats.stddev[i] + stats.mean[i];
    return out;
}

void standardize_row(double* x, std::size_t n, const NormStats& stats) {
    if (n != stats.dim()) throw std::invalid_argument("standardize_row: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) x[i] = (x[i] - stats.mean[i]) / stats.stddev[i];
}

void destandardize_row(double* x, std::size_t n, const NormStats& stats) {
    if (n != stats.dim()) throw std::invalid_argument("destandardize_row: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * stats.stddev[i] + stats.mean[i];
}

double minmax_norm(double x, const MinMaxBounds& bounds) {
    if (!(bounds.max > bounds.min)) throw std::invalid_argument("minmax_norm: max <= min");
    const double v = (x - bounds.min) / (bounds.max - bounds.min);
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

void split_train_val(const Dataset& dataset, double ratio, std::uint64_t seed, Dataset& train,
                     Dataset& val) {
    if (dataset.empty()) throw std::invalid_argument("split_train_val: empty dataset");
    if (ratio < 0.0 || ratio > 1.0) throw std::invalid_argument("split_train_val: ratio outside [0,1]");
    std::vector<std::size_t> idx(dataset.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, {0x73706c6974ULL}));  // stream tag "split"
    shuffle_in_place(idx, rng);
    const auto n_train =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(dataset.size())));
    train.clear();
    val.clear();
    train.reserve(n_train);
    val.reserve(dataset.size() - n_train);
    for (std::size_t i = 0; i < idx.size(); ++i)
        (i < n_train ? train : val).push_back(dataset[idx[i]]);
}

}  // namespace hvacmpc
