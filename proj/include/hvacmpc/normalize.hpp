#pragma once

#include <cstdint>
#include <vector>

#include "hvacmpc/types.hpp"

namespace hvacmpc {

// Per-feature standardization statistics. Zero-variance features get
// std = 1 at fit time so the standardized value is 0 (always-occupied
// flags, constant energies in mild weather).
struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::size_t dim() const { return mean.size(); }
};

NormStats fit_norm_stats(const std::vector<std::vector<double>>& rows);

std::vector<double> standardize(const std::vector<double>& x, const NormStats& stats);
std::vector<double> destandardize(const std::vector<double>& x, const NormStats& stats);

// In-place variants over a contiguous row (used by the batched planner
// rollout).
void standardize_row(double* x, std::size_t n, const NormStats& stats);
void destandardize_row(double* x, std::size_t n, const NormStats& stats);

struct MinMaxBounds {
    double min = 0.0;
    double max = 1.0;
};

// Norm(x) = (x - min) / (max - min), clipped to [0,1]. Throws on
// max <= min.
double minmax_norm(double x, const MinMaxBounds& bounds);

// Seed-deterministic disjoint split; both halves preserve nothing of the
// input order (Fisher-Yates shuffle on indices).
void split_train_val(const Dataset& dataset, double ratio, std::uint64_t seed, Dataset& train,
                     Dataset& val);

}  // namespace hvacmpc
