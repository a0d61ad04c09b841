#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvacmpc/mlp.hpp"
#include "hvacmpc/normalize.hpp"
#include "hvacmpc/types.hpp"

namespace hvacmpc {

// Environment-conditioned dynamics model. Input is the standardized
// concatenation [building state (5N), action (2N), environment (7+N)];
// output is the standardized delta of the building state, so the
// predicted next state is s + destandardize(net(x)).
struct DynamicsModel {
    std::size_t n_zones = 0;
    MlpParams net;
    NormStats input_stats;  // over the 5N+2N+7+N input
    NormStats delta_stats;  // over the 5N delta targets

    std::size_t input_dim() const { return net.input_dim(); }
    std::size_t output_dim() const { return net.output_dim(); }

    // Raw standardized-space forward (the quantity trained by Eq.-style
    // MSE on delta targets).
    std::vector<double> predict_delta_standardized(const std::vector<double>& s_raw,
                                                   const std::vector<double>& a_raw,
                                                   const std::vector<double>& e_raw) const;

    // Next building state in raw units.
    std::vector<double> predict_next_state(const std::vector<double>& s_raw,
                                           const std::vector<double>& a_raw,
                                           const std::vector<double>& e_raw) const;
};

// Assemble the standardized training matrices from transitions: inputs
// [s, a, e] and targets s_{t+1} - s_t. Statistics are fitted on the rows
// given (callers fit on the training split).
struct DynamicsTrainingData {
    linalg::Matrix inputs;
    linalg::Matrix targets;
};

NormStats fit_input_stats(const Dataset& data);
NormStats fit_delta_stats(const Dataset& data);
DynamicsTrainingData build_training_matrices(const Dataset& data, const NormStats& input_stats,
                                             const NormStats& delta_stats);

// Default architecture: [5N+2N+7+N, hidden, hidden, 5N].
std::vector<std::size_t> dynamics_layer_dims(std::size_t n_zones, std::size_t hidden = 200);

// --- Model file -------------------------------------------------------
//
// Text format: a header (format version, layer dims, flattening-order
// hash, normalization statistics) followed by row-major weights and
// biases printed with 17 significant digits, so a load reproduces
// predictions bit-exactly.
void save_model(const DynamicsModel& model, const std::string& path);
DynamicsModel load_model(const std::string& path);

}  // namespace hvacmpc
