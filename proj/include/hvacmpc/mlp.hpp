#pragma once

#include <cstdint>
#include <vector>

#include "hvacmpc/linalg.hpp"

namespace hvacmpc {

// Fully-connected network: rectifier on hidden layers, identity output.
// weights[l] is (dims[l+1] x dims[l]) so a forward layer is
// Z = X * W^T + b.
struct MlpParams {
    std::vector<std::size_t> dims;
    std::vector<linalg::Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t n_layers() const { return weights.size(); }
    std::size_t input_dim() const { return dims.front(); }
    std::size_t output_dim() const { return dims.back(); }
    std::size_t n_parameters() const;
};

// Weights uniform on +/- sqrt(6 / (fan_in + fan_out)), biases zero.
MlpParams xavier_init(const std::vector<std::size_t>& dims, std::uint64_t seed);

// Layer activations retained for the backward pass.
struct ForwardCache {
    std::vector<linalg::Matrix> pre;   // pre-activation per layer
    std::vector<linalg::Matrix> post;  // post-activation per layer
};

// Y = f(X) for a batch (rows are samples). `cache`, when given, keeps the
// intermediates for gradient().
void forward(const MlpParams& params, const linalg::Matrix& x, linalg::Matrix& y,
             ForwardCache* cache = nullptr);

std::vector<double> forward_single(const MlpParams& params, const std::vector<double>& input);

struct Gradients {
    std::vector<linalg::Matrix> weights;
    std::vector<std::vector<double>> biases;
};

Gradients make_zero_gradients(const MlpParams& params);

// Mean over the batch of 0.5 * ||target - f(x)||^2.
double loss(const MlpParams& params, const linalg::Matrix& x, const linalg::Matrix& target);

// Loss plus exact gradients for the same batch.
double loss_and_gradient(const MlpParams& params, const linalg::Matrix& x,
                         const linalg::Matrix& target, Gradients& grads);

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 512;
    std::size_t epochs = 40;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;
};

struct AdamState {
    Gradients m;
    Gradients v;
    std::int64_t step = 0;
};

AdamState make_adam_state(const MlpParams& params);
void adam_update(MlpParams& params, const Gradients& grads, AdamState& state,
                 const TrainConfig& cfg);

// Loss history: entry 0 is the pre-training value, entry k the value
// after k epochs. Validation entries are absent when no validation set is
// given.
struct TrainResult {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
};

// Mini-batch Adam over seeded shuffles; the final partial batch is used.
// Throws std::runtime_error naming the epoch if the loss goes non-finite.
TrainResult train(MlpParams& params, const linalg::Matrix& x_train, const linalg::Matrix& y_train,
                  const linalg::Matrix* x_val, const linalg::Matrix* y_val, const TrainConfig& cfg);

}  // namespace hvacmpc
