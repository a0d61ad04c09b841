#include "hvacmpc/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hvacmpc/rng.hpp"

namespace hvacmpc {

using linalg::Matrix;

std::size_t MlpParams::n_parameters() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        n += weights[l].data.size() + biases[l].size();
    return n;
}

MlpParams xavier_init(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("xavier_init: need at least two layer dims");
    for (std::size_t d : dims)
        if (d == 0) throw std::invalid_argument("xavier_init: zero layer dim");
    MlpParams p;
    p.dims = dims;
    Rng rng(derive_seed(seed, {0x78617669ULL}));
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const std::size_t fan_in = dims[l];
        const std::size_t fan_out = dims[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Matrix w(fan_out, fan_in);
        for (double& x : w.data) x = rng.uniform(-bound, bound);
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(fan_out, 0.0);
    }
    return p;
}

void forward(const MlpParams& params, const Matrix& x, Matrix& y, ForwardCache* cache) {
    if (x.cols != params.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    if (cache) {
        cache->pre.assign(params.n_layers(), Matrix());
        cache->post.assign(params.n_layers(), Matrix());
    }
    Matrix cur = x;
    for (std::size_t l = 0; l < params.n_layers(); ++l) {
        Matrix z;
        linalg::gemm_nt(cur, params.weights[l], z);
        linalg::add_row_vector(z, params.biases[l]);
        const bool last = l + 1 == params.n_layers();
        if (cache) cache->pre[l] = z;
        if (!last) linalg::relu_inplace(z);
        if (cache) cache->post[l] = z;
        cur = std::move(z);
    }
    y = std::move(cur);
}

std::vector<double> forward_single(const MlpParams& params, const std::vector<double>& input) {
    Matrix x(1, input.size());
    x.data = input;
    Matrix y;
    forward(params, x, y);
    return y.data;
}

Gradients make_zero_gradients(const MlpParams& params) {
    Gradients g;
    for (std::size_t l = 0; l < params.n_layers(); ++l) {
        g.weights.emplace_back(params.weights[l].rows, params.weights[l].cols);
        g.biases.emplace_back(params.biases[l].size(), 0.0);
    }
    return g;
}

namespace {

double residual_loss(const Matrix& y, const Matrix& target, Matrix* dy) {
    if (y.rows != target.rows || y.cols != target.cols)
        throw std::invalid_argument("loss: target dimension mismatch");
    const double inv_b = 1.0 / static_cast<double>(y.rows);
    double total = 0.0;
    if (dy) dy->resize(y.rows, y.cols);
    for (std::size_t i = 0; i < y.data.size(); ++i) {
        const double r = y.data[i] - target.data[i];
        total += 0.5 * r * r;
        if (dy) dy->data[i] = r * inv_b;
    }
    return total * inv_b;
}

}  // namespace

double loss(const MlpParams& params, const Matrix& x, const Matrix& target) {
    Matrix y;
    forward(params, x, y);
    return residual_loss(y, target, nullptr);
}

double loss_and_gradient(const MlpParams& params, const Matrix& x, const Matrix& target,
                         Gradients& grads) {
    if (x.rows == 0) throw std::invalid_argument("loss_and_gradient: empty batch");
    ForwardCache cache;
    Matrix y;
    forward(params, x, y, &cache);

    Matrix delta;  // dL/dZ of the current layer
    const double value = residual_loss(y, target, &delta);

    grads = make_zero_gradients(params);
    for (std::size_t li = params.n_layers(); li-- > 0;) {
        const Matrix& input = li == 0 ? x : cache.post[li - 1];
        linalg::gemm_tn(delta, input, grads.weights[li]);
        grads.biases[li] = linalg::col_sums(delta);
        if (li == 0) break;
        Matrix prev;
        linalg::gemm_nn(delta, params.weights[li], prev);
        linalg::relu_backward_inplace(cache.pre[li - 1], prev);
        delta = std::move(prev);
    }
    return value;
}

AdamState make_adam_state(const MlpParams& params) {
    AdamState s;
    s.m = make_zero_gradients(params);
    s.v = make_zero_gradients(params);
    s.step = 0;
    return s;
}

void adam_update(MlpParams& params, const Gradients& grads, AdamState& state,
                 const TrainConfig& cfg) {
    state.step += 1;
    const double b1 = cfg.adam_beta1;
    const double b2 = cfg.adam_beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    auto update = [&](double& theta, double g, double& m, double& v) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        const double mh = m / bc1;
        const double vh = v / bc2;
        theta -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.adam_epsilon);
    };
    for (std::size_t l = 0; l < params.n_layers(); ++l) {
        auto& w = params.weights[l].data;
        const auto& gw = grads.weights[l].data;
        auto& mw = state.m.weights[l].data;
        auto& vw = state.v.weights[l].data;
        for (std::size_t i = 0; i < w.size(); ++i) update(w[i], gw[i], mw[i], vw[i]);
        auto& b = params.biases[l];
        const auto& gb = grads.biases[l];
        auto& mb = state.m.biases[l];
        auto& vb = state.v.biases[l];
        for (std::size_t i = 0; i < b.size(); ++i) update(b[i], gb[i], mb[i], vb[i]);
    }
}

TrainResult train(MlpParams& params, const Matrix& x_train, const Matrix& y_train,
                  const Matrix* x_val, const Matrix* y_val, const TrainConfig& cfg) {
    if (x_train.rows == 0) throw std::invalid_argument("train: empty training set");
    if (x_train.rows != y_train.rows) throw std::invalid_argument("train: x/y row mismatch");
    if (cfg.batch_size == 0) throw std::invalid_argument("train: zero batch size");

    TrainResult result;
    result.train_loss.push_back(loss(params, x_train, y_train));
    if (x_val && x_val->rows > 0) result.val_loss.push_back(loss(params, *x_val, *y_val));

    AdamState adam = make_adam_state(params);
    std::vector<std::size_t> order(x_train.rows);
    std::iota(order.begin(), order.end(), 0);

    Matrix xb, yb;
    Gradients grads;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, {0x65706f6368ULL, epoch}));
        shuffle_in_place(order, shuffle_rng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t bsz = std::min(cfg.batch_size, order.size() - start);
            xb.resize(bsz, x_train.cols);
            yb.resize(bsz, y_train.cols);
            for (std::size_t i = 0; i < bsz; ++i) {
                const std::size_t src = order[start + i];
                std::copy(x_train.row(src), x_train.row(src) + x_train.cols, xb.row(i));
                std::copy(y_train.row(src), y_train.row(src) + y_train.cols, yb.row(i));
            }
            const double batch_loss = loss_and_gradient(params, xb, yb, grads);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train: loss diverged at epoch " + std::to_string(epoch));
            epoch_loss += batch_loss * static_cast<double>(bsz);
            adam_update(params, grads, adam, cfg);
        }
        result.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
        if (x_val && x_val->rows > 0) result.val_loss.push_back(loss(params, *x_val, *y_val));
    }
    return result;
}

}  // namespace hvacmpc
