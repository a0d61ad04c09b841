#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvacmpc/dynamics.hpp"
#include "hvacmpc/types.hpp"

namespace hvacmpc {

// Accuracy-tracked MSE over a ring of recent squared errors: the most
// recent entry has age 1 and weight phi^1, the oldest age C and weight
// phi^C. Returns 0 with ok=false when the ring is empty.
double discounted_mse(const std::deque<double>& ring, double phi, bool& ok);

// Weight ratio over M discounted MSEs: w_i = (1 - Norm(mse_i)) /
// sum_j (1 - Norm(mse_j)) with Norm the min-max over the M values;
// uniform when all are equal.
std::vector<double> compute_weights(const std::vector<double>& mse);

// Weighted ensemble of dynamics models. Weights update only from real
// observed transitions (record_observation); prediction and rollout never
// touch them.
class Ensemble {
public:
    Ensemble(std::vector<DynamicsModel> models, std::size_t error_window = 4, double phi = 0.9);

    std::size_t size() const { return models_.size(); }
    std::size_t n_zones() const { return models_.front().n_zones; }
    const DynamicsModel& model(std::size_t i) const { return models_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    std::vector<double> discounted_mses() const;

    // Record one real transition: push each model's squared prediction
    // error (standardized delta space, summed over components) into its
    // ring, then recompute the weights.
    void record_observation(const FullState& prior, const Action& action,
                            const FullState& observed_next);

    // Weighted next building state: sum_i w_i * (s + destd(f_i(s,a,e))).
    std::vector<double> predict(const std::vector<double>& s_raw, const std::vector<double>& a_raw,
                                const std::vector<double>& e_raw) const;

    // Iterated prediction under an exogenous environment forecast; the
    // weights stay frozen for the whole rollout. actions and env_forecast
    // must both have length H. Throws with the step index if a prediction
    // goes non-finite.
    std::vector<std::vector<double>> rollout(const std::vector<double>& s0_raw,
                                             const std::vector<std::vector<double>>& actions,
                                             const std::vector<std::vector<double>>& env_forecast) const;

    void reset_error_history();

    std::size_t error_window() const { return error_window_; }
    double phi() const { return phi_; }

private:
    std::vector<DynamicsModel> models_;
    std::vector<std::deque<double>> error_rings_;
    std::vector<double> weights_;
    std::size_t error_window_;
    double phi_;
};

// Generic multi-step rollout used both by Ensemble::rollout and by tests
// that substitute the simulator as a perfect one-step model.
template <typename PredictFn>
std::vector<std::vector<double>> rollout_with(PredictFn&& predict, std::vector<double> state,
                                              const std::vector<std::vector<double>>& actions,
                                              const std::vector<std::vector<double>>& env_forecast) {
    if (actions.size() != env_forecast.size())
        throw std::invalid_argument("rollout_with: actions/forecast length mismatch");
    std::vector<std::vector<double>> out;
    out.reserve(actions.size());
    for (std::size_t t = 0; t < actions.size(); ++t) {
        state = predict(state, actions[t], env_forecast[t]);
        out.push_back(state);
    }
    return out;
}

// Directory layout: model_<i>.txt for i in 0..M-1 plus manifest.txt with
// M, the error window C, phi and the per-model seeds.
struct EnsembleManifest {
    std::size_t n_models = 0;
    std::size_t error_window = 4;
    double phi = 0.9;
    std::vector<std::uint64_t> seeds;
};

void save_ensemble(const Ensemble& ensemble, const EnsembleManifest& manifest,
                   const std::string& dir);
Ensemble load_ensemble(const std::string& dir, EnsembleManifest* manifest_out = nullptr);

}  // namespace hvacmpc
