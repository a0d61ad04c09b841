#include "hvacmpc/ensemble.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hvacmpc {

double discounted_mse(const std::deque<double>& ring, double phi, bool& ok) {
    if (ring.empty()) {
        ok = false;
        return 0.0;
    }
    ok = true;
    // ring is ordered oldest..newest; newest has age 1.
    double total = 0.0;
    double age_weight = phi;
    for (auto it = ring.rbegin(); it != ring.rend(); ++it) {
        total += age_weight * *it;
        age_weight *= phi;
    }
    return total;
}

std::vector<double> compute_weights(const std::vector<double>& mse) {
    if (mse.empty()) throw std::invalid_argument("compute_weights: need at least one model");
    const std::size_t m = mse.size();
    double lo = mse[0], hi = mse[0];
    for (double v : mse) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) return std::vector<double>(m, 1.0 / static_cast<double>(m));
    std::vector<double> w(m);
    double denom = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = 1.0 - (mse[i] - lo) / (hi - lo);
        denom += w[i];
    }
    for (double& x : w) x /= denom;
    return w;
}

Ensemble::Ensemble(std::vector<DynamicsModel> models, std::size_t error_window, double phi)
    : models_(std::move(models)), error_window_(error_window), phi_(phi) {
    if (models_.empty()) throw std::invalid_argument("Ensemble: need at least one model");
    const std::size_t in = models_.front().input_dim();
    const std::size_t out = models_.front().output_dim();
    for (const auto& m : models_)
        if (m.input_dim() != in || m.output_dim() != out)
            throw std::invalid_argument("Ensemble: models disagree on dimensions");
    error_rings_.resize(models_.size());
    weights_.assign(models_.size(), 1.0 / static_cast<double>(models_.size()));
}

std::vector<double> Ensemble::discounted_mses() const {
    std::vector<double> mses(models_.size(), 0.0);
    for (std::size_t i = 0; i < models_.size(); ++i) {
        bool ok = false;
        mses[i] = discounted_mse(error_rings_[i], phi_, ok);
    }
    return mses;
}

void Ensemble::record_observation(const FullState& prior, const Action& action,
                                  const FullState& observed_next) {
    const auto s = flatten_zones(prior.zones);
    const auto a = flatten_action(action);
    const auto e = flatten_env(prior.env);
    auto true_delta = flatten_zones(observed_next.zones);
    for (std::size_t i = 0; i < s.size(); ++i) true_delta[i] -= s[i];

    for (std::size_t m = 0; m < models_.size(); ++m) {
        auto target = true_delta;
        standardize_row(target.data(), target.size(), models_[m].delta_stats);
        const auto pred = models_[m].predict_delta_standardized(s, a, e);
        double err = 0.0;
        for (std::size_t j = 0; j < pred.size(); ++j) {
            const double d = pred[j] - target[j];
            err += d * d;
        }
        auto& ring = error_rings_[m];
        ring.push_back(err);
        while (ring.size() > error_window_) ring.pop_front();
    }
    // Empty rings (cold start) give all-zero MSEs and fall back to
    // uniform weights inside compute_weights.
    weights_ = compute_weights(discounted_mses());
}

std::vector<double> Ensemble::predict(const std::vector<double>& s_raw,
                                      const std::vector<double>& a_raw,
                                      const std::vector<double>& e_raw) const {
    std::vector<double> out(models_.front().output_dim(), 0.0);
    for (std::size_t m = 0; m < models_.size(); ++m) {
        const auto next = models_[m].predict_next_state(s_raw, a_raw, e_raw);
        const double w = weights_[m];
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * next[j];
    }
    return out;
}

std::vector<std::vector<double>> Ensemble::rollout(
    const std::vector<double>& s0_raw, const std::vector<std::vector<double>>& actions,
    const std::vector<std::vector<double>>& env_forecast) const {
    auto result = rollout_with(
        [this](const std::vector<double>& s, const std::vector<double>& a,
               const std::vector<double>& e) { return predict(s, a, e); },
        s0_raw, actions, env_forecast);
    for (std::size_t t = 0; t < result.size(); ++t)
        for (double v : result[t])
            if (!std::isfinite(v))
                throw std::runtime_error("Ensemble::rollout: non-finite prediction at step " +
                                         std::to_string(t));
    return result;
}

void Ensemble::reset_error_history() {
    for (auto& ring : error_rings_) ring.clear();
    weights_.assign(models_.size(), 1.0 / static_cast<double>(models_.size()));
}

void save_ensemble(const Ensemble& ensemble, const EnsembleManifest& manifest,
                   const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (std::size_t i = 0; i < ensemble.size(); ++i)
        save_model(ensemble.model(i), (fs::path(dir) / ("model_" + std::to_string(i) + ".txt")).string());
    std::ofstream out(fs::path(dir) / "manifest.txt");
    if (!out) throw std::runtime_error("cannot write ensemble manifest in " + dir);
    out << "models " << ensemble.size() << '\n';
    out << "error_window " << ensemble.error_window() << '\n';
    out << "phi " << manifest.phi << '\n';
    out << "seeds";
    for (auto s : manifest.seeds) out << ' ' << s;
    out << '\n';
}

Ensemble load_ensemble(const std::string& dir, EnsembleManifest* manifest_out) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "manifest.txt");
    if (!in) throw std::runtime_error("cannot open ensemble manifest in " + dir);
    EnsembleManifest man;
    std::string key;
    if (!(in >> key >> man.n_models) || key != "models")
        throw std::runtime_error("ensemble manifest: expected 'models'");
    if (!(in >> key >> man.error_window) || key != "error_window")
        throw std::runtime_error("ensemble manifest: expected 'error_window'");
    if (!(in >> key >> man.phi) || key != "phi")
        throw std::runtime_error("ensemble manifest: expected 'phi'");
    if (in >> key && key == "seeds") {
        std::uint64_t s;
        while (in >> s) man.seeds.push_back(s);
    }
    if (man.n_models == 0) throw std::runtime_error("ensemble manifest: zero models");

    std::vector<DynamicsModel> models;
    models.reserve(man.n_models);
    for (std::size_t i = 0; i < man.n_models; ++i)
        models.push_back(load_model((fs::path(dir) / ("model_" + std::to_string(i) + ".txt")).string()));
    if (manifest_out) *manifest_out = man;
    return Ensemble(std::move(models), man.error_window, man.phi);
}

}  // namespace hvacmpc
