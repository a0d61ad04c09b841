#include "hvacmpc/dynamics.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hvacmpc {

namespace {

std::vector<double> concat_input(const std::vector<double>& s, const std::vector<double>& a,
                                 const std::vector<double>& e) {
    std::vector<double> x;
    x.reserve(s.size() + a.size() + e.size());
    x.insert(x.end(), s.begin(), s.end());
    x.insert(x.end(), a.begin(), a.end());
    x.insert(x.end(), e.begin(), e.end());
    return x;
}

}  // namespace

std::vector<double> DynamicsModel::predict_delta_standardized(const std::vector<double>& s_raw,
                                                              const std::vector<double>& a_raw,
                                                              const std::vector<double>& e_raw) const {
    auto x = concat_input(s_raw, a_raw, e_raw);
    if (x.size() != input_dim())
        throw std::invalid_argument("DynamicsModel: input dimension mismatch");
    standardize_row(x.data(), x.size(), input_stats);
    return forward_single(net, x);
}

std::vector<double> DynamicsModel::predict_next_state(const std::vector<double>& s_raw,
                                                      const std::vector<double>& a_raw,
                                                      const std::vector<double>& e_raw) const {
    auto delta = predict_delta_standardized(s_raw, a_raw, e_raw);
    destandardize_row(delta.data(), delta.size(), delta_stats);
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] += s_raw[i];
    return delta;
}

NormStats fit_input_stats(const Dataset& data) {
    std::vector<std::vector<double>> rows;
    rows.reserve(data.size());
    for (const auto& tr : data)
        rows.push_back(concat_input(flatten_zones(tr.state.zones), flatten_action(tr.action),
                                    flatten_env(tr.state.env)));
    return fit_norm_stats(rows);
}

NormStats fit_delta_stats(const Dataset& data) {
    std::vector<std::vector<double>> rows;
    rows.reserve(data.size());
    for (const auto& tr : data) {
        auto s0 = flatten_zones(tr.state.zones);
        auto s1 = flatten_zones(tr.next_state.zones);
        for (std::size_t i = 0; i < s0.size(); ++i) s1[i] -= s0[i];
        rows.push_back(std::move(s1));
    }
    return fit_norm_stats(rows);
}

DynamicsTrainingData build_training_matrices(const Dataset& data, const NormStats& input_stats,
                                             const NormStats& delta_stats) {
    if (data.empty()) throw std::invalid_argument("build_training_matrices: empty dataset");
    const std::size_t n = data.front().state.n_zones();
    DynamicsTrainingData out;
    out.inputs.resize(data.size(), building_state_dim(n) + action_dim(n) + env_state_dim(n));
    out.targets.resize(data.size(), building_state_dim(n));
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto& tr = data[r];
        auto x = concat_input(flatten_zones(tr.state.zones), flatten_action(tr.action),
                              flatten_env(tr.state.env));
        standardize_row(x.data(), x.size(), input_stats);
        std::copy(x.begin(), x.end(), out.inputs.row(r));

        auto s0 = flatten_zones(tr.state.zones);
        auto s1 = flatten_zones(tr.next_state.zones);
        for (std::size_t i = 0; i < s0.size(); ++i) s1[i] -= s0[i];
        standardize_row(s1.data(), s1.size(), delta_stats);
        std::copy(s1.begin(), s1.end(), out.targets.row(r));
    }
    return out;
}

std::vector<std::size_t> dynamics_layer_dims(std::size_t n_zones, std::size_t hidden) {
    const std::size_t in =
        building_state_dim(n_zones) + action_dim(n_zones) + env_state_dim(n_zones);
    return {in, hidden, hidden, building_state_dim(n_zones)};
}

namespace {

void write_vector(std::ofstream& out, const std::string& name, const std::vector<double>& v) {
    out << name << ' ' << v.size();
    char buf[64];
    for (double x : v) {
        std::snprintf(buf, sizeof(buf), " %.17g", x);
        out << buf;
    }
    out << '\n';
}

std::vector<double> read_vector(std::istream& in, const std::string& expected_name) {
    std::string name;
    std::size_t n = 0;
    if (!(in >> name >> n) || name != expected_name)
        throw std::runtime_error("model file: expected '" + expected_name + "' section, got '" +
                                 name + "'");
    std::vector<double> v(n);
    for (double& x : v)
        if (!(in >> x)) throw std::runtime_error("model file: truncated '" + expected_name + "'");
    return v;
}

}  // namespace

void save_model(const DynamicsModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << "hvacmpc-model v1\n";
    out << "zones " << model.n_zones << '\n';
    out << "layers";
    for (std::size_t d : model.net.dims) out << ' ' << d;
    out << '\n';
    char hashbuf[32];
    std::snprintf(hashbuf, sizeof(hashbuf), "%016" PRIx64, flatten_order_hash(model.n_zones));
    out << "flatten_hash " << hashbuf << '\n';
    write_vector(out, "input_mean", model.input_stats.mean);
    write_vector(out, "input_std", model.input_stats.stddev);
    write_vector(out, "delta_mean", model.delta_stats.mean);
    write_vector(out, "delta_std", model.delta_stats.stddev);
    for (std::size_t l = 0; l < model.net.n_layers(); ++l) {
        const auto& w = model.net.weights[l];
        out << "W" << l << ' ' << w.rows << ' ' << w.cols << '\n';
        char buf[64];
        for (std::size_t i = 0; i < w.rows; ++i) {
            const double* row = w.row(i);
            for (std::size_t j = 0; j < w.cols; ++j) {
                std::snprintf(buf, sizeof(buf), j == 0 ? "%.17g" : " %.17g", row[j]);
                out << buf;
            }
            out << '\n';
        }
        write_vector(out, "b" + std::to_string(l), model.net.biases[l]);
    }
    if (!out) throw std::runtime_error("write failed for model file: " + path);
}

DynamicsModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "hvacmpc-model" || version != "v1")
        throw std::runtime_error("model file: bad header in " + path);

    DynamicsModel model;
    std::string key;
    in >> key >> model.n_zones;
    if (key != "zones") throw std::runtime_error("model file: expected 'zones'");

    in >> key;
    if (key != "layers") throw std::runtime_error("model file: expected 'layers'");
    std::string rest;
    std::getline(in, rest);
    std::istringstream dims_in(rest);
    std::size_t d;
    while (dims_in >> d) model.net.dims.push_back(d);
    if (model.net.dims.size() < 2) throw std::runtime_error("model file: bad layer dims");

    std::string hash_hex;
    in >> key >> hash_hex;
    if (key != "flatten_hash") throw std::runtime_error("model file: expected 'flatten_hash'");
    char expect[32];
    std::snprintf(expect, sizeof(expect), "%016" PRIx64, flatten_order_hash(model.n_zones));
    if (hash_hex != expect)
        throw std::runtime_error("model file: flattening-order hash mismatch (file " + hash_hex +
                                 ", expected " + expect + ")");

    model.input_stats.mean = read_vector(in, "input_mean");
    model.input_stats.stddev = read_vector(in, "input_std");
    model.delta_stats.mean = read_vector(in, "delta_mean");
    model.delta_stats.stddev = read_vector(in, "delta_std");

    for (std::size_t l = 0; l + 1 < model.net.dims.size(); ++l) {
        std::size_t rows = 0, cols = 0;
        in >> key >> rows >> cols;
        if (key != "W" + std::to_string(l) || rows != model.net.dims[l + 1] ||
            cols != model.net.dims[l])
            throw std::runtime_error("model file: bad weight header for layer " +
                                     std::to_string(l));
        linalg::Matrix w(rows, cols);
        for (double& x : w.data)
            if (!(in >> x)) throw std::runtime_error("model file: truncated weights");
        model.net.weights.push_back(std::move(w));
        model.net.biases.push_back(read_vector(in, "b" + std::to_string(l)));
        if (model.net.biases.back().size() != model.net.dims[l + 1])
            throw std::runtime_error("model file: bias length mismatch");
    }
    if (model.input_stats.dim() != model.net.input_dim() ||
        model.delta_stats.dim() != model.net.output_dim())
        throw std::runtime_error("model file: stats dimensions inconsistent with layers");
    return model;
}

}  // namespace hvacmpc
