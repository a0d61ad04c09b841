#include "hvacmpc/planning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hvacmpc {

std::vector<double> evaluate_sequences(PlanningModel& model, const std::vector<double>& s0,
                                       const std::vector<linalg::Matrix>& actions, double gamma) {
    if (s0.size() != model.state_dim())
        throw std::invalid_argument("evaluate_sequences: state dimension mismatch");
    if (actions.empty()) return {};
    const std::size_t k = actions.front().rows;

    linalg::Matrix states(k, s0.size());
    for (std::size_t i = 0; i < k; ++i)
        std::copy(s0.begin(), s0.end(), states.row(i));

    std::vector<double> returns(k, 0.0);
    std::vector<double> step_r;
    double discount = 1.0;
    for (std::size_t t = 0; t < actions.size(); ++t) {
        if (actions[t].rows != k || actions[t].cols != model.action_dim())
            throw std::invalid_argument("evaluate_sequences: bad action slice at step " +
                                        std::to_string(t));
        model.step_batch(states, actions[t], t);
        model.step_rewards(states, t, step_r);
        for (std::size_t i = 0; i < k; ++i) returns[i] += discount * step_r[i];
        discount *= gamma;
    }
    return returns;
}

double evaluate_sequence(PlanningModel& model, const std::vector<double>& s0,
                         const std::vector<std::vector<double>>& actions, double gamma) {
    std::vector<linalg::Matrix> slices;
    slices.reserve(actions.size());
    for (const auto& a : actions) {
        linalg::Matrix m(1, a.size());
        m.data = a;
        slices.push_back(std::move(m));
    }
    const auto r = evaluate_sequences(model, s0, slices, gamma);
    return r.empty() ? 0.0 : r.front();
}

EnvForecast make_forecast(const WeatherSeries& weather, const OccupancySchedule& schedule,
                          std::size_t start_step, std::size_t horizon) {
    if (weather.size() == 0) throw std::invalid_argument("make_forecast: empty weather series");
    EnvForecast f;
    f.env.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t t = start_step + h;
        const std::size_t idx = t < weather.size() ? t : weather.size() - 1;
        const WeatherPoint& p = weather.at_step(idx);
        EnvironmentState e;
        e.temp_out = p.temp_out;
        e.rh_out = p.rh_out;
        e.diffuse_solar = p.diffuse_solar;
        e.direct_solar = p.direct_solar;
        e.incident_angle = p.incident_angle;
        e.wind_speed = p.wind_speed;
        e.wind_dir = p.wind_dir;
        e.occupancy = schedule.flags(t);
        f.env.push_back(std::move(e));
    }
    return f;
}

void setpoint_action_bounds(std::size_t n_zones, std::vector<double>& lo, std::vector<double>& hi) {
    lo.resize(2 * n_zones);
    hi.resize(2 * n_zones);
    for (std::size_t i = 0; i < n_zones; ++i) {
        lo[2 * i] = kHeatSpMinC;
        hi[2 * i] = kHeatSpMaxC;
        lo[2 * i + 1] = kCoolSpMinC;
        hi[2 * i + 1] = kCoolSpMaxC;
    }
}

// --- EnsemblePlanningModel ---------------------------------------------

EnsemblePlanningModel::EnsemblePlanningModel(const Ensemble& ensemble, EnvForecast forecast,
                                             RewardConfig reward_cfg)
    : ensemble_(ensemble), forecast_(std::move(forecast)), reward_cfg_(std::move(reward_cfg)) {
    env_rows_.reserve(forecast_.size());
    for (const auto& e : forecast_.env) env_rows_.push_back(flatten_env(e));
}

std::size_t EnsemblePlanningModel::action_dim() const {
    return 2 * ensemble_.n_zones();
}

void EnsemblePlanningModel::action_bounds(std::vector<double>& lo, std::vector<double>& hi) const {
    setpoint_action_bounds(ensemble_.n_zones(), lo, hi);
}

void EnsemblePlanningModel::step_batch(linalg::Matrix& states, const linalg::Matrix& actions,
                                       std::size_t t) {
    if (t >= forecast_.size())
        throw std::invalid_argument("EnsemblePlanningModel: forecast shorter than rollout");
    const std::size_t k = states.rows;
    const std::size_t s_dim = state_dim();
    const std::size_t a_dim = actions.cols;
    const auto& env = env_rows_[t];
    const std::size_t in_dim = s_dim + a_dim + env.size();

    input_raw_.resize(k, in_dim);
    for (std::size_t i = 0; i < k; ++i) {
        double* row = input_raw_.row(i);
        std::copy(states.row(i), states.row(i) + s_dim, row);
        std::copy(actions.row(i), actions.row(i) + a_dim, row + s_dim);
        std::copy(env.begin(), env.end(), row + s_dim + a_dim);
    }

    next_accum_.resize(k, s_dim);
    for (std::size_t m = 0; m < ensemble_.size(); ++m) {
        const DynamicsModel& model = ensemble_.model(m);
        input_std_ = input_raw_;
        for (std::size_t i = 0; i < k; ++i)
            standardize_row(input_std_.row(i), in_dim, model.input_stats);

        forward(model.net, input_std_, layer_out_);

        const double w = ensemble_.weights()[m];
        const auto& d_mean = model.delta_stats.mean;
        const auto& d_std = model.delta_stats.stddev;
        for (std::size_t i = 0; i < k; ++i) {
            const double* delta = layer_out_.row(i);
            const double* s_row = states.row(i);
            double* out = next_accum_.row(i);
            for (std::size_t j = 0; j < s_dim; ++j)
                out[j] += w * (s_row[j] + delta[j] * d_std[j] + d_mean[j]);
        }
    }
    states = std::move(next_accum_);
}

void EnsemblePlanningModel::step_rewards(const linalg::Matrix& states, std::size_t t,
                                         std::vector<double>& out) const {
    const auto& occupancy = forecast_.env[t].occupancy;
    out.resize(states.rows);
    for (std::size_t i = 0; i < states.rows; ++i)
        out[i] = reward_from_flat(states.row(i), ensemble_.n_zones(), occupancy, reward_cfg_);
}

// --- SimulatorPlanningModel ---------------------------------------------

SimulatorPlanningModel::SimulatorPlanningModel(BuildingConfig config, EnvForecast forecast,
                                               RewardConfig reward_cfg)
    : config_(std::move(config)), forecast_(std::move(forecast)),
      reward_cfg_(std::move(reward_cfg)) {
    config_.validate();
}

void SimulatorPlanningModel::action_bounds(std::vector<double>& lo,
                                           std::vector<double>& hi) const {
    setpoint_action_bounds(config_.n_zones, lo, hi);
}

void SimulatorPlanningModel::step_batch(linalg::Matrix& states, const linalg::Matrix& actions,
                                        std::size_t t) {
    if (t >= forecast_.size())
        throw std::invalid_argument("SimulatorPlanningModel: forecast shorter than rollout");
    const std::size_t dim = state_dim();
    for (std::size_t i = 0; i < states.rows; ++i) {
        std::vector<double> flat(states.row(i), states.row(i) + dim);
        const auto zones = unflatten_zones(flat);
        std::vector<double> a(actions.row(i), actions.row(i) + actions.cols);
        const auto next = rc_step(config_, zones, unflatten_action(a), forecast_.env[t]);
        const auto next_flat = flatten_zones(next);
        std::copy(next_flat.begin(), next_flat.end(), states.row(i));
    }
}

void SimulatorPlanningModel::step_rewards(const linalg::Matrix& states, std::size_t t,
                                          std::vector<double>& out) const {
    const auto& occupancy = forecast_.env[t].occupancy;
    out.resize(states.rows);
    for (std::size_t i = 0; i < states.rows; ++i)
        out[i] = reward_from_flat(states.row(i), config_.n_zones, occupancy, reward_cfg_);
}

}  // namespace hvacmpc
