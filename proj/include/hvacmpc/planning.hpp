#pragma once

#include <cstdint>
#include <vector>

#include "hvacmpc/building.hpp"
#include "hvacmpc/ensemble.hpp"
#include "hvacmpc/linalg.hpp"
#include "hvacmpc/reward.hpp"

namespace hvacmpc {

// One-step dynamics plus reward surface the planners sample against.
// Candidates advance in lockstep: `states` holds K rows, one per
// trajectory. `t` indexes the environment forecast for the step taken,
// so implementations can consume exogenous ground truth.
class PlanningModel {
public:
    virtual ~PlanningModel() = default;

    virtual std::size_t state_dim() const = 0;
    virtual std::size_t action_dim() const = 0;
    virtual void action_bounds(std::vector<double>& lo, std::vector<double>& hi) const = 0;

    virtual void step_batch(linalg::Matrix& states, const linalg::Matrix& actions,
                            std::size_t t) = 0;
    // Reward of each post-step row, with the occupancy in effect when the
    // action was taken (forecast index t).
    virtual void step_rewards(const linalg::Matrix& states, std::size_t t,
                              std::vector<double>& out) const = 0;
};

// Discounted return of each of the K action sequences, actions[t] being
// the K x action_dim slice for step t.
std::vector<double> evaluate_sequences(PlanningModel& model, const std::vector<double>& s0,
                                       const std::vector<linalg::Matrix>& actions, double gamma);

// Single-sequence convenience wrapper (K = 1).
double evaluate_sequence(PlanningModel& model, const std::vector<double>& s0,
                         const std::vector<std::vector<double>>& actions, double gamma);

// Exogenous inputs for one planning call: environment rows for forecast
// steps 0..H-1 (already clamped at the weather-series end by the caller).
struct EnvForecast {
    std::vector<EnvironmentState> env;

    std::size_t size() const { return env.size(); }
};

EnvForecast make_forecast(const WeatherSeries& weather, const OccupancySchedule& schedule,
                          std::size_t start_step, std::size_t horizon);

// Planner model backed by the learned ensemble: batched per-model forward
// passes combined with the current ensemble weights (frozen for the
// call).
class EnsemblePlanningModel : public PlanningModel {
public:
    EnsemblePlanningModel(const Ensemble& ensemble, EnvForecast forecast, RewardConfig reward_cfg);

    std::size_t state_dim() const override { return ensemble_.model(0).output_dim(); }
    std::size_t action_dim() const override;
    void action_bounds(std::vector<double>& lo, std::vector<double>& hi) const override;
    void step_batch(linalg::Matrix& states, const linalg::Matrix& actions, std::size_t t) override;
    void step_rewards(const linalg::Matrix& states, std::size_t t,
                      std::vector<double>& out) const override;

private:
    const Ensemble& ensemble_;
    EnvForecast forecast_;
    RewardConfig reward_cfg_;
    std::vector<std::vector<double>> env_rows_;  // flattened env per forecast step
    // scratch, reused across steps
    linalg::Matrix input_raw_, input_std_, layer_out_, next_accum_;
    std::vector<linalg::Matrix> scratch_;
};

// Perfect-model planner backed by the ground-truth RC dynamics; used to
// isolate controller behaviour from model error.
class SimulatorPlanningModel : public PlanningModel {
public:
    SimulatorPlanningModel(BuildingConfig config, EnvForecast forecast, RewardConfig reward_cfg);

    std::size_t state_dim() const override { return building_state_dim(config_.n_zones); }
    std::size_t action_dim() const override { return 2 * config_.n_zones; }
    void action_bounds(std::vector<double>& lo, std::vector<double>& hi) const override;
    void step_batch(linalg::Matrix& states, const linalg::Matrix& actions, std::size_t t) override;
    void step_rewards(const linalg::Matrix& states, std::size_t t,
                      std::vector<double>& out) const override;

private:
    BuildingConfig config_;
    EnvForecast forecast_;
    RewardConfig reward_cfg_;
};

// Per-dimension setpoint bounds for an N-zone action vector
// [heat_0, cool_0, heat_1, ...].
void setpoint_action_bounds(std::size_t n_zones, std::vector<double>& lo, std::vector<double>& hi);

}  // namespace hvacmpc
