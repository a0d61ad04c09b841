#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "hvacmpc/building.hpp"
#include "hvacmpc/ensemble.hpp"
#include "hvacmpc/planners.hpp"
#include "hvacmpc/rule_based.hpp"

namespace hvacmpc {

enum class ControllerKind { Rule, RandomShooting, Cem, Mppi };

ControllerKind parse_controller_kind(const std::string& name);  // rule|rs|cem|mppi
std::string controller_kind_name(ControllerKind k);

// Closed-loop controller: returns the action to execute at each step.
class Controller {
public:
    virtual ~Controller() = default;
    virtual Action act(std::size_t step, const FullState& state) = 0;
};

class RuleController : public Controller {
public:
    explicit RuleController(std::size_t n_zones) : policy_{n_zones} {}
    Action act(std::size_t step, const FullState&) override { return policy_.action(step); }

private:
    RuleBasedPolicy policy_;
};

// Receding-horizon MPC step: plan H actions against the ensemble with the
// ground-truth environment forecast, execute only the first. RS and CEM
// re-plan from scratch each step; MPPI warm-starts from its shifted
// buffer.
class PlannerController : public Controller {
public:
    PlannerController(ControllerKind kind, const Ensemble& ensemble, const WeatherSeries& weather,
                      const OccupancySchedule& schedule, RewardConfig reward_cfg,
                      PlannerConfig planner_cfg, std::uint64_t seed);

    Action act(std::size_t step, const FullState& state) override;

private:
    ControllerKind kind_;
    const Ensemble& ensemble_;
    const WeatherSeries& weather_;
    const OccupancySchedule& schedule_;
    RewardConfig reward_cfg_;
    PlannerConfig cfg_;
    std::uint64_t seed_;
    ActionSequenceBuffer buffer_;
};

}  // namespace hvacmpc
