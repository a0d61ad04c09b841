#include "hvacmpc/controllers.hpp"

#include <stdexcept>

#include "hvacmpc/rng.hpp"

namespace hvacmpc {

ControllerKind parse_controller_kind(const std::string& name) {
    if (name == "rule") return ControllerKind::Rule;
    if (name == "rs") return ControllerKind::RandomShooting;
    if (name == "cem") return ControllerKind::Cem;
    if (name == "mppi") return ControllerKind::Mppi;
    throw std::invalid_argument("unknown controller: " + name + " (expected rule|rs|cem|mppi)");
}

std::string controller_kind_name(ControllerKind k) {
    switch (k) {
        case ControllerKind::Rule: return "rule";
        case ControllerKind::RandomShooting: return "rs";
        case ControllerKind::Cem: return "cem";
        case ControllerKind::Mppi: return "mppi";
    }
    return "?";
}

namespace {

std::vector<double> default_building_nominal(std::size_t n_zones) {
    const auto sp = RuleBasedPolicy::warmup_setpoints();
    std::vector<double> a(2 * n_zones);
    for (std::size_t i = 0; i < n_zones; ++i) {
        a[2 * i] = sp.heat_sp;
        a[2 * i + 1] = sp.cool_sp;
    }
    return a;
}

}  // namespace

PlannerController::PlannerController(ControllerKind kind, const Ensemble& ensemble,
                                     const WeatherSeries& weather,
                                     const OccupancySchedule& schedule, RewardConfig reward_cfg,
                                     PlannerConfig planner_cfg, std::uint64_t seed)
    : kind_(kind), ensemble_(ensemble), weather_(weather), schedule_(schedule),
      reward_cfg_(std::move(reward_cfg)), cfg_(std::move(planner_cfg)), seed_(seed) {
    if (kind_ == ControllerKind::Rule)
        throw std::invalid_argument("PlannerController: use RuleController for the rule policy");
    if (cfg_.init_action.empty()) cfg_.init_action = default_building_nominal(ensemble_.n_zones());
    cfg_.validate();
    buffer_ = ActionSequenceBuffer::initialized(cfg_.horizon, cfg_.init_action);
    // The MPPI nominal starts from the rule-based schedule for the first
    // H slots; later tail slots are refilled the same way in act().
    RuleBasedPolicy rule{ensemble_.n_zones()};
    for (std::size_t t = 0; t < cfg_.horizon; ++t) {
        const auto a = flatten_action(rule.action(t));
        std::copy(a.begin(), a.end(), buffer_.actions.row(t));
    }
}

Action PlannerController::act(std::size_t step, const FullState& state) {
    EnsemblePlanningModel model(ensemble_, make_forecast(weather_, schedule_, step, cfg_.horizon),
                                reward_cfg_);
    const auto s0 = flatten_zones(state.zones);
    const std::uint64_t plan_seed = derive_seed(seed_, {0x706c616eULL, step});
    RuleBasedPolicy rule{ensemble_.n_zones()};

    std::vector<double> first;
    switch (kind_) {
        case ControllerKind::RandomShooting: {
            const auto plan = plan_random_shooting(model, s0, cfg_, plan_seed);
            first.assign(plan.row(0), plan.row(0) + plan.cols);
            break;
        }
        case ControllerKind::Cem: {
            linalg::Matrix init_mean(cfg_.horizon, 2 * ensemble_.n_zones());
            for (std::size_t t = 0; t < cfg_.horizon; ++t) {
                const auto a = flatten_action(rule.action(step + t));
                std::copy(a.begin(), a.end(), init_mean.row(t));
            }
            const auto plan = plan_cem(model, s0, cfg_, plan_seed, &init_mean);
            first.assign(plan.row(0), plan.row(0) + plan.cols);
            break;
        }
        case ControllerKind::Mppi: {
            const auto refill = flatten_action(rule.action(step + cfg_.horizon));
            auto result = plan_mppi(model, s0, cfg_, std::move(buffer_), plan_seed, &refill);
            buffer_ = std::move(result.buffer);
            first = std::move(result.executed);
            break;
        }
        case ControllerKind::Rule: break;
    }
    return clip_action(unflatten_action(first));
}

}  // namespace hvacmpc
