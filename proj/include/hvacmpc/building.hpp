#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hvacmpc/occupancy.hpp"
#include "hvacmpc/pmv.hpp"
#include "hvacmpc/types.hpp"
#include "hvacmpc/weather.hpp"

namespace hvacmpc {

// First-order RC thermal network standing in for a whole-building
// simulator: one capacitance node per zone, resistive paths to outdoors
// and between adjacent zones, setpoint-tracking HVAC with capacity
// clipping and a deadband.
struct BuildingConfig {
    std::size_t n_zones = 5;
    std::vector<double> capacitance_kwh_per_c;   // C_z
    std::vector<double> r_outdoor_c_per_kw;      // zone <-> outdoors
    // Symmetric inter-zone resistances; infinity = no adjacency.
    std::vector<std::vector<double>> r_interzone_c_per_kw;
    std::vector<double> heat_capacity_kw;        // P_h
    std::vector<double> cool_capacity_kw;        // P_c
    double heating_efficiency = 0.9;             // eta_h
    double cooling_cop = 3.0;
    std::vector<double> solar_aperture_m2;       // effective collecting area
    double occupant_gain_kw = 0.3;
    double rh_relax_coeff = 0.05;                // indoor RH step toward outdoor
    double timestep_minutes = 15.0;
    ComfortParams comfort;

    double timestep_hours() const { return timestep_minutes / 60.0; }

    // Five zones: ring of four perimeter zones around a core, zone 2
    // south-facing with 1.5x solar aperture.
    static BuildingConfig standard_five_zone();
    void validate() const;  // throws std::invalid_argument
};

struct StepResult {
    FullState next_state;
    std::vector<double> heat_kwh;  // per zone, this step
    std::vector<double> cool_kwh;
};

class Simulator {
public:
    Simulator(BuildingConfig config, FullState initial);

    // Default initial state: all zones 22 degC, RH 0.45, energies 0, PMV
    // consistent with the comfort parameters.
    static FullState default_initial_state(const BuildingConfig& config,
                                           const EnvironmentState& env0);

    const FullState& state() const { return state_; }
    const BuildingConfig& config() const { return config_; }

    // Advance one step under `action` with exogenous conditions `env`
    // (the environment during the step) and `env_next` (stored into the
    // returned state, ground truth at t+1).
    StepResult step(const Action& action, const EnvironmentState& env,
                    const EnvironmentState& env_next);

private:
    BuildingConfig config_;
    FullState state_;
};

// Pure single-step dynamics used by both the Simulator and the
// perfect-model planner: advances `zones` under the config.
std::vector<ZoneBuildingState> rc_step(const BuildingConfig& config,
                                       const std::vector<ZoneBuildingState>& zones,
                                       const Action& action, const EnvironmentState& env,
                                       std::vector<double>* heat_kwh_out = nullptr,
                                       std::vector<double>* cool_kwh_out = nullptr);

// Closed-loop episode driver. The controller sees the step index and the
// current full state. Returns the transition trace plus the per-step
// reward computed by `reward_fn` on (post-step zones, occupancy during
// the step). Weather index t+1 clamps to the final sample at the series
// end.
struct EpisodeTrace {
    Dataset transitions;
    std::vector<double> rewards;
};

using ControllerFn = std::function<Action(std::size_t step, const FullState& state)>;
using RewardFn = std::function<double(const std::vector<ZoneBuildingState>& zones,
                                      const std::vector<int>& occupancy)>;

EpisodeTrace rollout_episode(const ControllerFn& controller, const BuildingConfig& config,
                             const WeatherSeries& weather, const OccupancySchedule& schedule,
                             std::size_t n_steps, const RewardFn& reward_fn);

}  // namespace hvacmpc
