#pragma once

#include <vector>

#include "hvacmpc/building.hpp"
#include "hvacmpc/normalize.hpp"
#include "hvacmpc/types.hpp"

namespace hvacmpc {

// Per-step reward R = -sum_i (rho_i * Norm(|PMV_i|) + Norm(E_i)) with
// rho chosen by each zone's occupancy flag and E_i the zone's heating
// plus cooling energy for the step.
struct RewardConfig {
    double rho_occupied = 4.0;
    double rho_unoccupied = 0.1;
    MinMaxBounds pmv_bounds{0.0, 3.0};
    std::vector<MinMaxBounds> energy_bounds;  // per zone, kWh per step

    // Energy bound (P_h/eta_h + P_c/COP) * dt per zone.
    static RewardConfig for_building(const BuildingConfig& config);
};

double reward(const std::vector<ZoneBuildingState>& zones, const std::vector<int>& occupancy,
              const RewardConfig& cfg);

// Same reward read off a flattened building-state row (the planner's
// batched rollout path).
double reward_from_flat(const double* zone_row, std::size_t n_zones,
                        const std::vector<int>& occupancy, const RewardConfig& cfg);

}  // namespace hvacmpc
