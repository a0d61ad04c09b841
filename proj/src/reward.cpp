#include "hvacmpc/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace hvacmpc {

RewardConfig RewardConfig::for_building(const BuildingConfig& config) {
    RewardConfig cfg;
    cfg.energy_bounds.reserve(config.n_zones);
    const double dt = config.timestep_hours();
    for (std::size_t i = 0; i < config.n_zones; ++i) {
        const double e_max = (config.heat_capacity_kw[i] / config.heating_efficiency +
                              config.cool_capacity_kw[i] / config.cooling_cop) *
                             dt;
        cfg.energy_bounds.push_back({0.0, e_max});
    }
    return cfg;
}

double reward_from_flat(const double* zone_row, std::size_t n_zones,
                        const std::vector<int>& occupancy, const RewardConfig& cfg) {
    if (cfg.energy_bounds.size() != n_zones)
        throw std::invalid_argument("reward: energy bounds size != zone count");
    if (occupancy.size() != n_zones)
        throw std::invalid_argument("reward: occupancy size != zone count");
    double total = 0.0;
    for (std::size_t i = 0; i < n_zones; ++i) {
        const double pmv = zone_row[i * kZoneStateDim + 2];
        const double energy =
            zone_row[i * kZoneStateDim + 3] + zone_row[i * kZoneStateDim + 4];
        const double rho = occupancy[i] ? cfg.rho_occupied : cfg.rho_unoccupied;
        total -= rho * minmax_norm(std::fabs(pmv), cfg.pmv_bounds) +
                 minmax_norm(energy, cfg.energy_bounds[i]);
    }
    return total;
}

double reward(const std::vector<ZoneBuildingState>& zones, const std::vector<int>& occupancy,
              const RewardConfig& cfg) {
    const auto flat = flatten_zones(zones);
    return reward_from_flat(flat.data(), zones.size(), occupancy, cfg);
}

}  // namespace hvacmpc
