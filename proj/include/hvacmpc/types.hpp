#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hvacmpc {

// Per-zone controllable building state: the five quantities the dynamics
// model predicts. Energies are the kWh drawn during the step that
// produced this state.
struct ZoneBuildingState {
    double temp_in = 21.0;    // degC
    double rh_in = 0.45;      // fraction 0..1
    double pmv = 0.0;         // Fanger scale
    double heat_energy = 0.0; // kWh this step
    double cool_energy = 0.0; // kWh this step
};

// Exogenous state: weather plus per-zone occupancy flags. Nothing here is
// actuated by control actions.
struct EnvironmentState {
    double temp_out = 20.0;      // degC
    double rh_out = 0.5;         // fraction
    double diffuse_solar = 0.0;  // W/m^2
    double direct_solar = 0.0;   // W/m^2
    double incident_angle = 90.0; // degrees
    double wind_speed = 0.0;     // m/s
    double wind_dir = 0.0;       // degrees
    std::vector<int> occupancy;  // one 0/1 flag per zone
};

struct FullState {
    std::vector<ZoneBuildingState> zones;
    EnvironmentState env;

    std::size_t n_zones() const { return zones.size(); }
};

// Heating/cooling setpoint pair for one zone, degC.
struct ZoneSetpoints {
    double heat_sp = 20.0;
    double cool_sp = 24.0;
};

struct Action {
    std::vector<ZoneSetpoints> zones;

    std::size_t n_zones() const { return zones.size(); }
};

// Setpoint bounds from the rule-based policy's limits: heating 65-72 F,
// cooling 72-80 F, converted once to degC. Heating max equals cooling
// min, so per-dimension clipping also preserves heat_sp <= cool_sp.
constexpr double kHeatSpMinC = 18.333333333333332;  // 65 F
constexpr double kHeatSpMaxC = 22.222222222222221;  // 72 F
constexpr double kCoolSpMinC = 22.222222222222221;  // 72 F
constexpr double kCoolSpMaxC = 26.666666666666668;  // 80 F

double fahrenheit_to_celsius(double f);

// True when every pair lies in bounds with heat_sp <= cool_sp.
bool action_within_bounds(const Action& a);
// Clip each setpoint into its own bounds (deadband follows).
Action clip_action(Action a);

struct Transition {
    FullState state;
    Action action;
    FullState next_state;  // next_state.env is ground truth at t+1
    std::int64_t timestep_index = 0;
};

using Dataset = std::vector<Transition>;

// --- Flattening -------------------------------------------------------
//
// The flattening order is frozen; serialized models record a hash of the
// signature string below. Order: per zone [temp_in, rh_in, pmv,
// heat_energy, cool_energy] (zone-major), then env [temp_out, rh_out,
// diffuse_solar, direct_solar, incident_angle, wind_speed, wind_dir],
// then the N occupancy flags. Actions flatten as per zone
// [heat_sp, cool_sp].

constexpr std::size_t kZoneStateDim = 5;
constexpr std::size_t kEnvSharedDim = 7;

inline std::size_t building_state_dim(std::size_t n_zones) { return kZoneStateDim * n_zones; }
inline std::size_t env_state_dim(std::size_t n_zones) { return kEnvSharedDim + n_zones; }
inline std::size_t full_state_dim(std::size_t n_zones) {
    return building_state_dim(n_zones) + env_state_dim(n_zones);
}
inline std::size_t action_dim(std::size_t n_zones) { return 2 * n_zones; }

std::string flatten_order_signature(std::size_t n_zones);
std::uint64_t flatten_order_hash(std::size_t n_zones);

std::vector<double> flatten(const FullState& s);
FullState unflatten(const std::vector<double>& v, std::size_t n_zones);

// Building-state part only (length 5N), the dynamics model's prediction
// target space.
std::vector<double> flatten_zones(const std::vector<ZoneBuildingState>& zones);
std::vector<ZoneBuildingState> unflatten_zones(const std::vector<double>& v);

// Environment part only (length 7+N).
std::vector<double> flatten_env(const EnvironmentState& e);
EnvironmentState unflatten_env(const std::vector<double>& v, std::size_t n_zones);

std::vector<double> flatten_action(const Action& a);
Action unflatten_action(const std::vector<double>& v);

// Validation used by the simulator and file loaders; throws
// std::invalid_argument with a field name on violation.
void validate(const FullState& s);
void validate(const EnvironmentState& e, std::size_t n_zones);

}  // namespace hvacmpc
