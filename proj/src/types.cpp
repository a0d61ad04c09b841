#include "hvacmpc/types.hpp"

#include <cmath>
#include <stdexcept>

namespace hvacmpc {

double fahrenheit_to_celsius(double f) { return (f - 32.0) * 5.0 / 9.0; }

bool action_within_bounds(const Action& a) {
    for (const auto& z : a.zones) {
        if (z.heat_sp < kHeatSpMinC || z.heat_sp > kHeatSpMaxC) return false;
        if (z.cool_sp < kCoolSpMinC || z.cool_sp > kCoolSpMaxC) return false;
        if (z.heat_sp > z.cool_sp) return false;
    }
    return true;
}

Action clip_action(Action a) {
    for (auto& z : a.zones) {
        z.heat_sp = std::min(std::max(z.heat_sp, kHeatSpMinC), kHeatSpMaxC);
        z.cool_sp = std::min(std::max(z.cool_sp, kCoolSpMinC), kCoolSpMaxC);
    }
    return a;
}

std::string flatten_order_signature(std::size_t n_zones) {
    return "v1;zones=" + std::to_string(n_zones) +
           ";zone:temp_in,rh_in,pmv,heat_energy,cool_energy"
           ";env:temp_out,rh_out,diffuse_solar,direct_solar,incident_angle,wind_speed,wind_dir"
           ";occ:per_zone;action:heat_sp,cool_sp";
}

std::uint64_t flatten_order_hash(std::size_t n_zones) {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : flatten_order_signature(n_zones)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<double> flatten(const FullState& s) {
    const std::size_t n = s.n_zones();
    std::vector<double> v;
    v.reserve(full_state_dim(n));
    for (const auto& z : s.zones) {
        v.push_back(z.temp_in);
        v.push_back(z.rh_in);
        v.push_back(z.pmv);
        v.push_back(z.heat_energy);
        v.push_back(z.cool_energy);
    }
    const auto env = flatten_env(s.env);
    v.insert(v.end(), env.begin(), env.end());
    return v;
}

FullState unflatten(const std::vector<double>& v, std::size_t n_zones) {
    if (v.size() != full_state_dim(n_zones))
        throw std::invalid_argument("unflatten: vector length does not match zone count");
    FullState s;
    s.zones.resize(n_zones);
    std::size_t k = 0;
    for (auto& z : s.zones) {
        z.temp_in = v[k++];
        z.rh_in = v[k++];
        z.pmv = v[k++];
        z.heat_energy = v[k++];
        z.cool_energy = v[k++];
    }
    s.env = unflatten_env(std::vector<double>(v.begin() + static_cast<long>(k), v.end()), n_zones);
    return s;
}

std::vector<double> flatten_zones(const std::vector<ZoneBuildingState>& zones) {
    std::vector<double> v;
    v.reserve(zones.size() * kZoneStateDim);
    for (const auto& z : zones) {
        v.push_back(z.temp_in);
        v.push_back(z.rh_in);
        v.push_back(z.pmv);
        v.push_back(z.heat_energy);
        v.push_back(z.cool_energy);
    }
    return v;
}

std::vector<ZoneBuildingState> unflatten_zones(const std::vector<double>& v) {
    if (v.size() % kZoneStateDim != 0)
        throw std::invalid_argument("unflatten_zones: length not a multiple of 5");
    std::vector<ZoneBuildingState> zones(v.size() / kZoneStateDim);
    std::size_t k = 0;
    for (auto& z : zones) {
        z.temp_in = v[k++];
        z.rh_in = v[k++];
        z.pmv = v[k++];
        z.heat_energy = v[k++];
        z.cool_energy = v[k++];
    }
    return zones;
}

std::vector<double> flatten_env(const EnvironmentState& e) {
    std::vector<double> v;
    v.reserve(kEnvSharedDim + e.occupancy.size());
    v.push_back(e.temp_out);
    v.push_back(e.rh_out);
    v.push_back(e.diffuse_solar);
    v.push_back(e.direct_solar);
    v.push_back(e.incident_angle);
    v.push_back(e.wind_speed);
    v.push_back(e.wind_dir);
    for (int f : e.occupancy) v.push_back(static_cast<double>(f));
    return v;
}

EnvironmentState unflatten_env(const std::vector<double>& v, std::size_t n_zones) {
    if (v.size() != env_state_dim(n_zones))
        throw std::invalid_argument("unflatten_env: vector length does not match zone count");
    EnvironmentState e;
    e.temp_out = v[0];
    e.rh_out = v[1];
    e.diffuse_solar = v[2];
    e.direct_solar = v[3];
    e.incident_angle = v[4];
    e.wind_speed = v[5];
    e.wind_dir = v[6];
    e.occupancy.resize(n_zones);
    for (std::size_t i = 0; i < n_zones; ++i)
        e.occupancy[i] = v[kEnvSharedDim + i] != 0.0 ? 1 : 0;
    return e;
}

std::vector<double> flatten_action(const Action& a) {
    std::vector<double> v;
    v.reserve(2 * a.zones.size());
    for (const auto& z : a.zones) {
        v.push_back(z.heat_sp);
        v.push_back(z.cool_sp);
    }
    return v;
}

Action unflatten_action(const std::vector<double>& v) {
    if (v.size() % 2 != 0) throw std::invalid_argument("unflatten_action: odd length");
    Action a;
    a.zones.resize(v.size() / 2);
    for (std::size_t i = 0; i < a.zones.size(); ++i) {
        a.zones[i].heat_sp = v[2 * i];
        a.zones[i].cool_sp = v[2 * i + 1];
    }
    return a;
}

void validate(const EnvironmentState& e, std::size_t n_zones) {
    if (e.occupancy.size() != n_zones)
        throw std::invalid_argument("EnvironmentState: occupancy flag count != zone count");
    if (e.diffuse_solar < 0.0 || e.direct_solar < 0.0)
        throw std::invalid_argument("EnvironmentState: negative solar term");
    for (int f : e.occupancy)
        if (f != 0 && f != 1) throw std::invalid_argument("EnvironmentState: occupancy flag not 0/1");
}

void validate(const FullState& s) {
    for (const auto& z : s.zones) {
        if (!(z.rh_in >= 0.0 && z.rh_in <= 1.0))
            throw std::invalid_argument("ZoneBuildingState: rh_in outside [0,1]");
        if (z.heat_energy < 0.0 || z.cool_energy < 0.0)
            throw std::invalid_argument("ZoneBuildingState: negative energy");
        if (!std::isfinite(z.pmv)) throw std::invalid_argument("ZoneBuildingState: non-finite pmv");
        if (!std::isfinite(z.temp_in)) throw std::invalid_argument("ZoneBuildingState: non-finite temp");
    }
    validate(s.env, s.n_zones());
}

}  // namespace hvacmpc
