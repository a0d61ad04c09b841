#include "hvacmpc/building.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hvacmpc {

BuildingConfig BuildingConfig::standard_five_zone() {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    BuildingConfig c;
    c.n_zones = 5;
    c.capacitance_kwh_per_c.assign(5, 2.0);
    c.r_outdoor_c_per_kw.assign(5, 8.0);
    // Zones 0..3: N, E, S, W perimeter ring; zone 4: core.
    c.r_interzone_c_per_kw.assign(5, std::vector<double>(5, kInf));
    auto link = [&](std::size_t i, std::size_t j, double r) {
        c.r_interzone_c_per_kw[i][j] = r;
        c.r_interzone_c_per_kw[j][i] = r;
    };
    link(0, 1, 3.5);
    link(1, 2, 3.5);
    link(2, 3, 3.5);
    link(3, 0, 3.5);
    for (std::size_t i = 0; i < 4; ++i) link(i, 4, 2.5);
    c.heat_capacity_kw.assign(5, 6.0);
    c.cool_capacity_kw.assign(5, 5.0);
    c.solar_aperture_m2.assign(5, 1.2);
    c.solar_aperture_m2[2] = 1.8;  // south-facing zone
    c.solar_aperture_m2[4] = 0.3;  // core sees little direct sun
    return c;
}

void BuildingConfig::validate() const {
    if (n_zones == 0) throw std::invalid_argument("BuildingConfig: n_zones must be >= 1");
    auto check_per_zone = [&](const std::vector<double>& v, const char* name, bool positive) {
        if (v.size() != n_zones)
            throw std::invalid_argument(std::string("BuildingConfig: ") + name + " size mismatch");
        for (double x : v)
            if (positive && !(x > 0.0))
                throw std::invalid_argument(std::string("BuildingConfig: ") + name +
                                            " must be positive");
    };
    check_per_zone(capacitance_kwh_per_c, "capacitance", true);
    check_per_zone(r_outdoor_c_per_kw, "r_outdoor", true);
    check_per_zone(heat_capacity_kw, "heat_capacity", true);
    check_per_zone(cool_capacity_kw, "cool_capacity", true);
    check_per_zone(solar_aperture_m2, "solar_aperture", false);
    if (r_interzone_c_per_kw.size() != n_zones)
        throw std::invalid_argument("BuildingConfig: inter-zone matrix size mismatch");
    for (std::size_t i = 0; i < n_zones; ++i) {
        if (r_interzone_c_per_kw[i].size() != n_zones)
            throw std::invalid_argument("BuildingConfig: inter-zone matrix not square");
        for (std::size_t j = 0; j < n_zones; ++j) {
            if (r_interzone_c_per_kw[i][j] != r_interzone_c_per_kw[j][i])
                throw std::invalid_argument("BuildingConfig: inter-zone matrix not symmetric");
            if (i != j && !(r_interzone_c_per_kw[i][j] > 0.0))
                throw std::invalid_argument("BuildingConfig: inter-zone resistance must be > 0");
        }
    }
    if (!(heating_efficiency > 0.0) || !(cooling_cop > 0.0))
        throw std::invalid_argument("BuildingConfig: efficiency/COP must be positive");
    if (!(timestep_minutes > 0.0))
        throw std::invalid_argument("BuildingConfig: timestep must be positive");
}

std::vector<ZoneBuildingState> rc_step(const BuildingConfig& config,
                                       const std::vector<ZoneBuildingState>& zones,
                                       const Action& action, const EnvironmentState& env,
                                       std::vector<double>* heat_kwh_out,
                                       std::vector<double>* cool_kwh_out) {
    const std::size_t n = config.n_zones;
    if (zones.size() != n || action.n_zones() != n)
        throw std::invalid_argument("rc_step: zone count mismatch");
    const double dt = config.timestep_hours();

    std::vector<ZoneBuildingState> next(n);
    if (heat_kwh_out) heat_kwh_out->assign(n, 0.0);
    if (cool_kwh_out) cool_kwh_out->assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double t_i = zones[i].temp_in;
        const double cz = config.capacitance_kwh_per_c[i];

        // Setpoint tracking with deadband: power to close the gap in one
        // step, clipped to capacity.
        double q = 0.0;  // kW, + heating / - cooling
        const double heat_sp = action.zones[i].heat_sp;
        const double cool_sp = action.zones[i].cool_sp;
        if (t_i < heat_sp) {
            const double needed = (heat_sp - t_i) * cz / dt;
            q = std::min(config.heat_capacity_kw[i], needed);
        } else if (t_i > cool_sp) {
            const double needed = (t_i - cool_sp) * cz / dt;
            q = -std::min(config.cool_capacity_kw[i], needed);
        }

        double flux = (env.temp_out - t_i) / config.r_outdoor_c_per_kw[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double r = config.r_interzone_c_per_kw[i][j];
            if (std::isfinite(r)) flux += (zones[j].temp_in - t_i) / r;
        }
        flux += config.solar_aperture_m2[i] * (env.direct_solar + env.diffuse_solar) / 1000.0;
        if (i < env.occupancy.size() && env.occupancy[i])
            flux += config.occupant_gain_kw;
        flux += q;

        next[i].temp_in = t_i + dt / cz * flux;
        if (!std::isfinite(next[i].temp_in))
            throw std::runtime_error("rc_step: non-finite zone temperature (check config)");

        double rh = zones[i].rh_in + config.rh_relax_coeff * (env.rh_out - zones[i].rh_in);
        if (rh < 0.0) rh = 0.0;
        if (rh > 1.0) rh = 1.0;
        next[i].rh_in = rh;

        next[i].heat_energy = q > 0.0 ? q * dt / config.heating_efficiency : 0.0;
        next[i].cool_energy = q < 0.0 ? -q * dt / config.cooling_cop : 0.0;
        next[i].pmv = compute_pmv(next[i].temp_in, next[i].rh_in, config.comfort);

        if (heat_kwh_out) (*heat_kwh_out)[i] = next[i].heat_energy;
        if (cool_kwh_out) (*cool_kwh_out)[i] = next[i].cool_energy;
    }
    return next;
}

Simulator::Simulator(BuildingConfig config, FullState initial)
    : config_(std::move(config)), state_(std::move(initial)) {
    config_.validate();
    validate(state_);
    if (state_.n_zones() != config_.n_zones)
        throw std::invalid_argument("Simulator: state zone count != config zone count");
}

FullState Simulator::default_initial_state(const BuildingConfig& config,
                                           const EnvironmentState& env0) {
    FullState s;
    s.zones.resize(config.n_zones);
    for (auto& z : s.zones) {
        z.temp_in = 22.0;
        z.rh_in = 0.45;
        z.heat_energy = 0.0;
        z.cool_energy = 0.0;
        z.pmv = compute_pmv(z.temp_in, z.rh_in, config.comfort);
    }
    s.env = env0;
    return s;
}

StepResult Simulator::step(const Action& action, const EnvironmentState& env,
                           const EnvironmentState& env_next) {
    if (!action_within_bounds(action))
        throw std::invalid_argument("Simulator::step: action outside setpoint bounds");
    StepResult result;
    result.next_state.zones =
        rc_step(config_, state_.zones, action, env, &result.heat_kwh, &result.cool_kwh);
    result.next_state.env = env_next;
    state_ = result.next_state;
    return result;
}

EpisodeTrace rollout_episode(const ControllerFn& controller, const BuildingConfig& config,
                             const WeatherSeries& weather, const OccupancySchedule& schedule,
                             std::size_t n_steps, const RewardFn& reward_fn) {
    if (n_steps > 0 && weather.size() < n_steps)
        throw std::invalid_argument("rollout_episode: weather shorter than episode");

    EpisodeTrace trace;
    if (n_steps == 0) return trace;

    auto env_at = [&](std::size_t t) {
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
        return e;
    };

    Simulator sim(config, Simulator::default_initial_state(config, env_at(0)));
    trace.transitions.reserve(n_steps);
    trace.rewards.reserve(n_steps);
    for (std::size_t t = 0; t < n_steps; ++t) {
        const FullState before = sim.state();
        Action action;
        try {
            action = controller(t, before);
        } catch (const std::exception& e) {
            throw std::runtime_error("controller failed at step " + std::to_string(t) + ": " +
                                     e.what());
        }
        const StepResult r = sim.step(action, before.env, env_at(t + 1));
        Transition tr;
        tr.state = before;
        tr.action = action;
        tr.next_state = r.next_state;
        tr.timestep_index = static_cast<std::int64_t>(t);
        trace.transitions.push_back(std::move(tr));
        trace.rewards.push_back(reward_fn ? reward_fn(r.next_state.zones, before.env.occupancy)
                                          : 0.0);
    }
    return trace;
}

}  // namespace hvacmpc
