#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hvacmpc {

// One 15-minute sample of the exogenous weather fields (everything in
// EnvironmentState except occupancy).
struct WeatherPoint {
    double temp_out = 20.0;
    double rh_out = 0.5;
    double diffuse_solar = 0.0;
    double direct_solar = 0.0;
    double incident_angle = 90.0;
    double wind_speed = 0.0;
    double wind_dir = 0.0;
};

struct WeatherSeries {
    std::vector<WeatherPoint> points;

    std::size_t size() const { return points.size(); }
    const WeatherPoint& at_step(std::size_t t) const { return points[t]; }
};

enum class WeatherProfile { FresnoJan, FresnoJul, ChicagoJan, ChicagoJul };

WeatherProfile parse_weather_profile(const std::string& name);  // throws on unknown
std::string weather_profile_name(WeatherProfile p);

// Outdoor-temperature range of a profile, degC.
void weather_profile_range(WeatherProfile p, double& lo, double& hi);

// True for the January profiles; selects the seasonal clothing level.
bool weather_profile_is_winter(WeatherProfile p);

constexpr std::size_t kStepsPerDay = 96;        // 15-minute steps
constexpr std::size_t kStepsPerMonth = 2976;    // 31 days

// Daily sinusoid plus seeded slow wander and noise, kept inside the
// profile's temperature range by construction. Solar is a daytime
// half-sinusoid scaled per profile. Deterministic given (profile, months,
// seed).
WeatherSeries synthesize_weather(WeatherProfile profile, std::size_t months, std::uint64_t seed);

// CSV schema (header required):
//   step,t_out_c,rh_out,diffuse_wm2,direct_wm2,incident_deg,wind_ms,wind_dir_deg
// one row per 15-minute step, steps consecutive from 0. Throws with a
// line number on parse errors, missing columns, or misordered steps.
WeatherSeries load_weather_csv(const std::string& path);
void save_weather_csv(const WeatherSeries& series, const std::string& path);

}  // namespace hvacmpc
