#include "hvacmpc/weather.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hvacmpc/rng.hpp"

namespace hvacmpc {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ProfileSpec {
    double t_lo, t_hi;          // degC range
    double direct_peak;         // W/m^2
    double diffuse_peak;        // W/m^2
    double rh_mid;
};

ProfileSpec profile_spec(WeatherProfile p) {
    switch (p) {
        case WeatherProfile::FresnoJan: return {-1.0, 18.0, 450.0, 160.0, 0.65};
        case WeatherProfile::FresnoJul: return {15.0, 42.0, 820.0, 240.0, 0.35};
        case WeatherProfile::ChicagoJan: return {-20.0, 15.0, 380.0, 140.0, 0.70};
        case WeatherProfile::ChicagoJul: return {15.0, 40.0, 760.0, 230.0, 0.55};
    }
    throw std::invalid_argument("unknown weather profile");
}

}  // namespace

WeatherProfile parse_weather_profile(const std::string& name) {
    if (name == "fresno_jan") return WeatherProfile::FresnoJan;
    if (name == "fresno_jul") return WeatherProfile::FresnoJul;
    if (name == "chicago_jan") return WeatherProfile::ChicagoJan;
    if (name == "chicago_jul") return WeatherProfile::ChicagoJul;
    throw std::invalid_argument("unknown weather profile: " + name +
                                " (expected fresno_jan|fresno_jul|chicago_jan|chicago_jul)");
}

std::string weather_profile_name(WeatherProfile p) {
    switch (p) {
        case WeatherProfile::FresnoJan: return "fresno_jan";
        case WeatherProfile::FresnoJul: return "fresno_jul";
        case WeatherProfile::ChicagoJan: return "chicago_jan";
        case WeatherProfile::ChicagoJul: return "chicago_jul";
    }
    return "?";
}

void weather_profile_range(WeatherProfile p, double& lo, double& hi) {
    const auto spec = profile_spec(p);
    lo = spec.t_lo;
    hi = spec.t_hi;
}

bool weather_profile_is_winter(WeatherProfile p) {
    return p == WeatherProfile::FresnoJan || p == WeatherProfile::ChicagoJan;
}

WeatherSeries synthesize_weather(WeatherProfile profile, std::size_t months, std::uint64_t seed) {
    if (months < 1) throw std::invalid_argument("synthesize_weather: months must be >= 1");
    const auto spec = profile_spec(profile);
    const std::size_t n = months * kStepsPerMonth;

    const double mid = 0.5 * (spec.t_lo + spec.t_hi);
    const double range = spec.t_hi - spec.t_lo;
    // Amplitude budget: daily 0.40, multi-day wander 0.05, noise 0.03 of
    // the range; total 0.48 < 0.5 keeps the series inside [t_lo, t_hi].
    const double daily_amp = 0.40 * range;
    const double wander_amp = 0.05 * range;
    const double noise_amp = 0.03 * range;

    Rng wander_rng(derive_seed(seed, {0x776561746865721ULL}));
    const double wander_phase = wander_rng.uniform(0.0, 2.0 * kPi);
    const double wander_period_days = wander_rng.uniform(4.0, 9.0);

    Rng noise_rng(derive_seed(seed, {0x776561746865722ULL}));
    Rng wind_rng(derive_seed(seed, {0x776561746865723ULL}));

    WeatherSeries series;
    series.points.resize(n);
    double wind_speed = wind_rng.uniform(1.0, 4.0);
    double wind_dir = wind_rng.uniform(0.0, 360.0);
    for (std::size_t t = 0; t < n; ++t) {
        const double day = static_cast<double>(t) / kStepsPerDay;
        const double hour = std::fmod(day, 1.0) * 24.0;

        // Peak at 15:00, minimum at 03:00.
        const double daily = std::sin(2.0 * kPi * (hour - 9.0) / 24.0);
        const double wander =
            std::sin(2.0 * kPi * day / wander_period_days + wander_phase);
        double noise = noise_rng.normal(0.0, noise_amp / 3.0);
        if (noise > noise_amp) noise = noise_amp;
        if (noise < -noise_amp) noise = -noise_amp;

        WeatherPoint& p = series.points[t];
        p.temp_out = mid + daily_amp * daily + wander_amp * wander + noise;

        // Daytime half-sinusoid, 06:00-18:00.
        const double sun = hour >= 6.0 && hour <= 18.0 ? std::sin(kPi * (hour - 6.0) / 12.0) : 0.0;
        const double cloud = 0.75 + 0.25 * wander;  // slow cloudiness proxy
        p.direct_solar = spec.direct_peak * sun * cloud;
        p.diffuse_solar = spec.diffuse_peak * sun;
        p.incident_angle = sun > 0.0 ? 90.0 - 75.0 * sun : 90.0;

        // RH anti-correlated with the daily temperature swing.
        double rh = spec.rh_mid - 0.25 * daily + 0.05 * wander;
        if (rh < 0.05) rh = 0.05;
        if (rh > 0.98) rh = 0.98;
        p.rh_out = rh;

        // Wind as a bounded random walk.
        wind_speed += wind_rng.normal(0.0, 0.15);
        if (wind_speed < 0.0) wind_speed = 0.0;
        if (wind_speed > 9.0) wind_speed = 9.0;
        wind_dir = std::fmod(wind_dir + wind_rng.normal(0.0, 4.0) + 360.0, 360.0);
        p.wind_speed = wind_speed;
        p.wind_dir = wind_dir;
    }
    return series;
}

namespace {

const char* kWeatherHeader =
    "step,t_out_c,rh_out,diffuse_wm2,direct_wm2,incident_deg,wind_ms,wind_dir_deg";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, std::size_t line_no, const char* col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("weather csv line " + std::to_string(line_no) +
                                 ": cannot parse column '" + col + "' from '" + s + "'");
    }
}

}  // namespace

WeatherSeries load_weather_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weather csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("weather csv is empty: " + path);

    const auto header = split_csv_line(line);
    const std::vector<std::string> expected = {"step",         "t_out_c", "rh_out",
                                               "diffuse_wm2",  "direct_wm2", "incident_deg",
                                               "wind_ms",      "wind_dir_deg"};
    for (const auto& col : expected) {
        bool found = false;
        for (const auto& h : header)
            if (h == col) found = true;
        if (!found)
            throw std::runtime_error("weather csv schema error: missing column '" + col + "'");
    }
    if (header != expected)
        throw std::runtime_error("weather csv schema error: columns must be exactly: " +
                                 std::string(kWeatherHeader));

    WeatherSeries series;
    std::size_t line_no = 1;
    std::int64_t expected_step = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != expected.size())
            throw std::runtime_error("weather csv line " + std::to_string(line_no) +
                                     ": expected 8 columns, got " + std::to_string(cells.size()));
        const double step = parse_double(cells[0], line_no, "step");
        if (static_cast<std::int64_t>(step) != expected_step)
            throw std::runtime_error("weather csv line " + std::to_string(line_no) +
                                     ": steps must be consecutive from 0 (expected " +
                                     std::to_string(expected_step) + ")");
        ++expected_step;
        WeatherPoint p;
        p.temp_out = parse_double(cells[1], line_no, "t_out_c");
        p.rh_out = parse_double(cells[2], line_no, "rh_out");
        p.diffuse_solar = parse_double(cells[3], line_no, "diffuse_wm2");
        p.direct_solar = parse_double(cells[4], line_no, "direct_wm2");
        p.incident_angle = parse_double(cells[5], line_no, "incident_deg");
        p.wind_speed = parse_double(cells[6], line_no, "wind_ms");
        p.wind_dir = parse_double(cells[7], line_no, "wind_dir_deg");
        if (p.rh_out < 0.0 || p.rh_out > 1.0)
            throw std::runtime_error("weather csv line " + std::to_string(line_no) +
                                     ": rh_out outside [0,1]");
        if (p.diffuse_solar < 0.0 || p.direct_solar < 0.0)
            throw std::runtime_error("weather csv line " + std::to_string(line_no) +
                                     ": negative solar term");
        series.points.push_back(p);
    }
    return series;
}

void save_weather_csv(const WeatherSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write weather csv: " + path);
    out << kWeatherHeader << "\n";
    char buf[64];
    for (std::size_t t = 0; t < series.size(); ++t) {
        const auto& p = series.points[t];
        out << t;
        for (double v : {p.temp_out, p.rh_out, p.diffuse_solar, p.direct_solar, p.incident_angle,
                         p.wind_speed, p.wind_dir}) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace hvacmpc
