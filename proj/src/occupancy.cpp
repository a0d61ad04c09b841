#include "hvacmpc/occupancy.hpp"

#include "hvacmpc/rng.hpp"
#include "hvacmpc/weather.hpp"

namespace hvacmpc {

bool OccupancySchedule::scheduled_office_hours(std::size_t step) {
    const std::size_t day = step / kStepsPerDay;
    const std::size_t weekday = day % 7;  // 0 = Monday
    if (weekday >= 5) return false;
    const std::size_t step_of_day = step % kStepsPerDay;
    const double hour = static_cast<double>(step_of_day) / 4.0;
    return hour >= 8.0 && hour < 18.0;
}

int OccupancySchedule::occupied(std::size_t zone, std::size_t step) const {
    if (scheduled_office_hours(step)) return 1;
    const std::size_t day = step / kStepsPerDay;
    const std::size_t step_of_day = step % kStepsPerDay;
    const double hour = static_cast<double>(step_of_day) / 4.0;
    if (hour >= 19.0 && hour < 23.0) {
        Rng rng(derive_seed(seed, {0x6f6363ULL, zone, day}));
        if (rng.uniform() < night_probability) return 1;
    }
    return 0;
}

std::vector<int> OccupancySchedule::flags(std::size_t step) const {
    std::vector<int> f(n_zones);
    for (std::size_t z = 0; z < n_zones; ++z) f[z] = occupied(z, step);
    return f;
}

}  // namespace hvacmpc
