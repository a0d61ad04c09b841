#pragma once

#include <cstdint>
#include <vector>

namespace hvacmpc {

// Per-zone occupancy: a deterministic weekly office schedule plus a
// seeded chance of evening work. Episodes start on a Monday at 00:00.
//
// Weekdays: occupied 08:00-18:00. Weekends: unoccupied. Any day can
// additionally be occupied 19:00-23:00 with probability night_probability
// per (zone, day), drawn deterministically from the seed.
struct OccupancySchedule {
    std::size_t n_zones = 5;
    double night_probability = 0.15;
    std::uint64_t seed = 0;

    int occupied(std::size_t zone, std::size_t step) const;
    std::vector<int> flags(std::size_t step) const;

    // True during 08:00-18:00 on weekdays (the deterministic part the
    // rule-based policy also assumes).
    static bool scheduled_office_hours(std::size_t step);
};

}  // namespace hvacmpc
