#pragma once

#include <cstddef>

#include "hvacmpc/types.hpp"

namespace hvacmpc {

// Campus-style schedule policy, driven by time-of-day alone: it has no
// occupancy sensing and no weekday awareness, so the same program runs
// every day of the week:
//   warm-up (first hour of the occupied window, 08:00-09:00): 70/74 F
//   occupied window 09:00-18:00:                              69/74 F
//   otherwise (setback):                                      65/80 F
// All pairs sit inside the heating 65-72 F / cooling 72-80 F limits.
// Zone temperatures do not alter the rule.
struct RuleBasedPolicy {
    std::size_t n_zones = 5;

    Action action(std::size_t step) const;

    static ZoneSetpoints warmup_setpoints();   // 70/74 F in degC
    static ZoneSetpoints occupied_setpoints(); // 69/74 F
    static ZoneSetpoints setback_setpoints();  // 65/80 F
};

}  // namespace hvacmpc
