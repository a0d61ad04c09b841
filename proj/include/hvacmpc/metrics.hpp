#pragma once

#include <string>
#include <vector>

#include "hvacmpc/building.hpp"

namespace hvacmpc {

// One results-CSV row: post-step zone states, the executed setpoints and
// the step reward.
struct StepRecord {
    std::size_t step = 0;
    std::vector<double> temp;      // per zone
    std::vector<double> pmv;
    std::vector<double> heat_kwh;
    std::vector<double> cool_kwh;
    std::vector<double> heat_sp;
    std::vector<double> cool_sp;
    double reward = 0.0;
};

struct MetricsReport {
    double total_heat_kwh = 0.0;
    double total_cool_kwh = 0.0;
    std::vector<double> zone_heat_kwh;
    std::vector<double> zone_cool_kwh;
    double pmv_mean = 0.0;       // over occupied zone-steps
    double pmv_std = 0.0;
    double violation_rate = 0.0; // occupied steps with |PMV| > 0.7
    double total_reward = 0.0;
    std::size_t occupied_zone_steps = 0;

    double total_kwh() const { return total_heat_kwh + total_cool_kwh; }
};

constexpr double kComfortBandPmv = 0.7;

// `occupancy[t]` holds the flags in effect when step t's action was
// taken; when empty, every zone-step counts as occupied.
MetricsReport compute_metrics(const std::vector<StepRecord>& records,
                              const std::vector<std::vector<int>>& occupancy);

std::vector<StepRecord> records_from_trace(const EpisodeTrace& trace);
std::vector<std::vector<int>> occupancy_from_trace(const EpisodeTrace& trace);

std::string format_metrics(const MetricsReport& m);

}  // namespace hvacmpc
