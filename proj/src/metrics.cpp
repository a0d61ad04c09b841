#include "hvacmpc/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hvacmpc {

MetricsReport compute_metrics(const std::vector<StepRecord>& records,
                              const std::vector<std::vector<int>>& occupancy) {
    if (records.empty()) throw std::invalid_argument("compute_metrics: empty trace");
    if (!occupancy.empty() && occupancy.size() != records.size())
        throw std::invalid_argument("compute_metrics: occupancy length != trace length");
    const std::size_t n_zones = records.front().temp.size();

    MetricsReport m;
    m.zone_heat_kwh.assign(n_zones, 0.0);
    m.zone_cool_kwh.assign(n_zones, 0.0);

    double pmv_sum = 0.0, pmv_sq_sum = 0.0;
    std::size_t occupied = 0, violations = 0;
    for (std::size_t t = 0; t < records.size(); ++t) {
        const auto& r = records[t];
        if (r.temp.size() != n_zones)
            throw std::invalid_argument("compute_metrics: ragged zone counts");
        m.total_reward += r.reward;
        for (std::size_t z = 0; z < n_zones; ++z) {
            m.zone_heat_kwh[z] += r.heat_kwh[z];
            m.zone_cool_kwh[z] += r.cool_kwh[z];
            const bool occ = occupancy.empty() || occupancy[t][z] != 0;
            if (occ) {
                ++occupied;
                pmv_sum += r.pmv[z];
                pmv_sq_sum += r.pmv[z] * r.pmv[z];
                if (std::fabs(r.pmv[z]) > kComfortBandPmv) ++violations;
            }
        }
    }
    for (std::size_t z = 0; z < n_zones; ++z) {
        m.total_heat_kwh += m.zone_heat_kwh[z];
        m.total_cool_kwh += m.zone_cool_kwh[z];
    }
    m.occupied_zone_steps = occupied;
    if (occupied > 0) {
        m.pmv_mean = pmv_sum / static_cast<double>(occupied);
        const double var = pmv_sq_sum / static_cast<double>(occupied) - m.pmv_mean * m.pmv_mean;
        m.pmv_std = var > 0.0 ? std::sqrt(var) : 0.0;
        m.violation_rate = static_cast<double>(violations) / static_cast<double>(occupied);
    }
    return m;
}

std::vector<StepRecord> records_from_trace(const EpisodeTrace& trace) {
    std::vector<StepRecord> out;
    out.reserve(trace.transitions.size());
    for (std::size_t t = 0; t < trace.transitions.size(); ++t) {
        const auto& tr = trace.transitions[t];
        StepRecord r;
        r.step = static_cast<std::size_t>(tr.timestep_index);
        const std::size_t n = tr.next_state.n_zones();
        r.temp.resize(n);
        r.pmv.resize(n);
        r.heat_kwh.resize(n);
        r.cool_kwh.resize(n);
        r.heat_sp.resize(n);
        r.cool_sp.resize(n);
        for (std::size_t z = 0; z < n; ++z) {
            const auto& zone = tr.next_state.zones[z];
            r.temp[z] = zone.temp_in;
            r.pmv[z] = zone.pmv;
            r.heat_kwh[z] = zone.heat_energy;
            r.cool_kwh[z] = zone.cool_energy;
            r.heat_sp[z] = tr.action.zones[z].heat_sp;
            r.cool_sp[z] = tr.action.zones[z].cool_sp;
        }
        r.reward = t < trace.rewards.size() ? trace.rewards[t] : 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::vector<int>> occupancy_from_trace(const EpisodeTrace& trace) {
    std::vector<std::vector<int>> occ;
    occ.reserve(trace.transitions.size());
    for (const auto& tr : trace.transitions) occ.push_back(tr.state.env.occupancy);
    return occ;
}

std::string format_metrics(const MetricsReport& m) {
    std::ostringstream out;
    char buf[96];
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%s=%.10g\n", key, v);
        out << buf;
    };
    line("total_kwh", m.total_kwh());
    line("total_heat_kwh", m.total_heat_kwh);
    line("total_cool_kwh", m.total_cool_kwh);
    for (std::size_t z = 0; z < m.zone_heat_kwh.size(); ++z) {
        std::snprintf(buf, sizeof(buf), "zone%zu_heat_kwh=%.10g\n", z, m.zone_heat_kwh[z]);
        out << buf;
        std::snprintf(buf, sizeof(buf), "zone%zu_cool_kwh=%.10g\n", z, m.zone_cool_kwh[z]);
        out << buf;
    }
    line("pmv_mean", m.pmv_mean);
    line("pmv_std", m.pmv_std);
    line("violation_rate", m.violation_rate);
    line("total_reward", m.total_reward);
    std::snprintf(buf, sizeof(buf), "occupied_zone_steps=%zu\n", m.occupied_zone_steps);
    out << buf;
    return out.str();
}

}  // namespace hvacmpc
