#include "hvacmpc/rule_based.hpp"

#include "hvacmpc/occupancy.hpp"
#include "hvacmpc/weather.hpp"

namespace hvacmpc {

ZoneSetpoints RuleBasedPolicy::warmup_setpoints() {
    return {fahrenheit_to_celsius(70.0), fahrenheit_to_celsius(74.0)};
}

ZoneSetpoints RuleBasedPolicy::occupied_setpoints() {
    return {fahrenheit_to_celsius(69.0), fahrenheit_to_celsius(74.0)};
}

ZoneSetpoints RuleBasedPolicy::setback_setpoints() {
    return {fahrenheit_to_celsius(65.0), fahrenheit_to_celsius(80.0)};
}

Action RuleBasedPolicy::action(std::size_t step) const {
    const std::size_t step_of_day = step % kStepsPerDay;
    const double hour = static_cast<double>(step_of_day) / 4.0;
    ZoneSetpoints sp = setback_setpoints();
    if (hour >= 8.0 && hour < 18.0) sp = hour < 9.0 ? warmup_setpoints() : occupied_setpoints();
    Action a;
    a.zones.assign(n_zones, sp);
    return a;
}

}  // namespace hvacmpc
