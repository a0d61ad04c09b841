#pragma once

namespace hvacmpc {

// Fanger comfort-model inputs. Mean radiant temperature is taken equal to
// air temperature throughout.
struct ComfortParams {
    double met = 1.2;          // metabolic rate, met
    double clo = 0.5;          // clothing insulation, clo
    double air_velocity = 0.1; // m/s
};

// Steady-state Fanger PMV per the ISO 7730 equation set. The clothing
// surface temperature is solved by damped fixed-point iteration
// (<= 150 iterations, tolerance 1e-5 degC); non-convergence throws
// std::runtime_error rather than clamping.
//
// t_air in degC within [-10, 50], rh as fraction in [0, 1].
double compute_pmv(double t_air, double rh, const ComfortParams& params);

}  // namespace hvacmpc
