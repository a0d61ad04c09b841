#include "hvacmpc/pmv.hpp"

#include <cmath>
#include <stdexcept>

namespace hvacmpc {

double compute_pmv(double t_air, double rh, const ComfortParams& params) {
    if (t_air < -10.0 || t_air > 50.0)
        throw std::invalid_argument("compute_pmv: air temperature outside [-10, 50] degC");
    if (rh < 0.0 || rh > 1.0) throw std::invalid_argument("compute_pmv: rh outside [0, 1]");
    if (params.met <= 0.0 || params.clo < 0.0 || params.air_velocity < 0.0)
        throw std::invalid_argument("compute_pmv: non-positive comfort parameter");

    const double t_r = t_air;  // mean radiant temp rule
    // water vapour partial pressure, Pa
    const double pa = rh * 1000.0 * std::exp(16.6536 - 4030.183 / (t_air + 235.0));

    const double icl = 0.155 * params.clo;  // m^2 K/W
    const double m = params.met * 58.15;    // W/m^2
    const double mw = m;                    // external work taken as 0

    const double fcl = icl < 0.078 ? 1.0 + 1.29 * icl : 1.05 + 0.645 * icl;
    const double hcf = 12.1 * std::sqrt(params.air_velocity);
    const double taa = t_air + 273.0;
    const double tra = t_r + 273.0;

    // clothing surface temperature, solved in units of K/100
    const double p1 = icl * fcl;
    const double p2 = p1 * 3.96;
    const double p3 = p1 * 100.0;
    const double p4 = p1 * taa;
    const double p5 = 308.7 - 0.028 * mw + p2 * std::pow(tra / 100.0, 4.0);

    double xn = (taa + (35.5 - t_air) / (3.5 * (6.45 * icl + 0.1))) / 100.0;
    double xf = xn;
    double hc = hcf;
    const double eps = 1e-7;  // 1e-5 degC on the clothing temperature
    bool converged = false;
    for (int it = 0; it < 150; ++it) {
        xf = (xf + xn) / 2.0;
        const double hcn = 2.38 * std::pow(std::fabs(100.0 * xf - taa), 0.25);
        hc = hcf > hcn ? hcf : hcn;
        xn = (p5 + p4 * hc - p2 * std::pow(xf, 4.0)) / (100.0 + p3 * hc);
        if (std::fabs(xn - xf) <= eps) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("compute_pmv: clothing temperature iteration did not converge");
    const double tcl = 100.0 * xn - 273.0;

    const double hl1 = 3.05e-3 * (5733.0 - 6.99 * mw - pa);          // skin diffusion
    const double hl2 = mw > 58.15 ? 0.42 * (mw - 58.15) : 0.0;       // sweating
    const double hl3 = 1.7e-5 * m * (5867.0 - pa);                   // latent respiration
    const double hl4 = 0.0014 * m * (34.0 - t_air);                  // dry respiration
    const double hl5 = 3.96 * fcl * (std::pow(xn, 4.0) - std::pow(tra / 100.0, 4.0));
    const double hl6 = fcl * hc * (tcl - t_air);

    const double ts = 0.303 * std::exp(-0.036 * m) + 0.028;
    return ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6);
}

}  // namespace hvacmpc
