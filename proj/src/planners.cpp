#include "hvacmpc/planners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hvacmpc/rng.hpp"

namespace hvacmpc {

std::uint64_t mppi_noise_stream_seed(std::uint64_t seed, std::size_t iteration, std::size_t k) {
    return derive_seed(seed, {0x6d707069ULL, iteration, k});
}

namespace {

constexpr std::uint64_t kRsTag = 0x7273ULL;
constexpr std::uint64_t kCemTag = 0x63656dULL;

double clip(double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); }

void check_finite_costs(const std::vector<double>& returns, const char* planner) {
    for (double r : returns)
        if (!std::isfinite(r))
            throw std::runtime_error(std::string(planner) + ": non-finite trajectory cost");
}

std::vector<double> nominal_or_midpoint(const PlannerConfig& cfg, const std::vector<double>& lo,
                                        const std::vector<double>& hi) {
    if (!cfg.init_action.empty()) {
        if (cfg.init_action.size() != lo.size())
            throw std::invalid_argument("PlannerConfig: init_action dimension mismatch");
        return cfg.init_action;
    }
    std::vector<double> mid(lo.size());
    for (std::size_t d = 0; d < lo.size(); ++d) mid[d] = 0.5 * (lo[d] + hi[d]);
    return mid;
}

std::vector<double> sigma_or_default(const std::vector<double>& configured, double fraction,
                                     const std::vector<double>& lo, const std::vector<double>& hi) {
    if (!configured.empty()) {
        if (configured.size() != lo.size())
            throw std::invalid_argument("PlannerConfig: sigma dimension mismatch");
        return configured;
    }
    std::vector<double> s(lo.size());
    for (std::size_t d = 0; d < lo.size(); ++d) s[d] = fraction * (hi[d] - lo[d]);
    return s;
}

}  // namespace

void PlannerConfig::validate() const {
    if (samples < 1) throw std::invalid_argument("PlannerConfig: samples must be >= 1");
    if (horizon < 1) throw std::invalid_argument("PlannerConfig: horizon must be >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("PlannerConfig: gamma must lie in (0, 1]");
    if (!(mppi_lambda > 0.0)) throw std::invalid_argument("PlannerConfig: lambda must be > 0");
    for (double s : mppi_sigma)
        if (!(s > 0.0)) throw std::invalid_argument("PlannerConfig: sigma must be > 0");
    if (mppi_iterations < 1)
        throw std::invalid_argument("PlannerConfig: mppi_iterations must be >= 1");
    if (cem_iterations < 1) throw std::invalid_argument("PlannerConfig: cem_iterations must be >= 1");
    if (!(cem_elite_frac > 0.0 && cem_elite_frac <= 1.0))
        throw std::invalid_argument("PlannerConfig: elite fraction must lie in (0, 1]");
    for (double s : cem_sigma_init)
        if (s < 0.0) throw std::invalid_argument("PlannerConfig: cem sigma must be >= 0");
}

ActionSequenceBuffer ActionSequenceBuffer::initialized(std::size_t horizon,
                                                       const std::vector<double>& init_action) {
    ActionSequenceBuffer b;
    b.actions.resize(horizon, init_action.size());
    for (std::size_t t = 0; t < horizon; ++t)
        std::copy(init_action.begin(), init_action.end(), b.actions.row(t));
    return b;
}

void ActionSequenceBuffer::shift_left(const std::vector<double>& refill) {
    if (refill.size() != actions.cols)
        throw std::invalid_argument("ActionSequenceBuffer: refill dimension mismatch");
    for (std::size_t t = 0; t + 1 < actions.rows; ++t)
        std::copy(actions.row(t + 1), actions.row(t + 1) + actions.cols, actions.row(t));
    std::copy(refill.begin(), refill.end(), actions.row(actions.rows - 1));
}

MppiWeights mppi_weights(const std::vector<double>& costs, double lambda) {
    if (costs.empty()) throw std::invalid_argument("mppi_weights: empty costs");
    if (!(lambda > 0.0)) throw std::invalid_argument("mppi_weights: lambda must be > 0");
    MppiWeights w;
    w.beta = costs[0];
    for (double c : costs) w.beta = std::min(w.beta, c);
    w.omega.resize(costs.size());
    w.eta = 0.0;
    for (std::size_t k = 0; k < costs.size(); ++k) {
        w.omega[k] = std::exp(-(costs[k] - w.beta) / lambda);
        w.eta += w.omega[k];
    }
    // eta >= 1 by construction: the argmin term contributes exp(0).
    for (double& o : w.omega) o /= w.eta;
    return w;
}

linalg::Matrix plan_random_shooting(PlanningModel& model, const std::vector<double>& s0,
                                    const PlannerConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::vector<double> lo, hi;
    model.action_bounds(lo, hi);
    const std::size_t a_dim = model.action_dim();

    std::vector<linalg::Matrix> candidates(cfg.horizon);
    for (auto& m : candidates) m.resize(cfg.samples, a_dim);
    for (std::size_t k = 0; k < cfg.samples; ++k) {
        Rng rng(derive_seed(seed, {kRsTag, k}));
        for (std::size_t t = 0; t < cfg.horizon; ++t)
            for (std::size_t d = 0; d < a_dim; ++d)
                candidates[t](k, d) = rng.uniform(lo[d], hi[d]);
    }

    const auto returns = evaluate_sequences(model, s0, candidates, cfg.gamma);
    check_finite_costs(returns, "plan_random_shooting");
    std::size_t best = 0;
    for (std::size_t k = 1; k < returns.size(); ++k)
        if (returns[k] > returns[best]) best = k;

    linalg::Matrix plan(cfg.horizon, a_dim);
    for (std::size_t t = 0; t < cfg.horizon; ++t)
        std::copy(candidates[t].row(best), candidates[t].row(best) + a_dim, plan.row(t));
    return plan;
}

linalg::Matrix plan_cem(PlanningModel& model, const std::vector<double>& s0,
                        const PlannerConfig& cfg, std::uint64_t seed,
                        const linalg::Matrix* init_mean) {
    cfg.validate();
    std::vector<double> lo, hi;
    model.action_bounds(lo, hi);
    const std::size_t a_dim = model.action_dim();
    if (init_mean && (init_mean->rows != cfg.horizon || init_mean->cols != a_dim))
        throw std::invalid_argument("plan_cem: init_mean shape does not match config");

    const auto init = nominal_or_midpoint(cfg, lo, hi);
    const auto sigma0 = sigma_or_default(cfg.cem_sigma_init, 0.25, lo, hi);

    linalg::Matrix mean(cfg.horizon, a_dim);
    linalg::Matrix sigma(cfg.horizon, a_dim);
    for (std::size_t t = 0; t < cfg.horizon; ++t)
        for (std::size_t d = 0; d < a_dim; ++d) {
            mean(t, d) = clip(init_mean ? (*init_mean)(t, d) : init[d], lo[d], hi[d]);
            sigma(t, d) = sigma0[d];
        }

    const std::size_t n_elite = static_cast<std::size_t>(
        std::ceil(cfg.cem_elite_frac * static_cast<double>(cfg.samples)));

    std::vector<linalg::Matrix> candidates(cfg.horizon);
    for (auto& m : candidates) m.resize(cfg.samples, a_dim);

    for (std::size_t iter = 0; iter < cfg.cem_iterations; ++iter) {
        double sigma_max = 0.0;
        for (double s : sigma.data) sigma_max = std::max(sigma_max, s);
        if (sigma_max < 1e-6) break;  // variance collapse

        for (std::size_t k = 0; k < cfg.samples; ++k) {
            Rng rng(derive_seed(seed, {kCemTag, iter, k}));
            for (std::size_t t = 0; t < cfg.horizon; ++t)
                for (std::size_t d = 0; d < a_dim; ++d)
                    candidates[t](k, d) =
                        clip(rng.normal(mean(t, d), sigma(t, d)), lo[d], hi[d]);
        }

        const auto returns = evaluate_sequences(model, s0, candidates, cfg.gamma);
        check_finite_costs(returns, "plan_cem");

        std::vector<std::size_t> order(cfg.samples);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return returns[a] > returns[b]; });

        for (std::size_t t = 0; t < cfg.horizon; ++t)
            for (std::size_t d = 0; d < a_dim; ++d) {
                double m = 0.0;
                for (std::size_t e = 0; e < n_elite; ++e) m += candidates[t](order[e], d);
                m /= static_cast<double>(n_elite);
                double var = 0.0;
                for (std::size_t e = 0; e < n_elite; ++e) {
                    const double dv = candidates[t](order[e], d) - m;
                    var += dv * dv;
                }
                var /= static_cast<double>(n_elite);
                mean(t, d) = m;
                sigma(t, d) = std::sqrt(var);
            }
    }

    for (std::size_t t = 0; t < cfg.horizon; ++t)
        for (std::size_t d = 0; d < a_dim; ++d) mean(t, d) = clip(mean(t, d), lo[d], hi[d]);
    return mean;
}

MppiPlanResult plan_mppi(PlanningModel& model, const std::vector<double>& s0,
                         const PlannerConfig& cfg, ActionSequenceBuffer buffer,
                         std::uint64_t seed, const std::vector<double>* refill_arg) {
    cfg.validate();
    std::vector<double> lo, hi;
    model.action_bounds(lo, hi);
    const std::size_t a_dim = model.action_dim();
    if (buffer.actions.rows != cfg.horizon || buffer.actions.cols != a_dim)
        throw std::invalid_argument("plan_mppi: buffer shape does not match config");
    if (refill_arg && refill_arg->size() != a_dim)
        throw std::invalid_argument("plan_mppi: refill dimension mismatch");

    const auto sigma = sigma_or_default(cfg.mppi_sigma, 0.10, lo, hi);
    const auto refill = refill_arg ? *refill_arg : nominal_or_midpoint(cfg, lo, hi);

    std::vector<linalg::Matrix> noise(cfg.horizon);
    std::vector<linalg::Matrix> candidates(cfg.horizon);
    for (std::size_t t = 0; t < cfg.horizon; ++t) {
        noise[t].resize(cfg.samples, a_dim);
        candidates[t].resize(cfg.samples, a_dim);
    }

    MppiPlanResult result;
    for (std::size_t iter = 0; iter < cfg.mppi_iterations; ++iter) {
        for (std::size_t k = 0; k < cfg.samples; ++k) {
            Rng rng(mppi_noise_stream_seed(seed, iter, k));
            for (std::size_t t = 0; t < cfg.horizon; ++t)
                for (std::size_t d = 0; d < a_dim; ++d) {
                    const double eps = rng.normal(0.0, sigma[d]);
                    noise[t](k, d) = eps;
                    candidates[t](k, d) = clip(buffer.actions(t, d) + eps, lo[d], hi[d]);
                }
        }

        const auto returns = evaluate_sequences(model, s0, candidates, cfg.gamma);
        std::vector<double> costs(returns.size());
        for (std::size_t k = 0; k < returns.size(); ++k) costs[k] = -returns[k];
        check_finite_costs(costs, "plan_mppi");

        const auto w = mppi_weights(costs, cfg.mppi_lambda);
        for (std::size_t t = 0; t < cfg.horizon; ++t)
            for (std::size_t d = 0; d < a_dim; ++d) {
                double upd = 0.0;
                for (std::size_t k = 0; k < cfg.samples; ++k)
                    upd += w.omega[k] * noise[t](k, d);
                buffer.actions(t, d) = clip(buffer.actions(t, d) + upd, lo[d], hi[d]);
            }
        result.last_omega = w.omega;
    }

    result.executed.assign(buffer.actions.row(0), buffer.actions.row(0) + a_dim);
    buffer.shift_left(refill);
    result.buffer = std::move(buffer);
    return result;
}

std::vector<double> default_sigma(const PlanningModel& model, double fraction) {
    std::vector<double> lo, hi;
    model.action_bounds(lo, hi);
    std::vector<double> s(lo.size());
    for (std::size_t d = 0; d < lo.size(); ++d) s[d] = fraction * (hi[d] - lo[d]);
    return s;
}

}  // namespace hvacmpc
