#pragma once

#include <cstdint>
#include <vector>

#include "hvacmpc/linalg.hpp"
#include "hvacmpc/planning.hpp"

namespace hvacmpc {

struct PlannerConfig {
    std::size_t samples = 1000;  // K
    std::size_t horizon = 20;    // H
    double gamma = 0.99;

    double mppi_lambda = 1.0;
    // Per action dimension; empty = 10% of each dimension's range.
    std::vector<double> mppi_sigma;
    // Eq.-7 refinements per plan call; receding-horizon control uses 1.
    std::size_t mppi_iterations = 1;

    std::size_t cem_iterations = 5;
    double cem_elite_frac = 0.1;
    // Per action dimension; empty = 25% of each dimension's range.
    std::vector<double> cem_sigma_init;

    // Nominal action used to initialize and refill sequence buffers and
    // the CEM mean; empty = midpoint of the bounds. Building controllers
    // set this to the rule-based default pair.
    std::vector<double> init_action;

    void validate() const;  // throws std::invalid_argument
};

// An H x A rolling buffer of planned actions: executed head, left-shift,
// tail refilled with the initialization action.
struct ActionSequenceBuffer {
    linalg::Matrix actions;  // H x A

    static ActionSequenceBuffer initialized(std::size_t horizon,
                                            const std::vector<double>& init_action);
    void shift_left(const std::vector<double>& refill);
};

// Importance-sampling weights over trajectory costs:
//   beta  = min_k cost_k
//   eta   = sum_k exp(-(cost_k - beta) / lambda)
//   omega = exp(-(cost_k - beta) / lambda) / eta
// Reductions run in fixed index order, so results are bit-reproducible
// and shifting every cost by an exactly-representable constant leaves
// omega bit-identical.
struct MppiWeights {
    std::vector<double> omega;
    double beta = 0.0;
    double eta = 0.0;
};

MppiWeights mppi_weights(const std::vector<double>& costs, double lambda);

// K uniform sequences within bounds; returns the argmax-return sequence
// (ties broken by the lowest sample index).
linalg::Matrix plan_random_shooting(PlanningModel& model, const std::vector<double>& s0,
                                    const PlannerConfig& cfg, std::uint64_t seed);

// Iterative Gaussian refit on the top ceil(elite_frac * K) sequences;
// returns the final mean. Terminates early if every sigma collapses
// below 1e-6. `init_mean` (H x A), when given, overrides cfg.init_action
// as the starting mean.
linalg::Matrix plan_cem(PlanningModel& model, const std::vector<double>& s0,
                        const PlannerConfig& cfg, std::uint64_t seed,
                        const linalg::Matrix* init_mean = nullptr);

struct MppiPlanResult {
    std::vector<double> executed;  // clipped first action
    ActionSequenceBuffer buffer;   // shifted, tail refilled
    std::vector<double> last_omega;
};

// Noise-weighted nominal-sequence update (one refinement per
// mppi_iterations), executes the head and advances the buffer. `refill`,
// when given, overrides cfg.init_action as the value appended to the
// buffer tail (receding-horizon controllers pass the rule-based action
// for the slot's wall-clock time).
MppiPlanResult plan_mppi(PlanningModel& model, const std::vector<double>& s0,
                         const PlannerConfig& cfg, ActionSequenceBuffer buffer,
                         std::uint64_t seed, const std::vector<double>* refill = nullptr);

// Per-dimension sigma defaults derived from the model's action bounds.
std::vector<double> default_sigma(const PlanningModel& model, double fraction);

// Seed of the noise stream for trajectory k in a given refinement
// iteration. Within a stream, draws are taken t-major then
// dimension-major, one normal(0, sigma_d) each. Exposed so tests can
// reconstruct sampled noise.
std::uint64_t mppi_noise_stream_seed(std::uint64_t seed, std::size_t iteration, std::size_t k);

}  // namespace hvacmpc
