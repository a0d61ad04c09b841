#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvacmpc/controllers.hpp"
#include "hvacmpc/ensemble.hpp"
#include "hvacmpc/metrics.hpp"

namespace hvacmpc {

// --- Dataset / results persistence -------------------------------------

// Dataset CSV: header plus one row per transition, columns being the
// flattened state (5N+7+N), the action (2N), the flattened next state and
// the step index. Values carry 17 significant digits so reloads are
// bit-exact.
void save_dataset_csv(const Dataset& data, const std::string& path);
Dataset load_dataset_csv(const std::string& path);

// Results CSV: step, then per zone temp/pmv/heat_kwh/cool_kwh/heat_sp/
// cool_sp, then reward.
void save_results_csv(const std::vector<StepRecord>& records, const std::string& path);
std::vector<StepRecord> load_results_csv(const std::string& path);

// Occupancy sidecar (step, occ0..occN-1), written next to results so
// `evaluate` can count violations over occupied steps only.
void save_occupancy_csv(const std::vector<std::vector<int>>& occupancy, const std::string& path);
std::vector<std::vector<int>> load_occupancy_csv(const std::string& path);

// Flat key=value config-file parser (rhs may contain '='-free text;
// '#' starts a comment).
std::vector<std::pair<std::string, std::string>> parse_key_value_file(const std::string& path);

// --- Experiment orchestration -------------------------------------------

struct ExperimentConfig {
    std::string profile = "fresno_jul";
    std::string weather_csv;  // when set, overrides profile
    std::size_t months = 1;
    std::string controller = "rule";
    std::uint64_t seed = 0;
    std::size_t n_zones = 5;

    // training
    std::size_t n_models = 5;
    std::size_t hidden = 200;
    std::size_t epochs = 40;
    std::size_t batch_size = 512;
    double learning_rate = 1e-3;
    double split_ratio = 0.8;

    // planning
    std::size_t samples = 1000;
    std::size_t horizon = 20;
    double gamma = 0.99;
    double lambda = 1.0;
    double sigma_frac = 0.10;
    std::size_t mppi_iterations = 1;
    std::size_t cem_iterations = 5;

    // in-situ updates
    std::size_t sliding_window = 5952;  // two months
    std::size_t update_period = 672;    // weekly; 0 disables
    std::string seed_dataset;           // optional: pre-fills the sliding window

    std::string ensemble_dir;
    std::string out_dir;

    PlannerConfig planner_config() const;
    WeatherSeries make_weather() const;
    OccupancySchedule make_schedule() const;
    BuildingConfig make_building() const;
};

// Roll out the rule-based policy and persist the transitions
// (months * 2976 rows). Returns the dataset.
Dataset collect_dataset(const ExperimentConfig& cfg, const std::string& out_path);

struct EnsembleTrainConfig {
    std::size_t n_models = 5;
    std::size_t hidden = 200;
    std::size_t epochs = 40;
    std::size_t batch_size = 512;
    double learning_rate = 1e-3;
    double split_ratio = 0.8;
    std::uint64_t seed = 0;
    std::size_t error_window = 4;
    double phi = 0.9;
};

struct EnsembleTrainResult {
    Ensemble ensemble;
    EnsembleManifest manifest;
    std::vector<TrainResult> curves;  // per model
};

// Fit normalization statistics on the train split, then train M models
// from distinct derived seeds with independently shuffled batches.
EnsembleTrainResult train_ensemble(const Dataset& data, const EnsembleTrainConfig& cfg);

// train_ensemble + persistence: model files, manifest and a loss-curve
// CSV with exactly epochs x M rows.
EnsembleTrainResult train_pipeline(const Dataset& data, const EnsembleTrainConfig& cfg,
                                   const std::string& out_dir);

struct RunResult {
    EpisodeTrace trace;
    MetricsReport metrics;
    std::vector<std::size_t> update_steps;  // steps where in-situ retraining ran
};

// Closed-loop control on the simulator. For MPC controllers the ensemble
// weights refresh from each real transition and, when update_period > 0,
// all models retrain from scratch on the sliding window every
// update_period steps. When out_dir is set, writes results.csv,
// occupancy.csv and metrics.txt.
RunResult run_control_experiment(const ExperimentConfig& cfg, Ensemble* ensemble);

// Run every controller in `controllers` under cfg's identical weather and
// occupancy streams; write a side-by-side table with percentage energy
// deltas vs the first entry ((baseline - candidate) / baseline).
struct CompareRow {
    std::string controller;
    MetricsReport metrics;
};

std::vector<CompareRow> compare_controllers(const ExperimentConfig& cfg,
                                            const std::vector<std::string>& controllers,
                                            Ensemble* ensemble, const std::string& out_csv);

}  // namespace hvacmpc
