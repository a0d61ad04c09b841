#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hvacmpc/experiment.hpp"

namespace {

using hvacmpc::ExperimentConfig;

void add_weather_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--profile", cfg.profile,
                    "weather profile: fresno_jan|fresno_jul|chicago_jan|chicago_jul")
        ->capture_default_str();
    cmd->add_option("--weather-csv", cfg.weather_csv, "weather CSV path (overrides --profile)");
    cmd->add_option("--months", cfg.months, "episode length in months (2976 steps each)")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
}

void add_planner_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--samples", cfg.samples, "planner samples K")->capture_default_str();
    cmd->add_option("--horizon", cfg.horizon, "planning horizon H")->capture_default_str();
    cmd->add_option("--gamma", cfg.gamma, "discount factor")->capture_default_str();
    cmd->add_option("--lambda", cfg.lambda, "MPPI temperature")->capture_default_str();
    cmd->add_option("--sigma-frac", cfg.sigma_frac,
                    "MPPI noise scale as a fraction of each action range")
        ->capture_default_str();
    cmd->add_option("--mppi-iterations", cfg.mppi_iterations, "MPPI refinements per step")
        ->capture_default_str();
    cmd->add_option("--cem-iterations", cfg.cem_iterations, "CEM iterations")
        ->capture_default_str();
}

int run_evaluate(const std::string& results_path) {
    const auto records = hvacmpc::load_results_csv(results_path);
    std::vector<std::vector<int>> occupancy;
    const auto side =
        std::filesystem::path(results_path).parent_path() / "occupancy.csv";
    if (std::filesystem::exists(side)) {
        occupancy = hvacmpc::load_occupancy_csv(side.string());
    } else {
        std::cerr << "note: no occupancy.csv next to results; treating every step as occupied\n";
    }
    std::cout << hvacmpc::format_metrics(hvacmpc::compute_metrics(records, occupancy));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-zone HVAC control: RC building simulator, learned dynamics ensembles "
                 "and sampling-based MPC"};
    app.require_subcommand(1);

    ExperimentConfig cfg;

    // collect
    auto* collect = app.add_subcommand("collect", "roll out the rule-based policy, save dataset");
    std::string collect_out = "dataset.csv";
    add_weather_options(collect, cfg);
    collect->add_option("--out", collect_out, "output dataset CSV")->capture_default_str();
    collect->set_config("--config");

    // train
    auto* train = app.add_subcommand("train", "train a dynamics-model ensemble from a dataset");
    std::string train_data, train_out = "ensemble";
    train->add_option("--data", train_data, "dataset CSV")->required();
    train->add_option("--models", cfg.n_models, "ensemble size M")->capture_default_str();
    train->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
    train->add_option("--hidden", cfg.hidden, "hidden layer width")->capture_default_str();
    train->add_option("--batch", cfg.batch_size, "batch size")->capture_default_str();
    train->add_option("--lr", cfg.learning_rate, "learning rate")->capture_default_str();
    train->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    train->add_option("--out", train_out, "output ensemble directory")->capture_default_str();
    train->set_config("--config");

    // run
    auto* run = app.add_subcommand("run", "closed-loop control experiment");
    std::string run_out = "run_out";
    add_weather_options(run, cfg);
    add_planner_options(run, cfg);
    run->add_option("--controller", cfg.controller, "rule|rs|cem|mppi")->capture_default_str();
    run->add_option("--ensemble", cfg.ensemble_dir, "trained ensemble directory");
    run->add_option("--update-period", cfg.update_period,
                    "steps between in-situ retrainings (0 disables)")
        ->capture_default_str();
    run->add_option("--window", cfg.sliding_window, "sliding-window length in transitions")
        ->capture_default_str();
    run->add_option("--data", cfg.seed_dataset, "dataset CSV that pre-fills the sliding window");
    run->add_option("--epochs", cfg.epochs, "epochs for in-situ retraining")
        ->capture_default_str();
    run->add_option("--out", run_out, "output directory")->capture_default_str();
    run->set_config("--config");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "recompute metrics from a results CSV");
    std::string results_path;
    evaluate->add_option("--results", results_path, "results CSV path")->required();

    // compare
    auto* compare = app.add_subcommand("compare", "run several controllers on identical streams");
    std::string compare_spec;
    compare->add_option("--spec", compare_spec, "flat key=value file describing the comparison")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (collect->parsed()) {
            const auto data = hvacmpc::collect_dataset(cfg, collect_out);
            std::cout << "wrote " << data.size() << " transitions to " << collect_out << "\n";
        } else if (train->parsed()) {
            hvacmpc::EnsembleTrainConfig tc;
            tc.n_models = cfg.n_models;
            tc.hidden = cfg.hidden;
            tc.epochs = cfg.epochs;
            tc.batch_size = cfg.batch_size;
            tc.learning_rate = cfg.learning_rate;
            tc.split_ratio = cfg.split_ratio;
            tc.seed = cfg.seed;
            const auto data = hvacmpc::load_dataset_csv(train_data);
            const auto result = hvacmpc::train_pipeline(data, tc, train_out);
            for (std::size_t m = 0; m < result.curves.size(); ++m) {
                const auto& c = result.curves[m];
                std::printf("model %zu: train %.6g -> %.6g", m, c.train_loss.front(),
                            c.train_loss.back());
                if (!c.val_loss.empty())
                    std::printf(", val %.6g -> %.6g", c.val_loss.front(), c.val_loss.back());
                std::printf("\n");
            }
            std::cout << "wrote ensemble to " << train_out << "\n";
        } else if (run->parsed()) {
            cfg.out_dir = run_out;
            std::optional<hvacmpc::Ensemble> ensemble;
            if (!cfg.ensemble_dir.empty())
                ensemble = hvacmpc::load_ensemble(cfg.ensemble_dir);
            const auto result =
                hvacmpc::run_control_experiment(cfg, ensemble ? &*ensemble : nullptr);
            std::cout << hvacmpc::format_metrics(result.metrics);
            if (!result.update_steps.empty()) {
                std::cout << "in_situ_updates=";
                for (std::size_t i = 0; i < result.update_steps.size(); ++i)
                    std::cout << (i ? "," : "") << result.update_steps[i];
                std::cout << "\n";
            }
            std::cout << "wrote results to " << run_out << "\n";
        } else if (evaluate->parsed()) {
            return run_evaluate(results_path);
        } else if (compare->parsed()) {
            const auto entries = hvacmpc::parse_key_value_file(compare_spec);
            std::vector<std::string> controllers;
            std::string out_csv = "compare.csv";
            std::string ensemble_dir;
            for (const auto& [key, value] : entries) {
                if (key == "controllers") {
                    for (const auto& name : CLI::detail::split(value, ','))
                        if (!name.empty()) controllers.push_back(name);
                } else if (key == "profile") cfg.profile = value;
                else if (key == "weather_csv") cfg.weather_csv = value;
                else if (key == "months") cfg.months = std::stoul(value);
                else if (key == "seed") cfg.seed = std::stoull(value);
                else if (key == "ensemble") ensemble_dir = value;
                else if (key == "out") out_csv = value;
                else if (key == "samples") cfg.samples = std::stoul(value);
                else if (key == "horizon") cfg.horizon = std::stoul(value);
                else if (key == "gamma") cfg.gamma = std::stod(value);
                else if (key == "lambda") cfg.lambda = std::stod(value);
                else if (key == "sigma_frac") cfg.sigma_frac = std::stod(value);
                else if (key == "update_period") cfg.update_period = std::stoul(value);
                else if (key == "window") cfg.sliding_window = std::stoul(value);
                else if (key == "data") cfg.seed_dataset = value;
                else if (key == "epochs") cfg.epochs = std::stoul(value);
                else throw std::runtime_error("compare spec: unknown key '" + key + "'");
            }
            std::optional<hvacmpc::Ensemble> ensemble;
            if (!ensemble_dir.empty()) ensemble = hvacmpc::load_ensemble(ensemble_dir);
            const auto rows = hvacmpc::compare_controllers(cfg, controllers,
                                                           ensemble ? &*ensemble : nullptr, out_csv);
            for (const auto& row : rows)
                std::printf("%-6s total %.3f kWh, violation %.4f, reward %.3f\n",
                            row.controller.c_str(), row.metrics.total_kwh(),
                            row.metrics.violation_rate, row.metrics.total_reward);
            const double base = rows.front().metrics.total_kwh();
            for (std::size_t i = 1; i < rows.size(); ++i)
                std::printf("%s saves %.2f%% energy vs %s\n", rows[i].controller.c_str(),
                            base > 0 ? (base - rows[i].metrics.total_kwh()) / base * 100.0 : 0.0,
                            rows.front().controller.c_str());
            std::cout << "wrote " << out_csv << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
