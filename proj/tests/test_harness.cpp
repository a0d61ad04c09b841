#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hvacmpc/experiment.hpp"
#include "hvacmpc/reward.hpp"

using namespace hvacmpc;
namespace fs = std::filesystem;

namespace {

fs::path test_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hvacmpc_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

ExperimentConfig small_mpc_config(std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.profile = "fresno_jul";
    cfg.months = 1;
    cfg.seed = seed;
    cfg.n_models = 2;
    cfg.hidden = 24;
    cfg.epochs = 3;
    cfg.batch_size = 256;
    cfg.samples = 8;
    cfg.horizon = 4;
    cfg.sigma_frac = 0.2;
    cfg.update_period = 0;
    return cfg;
}

}  // namespace

TEST_CASE("reward: direct Eq. substitution cases") {
    BuildingConfig b = BuildingConfig::standard_five_zone();
    auto cfg = RewardConfig::for_building(b);
    REQUIRE(cfg.energy_bounds.size() == 5);
    // (P_h/eta + P_c/COP) * dt = (6/0.9 + 5/3) * 0.25
    CHECK(cfg.energy_bounds[0].max ==
          doctest::Approx((6.0 / 0.9 + 5.0 / 3.0) * 0.25).epsilon(1e-12));

    std::vector<ZoneBuildingState> zones(5);
    std::vector<int> occ(5, 1);
    CHECK(reward(zones, occ, cfg) == 0.0);  // all PMV = 0, all E = 0

    // one zone, occupied: Norm(|PMV|)=0.5 (pmv=1.5 over bounds 0..3),
    // Norm(E)=0.2 -> R = -(4*0.5 + 0.2) = -2.2
    RewardConfig one;
    one.energy_bounds = {{0.0, 1.0}};
    std::vector<ZoneBuildingState> zone(1);
    zone[0].pmv = 1.5;
    zone[0].heat_energy = 0.12;
    zone[0].cool_energy = 0.08;
    CHECK(reward(zone, {1}, one) == doctest::Approx(-2.2).epsilon(1e-12));
    CHECK(reward(zone, {0}, one) == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("collect: row count and byte-identical reruns") {
    const auto dir = test_dir("collect");
    ExperimentConfig cfg;
    cfg.months = 1;
    cfg.seed = 11;
    const auto p1 = (dir / "d1.csv").string();
    const auto p2 = (dir / "d2.csv").string();
    const auto data = collect_dataset(cfg, p1);
    CHECK(data.size() == 2976);
    collect_dataset(cfg, p2);
    CHECK(read_file(p1) == read_file(p2));

    cfg.months = 2;
    const auto data2 = collect_dataset(cfg, "");
    CHECK(data2.size() == 5952);
}

TEST_CASE("dataset csv round trip preserves values bit-exactly") {
    const auto dir = test_dir("dataset_io");
    ExperimentConfig cfg;
    cfg.months = 1;
    cfg.seed = 3;
    auto data = collect_dataset(cfg, "");
    data.resize(50);
    const auto path = (dir / "d.csv").string();
    save_dataset_csv(data, path);
    const auto loaded = load_dataset_csv(path);
    REQUIRE(loaded.size() == 50);
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(flatten(loaded[i].state) == flatten(data[i].state));
        CHECK(flatten(loaded[i].next_state) == flatten(data[i].next_state));
        CHECK(flatten_action(loaded[i].action) == flatten_action(data[i].action));
        CHECK(loaded[i].timestep_index == data[i].timestep_index);
    }
}

TEST_CASE("train_pipeline: loss-curve rows, manifest, ensemble size") {
    const auto dir = test_dir("train");
    ExperimentConfig ccfg;
    ccfg.months = 1;
    ccfg.seed = 5;
    auto data = collect_dataset(ccfg, "");
    data.resize(600);

    EnsembleTrainConfig tc;
    tc.n_models = 3;
    tc.hidden = 16;
    tc.epochs = 4;
    tc.batch_size = 128;
    tc.seed = 5;
    const auto result = train_pipeline(data, tc, dir.string());
    CHECK(result.ensemble.size() == 3);
    CHECK(result.manifest.seeds.size() == 3);
    CHECK(result.manifest.seeds[0] != result.manifest.seeds[1]);

    // epochs x M data rows
    const auto curves = read_file(dir / "loss_curves.csv");
    std::size_t rows = 0;
    for (char c : curves)
        if (c == '\n') ++rows;
    CHECK(rows == 1 + 4 * 3);

    // M=1 is a valid ensemble
    tc.n_models = 1;
    const auto single = train_ensemble(data, tc);
    CHECK(single.ensemble.size() == 1);

    const auto loaded = load_ensemble(dir.string());
    CHECK(loaded.size() == 3);
}

TEST_CASE("run: rule controller reproduces the collected trajectory") {
    const auto dir = test_dir("run_rule");
    ExperimentConfig cfg;
    cfg.months = 1;
    cfg.seed = 21;
    cfg.out_dir = (dir / "out").string();
    const auto data = collect_dataset(cfg, "");
    const auto result = run_control_experiment(cfg, nullptr);
    REQUIRE(result.trace.transitions.size() == data.size());
    for (std::size_t t = 0; t < data.size(); t += 131) {
        CHECK(result.trace.transitions[t].next_state.zones[1].temp_in ==
              data[t].next_state.zones[1].temp_in);
        CHECK(result.trace.transitions[t].action.zones[0].cool_sp ==
              data[t].action.zones[0].cool_sp);
    }
    CHECK(fs::exists(dir / "out" / "results.csv"));
    CHECK(fs::exists(dir / "out" / "occupancy.csv"));
    CHECK(fs::exists(dir / "out" / "metrics.txt"));

    const auto records = load_results_csv((dir / "out" / "results.csv").string());
    REQUIRE(records.size() == 2976);
    CHECK(records[500].temp[2] == result.trace.transitions[500].next_state.zones[2].temp_in);
}

TEST_CASE("run: mpc controller produces a full results csv and respects bounds") {
    const auto dir = test_dir("run_mpc");
    auto cfg = small_mpc_config(31);
    const auto data = collect_dataset(cfg, "");

    EnsembleTrainConfig tc;
    tc.n_models = cfg.n_models;
    tc.hidden = cfg.hidden;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.seed = cfg.seed;
    auto trained = train_ensemble(data, tc);

    cfg.controller = "mppi";
    cfg.months = 1;
    cfg.out_dir = (dir / "out").string();
    // short episode via a truncated weather csv is not allowed (schema
    // requires full months), so run the full month with a tiny planner
    const auto result = run_control_experiment(cfg, &trained.ensemble);
    CHECK(result.trace.transitions.size() == 2976);
    for (std::size_t t = 0; t < result.trace.transitions.size(); t += 97)
        CHECK(action_within_bounds(result.trace.transitions[t].action));
    const auto records = load_results_csv((dir / "out" / "results.csv").string());
    CHECK(records.size() == 2976);
}

TEST_CASE("in-situ updates trigger on the weekly grid once the window is full") {
    const auto dir = test_dir("run_update");
    auto cfg = small_mpc_config(41);
    const auto data_path = (dir / "seed.csv").string();
    collect_dataset(cfg, data_path);

    EnsembleTrainConfig tc;
    tc.n_models = 1;
    tc.hidden = 12;
    tc.epochs = 1;
    tc.batch_size = 128;
    tc.seed = cfg.seed;
    auto trained = train_ensemble(load_dataset_csv(data_path), tc);

    cfg.controller = "mppi";
    cfg.samples = 4;
    cfg.horizon = 2;
    cfg.epochs = 1;
    cfg.batch_size = 128;
    cfg.n_models = 1;
    cfg.hidden = 12;
    cfg.update_period = 672;
    cfg.sliding_window = 2000;
    cfg.seed_dataset = data_path;
    const auto result = run_control_experiment(cfg, &trained.ensemble);
    CHECK(result.update_steps == std::vector<std::size_t>{672, 1344, 2016, 2688});
}

TEST_CASE("training on simulator data reduces validation loss within 5 epochs") {
    ExperimentConfig ccfg;
    ccfg.months = 1;
    ccfg.seed = 8;
    auto data = collect_dataset(ccfg, "");
    data.resize(1200);
    EnsembleTrainConfig tc;
    tc.n_models = 1;
    tc.hidden = 32;
    tc.epochs = 5;
    tc.batch_size = 256;
    tc.seed = 8;
    const auto result = train_ensemble(data, tc);
    const auto& val = result.curves[0].val_loss;
    REQUIRE(val.size() == 6);
    CHECK(val.back() < val.front());
    // the model predicts building-state deltas only: output dim 5N
    CHECK(result.ensemble.model(0).output_dim() == building_state_dim(5));
    CHECK(result.ensemble.model(0).input_dim() ==
          building_state_dim(5) + action_dim(5) + env_state_dim(5));
}

TEST_CASE("compute_metrics: violation counting over occupied steps only") {
    std::vector<StepRecord> records(4);
    std::vector<std::vector<int>> occ(4);
    for (std::size_t t = 0; t < 4; ++t) {
        records[t].step = t;
        records[t].temp = {24.0};
        records[t].pmv = {t < 2 ? 1.0 : 0.1};  // violations at t=0,1
        records[t].heat_kwh = {0.0};
        records[t].cool_kwh = {0.25};
        records[t].heat_sp = {20.0};
        records[t].cool_sp = {24.0};
        records[t].reward = -1.0;
        occ[t] = {t % 2 == 0 ? 1 : 0};  // occupied at t=0,2
    }
    const auto m = compute_metrics(records, occ);
    CHECK(m.occupied_zone_steps == 2);
    CHECK(m.violation_rate == doctest::Approx(0.5));  // t=0 violates, t=2 does not
    CHECK(m.total_cool_kwh == doctest::Approx(1.0));
    CHECK(m.total_reward == doctest::Approx(-4.0));

    const auto all_occ = compute_metrics(records, {});
    CHECK(all_occ.occupied_zone_steps == 4);

    // zero-energy trace
    for (auto& r : records) r.cool_kwh = {0.0};
    CHECK(compute_metrics(records, occ).total_kwh() == 0.0);
}

TEST_CASE("results csv actions replay through the simulator to the same trace") {
    const auto dir = test_dir("replay");
    ExperimentConfig cfg;
    cfg.months = 1;
    cfg.seed = 97;
    cfg.out_dir = (dir / "out").string();
    run_control_experiment(cfg, nullptr);

    const auto records = load_results_csv((dir / "out" / "results.csv").string());
    const auto weather = cfg.make_weather();
    const auto schedule = cfg.make_schedule();
    const auto building = cfg.make_building();
    const auto replay = rollout_episode(
        [&](std::size_t t, const FullState&) {
            Action a;
            a.zones.resize(5);
            for (std::size_t z = 0; z < 5; ++z) {
                a.zones[z].heat_sp = records[t].heat_sp[z];
                a.zones[z].cool_sp = records[t].cool_sp[z];
            }
            return a;
        },
        building, weather, schedule, records.size(), nullptr);
    for (std::size_t t = 0; t < records.size(); t += 173)
        for (std::size_t z = 0; z < 5; ++z) {
            CHECK(replay.transitions[t].next_state.zones[z].temp_in == records[t].temp[z]);
            CHECK(replay.transitions[t].next_state.zones[z].cool_energy ==
                  records[t].cool_kwh[z]);
        }
}

TEST_CASE("compare: identical configs give zero delta; table rows") {
    const auto dir = test_dir("compare");
    ExperimentConfig cfg;
    cfg.months = 1;
    cfg.seed = 77;
    const auto out = (dir / "cmp.csv").string();
    const auto rows = compare_controllers(cfg, {"rule", "rule"}, nullptr, out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].metrics.total_kwh() == rows[1].metrics.total_kwh());
    CHECK(rows[0].metrics.total_reward == rows[1].metrics.total_reward);

    const auto table = read_file(out);
    std::size_t lines = 0;
    for (char c : table)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 2 + 1);  // header + two data rows + one delta row
    CHECK(table.find("delta_rule_vs_rule,0%") != std::string::npos);
}

TEST_CASE("key=value config parsing") {
    const auto dir = test_dir("cfg");
    const auto path = (dir / "c.cfg").string();
    {
        std::ofstream out(path);
        out << "# comment\n";
        out << "controllers = rule,mppi\n";
        out << "months=2\n";
        out << "\n";
        out << "seed = 9   # trailing comment\n";
    }
    const auto entries = parse_key_value_file(path);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].first == "controllers");
    CHECK(entries[0].second == "rule,mppi");
    CHECK(entries[1].second == "2");
    CHECK(entries[2].second == "9");

    {
        std::ofstream out(path);
        out << "not a key value line\n";
    }
    CHECK_THROWS_AS(parse_key_value_file(path), std::runtime_error);
}
