#include "hvacmpc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hvacmpc/normalize.hpp"
#include "hvacmpc/rng.hpp"

namespace hvacmpc {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kWeatherTag = 0x77656174686572ULL;
constexpr std::uint64_t kScheduleTag = 0x7363686564ULL;
constexpr std::uint64_t kModelTag = 0x6d6f64656cULL;
constexpr std::uint64_t kSplitTag = 0x73706c6974ULL;
constexpr std::uint64_t kUpdateTag = 0x757064617465ULL;
constexpr std::uint64_t kControlTag = 0x6374726cULL;

void append_g17(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

std::vector<std::string> split_line(const std::string& line, char sep = ',') {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

double to_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": cannot parse number from '" + s + "'");
    }
}

}  // namespace

// --- Dataset CSV --------------------------------------------------------

namespace {

std::string dataset_header(std::size_t n) {
    std::string h;
    auto state_cols = [&](const std::string& prefix) {
        for (std::size_t z = 0; z < n; ++z)
            for (const char* f : {"temp", "rh", "pmv", "heat_kwh", "cool_kwh"})
                h += prefix + "z" + std::to_string(z) + "_" + f + ",";
        for (const char* f :
             {"t_out", "rh_out", "diffuse", "direct", "incident", "wind_speed", "wind_dir"})
            h += prefix + f + ",";
        for (std::size_t z = 0; z < n; ++z) h += prefix + "occ" + std::to_string(z) + ",";
    };
    state_cols("s_");
    for (std::size_t z = 0; z < n; ++z)
        h += "a_z" + std::to_string(z) + "_heat_sp,a_z" + std::to_string(z) + "_cool_sp,";
    state_cols("ns_");
    h += "step";
    return h;
}

}  // namespace

void save_dataset_csv(const Dataset& data, const std::string& path) {
    if (data.empty()) throw std::invalid_argument("save_dataset_csv: empty dataset");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset csv: " + path);
    const std::size_t n = data.front().state.n_zones();
    out << dataset_header(n) << "\n";
    std::string line;
    for (const auto& tr : data) {
        line.clear();
        for (double v : flatten(tr.state)) {
            append_g17(line, v);
            line += ',';
        }
        for (double v : flatten_action(tr.action)) {
            append_g17(line, v);
            line += ',';
        }
        for (double v : flatten(tr.next_state)) {
            append_g17(line, v);
            line += ',';
        }
        line += std::to_string(tr.timestep_index);
        out << line << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset csv empty: " + path);
    const auto header = split_line(line);
    // Infer zone count from column count: 2*(6N+7) + 2N + 1.
    if (header.size() < 15 || (header.size() - 15) % 14 != 0)
        throw std::runtime_error("dataset csv: unexpected column count " +
                                 std::to_string(header.size()));
    const std::size_t n = (header.size() - 15) / 14;
    if (header != split_line(dataset_header(n)))
        throw std::runtime_error("dataset csv: header does not match schema");

    const std::size_t state_dim = full_state_dim(n);
    Dataset data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_line(line);
        const std::string where = "dataset csv line " + std::to_string(line_no);
        if (cells.size() != header.size())
            throw std::runtime_error(where + ": wrong column count");
        std::size_t c = 0;
        auto take = [&](std::size_t count) {
            std::vector<double> v(count);
            for (auto& x : v) x = to_double(cells[c++], where);
            return v;
        };
        Transition tr;
        tr.state = unflatten(take(state_dim), n);
        tr.action = unflatten_action(take(2 * n));
        tr.next_state = unflatten(take(state_dim), n);
        tr.timestep_index = static_cast<std::int64_t>(to_double(cells[c++], where));
        data.push_back(std::move(tr));
    }
    return data;
}

// --- Results CSV ----------------------------------------------------------

void save_results_csv(const std::vector<StepRecord>& records, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("save_results_csv: empty trace");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write results csv: " + path);
    const std::size_t n = records.front().temp.size();
    out << "step";
    for (std::size_t z = 0; z < n; ++z) {
        const std::string zs = std::to_string(z);
        out << ",zone" << zs << "_temp,zone" << zs << "_pmv,zone" << zs << "_heat_kwh,zone" << zs
            << "_cool_kwh,zone" << zs << "_heat_sp,zone" << zs << "_cool_sp";
    }
    out << ",reward\n";
    std::string line;
    for (const auto& r : records) {
        line = std::to_string(r.step);
        for (std::size_t z = 0; z < n; ++z) {
            for (double v : {r.temp[z], r.pmv[z], r.heat_kwh[z], r.cool_kwh[z], r.heat_sp[z],
                             r.cool_sp[z]}) {
                line += ',';
                append_g17(line, v);
            }
        }
        line += ',';
        append_g17(line, r.reward);
        out << line << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<StepRecord> load_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("results csv empty: " + path);
    const auto header = split_line(line);
    if (header.size() < 8 || (header.size() - 2) % 6 != 0)
        throw std::runtime_error("results csv: unexpected column count");
    const std::size_t n = (header.size() - 2) / 6;

    std::vector<StepRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_line(line);
        const std::string where = "results csv line " + std::to_string(line_no);
        if (cells.size() != header.size())
            throw std::runtime_error(where + ": wrong column count");
        StepRecord r;
        r.step = static_cast<std::size_t>(to_double(cells[0], where));
        r.temp.resize(n);
        r.pmv.resize(n);
        r.heat_kwh.resize(n);
        r.cool_kwh.resize(n);
        r.heat_sp.resize(n);
        r.cool_sp.resize(n);
        std::size_t c = 1;
        for (std::size_t z = 0; z < n; ++z) {
            r.temp[z] = to_double(cells[c++], where);
            r.pmv[z] = to_double(cells[c++], where);
            r.heat_kwh[z] = to_double(cells[c++], where);
            r.cool_kwh[z] = to_double(cells[c++], where);
            r.heat_sp[z] = to_double(cells[c++], where);
            r.cool_sp[z] = to_double(cells[c++], where);
        }
        r.reward = to_double(cells[c], where);
        records.push_back(std::move(r));
    }
    return records;
}

void save_occupancy_csv(const std::vector<std::vector<int>>& occupancy, const std::string& path) {
    if (occupancy.empty()) throw std::invalid_argument("save_occupancy_csv: empty");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write occupancy csv: " + path);
    const std::size_t n = occupancy.front().size();
    out << "step";
    for (std::size_t z = 0; z < n; ++z) out << ",occ" << z;
    out << "\n";
    for (std::size_t t = 0; t < occupancy.size(); ++t) {
        out << t;
        for (int f : occupancy[t]) out << ',' << f;
        out << "\n";
    }
}

std::vector<std::vector<int>> load_occupancy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open occupancy csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("occupancy csv empty: " + path);
    const std::size_t n = split_line(line).size() - 1;
    std::vector<std::vector<int>> occ;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != n + 1) throw std::runtime_error("occupancy csv: ragged row");
        std::vector<int> flags(n);
        for (std::size_t z = 0; z < n; ++z) flags[z] = cells[z + 1] == "1" ? 1 : 0;
        occ.push_back(std::move(flags));
    }
    return occ;
}

std::vector<std::pair<std::string, std::string>> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config file " + path + " line " + std::to_string(line_no) +
                                     ": expected key = value");
        entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return entries;
}

// --- Experiment orchestration ---------------------------------------------

PlannerConfig ExperimentConfig::planner_config() const {
    PlannerConfig p;
    p.samples = samples;
    p.horizon = horizon;
    p.gamma = gamma;
    p.mppi_lambda = lambda;
    p.mppi_iterations = mppi_iterations;
    p.cem_iterations = cem_iterations;
    std::vector<double> lo, hi;
    setpoint_action_bounds(n_zones, lo, hi);
    p.mppi_sigma.resize(lo.size());
    for (std::size_t d = 0; d < lo.size(); ++d) p.mppi_sigma[d] = sigma_frac * (hi[d] - lo[d]);
    return p;
}

WeatherSeries ExperimentConfig::make_weather() const {
    if (!weather_csv.empty()) return load_weather_csv(weather_csv);
    return synthesize_weather(parse_weather_profile(profile), months,
                              derive_seed(seed, {kWeatherTag}));
}

OccupancySchedule ExperimentConfig::make_schedule() const {
    OccupancySchedule s;
    s.n_zones = n_zones;
    s.seed = derive_seed(seed, {kScheduleTag});
    return s;
}

BuildingConfig ExperimentConfig::make_building() const {
    BuildingConfig b = BuildingConfig::standard_five_zone();
    if (n_zones != b.n_zones)
        throw std::invalid_argument("ExperimentConfig: standard building has 5 zones");
    const bool winter = weather_csv.empty() && weather_profile_is_winter(parse_weather_profile(profile));
    b.comfort.clo = winter ? 1.0 : 0.5;
    return b;
}

Dataset collect_dataset(const ExperimentConfig& cfg, const std::string& out_path) {
    const auto weather = cfg.make_weather();
    const auto schedule = cfg.make_schedule();
    const auto building = cfg.make_building();
    const auto reward_cfg = RewardConfig::for_building(building);
    RuleBasedPolicy policy{cfg.n_zones};

    const std::size_t n_steps = cfg.months * kStepsPerMonth;
    const auto trace = rollout_episode(
        [&](std::size_t step, const FullState&) { return policy.action(step); }, building, weather,
        schedule, n_steps,
        [&](const std::vector<ZoneBuildingState>& zones, const std::vector<int>& occ) {
            return reward(zones, occ, reward_cfg);
        });
    if (!out_path.empty()) save_dataset_csv(trace.transitions, out_path);
    return trace.transitions;
}

EnsembleTrainResult train_ensemble(const Dataset& data, const EnsembleTrainConfig& cfg) {
    if (data.empty()) throw std::invalid_argument("train_ensemble: empty dataset");
    if (cfg.n_models == 0) throw std::invalid_argument("train_ensemble: need at least one model");

    Dataset train_set, val_set;
    split_train_val(data, cfg.split_ratio, derive_seed(cfg.seed, {kSplitTag}), train_set, val_set);
    if (train_set.empty()) throw std::invalid_argument("train_ensemble: empty training split");

    const auto input_stats = fit_input_stats(train_set);
    const auto delta_stats = fit_delta_stats(train_set);
    const auto train_data = build_training_matrices(train_set, input_stats, delta_stats);
    DynamicsTrainingData val_data;
    if (!val_set.empty()) val_data = build_training_matrices(val_set, input_stats, delta_stats);

    const std::size_t n_zones = data.front().state.n_zones();
    const auto dims = dynamics_layer_dims(n_zones, cfg.hidden);

    std::vector<DynamicsModel> models;
    std::vector<TrainResult> curves;
    EnsembleManifest manifest;
    manifest.n_models = cfg.n_models;
    manifest.error_window = cfg.error_window;
    manifest.phi = cfg.phi;
    for (std::size_t i = 0; i < cfg.n_models; ++i) {
        const std::uint64_t model_seed = derive_seed(cfg.seed, {kModelTag, i});
        manifest.seeds.push_back(model_seed);
        DynamicsModel model;
        model.n_zones = n_zones;
        model.input_stats = input_stats;
        model.delta_stats = delta_stats;
        model.net = xavier_init(dims, model_seed);

        TrainConfig tc;
        tc.learning_rate = cfg.learning_rate;
        tc.batch_size = cfg.batch_size;
        tc.epochs = cfg.epochs;
        tc.seed = model_seed;
        try {
            curves.push_back(train(model.net, train_data.inputs, train_data.targets,
                                   val_set.empty() ? nullptr : &val_data.inputs,
                                   val_set.empty() ? nullptr : &val_data.targets, tc));
        } catch (const std::exception& e) {
            throw std::runtime_error("train_ensemble: model " + std::to_string(i) +
                                     " failed: " + e.what());
        }
        models.push_back(std::move(model));
    }
    return EnsembleTrainResult{Ensemble(std::move(models), cfg.error_window, cfg.phi),
                               std::move(manifest), std::move(curves)};
}

EnsembleTrainResult train_pipeline(const Dataset& data, const EnsembleTrainConfig& cfg,
                                   const std::string& out_dir) {
    auto result = train_ensemble(data, cfg);
    fs::create_directories(out_dir);
    save_ensemble(result.ensemble, result.manifest, out_dir);
    std::ofstream curves(fs::path(out_dir) / "loss_curves.csv");
    if (!curves) throw std::runtime_error("cannot write loss curves in " + out_dir);
    curves << "model,epoch,train_loss,val_loss\n";
    char buf[96];
    for (std::size_t m = 0; m < result.curves.size(); ++m) {
        const auto& c = result.curves[m];
        for (std::size_t e = 1; e < c.train_loss.size(); ++e) {
            const double val = e < c.val_loss.size() ? c.val_loss[e] : 0.0;
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g\n", m, e, c.train_loss[e], val);
            curves << buf;
        }
    }
    return result;
}

RunResult run_control_experiment(const ExperimentConfig& cfg, Ensemble* ensemble) {
    const ControllerKind kind = parse_controller_kind(cfg.controller);
    if (kind != ControllerKind::Rule && ensemble == nullptr)
        throw std::invalid_argument("run_control_experiment: controller '" + cfg.controller +
                                    "' needs a trained ensemble");

    const auto weather = cfg.make_weather();
    const auto schedule = cfg.make_schedule();
    const auto building = cfg.make_building();
    const auto reward_cfg = RewardConfig::for_building(building);
    const std::size_t n_steps = cfg.months * kStepsPerMonth;
    if (weather.size() < n_steps)
        throw std::invalid_argument("run_control_experiment: weather shorter than episode");
    const bool updates_enabled = ensemble && kind != ControllerKind::Rule && cfg.update_period > 0;
    if (updates_enabled) {
        if (cfg.update_period > cfg.sliding_window)
            throw std::invalid_argument("run_control_experiment: update period > window length");
        if (cfg.sliding_window < cfg.batch_size)
            throw std::invalid_argument("run_control_experiment: window shorter than a batch");
    }

    std::unique_ptr<Controller> controller;
    if (kind == ControllerKind::Rule) {
        controller = std::make_unique<RuleController>(cfg.n_zones);
    } else {
        PlannerConfig pc = cfg.planner_config();
        controller = std::make_unique<PlannerController>(kind, *ensemble, weather, schedule,
                                                         reward_cfg, pc,
                                                         derive_seed(cfg.seed, {kControlTag}));
    }

    // Sliding window of real transitions for in-situ updates.
    Dataset window;
    if (updates_enabled && !cfg.seed_dataset.empty()) {
        Dataset seeded = load_dataset_csv(cfg.seed_dataset);
        const std::size_t keep = std::min(cfg.sliding_window, seeded.size());
        window.assign(seeded.end() - static_cast<long>(keep), seeded.end());
    }

    auto env_at = [&](std::size_t t) {
        const auto f = make_forecast(weather, schedule, t, 1);
        return f.env.front();
    };

    RunResult result;
    Simulator sim(building, Simulator::default_initial_state(building, env_at(0)));
    result.trace.transitions.reserve(n_steps);
    result.trace.rewards.reserve(n_steps);

    for (std::size_t t = 0; t < n_steps; ++t) {
        if (ensemble && kind != ControllerKind::Rule) {
            if (t > 0) {
                const auto& prev = result.trace.transitions.back();
                ensemble->record_observation(prev.state, prev.action, sim.state());
            }
            // Retrain only once the window can sustain a split plus full
            // batches; earlier update points are skipped.
            if (updates_enabled && t > 0 && t % cfg.update_period == 0 &&
                window.size() >= 2 * cfg.batch_size) {
                EnsembleTrainConfig tc;
                tc.n_models = ensemble->size();
                tc.hidden = cfg.hidden;
                tc.epochs = cfg.epochs;
                tc.batch_size = cfg.batch_size;
                tc.learning_rate = cfg.learning_rate;
                tc.split_ratio = cfg.split_ratio;
                tc.error_window = ensemble->error_window();
                tc.phi = ensemble->phi();
                tc.seed = derive_seed(cfg.seed, {kUpdateTag, t});
                *ensemble = train_ensemble(window, tc).ensemble;
                result.update_steps.push_back(t);
            }
        }

        const FullState before = sim.state();
        Action action;
        try {
            action = controller->act(t, before);
        } catch (const std::exception& e) {
            throw std::runtime_error("controller failed at step " + std::to_string(t) + ": " +
                                     e.what());
        }
        const StepResult sr = sim.step(action, before.env, env_at(t + 1));

        Transition tr;
        tr.state = before;
        tr.action = action;
        tr.next_state = sr.next_state;
        tr.timestep_index = static_cast<std::int64_t>(t);
        result.trace.rewards.push_back(reward(sr.next_state.zones, before.env.occupancy, reward_cfg));
        result.trace.transitions.push_back(std::move(tr));

        if (updates_enabled) {
            window.push_back(result.trace.transitions.back());
            while (window.size() > cfg.sliding_window) window.erase(window.begin());
        }
    }

    result.metrics =
        compute_metrics(records_from_trace(result.trace), occupancy_from_trace(result.trace));

    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        save_results_csv(records_from_trace(result.trace),
                         (fs::path(cfg.out_dir) / "results.csv").string());
        save_occupancy_csv(occupancy_from_trace(result.trace),
                           (fs::path(cfg.out_dir) / "occupancy.csv").string());
        std::ofstream metrics_out(fs::path(cfg.out_dir) / "metrics.txt");
        metrics_out << format_metrics(result.metrics);
    }
    return result;
}

std::vector<CompareRow> compare_controllers(const ExperimentConfig& cfg,
                                            const std::vector<std::string>& controllers,
                                            Ensemble* ensemble, const std::string& out_csv) {
    if (controllers.size() < 2)
        throw std::invalid_argument("compare: need at least two controllers");
    std::vector<CompareRow> rows;
    for (const auto& name : controllers) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.controller = name;
        run_cfg.out_dir.clear();
        if (parse_controller_kind(name) == ControllerKind::Rule) {
            rows.push_back({name, run_control_experiment(run_cfg, nullptr).metrics});
        } else {
            if (!ensemble)
                throw std::invalid_argument("compare: controller '" + name +
                                            "' needs a trained ensemble");
            // Fresh copy per controller so error history and in-situ
            // updates cannot leak between runs.
            Ensemble local = *ensemble;
            rows.push_back({name, run_control_experiment(run_cfg, &local).metrics});
        }
    }

    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        if (!out) throw std::runtime_error("cannot write compare csv: " + out_csv);
        out << "controller,total_kwh,heat_kwh,cool_kwh,pmv_mean,pmv_std,violation_rate,"
               "total_reward\n";
        char buf[256];
        for (const auto& row : rows) {
            const auto& m = row.metrics;
            std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                          row.controller.c_str(), m.total_kwh(), m.total_heat_kwh,
                          m.total_cool_kwh, m.pmv_mean, m.pmv_std, m.violation_rate,
                          m.total_reward);
            out << buf;
        }
        const auto& base = rows.front().metrics;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& m = rows[i].metrics;
            const double savings =
                base.total_kwh() > 0.0
                    ? (base.total_kwh() - m.total_kwh()) / base.total_kwh() * 100.0
                    : 0.0;
            std::snprintf(buf, sizeof(buf), "delta_%s_vs_%s,%.10g%%,,,%.10g,%.10g,%.10g,%.10g\n",
                          rows[i].controller.c_str(), rows.front().controller.c_str(), savings,
                          m.pmv_mean - base.pmv_mean, m.pmv_std - base.pmv_std,
                          m.violation_rate - base.violation_rate,
                          m.total_reward - base.total_reward);
            out << buf;
        }
    }
    return rows;
}

}  // namespace hvacmpc
