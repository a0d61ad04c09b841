#include <doctest.h>

#include <stdexcept>

#include "hvacmpc/normalize.hpp"
#include "hvacmpc/rng.hpp"
#include "hvacmpc/types.hpp"

using namespace hvacmpc;

namespace {

FullState random_state(std::size_t n_zones, Rng& rng) {
    FullState s;
    s.zones.resize(n_zones);
    for (auto& z : s.zones) {
        z.temp_in = rng.uniform(15.0, 30.0);
        z.rh_in = rng.uniform(0.1, 0.9);
        z.pmv = rng.uniform(-2.0, 2.0);
        z.heat_energy = rng.uniform(0.0, 1.5);
        z.cool_energy = rng.uniform(0.0, 1.2);
    }
    s.env.temp_out = rng.uniform(-10.0, 40.0);
    s.env.rh_out = rng.uniform(0.0, 1.0);
    s.env.diffuse_solar = rng.uniform(0.0, 200.0);
    s.env.direct_solar = rng.uniform(0.0, 800.0);
    s.env.incident_angle = rng.uniform(0.0, 90.0);
    s.env.wind_speed = rng.uniform(0.0, 9.0);
    s.env.wind_dir = rng.uniform(0.0, 360.0);
    s.env.occupancy.resize(n_zones);
    for (auto& f : s.env.occupancy) f = rng.bounded(2) ? 1 : 0;
    return s;
}

}  // namespace

TEST_CASE("flatten dimensions") {
    Rng rng(1);
    CHECK(flatten(random_state(5, rng)).size() == 37);
    CHECK(flatten(random_state(1, rng)).size() == 13);
    CHECK(full_state_dim(5) == 37);
    CHECK(action_dim(5) == 10);
}

TEST_CASE("flatten/unflatten round trip is the identity") {
    Rng rng(7);
    for (std::size_t n : {1, 3, 5, 8}) {
        const FullState s = random_state(n, rng);
        const auto v = flatten(s);
        const FullState back = unflatten(v, n);
        CHECK(flatten(back) == v);
        // occupancy survives exactly
        CHECK(back.env.occupancy == s.env.occupancy);
    }
}

TEST_CASE("action flatten round trip and bounds") {
    Action a;
    a.zones = {{19.0, 24.0}, {21.0, 26.0}};
    const auto v = flatten_action(a);
    CHECK(v == std::vector<double>{19.0, 24.0, 21.0, 26.0});
    const Action back = unflatten_action(v);
    CHECK(back.zones[1].cool_sp == 26.0);
    CHECK(action_within_bounds(a));

    Action wild;
    wild.zones = {{10.0, 40.0}};
    CHECK_FALSE(action_within_bounds(wild));
    const Action clipped = clip_action(wild);
    CHECK(clipped.zones[0].heat_sp == kHeatSpMinC);
    CHECK(clipped.zones[0].cool_sp == kCoolSpMaxC);
    CHECK(action_within_bounds(clipped));
}

TEST_CASE("standardize pins mean to zero and inverts") {
    NormStats stats;
    stats.mean = {1.0, -2.0, 5.0};
    stats.stddev = {2.0, 0.5, 3.0};

    CHECK(standardize({1.0, -2.0, 5.0}, stats) == std::vector<double>{0.0, 0.0, 0.0});

    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x = {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        const auto back = destandardize(standardize(x, stats), stats);
        for (std::size_t j = 0; j < x.size(); ++j)
            CHECK(back[j] == doctest::Approx(x[j]).epsilon(1e-12));
        const auto fwd = standardize(destandardize(x, stats), stats);
        for (std::size_t j = 0; j < x.size(); ++j)
            CHECK(fwd[j] == doctest::Approx(x[j]).epsilon(1e-12));
    }

    CHECK_THROWS_AS(standardize({1.0}, stats), std::invalid_argument);
}

TEST_CASE("constant feature gets unit std and zero output") {
    std::vector<std::vector<double>> rows(10, {3.5, 0.0});
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i][1] = static_cast<double>(i);
    const auto stats = fit_norm_stats(rows);
    CHECK(stats.stddev[0] == 1.0);
    CHECK(stats.stddev[1] > 0.0);
    const auto z = standardize({3.5, 4.5}, stats);
    CHECK(z[0] == 0.0);
}

TEST_CASE("minmax_norm clips to [0,1]") {
    const MinMaxBounds b{10.0, 20.0};
    CHECK(minmax_norm(10.0, b) == 0.0);
    CHECK(minmax_norm(15.0, b) == 0.5);
    CHECK(minmax_norm(21.0, b) == 1.0);
    CHECK(minmax_norm(-100.0, b) == 0.0);
    CHECK_THROWS_AS(minmax_norm(0.0, {5.0, 5.0}), std::invalid_argument);

    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double v = minmax_norm(rng.uniform(-100, 100), b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("split_train_val is disjoint, exhaustive and seed-deterministic") {
    Dataset data(100);
    for (std::size_t i = 0; i < data.size(); ++i) data[i].timestep_index = static_cast<std::int64_t>(i);

    Dataset train, val;
    split_train_val(data, 0.8, 42, train, val);
    CHECK(train.size() == 80);
    CHECK(val.size() == 20);

    std::vector<int> seen(100, 0);
    for (const auto& t : train) seen[static_cast<std::size_t>(t.timestep_index)]++;
    for (const auto& t : val) seen[static_cast<std::size_t>(t.timestep_index)]++;
    for (int c : seen) CHECK(c == 1);

    Dataset train2, val2;
    split_train_val(data, 0.8, 42, train2, val2);
    for (std::size_t i = 0; i < train.size(); ++i)
        CHECK(train[i].timestep_index == train2[i].timestep_index);

    Dataset all_train, none;
    split_train_val(data, 1.0, 7, all_train, none);
    CHECK(all_train.size() == 100);
    CHECK(none.empty());

    Dataset empty;
    CHECK_THROWS_AS(split_train_val(empty, 0.8, 1, train, val), std::invalid_argument);
}

TEST_CASE("flatten order hash is stable per zone count") {
    CHECK(flatten_order_hash(5) == flatten_order_hash(5));
    CHECK(flatten_order_hash(5) != flatten_order_hash(4));
}
