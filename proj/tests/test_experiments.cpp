#include <doctest.h>

#include "swarm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace swarm;

namespace {

std::string tiny_formation_ini() {
    return R"(
[scenario]
mode = formation
seed = 11
sim_steps = 12
n_uavs = 3
arrival_tol_m = 2.0

[shape]
kind = circle
center_x = 60
center_y = 60
radius = 30
min_sep_m = 10

[start]
center_x = -40
center_y = -40
extent_m = 60
min_sep_m = 14
speed = 5
heading = 0.785

[planner]
horizon = 5
eval_mult = 40
)";
}

ScenarioConfig tiny_formation() {
    ConfigResult res = parse_config(tiny_formation_ini());
    REQUIRE(res.ok());
    return res.cfg;
}

int count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    int n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("parse_config: defaults, overrides and inf threshold") {
    ConfigResult res = parse_config(
        "[scenario]\nmode = formation\nseed = 3\nneighborhood_threshold_m = inf\n");
    REQUIRE(res.ok());
    CHECK(res.cfg.seed == 3);
    CHECK(std::isinf(res.cfg.neighborhood_threshold));
    CHECK(res.cfg.n_uavs == 9);  // formation default
    CHECK(res.cfg.horizon == 7);

    ConfigResult near = parse_config("[scenario]\nmode = formation\nseed = 3\n");
    REQUIRE(near.ok());
    CHECK(near.cfg.neighborhood_threshold < 0.0);  // nearest-neighbor mode
}

TEST_CASE("parse_config: exhaustive error reporting with field paths") {
    ConfigResult res = parse_config(R"(
[scenario]
mode = teleport
sim_steps = 0
n_uavs = -2

[uav]
v_max = -5
bogus_key = 1

[planner]
horizon = 0
)");
    CHECK(!res.ok());
    auto has_error = [&](const std::string& field) {
        return std::any_of(res.errors.begin(), res.errors.end(),
                           [&](const ConfigError& e) { return e.field == field; });
    };
    CHECK(has_error("[scenario].mode"));
    CHECK(has_error("[scenario].seed"));
    CHECK(has_error("[scenario].sim_steps"));
    CHECK(has_error("[scenario].n_uavs"));
    CHECK(has_error("[uav].v_max"));
    CHECK(has_error("[uav].bogus_key"));
    CHECK(has_error("[planner].horizon"));
    CHECK(describe(res.errors).find("[uav].v_max") != std::string::npos);
}

TEST_CASE("parse_config: value parse failures carry the field path") {
    ConfigResult res = parse_config(
        "[scenario]\nmode = formation\nseed = 1\nsim_steps = soon\n");
    CHECK(!res.ok());
    REQUIRE(!res.errors.empty());
    CHECK(res.errors[0].field == "[scenario].sim_steps");
}

TEST_CASE("validate_config: fusion graph feasibility") {
    ScenarioConfig cfg = default_config(Mode::fusion);
    cfg.seed_set = true;
    cfg.fusion.graph_config = 1;
    cfg.fusion.degree = 1;  // matching on 10 sensors: infeasible
    auto errs = validate_config(cfg);
    REQUIRE(!errs.empty());
    CHECK(errs[0].field == "[graph].degree");

    cfg.fusion.degree = 3;
    CHECK(validate_config(cfg).empty());
}

TEST_CASE("metric_avg_tracking_error: quoted double average") {
    RunRecord rec;
    rec.mode = Mode::fusion;
    rec.n_uavs = 1;
    rec.sim_steps = 2;

    // Position error (3,4) at both steps, other components exact.
    for (int step = 1; step <= 2; ++step) {
        EstRow r;
        r.step = step;
        r.sensor = 0;
        r.truth << 10, 20, 1, 1, 0, 0;
        r.est = r.truth;
        r.est(0) += 3.0;
        r.est(1) += 4.0;
        r.sq_err = (r.est - r.truth).squaredNorm();
        rec.est_rows.push_back(r);
    }
    CHECK(metric_avg_tracking_error(rec) == doctest::Approx(25.0));

    // Exact estimates: zero error.
    for (auto& r : rec.est_rows) {
        r.est = r.truth;
        r.sq_err = 0.0;
    }
    CHECK(metric_avg_tracking_error(rec) == doctest::Approx(0.0));

    // Permutation invariance over rows.
    rec.est_rows[0].sq_err = 9.0;
    rec.est_rows[1].sq_err = 16.0;
    double before = metric_avg_tracking_error(rec);
    std::swap(rec.est_rows[0], rec.est_rows[1]);
    CHECK(metric_avg_tracking_error(rec) == doctest::Approx(before));

    RunRecord empty;
    CHECK_THROWS_AS(metric_avg_tracking_error(empty), std::invalid_argument);
}

TEST_CASE("metric_Tc: constant timing and per-UAV means") {
    RunRecord rec;
    rec.n_uavs = 2;
    rec.sim_steps = 4;
    for (int step = 1; step <= 4; ++step) {
        rec.plan_ms_per_step.push_back(10.0);
        for (int i = 0; i < 2; ++i) {
            UavStepRow r;
            r.step = step;
            r.uav = i;
            r.plan_ms = i == 0 ? 4.0 : 10.0;
            rec.uav_rows.push_back(r);
        }
    }
    TcStats tc = metric_Tc(rec);
    CHECK(tc.mean_ms == doctest::Approx(10.0));
    CHECK(tc.std_ms == doctest::Approx(0.0));
    CHECK(tc.per_uav_mean_ms[0] == doctest::Approx(4.0));
    CHECK(tc.per_uav_mean_ms[1] == doctest::Approx(10.0));
}

TEST_CASE("metric_Tf: immediate, scripted and never arrivals") {
    RunRecord rec;
    rec.mode = Mode::formation;
    rec.n_uavs = 1;
    rec.T = 0.5;
    rec.sim_steps = 50;
    rec.destinations = {Vec2(10, 0)};

    // Already there at t = 0.
    rec.initial = {{10, 0, 0, 0}};
    CHECK(metric_Tf(rec, 2.0) == doctest::Approx(0.0));

    // Scripted straight-line pass: closest approach 0.5 m at step 40,
    // T = 0.5 -> within a 0.5 m tolerance first at 20 s.
    rec.initial = {{-30.5, 0, 0, 0}};
    for (int step = 1; step <= 50; ++step) {
        UavStepRow r;
        r.step = step;
        r.t = 0.5 * step;
        r.uav = 0;
        double x = -30.5 + step * 1.0;  // 9.5 at step 40, never exactly 10
        r.state = {x, 0, 1, 0};
        rec.uav_rows.push_back(r);
    }
    CHECK(metric_Tf(rec, 0.5) == doctest::Approx(20.0));
    CHECK(metric_Tf(rec, 2.0) == doctest::Approx(19.5));  // within 2 m at step 39

    // Never arrives: the path steps over the destination.
    CHECK(std::isinf(metric_Tf(rec, 1e-6)));

    RunRecord no_dest;
    no_dest.n_uavs = 1;
    CHECK_THROWS_AS(metric_Tf(no_dest, 2.0), std::invalid_argument);
}

TEST_CASE("metric_pairwise: static hand cases") {
    RunRecord rec;
    rec.mode = Mode::formation;
    rec.n_uavs = 2;
    rec.T = 1.0;
    rec.sim_steps = 3;
    for (int step = 1; step <= 3; ++step) {
        rec.uav_rows.push_back({step, 1.0 * step, 0, {0, 0, 0, 0}, {}, 0.0, false});
        rec.uav_rows.push_back({step, 1.0 * step, 1, {50, 0, 0, 0}, {}, 0.0, false});
    }
    PairwiseStats s = metric_pairwise(rec);
    CHECK(s.min == doctest::Approx(50.0));
    CHECK(s.mean == doctest::Approx(50.0));

    RunRecord tri;
    tri.mode = Mode::formation;
    tri.n_uavs = 3;
    tri.T = 1.0;
    tri.sim_steps = 1;
    tri.uav_rows.push_back({1, 1.0, 0, {0, 0, 0, 0}, {}, 0.0, false});
    tri.uav_rows.push_back({1, 1.0, 1, {10, 0, 0, 0}, {}, 0.0, false});
    tri.uav_rows.push_back({1, 1.0, 2, {30, 0, 0, 0}, {}, 0.0, false});
    PairwiseStats t = metric_pairwise(tri);
    CHECK(t.min == doctest::Approx(10.0));
    CHECK(t.mean == doctest::Approx(20.0));  // {10, 30, 20}

    RunRecord solo;
    solo.n_uavs = 1;
    CHECK_THROWS_AS(metric_pairwise(solo), std::invalid_argument);
}

TEST_CASE("run_scenario: deterministic records and CSV row counts") {
    ScenarioConfig cfg = tiny_formation();
    RunRecord a = run_scenario(cfg);
    RunRecord b = run_scenario(cfg);
    CHECK(a.state_digest() == b.state_digest());
    CHECK(a.uav_rows.size() == static_cast<size_t>(cfg.sim_steps * cfg.n_uavs));
    CHECK(a.summary.size() == static_cast<size_t>(cfg.sim_steps));

    auto dir = std::filesystem::temp_directory_path() / "swarm_run_csv_test";
    std::filesystem::remove_all(dir);
    write_run_csv(a, dir.string());
    CHECK(count_lines(dir / "run_summary.csv") == cfg.sim_steps + 1);
    CHECK(count_lines(dir / "uav_states.csv") == cfg.sim_steps * cfg.n_uavs + 1);
    CHECK(count_lines(dir / "destinations.csv") == cfg.n_uavs + 1);
    std::filesystem::remove_all(dir);

    // A different seed changes the record.
    ScenarioConfig other = cfg;
    other.seed = cfg.seed + 1;
    CHECK(run_scenario(other).state_digest() != a.state_digest());
}

TEST_CASE("run_scenario: invalid config throws with the field list") {
    ScenarioConfig cfg = tiny_formation();
    cfg.seed_set = false;
    CHECK_THROWS_WITH_AS(run_scenario(cfg),
                         doctest::Contains("[scenario].seed"),
                         std::invalid_argument);
}

TEST_CASE("run_scenario: tracking smoke run with multiple targets") {
    ConfigResult res = parse_config(R"(
[scenario]
mode = tracking
seed = 5
sim_steps = 10
n_uavs = 3
n_targets = 2

[start]
center_x = 0
center_y = 0
extent_m = 30
min_sep_m = 10
speed = 3
heading = 0

[planner]
horizon = 4
eval_mult = 30
)");
    REQUIRE(res.ok());
    RunRecord rec = run_scenario(res.cfg);
    CHECK(rec.est_rows.size() == static_cast<size_t>(10 * 3 * 2));
    CHECK(rec.uav_rows.size() == static_cast<size_t>(10 * 3));
    for (const auto& r : rec.est_rows) {
        CHECK(std::isfinite(r.sq_err));
        CHECK(r.trace_P > 0.0);
    }

    auto dir = std::filesystem::temp_directory_path() / "swarm_tracking_csv_test";
    std::filesystem::remove_all(dir);
    write_run_csv(rec, dir.string());
    CHECK(count_lines(dir / "estimates.csv") == 10 * 3 * 2 + 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_scenario: fusion smoke run writes the network") {
    ConfigResult res = parse_config(R"(
[scenario]
mode = fusion
seed = 9
n_sensors = 6

[schedule]
M = 3
Z = 24
alpha = 0.5
algo = consensus

[graph]
config = 2
edge_prob = 0.6
region_m = 300
)");
    REQUIRE(res.ok());
    CHECK(res.cfg.sim_steps == 24);  // follows Z
    RunRecord rec = run_scenario(res.cfg);
    CHECK(rec.est_rows.size() == static_cast<size_t>(24 * 6));
    CHECK(is_connected(rec.network));

    auto dir = std::filesystem::temp_directory_path() / "swarm_fusion_csv_test";
    std::filesystem::remove_all(dir);
    write_run_csv(rec, dir.string());
    CHECK(count_lines(dir / "estimates.csv") == 24 * 6 + 1);
    CHECK(count_lines(dir / "run_summary.csv") == 24 + 1);
    CHECK(std::filesystem::exists(dir / "network.edges"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("paper grids match the published sweeps") {
    CHECK(paper_grids::duty_cycle_small() ==
          std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(paper_grids::duty_cycle_large() ==
          std::vector<double>{3, 6, 9, 12, 15, 18, 21, 24});
    CHECK(paper_grids::edge_prob() ==
          std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
    CHECK(paper_grids::alpha().front() == 0.0);
    CHECK(paper_grids::alpha().back() == 1.0);
    CHECK(paper_grids::alpha().size() == 11);
    const auto& thr = paper_grids::threshold();
    CHECK(std::find(thr.begin(), thr.end(), 240.0) != thr.end());
    CHECK(thr.front() == 10.0);
    CHECK(paper_grids::degree() == std::vector<double>{2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("run_sweep: fusion duty-cycle sweep produces the summary") {
    ScenarioConfig base = default_config(Mode::fusion);
    base.seed = 21;
    base.seed_set = true;
    base.n_uavs = 6;
    base.schedule.Z = 30;
    base.sim_steps = 30;

    auto dir = std::filesystem::temp_directory_path() / "swarm_sweep_test";
    std::filesystem::remove_all(dir);
    auto points = run_sweep(base, "M", {3, 6}, 2, dir.string());
    REQUIRE(points.size() == 4);
    CHECK(points[0].param_value == 3.0);
    CHECK(points[3].param_value == 6.0);
    for (const auto& p : points) CHECK(std::isfinite(p.metric));

    CHECK(count_lines(dir / "sweep_summary.csv") == 5);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(run_sweep(base, "warp", {1}, 1, ""), std::invalid_argument);

    // Matched seeds: the same (value index, repeat) gives the same seed.
    CHECK(sweep_seed(21, 0, 1) == sweep_seed(21, 0, 1));
    CHECK(sweep_seed(21, 0, 1) != sweep_seed(21, 1, 1));
}

TEST_CASE("apply_sweep_param: sets the right knobs") {
    ScenarioConfig base = default_config(Mode::fusion);
    CHECK(apply_sweep_param(base, "M", 9).schedule.M == 9);
    CHECK(apply_sweep_param(base, "alpha", 0.7).schedule.alpha == 0.7);
    ScenarioConfig pe = apply_sweep_param(base, "Pe", 0.4);
    CHECK(pe.fusion.graph_config == 2);
    CHECK(pe.fusion.edge_prob == 0.4);
    ScenarioConfig d = apply_sweep_param(base, "D", 4);
    CHECK(d.fusion.graph_config == 1);
    CHECK(d.fusion.degree == 4);
    ScenarioConfig ne = apply_sweep_param(base, "Ne", 20);
    CHECK(ne.fusion.graph_config == 3);
    CHECK(ne.fusion.n_edges == 20);
    CHECK(apply_sweep_param(base, "threshold", 130.0).neighborhood_threshold == 130.0);
    CHECK_THROWS_AS(apply_sweep_param(base, "zeta", 1.0), std::invalid_argument);
}
