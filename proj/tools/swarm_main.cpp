#include "swarm/experiments.hpp"
#include "swarm/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct SeedOverride {
    std::uint64_t value = 0;
    bool given = false;
};

int load_and_finalize(const std::string& path, const SeedOverride& seed,
                      swarm::ScenarioConfig& cfg) {
    swarm::ConfigResult res = swarm::load_config(path);
    if (seed.given) {
        res.cfg.seed = seed.value;
        res.cfg.seed_set = true;
        std::erase_if(res.errors, [](const swarm::ConfigError& e) {
            return e.field == "[scenario].seed";
        });
    }
    if (!res.ok()) {
        std::cerr << "config error:\n" << swarm::describe(res.errors);
        return kExitConfig;
    }
    cfg = res.cfg;
    return kExitOk;
}

void print_run_summary(const swarm::RunRecord& rec, const swarm::ScenarioConfig& cfg) {
    swarm::TcStats tc = swarm::metric_Tc(rec);
    std::printf("steps: %d, Tc mean %.3f ms (std %.3f)\n", rec.sim_steps,
                tc.mean_ms, tc.std_ms);
    if (rec.mode == swarm::Mode::formation) {
        double tf = swarm::metric_Tf(rec, cfg.arrival_tol);
        swarm::PairwiseStats pw = swarm::metric_pairwise(rec);
        std::printf("Tf: %s s, pairwise min %.2f m, mean %.2f m\n",
                    std::isinf(tf) ? "inf" : std::to_string(tf).c_str(), pw.min,
                    pw.mean);
    } else {
        std::printf("avg tracking error: %.3f m^2\n",
                    swarm::metric_avg_tracking_error(rec));
    }
}

int cmd_run(const std::string& config_path, const SeedOverride& seed,
            const std::string& out_dir) {
    swarm::ScenarioConfig cfg;
    if (int rc = load_and_finalize(config_path, seed, cfg); rc != kExitOk) return rc;
    try {
        swarm::RunRecord rec = swarm::run_scenario(cfg);
        swarm::write_run_csv(rec, out_dir);
        print_run_summary(rec, cfg);
        std::printf("wrote %s\n", out_dir.c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_sweep(const std::string& config_path, const SeedOverride& seed,
              const std::string& param, const std::string& values_csv,
              int repeats, const std::string& out_dir) {
    swarm::ScenarioConfig cfg;
    if (int rc = load_and_finalize(config_path, seed, cfg); rc != kExitOk) return rc;
    if (!swarm::sweep_param_known(param)) {
        std::cerr << "config error:\nunknown sweep parameter '" << param
                  << "' (known: M, alpha, Pe, D, Ne, threshold)\n";
        return kExitConfig;
    }

    std::vector<double> values;
    std::string token;
    std::istringstream ss(values_csv);
    while (std::getline(ss, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            std::cerr << "config error:\ncannot parse sweep value '" << token << "'\n";
            return kExitConfig;
        }
    }
    if (values.empty()) {
        std::cerr << "config error:\nempty --values list\n";
        return kExitConfig;
    }

    try {
        auto points = swarm::run_sweep(cfg, param, values, repeats, out_dir);
        std::printf("%zu runs (%zu values x %d repeats), summary in %s\n",
                    points.size(), values.size(), repeats, out_dir.c_str());
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error:\n" << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_compare(const std::string& mode_name, const std::string& config_path,
                const SeedOverride& seed, int n_seeds, const std::string& out_dir) {
    swarm::Mode mode;
    if (mode_name == "formation") {
        mode = swarm::Mode::formation;
    } else if (mode_name == "tracking") {
        mode = swarm::Mode::tracking;
    } else {
        std::cerr << "config error:\n--mode must be formation or tracking\n";
        return kExitConfig;
    }

    swarm::ScenarioConfig cfg;
    if (!config_path.empty()) {
        if (int rc = load_and_finalize(config_path, seed, cfg); rc != kExitOk) return rc;
        if (cfg.mode != mode) {
            std::cerr << "config error:\nconfig mode does not match --mode\n";
            return kExitConfig;
        }
    } else {
        cfg = swarm::default_config(mode);
        cfg.seed = seed.given ? seed.value : 1;
        cfg.seed_set = true;
    }

    try {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        std::ofstream out(fs::path(out_dir) / "compare.csv");
        if (!out) throw std::runtime_error("cannot open compare.csv");
        const bool formation = mode == swarm::Mode::formation;
        out << (formation ? "seed,Tc_dec_ms,Tc_cent_ms,Tf_dec_s,Tf_cent_s,min_pairwise_dec_m"
                          : "seed,Tc_dec_ms,Tc_cent_ms,err_dec,err_cent")
            << "\n";

        double tc_dec_sum = 0.0, tc_cent_sum = 0.0;
        for (int s = 0; s < n_seeds; ++s) {
            std::uint64_t run_seed =
                swarm::derive_seed(cfg.seed, swarm::RngDomain::sweep, 0x636d70, s);
            swarm::ScenarioConfig dec = cfg;
            dec.seed = run_seed;
            dec.seed_set = true;
            dec.centralized = false;
            swarm::ScenarioConfig cent = dec;
            cent.centralized = true;

            swarm::RunRecord rd = swarm::run_scenario(dec);
            swarm::RunRecord rc = swarm::run_scenario(cent);
            double tc_d = swarm::metric_Tc(rd).mean_ms;
            double tc_c = swarm::metric_Tc(rc).mean_ms;
            tc_dec_sum += tc_d;
            tc_cent_sum += tc_c;

            out << run_seed << "," << tc_d << "," << tc_c << ",";
            if (formation) {
                out << swarm::metric_Tf(rd, cfg.arrival_tol) << ","
                    << swarm::metric_Tf(rc, cfg.arrival_tol) << ","
                    << swarm::metric_pairwise(rd).min << "\n";
            } else {
                out << swarm::metric_avg_tracking_error(rd) << ","
                    << swarm::metric_avg_tracking_error(rc) << "\n";
            }
        }
        std::printf("mean Tc over %d seeds: decentralized %.2f ms, centralized %.2f ms\n",
                    n_seeds, tc_dec_sum / n_seeds, tc_cent_sum / n_seeds);
        std::printf("wrote %s/compare.csv\n", out_dir.c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "compare failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized UAV swarm control and sensor-fusion simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, param, values_csv, mode_name;
    SeedOverride seed;
    int repeats = 5;
    int n_seeds = 10;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed.value, "root RNG seed (overrides config)")
            ->each([&](const std::string&) { seed.given = true; });
    };

    CLI::App* run = app.add_subcommand("run", "run one scenario, write CSVs");
    run->add_option("--config", config_path, "scenario config file")->required();
    add_seed(run);
    run->add_option("--out", out_dir, "output directory")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("--config", config_path, "scenario config file")->required();
    sweep->add_option("--param", param, "parameter: M, alpha, Pe, D, Ne, threshold")
        ->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();
    sweep->add_option("--repeats", repeats, "repeats per value");
    add_seed(sweep);
    sweep->add_option("--out", out_dir, "output directory")->required();

    CLI::App* compare =
        app.add_subcommand("compare", "decentralized vs centralized on matched seeds");
    compare->add_option("--mode", mode_name, "formation | tracking")->required();
    compare->add_option("--config", config_path, "optional scenario config file");
    compare->add_option("--seeds", n_seeds, "number of matched seeds");
    add_seed(compare);
    compare->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) return cmd_run(config_path, seed, out_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, seed, param, values_csv, repeats, out_dir);
    return cmd_compare(mode_name, config_path, seed, n_seeds, out_dir);
}
