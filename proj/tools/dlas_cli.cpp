// dlas: simulator and verification harness for diffusion-limited
// annihilating systems with stationary B-particles.
//
// Subcommands:
//   run        execute a configured preset, write summary/replicas/stoploss
//   verify     run the full acceptance suite at desk scale
//   enumerate  direct oracle access: exact distribution of a statistic
//   orders     order verdicts on CSV-supplied samples

#include <CLI11.hpp>

#include <iostream>

#include "dlas/io.hpp"
#include "dlas/orders.hpp"
#include "dlas/runconfig.hpp"
#include "dlas/verify.hpp"

#include <json.hpp>

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const dlas::CouplingViolation& e) {
        std::cerr << "coupling violation: " << e.what() << "\nreplay: " << e.replay << "\n";
        return 2;
    } catch (const dlas::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"diffusion-limited annihilating systems: simulate, couple, verify"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string assert_level;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* copt = cmd->add_option("--config", config_path, "path to the JSON run config");
        if (config_required) copt->required();
        cmd->add_option("--seed", seed, "master seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--workers", workers, "worker thread count");
        cmd->add_option("--assert", assert_level, "assertion level: off | invariants | full");
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* run_cmd = app.add_subcommand("run", "execute the preset named in the config");
    add_common(run_cmd, true);

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    add_common(verify_cmd, false);
    bool invert = false;
    long long sweep_runs = 0, replicas = 0;
    verify_cmd->add_flag("--invert-tracer-priority", invert,
                         "mutation hook: consistently swap the tracer priority rule");
    verify_cmd->add_option("--sweep-runs", sweep_runs, "coupled runs in criterion 3");
    verify_cmd->add_option("--replicas", replicas, "Monte Carlo replicas in criteria 1/2/6/7");
    std::string group;
    verify_cmd->add_option("--criterion", group, "run a single criterion group (1..9)");

    auto* enum_cmd = app.add_subcommand("enumerate", "exact oracle distribution of a statistic");
    add_common(enum_cmd, true);

    auto* orders_cmd = app.add_subcommand("orders", "order verdicts on CSV samples");
    std::string file_x, file_y, column = "0", relation = "icx";
    double significance = 0.01;
    orders_cmd->add_option("--x", file_x, "CSV with the dominated sample")->required();
    orders_cmd->add_option("--y", file_y, "CSV with the dominating sample")->required();
    orders_cmd->add_option("--column", column, "column name or index (default first)");
    orders_cmd->add_option("--relation", relation, "icx | sd | equal");
    orders_cmd->add_option("--significance", significance, "falsification level");
    orders_cmd->add_option("--out", out_dir, "output directory for verdict.json");

    CLI11_PARSE(app, argc, argv);

    dlas::CliOverrides overrides;
    if (seed_set) overrides.seed = seed;
    if (workers > 0) overrides.workers = workers;
    if (!assert_level.empty()) overrides.assert_level = assert_level;
    if (!out_dir.empty()) overrides.out_dir = out_dir;

    if (run_cmd->parsed()) {
        return guarded([&] {
            dlas::RunConfig cfg = dlas::load_run_config(config_path);
            dlas::apply_overrides(cfg, overrides);
            return dlas::run_preset(cfg);
        });
    }
    if (enum_cmd->parsed()) {
        return guarded([&] {
            dlas::RunConfig cfg = dlas::load_run_config(config_path);
            dlas::apply_overrides(cfg, overrides);
            return dlas::run_enumerate(cfg);
        });
    }
    if (verify_cmd->parsed()) {
        return guarded([&] {
            dlas::VerifyOptions vopt;
            if (!config_path.empty()) {
                dlas::RunConfig cfg = dlas::load_run_config(config_path);
                dlas::apply_overrides(cfg, overrides);
                vopt.seed = cfg.seed;
                vopt.workers = cfg.workers;
                vopt.invert_tracer_priority = cfg.invert_tracer_priority;
            } else {
                if (overrides.seed) vopt.seed = *overrides.seed;
                if (overrides.workers) vopt.workers = *overrides.workers;
            }
            if (invert) vopt.invert_tracer_priority = true;
            if (sweep_runs > 0) vopt.sweep_runs = sweep_runs;
            if (replicas > 0) vopt.replicas_large = replicas;
            auto results = dlas::run_acceptance_group(vopt, std::cout, group);
            int code = dlas::exit_code_for(results);
            if (!out_dir.empty()) {
                nlohmann::json rep = nlohmann::json::array();
                for (const auto& r : results)
                    rep.push_back({{"id", r.id},
                                   {"name", r.name},
                                   {"pass", r.pass},
                                   {"detail", r.detail}});
                dlas::io::write_text_file(std::filesystem::path(out_dir) / "verify_report.json",
                                          rep.dump(2) + "\n");
            }
            std::cout << "exit code " << code << "\n";
            return code;
        });
    }
    if (orders_cmd->parsed()) {
        return guarded([&] {
            auto xs = dlas::io::read_csv_column(file_x, column);
            auto ys = dlas::io::read_csv_column(file_y, column);
            auto sx = dlas::EmpiricalSample::from(std::move(xs), 0);
            auto sy = dlas::EmpiricalSample::from(std::move(ys), 0);
            nlohmann::json out;
            int code = 0;
            if (relation == "equal") {
                auto r = dlas::two_sample_equal(sx, sy, significance);
                out = {{"relation", "equal"},
                       {"ks_stat", r.ks_stat},
                       {"critical", r.critical},
                       {"reject", r.reject},
                       {"inconclusive", r.inconclusive}};
                code = r.reject ? 3 : 0;
            } else {
                dlas::OrderOptions oopt;
                oopt.significance = significance;
                auto v = (relation == "icx")
                             ? dlas::icx_dominates(dlas::Distribution(sx), dlas::Distribution(sy), oopt)
                         : (relation == "sd")
                             ? dlas::sd_dominates(dlas::Distribution(sx), dlas::Distribution(sy), oopt)
                             : throw dlas::ConfigError("--relation must be icx | sd | equal");
                out = {{"relation", relation},
                       {"verdict", dlas::verdict_name(v.verdict)},
                       {"witness_a", v.witness_a},
                       {"witness_gap", v.witness_gap}};
                code = v.verdict == dlas::Verdict::fails ? 3 : 0;
            }
            std::cout << out.dump(2) << "\n";
            if (!out_dir.empty())
                dlas::io::write_text_file(std::filesystem::path(out_dir) / "verdict.json",
                                          out.dump(2) + "\n");
            return code;
        });
    }
    return 1;
}
