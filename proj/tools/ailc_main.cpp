#include <algorithm>
#include <atomic>
#include <cstdio>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ailc/emit.hpp"
#include "ailc/errors.hpp"
#include "ailc/plant.hpp"
#include "ailc/scenario.hpp"

namespace {

using namespace ailc;

int fail_load(const LoadResult& lr) {
    std::fprintf(stderr, "scenario rejected:\n");
    for (const std::string& e : lr.errors) std::fprintf(stderr, "  %s\n", e.c_str());
    return 1;
}

double err_at(const ScenarioRun& run, int k) {
    if (run.traces.empty()) return 0.0;
    const int idx = std::clamp(k, 1, static_cast<int>(run.traces.size())) - 1;
    return run.traces[static_cast<std::size_t>(idx)].max_err;
}

void print_run_summary(const ScenarioRun& run) {
    if (run.traces.empty()) {
        std::printf("  %s ch%d: no iterations\n", run.controller.c_str(), run.channel);
        return;
    }
    const IterationTrace& last = run.traces.back();
    std::printf("  %s ch%d: %zu iterations, final max_err %.6g, final avg_err %.6g",
                run.controller.c_str(), run.channel, run.traces.size(), last.max_err,
                last.avg_err);
    if (run.controller == "ailc")
        std::printf(", ball excess %.3g", run.containment_violation);
    if (run.disturbance_sup > 0.0) std::printf(", |w| sup %.3g", run.disturbance_sup);
    std::printf("\n");
}

PlantSpec wrap_channel(const ChannelSpec& ch) {
    PlantSpec p;
    p.name = ch.name;
    p.rho = ch.rho;
    p.horizon = ch.horizon;
    p.p_dim = ch.p_dim;
    const Vector zeros = Vector::Zero(ch.rho);
    p.regressor = [f = ch.regressor, zeros](const Vector& X, double u) { return f(X, zeros, u); };
    if (ch.regressor_du)
        p.regressor_du = [d = ch.regressor_du, zeros](const Vector& X, double u) {
            return d(X, zeros, u);
        };
    p.known_term = ch.known_term;
    p.theta_schedule = ch.theta_schedule;
    p.initial_states = ch.initial_states;
    return p;
}

void print_report(const std::string& name, const AssumptionReport& rep) {
    std::printf("%s: %d samples\n", name.c_str(), rep.samples);
    std::printf("  control gain |phi^T df/du|: min %.6g (at u = %.4g), max %.6g\n", rep.min_gain,
                rep.min_gain_u, rep.max_gain);
    std::printf("  empirical Lipschitz: in x %.6g, in u %.6g\n", rep.lipschitz_x, rep.lipschitz_u);
    std::printf("  gain floor %s\n",
                rep.gain_floor_suspect ? "SUSPECT (drops below 1e-3; the contraction premise "
                                         "may fail in this region)"
                                       : "looks safe on the sampled region");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative learning control simulator for parameterized nonlinear plants"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string out_dir = "out";
    std::string format_arg = "csv";
    std::uint64_t seed_override = 0;
    int iter_override = -1;
    int samples = 20000;
    bool have_seed = false;
    bool verbose = false;

    CLI::App* list_cmd = app.add_subcommand("list", "List the built-in scenarios");
    list_cmd->add_flag("-v,--verbose", verbose, "Also print each scenario's full config");

    std::vector<std::string> run_args, run_scenario_flags, run_config_flags;
    int parallel = 1;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one or more scenarios and write trace files");
    run_cmd->add_option("scenarios", run_args, "Built-in scenario names or JSON config paths");
    run_cmd->add_option("-s,--scenario", run_scenario_flags,
                        "Built-in scenario name or path to a JSON config (repeatable)");
    run_cmd->add_option("--config", run_config_flags,
                        "Path to a JSON scenario config (repeatable)");
    run_cmd->add_option("-p,--parallel", parallel,
                        "Worker threads when running several scenarios (default: 1)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", seed_override, "Override the scenario seed")
        ->each([&](const std::string&) { have_seed = true; });
    run_cmd->add_option("--iterations", iter_override, "Override the iteration count");
    run_cmd->add_option("-o,--out", out_dir, "Output directory (default: out)");
    run_cmd->add_option("-f,--format", format_arg, "Trace format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_flag("-v,--verbose", verbose, "Print the resolved config before running");

    CLI::App* check_cmd =
        app.add_subcommand("check", "Audit the standing assumptions of a scenario's plant");
    check_cmd->add_option("-s,--scenario,scenario", scenario_arg,
                          "Built-in scenario name or path to a JSON config")
        ->required();
    check_cmd->add_option("--samples", samples, "Monte-Carlo sample count")
        ->check(CLI::PositiveNumber);
    check_cmd->add_option("--seed", seed_override, "Override the sampling seed")
        ->each([&](const std::string&) { have_seed = true; });

    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Run a scenario with the data-driven baseline and print both controllers");
    compare_cmd->add_option("-s,--scenario,scenario", scenario_arg,
                            "Built-in scenario name or path (default: example1-compare)");
    compare_cmd->add_option("--seed", seed_override, "Override the scenario seed")
        ->each([&](const std::string&) { have_seed = true; });
    compare_cmd->add_option("--iterations", iter_override, "Override the iteration count");
    compare_cmd->add_option("-o,--out", out_dir, "Output directory (default: out)");
    compare_cmd->add_flag("-v,--verbose", verbose, "Print the resolved config before running");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const ScenarioConfig& cfg : builtin_scenarios()) {
                std::printf("%-22s %-9s %s\n", cfg.name.c_str(), cfg.plant.c_str(),
                            cfg.description.c_str());
                if (verbose) std::printf("%s\n", config_echo_json(cfg).c_str());
            }
            return 0;
        }

        if (run_cmd->parsed()) {
            std::vector<std::string> entries(run_scenario_flags);
            entries.insert(entries.end(), run_config_flags.begin(), run_config_flags.end());
            entries.insert(entries.end(), run_args.begin(), run_args.end());
            if (entries.empty()) {
                std::fprintf(stderr, "run: no scenario given\n");
                return 1;
            }

            struct Job {
                ScenarioConfig cfg;
                ScenarioResult result;
                std::string error;
                int error_code = 0;
            };
            std::vector<Job> jobs;
            bool load_failed = false;
            std::set<std::string> names;
            for (const std::string& entry : entries) {
                LoadResult lr = resolve_scenario(entry);
                if (!lr.ok()) {
                    std::fprintf(stderr, "%s rejected:\n", entry.c_str());
                    for (const std::string& e : lr.errors)
                        std::fprintf(stderr, "  %s\n", e.c_str());
                    load_failed = true;
                    continue;
                }
                Job job;
                job.cfg = std::move(*lr.config);
                if (have_seed) {
                    job.cfg.seed = seed_override;
                    job.cfg.disturbance.seed = seed_override;
                }
                if (iter_override >= 0) job.cfg.iterations = iter_override;
                if (!names.insert(job.cfg.name).second) {
                    std::fprintf(stderr,
                                 "run: scenario '%s' appears twice; trace files would collide\n",
                                 job.cfg.name.c_str());
                    load_failed = true;
                    continue;
                }
                jobs.push_back(std::move(job));
            }
            if (load_failed) return 1;
            if (verbose)
                for (const Job& job : jobs) std::printf("%s\n", config_echo_json(job.cfg).c_str());

            // each job's state is confined to one worker; emission happens afterwards
            // from this thread, in the order the scenarios were given
            std::atomic<std::size_t> next{0};
            auto worker = [&jobs, &next]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) return;
                    Job& job = jobs[i];
                    try {
                        job.result = run_scenario(job.cfg);
                    } catch (const ConfigError& e) {
                        job.error = e.what();
                        job.error_code = 1;
                    } catch (const BracketingError& e) {
                        job.error = e.what();
                        job.error_code = 2;
                    } catch (const NumericError& e) {
                        job.error = e.what();
                        job.error_code = 2;
                    }
                }
            };
            const std::size_t workers =
                std::min<std::size_t>(static_cast<std::size_t>(parallel), jobs.size());
            if (workers > 1) {
                std::vector<std::thread> pool;
                for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
                for (std::thread& th : pool) th.join();
            } else {
                worker();
            }

            const EmitFormat fmt = format_arg == "json" ? EmitFormat::json : EmitFormat::csv;
            int rc = 0;
            for (Job& job : jobs) {
                if (job.error_code != 0) {
                    std::fprintf(stderr, "scenario %s failed: %s\n", job.cfg.name.c_str(),
                                 job.error.c_str());
                    rc = std::max(rc, job.error_code);
                    continue;
                }
                std::printf("scenario %s: %d iterations in %.0f ms\n", job.cfg.name.c_str(),
                            job.cfg.iterations, job.result.wall_ms);
                for (const ScenarioRun& run : job.result.runs) print_run_summary(run);
                for (const std::string& path : emit_results(job.result, out_dir, fmt))
                    std::printf("  wrote %s\n", path.c_str());
            }
            return rc;
        }

        if (scenario_arg.empty()) scenario_arg = "example1-compare";
        LoadResult lr = resolve_scenario(scenario_arg);
        if (!lr.ok()) return fail_load(lr);
        ScenarioConfig cfg = *lr.config;
        if (have_seed) {
            cfg.seed = seed_override;
            cfg.disturbance.seed = seed_override;
        }
        if (iter_override >= 0) cfg.iterations = iter_override;

        if (check_cmd->parsed()) {
            const std::uint64_t audit_seed = have_seed ? seed_override : cfg.seed;
            if (cfg.plant == "example1") {
                Vector center(4);
                for (int i = 0; i < 4; ++i)
                    center(i) = cfg.ball_center.empty() ? 1.0 : cfg.ball_center[static_cast<std::size_t>(i)];
                print_report("example1", assumption_check(build_example1_plant(cfg), center,
                                                          cfg.ball_radius, samples, audit_seed));
            } else {
                const std::vector<ChannelSpec> channels = build_example2_channels(cfg);
                const std::vector<double>& c2 =
                    cfg.ball_center2.empty() ? cfg.ball_center : cfg.ball_center2;
                const std::vector<double>* centers[2] = {&cfg.ball_center, &c2};
                for (int c = 0; c < 2; ++c) {
                    Vector center(4);
                    for (int i = 0; i < 4; ++i) center(i) = (*centers[c])[static_cast<std::size_t>(i)];
                    print_report(channels[static_cast<std::size_t>(c)].name,
                                 assumption_check(wrap_channel(channels[static_cast<std::size_t>(c)]),
                                                  center, cfg.ball_radius, samples, audit_seed));
                }
            }
            return 0;
        }

        if (compare_cmd->parsed()) cfg.with_ddilc_baseline = true;
        if (verbose) std::printf("%s\n", config_echo_json(cfg).c_str());

        const ScenarioResult result = run_scenario(cfg);
        std::printf("scenario %s: %d iterations in %.0f ms\n", cfg.name.c_str(), cfg.iterations,
                    result.wall_ms);
        for (const ScenarioRun& run : result.runs) print_run_summary(run);

        if (compare_cmd->parsed() && result.runs.size() >= 2) {
            std::printf("\n  max tracking error by iteration\n  %-6s", "k");
            for (const ScenarioRun& run : result.runs)
                std::printf(" %12s", run.controller.c_str());
            std::printf("\n");
            for (int k : {1, 5, 10, 25, 50, 100, 150, 200}) {
                if (k > cfg.iterations) break;
                std::printf("  %-6d", k);
                for (const ScenarioRun& run : result.runs) std::printf(" %12.5g", err_at(run, k));
                std::printf("\n");
            }
        }

        const EmitFormat fmt = format_arg == "json" ? EmitFormat::json : EmitFormat::csv;
        for (const std::string& path : emit_results(result, out_dir, fmt))
            std::printf("  wrote %s\n", path.c_str());
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 1;
    } catch (const BracketingError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    }
}
