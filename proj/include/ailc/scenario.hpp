#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ailc/adaptation.hpp"
#include "ailc/controller.hpp"
#include "ailc/ddilc.hpp"
#include "ailc/disturbances.hpp"

namespace ailc {

enum class ControllerKind { ailc, ddilc };

enum class InitKind { constant, uniform };

/// Fully resolved description of one runnable scenario. Everything that
/// influences the numbers lives here, so the JSON echo of this struct is
/// sufficient to reproduce a run bit for bit.
struct ScenarioConfig {
    std::string name;
    std::string description;
    std::string plant = "example1"; ///< "example1" (SISO) or "example2" (two channels)

    ControllerKind controller_kind = ControllerKind::ailc;
    bool with_ddilc_baseline = false; ///< also run the DDILC baseline (comparison scenarios)

    // ailc controller
    AdaptVariant variant = AdaptVariant::robust;
    double eta = 1.9;
    MMode m_mode = MMode::normalized;
    InputMode input_mode = InputMode::fixed_point;
    double w_plus = 0.0;
    std::vector<double> theta0;
    std::vector<double> ball_center;
    double ball_radius = 1.0;
    std::vector<double> ball_center2; ///< channel 2 (example2); empty -> same as channel 1
    SolverConfig solver{};

    // ddilc controller / baseline
    DdilcParams ddilc{};

    // reference: family + parameters (generic families only)
    std::string ref_family = "example1_compare";
    double ref_amplitude = 1.0;
    double ref_period = 25.0;
    double ref_phase = 0.0;
    double ref_offset = 0.0;

    // initial states
    InitKind init_kind = InitKind::constant;
    double init_value = 0.0;
    double init_lo = 0.0;
    double init_hi = 0.01;

    // disturbance (applied per channel with channel-salted seeds)
    DisturbanceSpec disturbance{};

    // run
    int iterations = 200;
    std::uint64_t seed = 1;
};

/// The shipped catalog (the two published benchmarks in all their variants).
const std::vector<ScenarioConfig>& builtin_scenarios();

/// Catalog lookup by name.
std::optional<ScenarioConfig> find_builtin(const std::string& name);

struct LoadResult {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors; ///< every validation problem found, not just the first
    bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses and strictly validates a JSON scenario document (unknown keys are
/// errors). All problems are collected before returning.
LoadResult load_scenario(const std::string& json_text);

/// Resolves a built-in name or a path to a JSON document.
LoadResult resolve_scenario(const std::string& name_or_path);

/// Round-trippable JSON echo of a resolved config.
std::string config_echo_json(const ScenarioConfig& cfg);

struct ScenarioRun {
    std::string controller; ///< "ailc" or "ddilc"
    int channel = 1;        ///< 1-based
    std::vector<IterationTrace> traces;
    double containment_violation = 0.0;
    double disturbance_sup = 0.0;
    std::vector<Vector> theta_final;  ///< ailc: estimates for k = K+1, per t
    std::vector<double> w_hat_final;  ///< ailc robust: final bound estimates per t
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<ScenarioRun> runs;
    double wall_ms = 0.0;
};

/// Builds the plant(s)/controller(s) from the config and runs everything.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Plant construction (exposed for tests and the assumption-check verb).
PlantSpec build_example1_plant(const ScenarioConfig& cfg);
std::vector<ChannelSpec> build_example2_channels(const ScenarioConfig& cfg);
RefFn build_reference(const ScenarioConfig& cfg);

}  // namespace ailc
