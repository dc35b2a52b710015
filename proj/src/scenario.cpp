#include "ailc/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "ailc/errors.hpp"
#include "ailc/reference.hpp"
#include "ailc/rng.hpp"

namespace ailc {

namespace {

using nlohmann::json;

Vector to_vector(const std::vector<double>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

// ---- enum <-> string ----

const char* to_string(ControllerKind k) { return k == ControllerKind::ailc ? "ailc" : "ddilc"; }
const char* to_string(MMode m) { return m == MMode::normalized ? "normalized" : "unit"; }
const char* to_string(InputMode m) {
    return m == InputMode::fixed_point ? "fixed_point" : "direct_solve";
}
const char* to_string(InitKind k) { return k == InitKind::constant ? "constant" : "uniform"; }
const char* to_string(GainSign s) {
    switch (s) {
        case GainSign::positive: return "positive";
        case GainSign::negative: return "negative";
        default: return "auto";
    }
}
const char* to_string(LPrimeStrategy::Kind k) {
    return k == LPrimeStrategy::Kind::user_fixed ? "user_fixed" : "sampled";
}

template <typename E>
struct NamedValue {
    const char* name;
    E value;
};

constexpr NamedValue<ControllerKind> kControllerKinds[] = {
    {"ailc", ControllerKind::ailc}, {"ddilc", ControllerKind::ddilc}};
constexpr NamedValue<AdaptVariant> kVariants[] = {{"robust", AdaptVariant::robust},
                                                  {"disturbance_free", AdaptVariant::disturbance_free},
                                                  {"known_bound", AdaptVariant::known_bound}};
constexpr NamedValue<MMode> kMModes[] = {{"normalized", MMode::normalized}, {"unit", MMode::unit}};
constexpr NamedValue<InputMode> kInputModes[] = {{"fixed_point", InputMode::fixed_point},
                                                 {"direct_solve", InputMode::direct_solve}};
constexpr NamedValue<InitKind> kInitKinds[] = {{"constant", InitKind::constant},
                                               {"uniform", InitKind::uniform}};
constexpr NamedValue<GainSign> kGainSigns[] = {{"positive", GainSign::positive},
                                               {"negative", GainSign::negative},
                                               {"auto", GainSign::auto_detect}};
constexpr NamedValue<LPrimeStrategy::Kind> kLPrimeKinds[] = {
    {"user_fixed", LPrimeStrategy::Kind::user_fixed}, {"sampled", LPrimeStrategy::Kind::sampled}};
constexpr NamedValue<DisturbanceKind> kDisturbanceKinds[] = {
    {"none", DisturbanceKind::none},
    {"uniform", DisturbanceKind::uniform},
    {"gaussian", DisturbanceKind::gaussian},
    {"bernoulli", DisturbanceKind::bernoulli},
    {"trigonometric", DisturbanceKind::trigonometric},
    {"hoim", DisturbanceKind::hoim},
    {"state_dependent", DisturbanceKind::state_dependent},
    {"example2_channel", DisturbanceKind::example2_channel}};

template <typename E, std::size_t N>
bool parse_enum(const NamedValue<E> (&table)[N], const std::string& text, E& out) {
    for (const auto& entry : table)
        if (text == entry.name) {
            out = entry.value;
            return true;
        }
    return false;
}

template <typename E, std::size_t N>
std::string enum_choices(const NamedValue<E> (&table)[N]) {
    std::string s;
    for (const auto& entry : table) {
        if (!s.empty()) s += ", ";
        s += entry.name;
    }
    return s;
}

// ---- strict section reader ----

class Reader {
public:
    Reader(const json& j, std::string where, std::vector<std::string>& errors)
        : j_(j), where_(std::move(where)), errors_(errors) {}

    void allow(std::initializer_list<const char*> keys) {
        if (!j_.is_object()) return;
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool known = false;
            for (const char* k : keys)
                if (it.key() == k) {
                    known = true;
                    break;
                }
            if (!known) errors_.push_back(where_ + ": unknown key '" + it.key() + "'");
        }
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    void number(const char* key, double& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number()) {
            errors_.push_back(where_ + "." + key + ": expected a number");
            return;
        }
        out = v.get<double>();
    }

    void integer(const char* key, int& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) {
            errors_.push_back(where_ + "." + key + ": expected an integer");
            return;
        }
        out = v.get<int>();
    }

    void u64(const char* key, std::uint64_t& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number_unsigned() && !v.is_number_integer()) {
            errors_.push_back(where_ + "." + key + ": expected a nonnegative integer");
            return;
        }
        if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
            errors_.push_back(where_ + "." + key + ": expected a nonnegative integer");
            return;
        }
        out = v.get<std::uint64_t>();
    }

    void boolean(const char* key, bool& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_boolean()) {
            errors_.push_back(where_ + "." + key + ": expected a boolean");
            return;
        }
        out = v.get<bool>();
    }

    void str(const char* key, std::string& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_string()) {
            errors_.push_back(where_ + "." + key + ": expected a string");
            return;
        }
        out = v.get<std::string>();
    }

    void number_list(const char* key, std::vector<double>& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_array()) {
            errors_.push_back(where_ + "." + key + ": expected an array of numbers");
            return;
        }
        std::vector<double> tmp;
        for (const json& e : v) {
            if (!e.is_number()) {
                errors_.push_back(where_ + "." + key + ": expected an array of numbers");
                return;
            }
            tmp.push_back(e.get<double>());
        }
        out = std::move(tmp);
    }

    template <typename E, std::size_t N>
    void enumeration(const char* key, const NamedValue<E> (&table)[N], E& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_string()) {
            errors_.push_back(where_ + "." + key + ": expected one of: " + enum_choices(table));
            return;
        }
        if (!parse_enum(table, v.get<std::string>(), out))
            errors_.push_back(where_ + "." + key + ": '" + v.get<std::string>() +
                              "' is not one of: " + enum_choices(table));
    }

    const json& raw() const { return j_; }

private:
    const json& j_;
    std::string where_;
    std::vector<std::string>& errors_;
};

bool section(const json& parent, const char* key, bool required, std::vector<std::string>& errors,
             json const** out) {
    *out = nullptr;
    if (!parent.contains(key)) {
        if (required) errors.push_back(std::string("missing required section '") + key + "'");
        return false;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
        errors.push_back(std::string(key) + ": expected an object");
        return false;
    }
    *out = &v;
    return true;
}

// ---- defaults / validation shared by load and run ----

ScenarioConfig with_defaults(const ScenarioConfig& in) {
    ScenarioConfig cfg = in;
    if (cfg.plant == "example1") {
        if (cfg.theta0.empty()) cfg.theta0 = {1.0, 1.0, 1.0, 1.0};
        if (cfg.ball_center.empty()) cfg.ball_center = {1.0, 1.0, 1.0, 1.0};
    } else if (cfg.plant == "example2") {
        if (cfg.theta0.empty()) cfg.theta0 = {0.0, 0.0, 0.0, 0.0};
        if (cfg.ball_center.empty()) cfg.ball_center = {7.13, 29.98, 12.52, 39.97};
        if (cfg.ball_center2.empty()) cfg.ball_center2 = {9.63, 24.02, 9.98, 32.02};
    }
    return cfg;
}

void validate_config(const ScenarioConfig& cfg, std::vector<std::string>& errors) {
    if (cfg.name.empty()) errors.push_back("name: must be a nonempty string");
    if (cfg.plant != "example1" && cfg.plant != "example2")
        errors.push_back("plant: expected 'example1' or 'example2'");
    if (cfg.plant == "example2" &&
        (cfg.controller_kind == ControllerKind::ddilc || cfg.with_ddilc_baseline))
        errors.push_back("controller: the ddilc baseline needs relative degree 1 (example1 only)");
    if (!(cfg.eta > 0.0 && cfg.eta < 2.0)) errors.push_back("controller.eta: must lie in (0, 2)");
    if (!(cfg.ball_radius > 0.0)) errors.push_back("controller.ball_radius: must be > 0");
    if (!cfg.theta0.empty() && cfg.theta0.size() != 4)
        errors.push_back("controller.theta0: both plants have 4 parameters");
    if (!cfg.ball_center.empty() && cfg.ball_center.size() != 4)
        errors.push_back("controller.ball_center: both plants have 4 parameters");
    if (!cfg.ball_center2.empty() && cfg.ball_center2.size() != 4)
        errors.push_back("controller.ball_center2: both plants have 4 parameters");
    if (!(cfg.solver.d0_lower > 0.0)) errors.push_back("controller.solver.d0_lower: must be > 0");
    if (!(cfg.solver.epsilon_tol > 0.0))
        errors.push_back("controller.solver.epsilon_tol: must be > 0");
    if (cfg.solver.max_iter_cap < 1)
        errors.push_back("controller.solver.max_iter_cap: must be >= 1");
    if (cfg.solver.l_prime.kind == LPrimeStrategy::Kind::user_fixed &&
        !(cfg.solver.l_prime.value > cfg.solver.d0_lower))
        errors.push_back("controller.solver.l_prime.value: must exceed d0_lower");
    if (cfg.solver.l_prime.kind == LPrimeStrategy::Kind::sampled) {
        if (!(cfg.solver.l_prime.margin >= 1.0))
            errors.push_back("controller.solver.l_prime.margin: must be >= 1");
        if (cfg.solver.l_prime.samples < 2)
            errors.push_back("controller.solver.l_prime.samples: must be >= 2");
    }
    if (cfg.variant == AdaptVariant::known_bound && cfg.w_plus < 0.0)
        errors.push_back("controller.w_plus: must be >= 0");
    if (cfg.ref_family != "example1_compare" && cfg.ref_family != "example1_alternating" &&
        cfg.ref_family != "example2_sine" && cfg.ref_family != "constant" &&
        cfg.ref_family != "sine" && cfg.ref_family != "square")
        errors.push_back("reference.family: unknown family '" + cfg.ref_family + "'");
    if ((cfg.ref_family == "sine" || cfg.ref_family == "square") && !(cfg.ref_period > 0.0))
        errors.push_back("reference.period: must be > 0");
    if (cfg.init_kind == InitKind::uniform && !(cfg.init_lo <= cfg.init_hi))
        errors.push_back("initial_state: low must be <= high");
    if (cfg.disturbance.kind == DisturbanceKind::bernoulli &&
        !(cfg.disturbance.prob1 >= 0.0 && cfg.disturbance.prob1 <= 1.0))
        errors.push_back("disturbance.prob1: must lie in [0, 1]");
    if (cfg.iterations < 1) errors.push_back("run.iterations: must be >= 1");
}

// ---- built-ins ----

SolverConfig builtin_solver(double eps_tol) {
    SolverConfig s;
    s.d0_lower = 1.0;
    s.l_prime.kind = LPrimeStrategy::Kind::sampled;
    s.l_prime.margin = 1.25;
    s.l_prime.samples = 256;
    s.epsilon_tol = eps_tol;
    s.max_iter_cap = 10000;
    s.gain_sign = GainSign::auto_detect;
    return s;
}

ScenarioConfig example1_base() {
    ScenarioConfig c;
    c.plant = "example1";
    c.controller_kind = ControllerKind::ailc;
    c.eta = 1.9;
    c.theta0 = {1.0, 1.0, 1.0, 1.0};
    c.ball_center = {1.0, 1.0, 1.0, 1.0};
    c.ball_radius = 0.9;
    c.iterations = 200;
    return c;
}

ScenarioConfig robust_e1(const std::string& suffix, DisturbanceKind kind, std::uint64_t seed,
                         const std::string& what) {
    ScenarioConfig c = example1_base();
    c.name = "example1-robust-" + suffix;
    c.description = "robust variant on benchmark 1, alternating sine/square reference, " + what;
    c.variant = AdaptVariant::robust;
    c.solver = builtin_solver(1e-6);
    c.ref_family = "example1_alternating";
    c.init_kind = InitKind::uniform;
    c.init_lo = 0.0;
    c.init_hi = 0.01;
    c.disturbance.kind = kind;
    c.seed = seed;
    return c;
}

std::vector<ScenarioConfig> make_builtins() {
    std::vector<ScenarioConfig> all;

    ScenarioConfig compare = example1_base();
    compare.name = "example1-compare";
    compare.description =
        "disturbance-free benchmark 1 with an iteration-switching reference; runs the adaptive "
        "controller and the data-driven baseline side by side";
    compare.variant = AdaptVariant::disturbance_free;
    compare.with_ddilc_baseline = true;
    compare.solver = builtin_solver(1e-8);
    compare.ref_family = "example1_compare";
    compare.init_kind = InitKind::constant;
    compare.init_value = 0.0;
    compare.disturbance.kind = DisturbanceKind::none;
    compare.seed = 20240001;
    all.push_back(compare);

    all.push_back(robust_e1("d1", DisturbanceKind::uniform, 20240011, "uniform noise"));
    all.push_back(robust_e1("d2", DisturbanceKind::gaussian, 20240012, "gaussian noise"));
    all.push_back(robust_e1("d3", DisturbanceKind::bernoulli, 20240013, "two-point noise"));
    all.push_back(
        robust_e1("d4", DisturbanceKind::trigonometric, 20240014, "trigonometric drift"));
    all.push_back(robust_e1("d5", DisturbanceKind::hoim, 20240015, "second-order recursive drift"));
    all.push_back(
        robust_e1("d6", DisturbanceKind::state_dependent, 20240016, "state-dependent term"));

    ScenarioConfig e2 = ScenarioConfig{};
    e2.plant = "example2";
    e2.controller_kind = ControllerKind::ailc;
    e2.eta = 0.1;
    e2.theta0 = {0.0, 0.0, 0.0, 0.0};
    e2.ball_center = {7.13, 29.98, 12.52, 39.97};
    e2.ball_center2 = {9.63, 24.02, 9.98, 32.02};
    e2.ball_radius = 0.11;
    e2.ref_family = "example2_sine";
    e2.init_kind = InitKind::uniform;
    e2.init_lo = 0.0;
    e2.init_hi = 0.1;
    e2.iterations = 200;

    ScenarioConfig e2_nodist = e2;
    e2_nodist.name = "example2-nodist";
    e2_nodist.description =
        "two-channel benchmark 2 with relative degree 2, no disturbance, sine reference";
    e2_nodist.variant = AdaptVariant::disturbance_free;
    e2_nodist.solver = builtin_solver(1e-8);
    e2_nodist.disturbance.kind = DisturbanceKind::none;
    e2_nodist.seed = 20240021;
    all.push_back(e2_nodist);

    ScenarioConfig e2_dist = e2;
    e2_dist.name = "example2-dist";
    e2_dist.description =
        "two-channel benchmark 2 under per-channel trigonometric disturbances, robust variant";
    e2_dist.variant = AdaptVariant::robust;
    e2_dist.solver = builtin_solver(1e-6);
    e2_dist.disturbance.kind = DisturbanceKind::example2_channel;
    e2_dist.seed = 20240022;
    all.push_back(e2_dist);

    return all;
}

ScenarioRun make_ailc_run(int channel, ChannelResult&& res) {
    ScenarioRun run;
    run.controller = "ailc";
    run.channel = channel;
    run.traces = std::move(res.traces);
    run.containment_violation = res.containment_violation;
    run.disturbance_sup = res.disturbance_sup;
    run.theta_final = std::move(res.adapt_final.theta_hat);
    run.w_hat_final = std::move(res.adapt_final.w_hat);
    return run;
}

}  // namespace

const std::vector<ScenarioConfig>& builtin_scenarios() {
    static const std::vector<ScenarioConfig> catalog = make_builtins();
    return catalog;
}

std::optional<ScenarioConfig> find_builtin(const std::string& name) {
    for (const ScenarioConfig& c : builtin_scenarios())
        if (c.name == name) return c;
    return std::nullopt;
}

LoadResult load_scenario(const std::string& json_text) {
    LoadResult lr;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        lr.errors.push_back(std::string("not valid JSON: ") + e.what());
        return lr;
    }
    if (!doc.is_object()) {
        lr.errors.push_back("top level: expected an object");
        return lr;
    }

    ScenarioConfig cfg;
    std::vector<std::string>& errors = lr.errors;

    Reader top(doc, "top level", errors);
    top.allow({"name", "description", "plant", "controller", "reference", "initial_state",
               "disturbance", "run"});
    top.str("name", cfg.name);
    top.str("description", cfg.description);
    top.str("plant", cfg.plant);
    if (!doc.contains("name")) errors.push_back("missing required key 'name'");
    if (!doc.contains("plant")) errors.push_back("missing required key 'plant'");

    const json* sec = nullptr;
    if (section(doc, "controller", true, errors, &sec)) {
        Reader c(*sec, "controller", errors);
        c.allow({"kind", "with_ddilc_baseline", "variant", "eta", "m_mode", "input_mode", "w_plus",
                 "theta0", "ball_center", "ball_radius", "ball_center2", "solver", "ddilc"});
        c.enumeration("kind", kControllerKinds, cfg.controller_kind);
        c.boolean("with_ddilc_baseline", cfg.with_ddilc_baseline);
        c.enumeration("variant", kVariants, cfg.variant);
        c.number("eta", cfg.eta);
        c.enumeration("m_mode", kMModes, cfg.m_mode);
        c.enumeration("input_mode", kInputModes, cfg.input_mode);
        c.number("w_plus", cfg.w_plus);
        c.number_list("theta0", cfg.theta0);
        c.number_list("ball_center", cfg.ball_center);
        c.number("ball_radius", cfg.ball_radius);
        c.number_list("ball_center2", cfg.ball_center2);

        const json* sol = nullptr;
        if (section(*sec, "solver", false, errors, &sol)) {
            Reader s(*sol, "controller.solver", errors);
            s.allow({"d0_lower", "l_prime", "epsilon_tol", "max_iter_cap", "gain_sign",
                     "record_history"});
            s.number("d0_lower", cfg.solver.d0_lower);
            s.number("epsilon_tol", cfg.solver.epsilon_tol);
            s.integer("max_iter_cap", cfg.solver.max_iter_cap);
            s.enumeration("gain_sign", kGainSigns, cfg.solver.gain_sign);
            s.boolean("record_history", cfg.solver.record_history);
            const json* lp = nullptr;
            if (section(*sol, "l_prime", false, errors, &lp)) {
                Reader l(*lp, "controller.solver.l_prime", errors);
                l.allow({"kind", "value", "margin", "samples"});
                l.enumeration("kind", kLPrimeKinds, cfg.solver.l_prime.kind);
                l.number("value", cfg.solver.l_prime.value);
                l.number("margin", cfg.solver.l_prime.margin);
                l.integer("samples", cfg.solver.l_prime.samples);
            }
        }

        const json* dd = nullptr;
        if (section(*sec, "ddilc", false, errors, &dd)) {
            Reader d(*dd, "controller.ddilc", errors);
            d.allow({"eta", "rho", "lambda", "mu", "theta0", "reset_eps"});
            d.number("eta", cfg.ddilc.eta);
            d.number("rho", cfg.ddilc.rho);
            d.number("lambda", cfg.ddilc.lambda);
            d.number("mu", cfg.ddilc.mu);
            d.number("theta0", cfg.ddilc.theta0);
            d.number("reset_eps", cfg.ddilc.reset_eps);
        }
    }

    if (section(doc, "reference", true, errors, &sec)) {
        Reader r(*sec, "reference", errors);
        r.allow({"family", "amplitude", "period", "phase", "offset"});
        r.str("family", cfg.ref_family);
        r.number("amplitude", cfg.ref_amplitude);
        r.number("period", cfg.ref_period);
        r.number("phase", cfg.ref_phase);
        r.number("offset", cfg.ref_offset);
    }

    if (section(doc, "initial_state", false, errors, &sec)) {
        Reader i(*sec, "initial_state", errors);
        i.allow({"kind", "value", "low", "high"});
        i.enumeration("kind", kInitKinds, cfg.init_kind);
        i.number("value", cfg.init_value);
        i.number("low", cfg.init_lo);
        i.number("high", cfg.init_hi);
    }

    if (section(doc, "disturbance", true, errors, &sec)) {
        Reader d(*sec, "disturbance", errors);
        d.allow({"kind", "low", "high", "mean", "var", "sigma_is_std", "value1", "prob1", "value2",
                 "c1", "d1", "c2", "d2", "a1", "a2", "w1", "w2", "sd_lin", "sd_sin"});
        d.enumeration("kind", kDisturbanceKinds, cfg.disturbance.kind);
        d.number("low", cfg.disturbance.low);
        d.number("high", cfg.disturbance.high);
        d.number("mean", cfg.disturbance.mean);
        d.number("var", cfg.disturbance.var);
        d.boolean("sigma_is_std", cfg.disturbance.sigma_is_std);
        d.number("value1", cfg.disturbance.value1);
        d.number("prob1", cfg.disturbance.prob1);
        d.number("value2", cfg.disturbance.value2);
        d.number("c1", cfg.disturbance.c1);
        d.number("d1", cfg.disturbance.d1);
        d.number("c2", cfg.disturbance.c2);
        d.number("d2", cfg.disturbance.d2);
        d.number("a1", cfg.disturbance.a1);
        d.number("a2", cfg.disturbance.a2);
        d.number("w1", cfg.disturbance.w1);
        d.number("w2", cfg.disturbance.w2);
        d.number("sd_lin", cfg.disturbance.sd_lin);
        d.number("sd_sin", cfg.disturbance.sd_sin);
    }

    if (section(doc, "run", true, errors, &sec)) {
        Reader r(*sec, "run", errors);
        r.allow({"iterations", "seed"});
        r.integer("iterations", cfg.iterations);
        r.u64("seed", cfg.seed);
    }

    if (errors.empty()) validate_config(cfg, errors);
    if (errors.empty()) lr.config = with_defaults(cfg);
    return lr;
}

LoadResult resolve_scenario(const std::string& name_or_path) {
    if (std::optional<ScenarioConfig> b = find_builtin(name_or_path)) {
        LoadResult lr;
        lr.config = std::move(*b);
        return lr;
    }
    std::ifstream in(name_or_path);
    if (!in) {
        LoadResult lr;
        std::string names;
        for (const ScenarioConfig& c : builtin_scenarios()) {
            if (!names.empty()) names += ", ";
            names += c.name;
        }
        lr.errors.push_back("'" + name_or_path + "' is neither a built-in scenario (" + names +
                            ") nor a readable file");
        return lr;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return load_scenario(text.str());
}

std::string config_echo_json(const ScenarioConfig& cfg) {
    json doc;
    doc["name"] = cfg.name;
    doc["description"] = cfg.description;
    doc["plant"] = cfg.plant;

    json c;
    c["kind"] = to_string(cfg.controller_kind);
    c["with_ddilc_baseline"] = cfg.with_ddilc_baseline;
    c["variant"] = ailc::to_string(cfg.variant);
    c["eta"] = cfg.eta;
    c["m_mode"] = to_string(cfg.m_mode);
    c["input_mode"] = to_string(cfg.input_mode);
    c["w_plus"] = cfg.w_plus;
    c["theta0"] = cfg.theta0;
    c["ball_center"] = cfg.ball_center;
    c["ball_radius"] = cfg.ball_radius;
    if (!cfg.ball_center2.empty()) c["ball_center2"] = cfg.ball_center2;
    json sol;
    sol["d0_lower"] = cfg.solver.d0_lower;
    sol["l_prime"] = {{"kind", to_string(cfg.solver.l_prime.kind)},
                      {"value", cfg.solver.l_prime.value},
                      {"margin", cfg.solver.l_prime.margin},
                      {"samples", cfg.solver.l_prime.samples}};
    sol["epsilon_tol"] = cfg.solver.epsilon_tol;
    sol["max_iter_cap"] = cfg.solver.max_iter_cap;
    sol["gain_sign"] = to_string(cfg.solver.gain_sign);
    sol["record_history"] = cfg.solver.record_history;
    c["solver"] = sol;
    c["ddilc"] = {{"eta", cfg.ddilc.eta},     {"rho", cfg.ddilc.rho},
                  {"lambda", cfg.ddilc.lambda}, {"mu", cfg.ddilc.mu},
                  {"theta0", cfg.ddilc.theta0}, {"reset_eps", cfg.ddilc.reset_eps}};
    doc["controller"] = c;

    doc["reference"] = {{"family", cfg.ref_family},
                        {"amplitude", cfg.ref_amplitude},
                        {"period", cfg.ref_period},
                        {"phase", cfg.ref_phase},
                        {"offset", cfg.ref_offset}};
    doc["initial_state"] = {{"kind", to_string(cfg.init_kind)},
                            {"value", cfg.init_value},
                            {"low", cfg.init_lo},
                            {"high", cfg.init_hi}};

    json d;
    d["kind"] = ailc::to_string(cfg.disturbance.kind);
    switch (cfg.disturbance.kind) {
        case DisturbanceKind::uniform:
            d["low"] = cfg.disturbance.low;
            d["high"] = cfg.disturbance.high;
            break;
        case DisturbanceKind::gaussian:
            d["mean"] = cfg.disturbance.mean;
            d["var"] = cfg.disturbance.var;
            d["sigma_is_std"] = cfg.disturbance.sigma_is_std;
            break;
        case DisturbanceKind::bernoulli:
            d["value1"] = cfg.disturbance.value1;
            d["prob1"] = cfg.disturbance.prob1;
            d["value2"] = cfg.disturbance.value2;
            break;
        case DisturbanceKind::trigonometric:
            d["c1"] = cfg.disturbance.c1;
            d["d1"] = cfg.disturbance.d1;
            d["c2"] = cfg.disturbance.c2;
            d["d2"] = cfg.disturbance.d2;
            break;
        case DisturbanceKind::hoim:
            d["a1"] = cfg.disturbance.a1;
            d["a2"] = cfg.disturbance.a2;
            d["w1"] = cfg.disturbance.w1;
            d["w2"] = cfg.disturbance.w2;
            break;
        case DisturbanceKind::state_dependent:
            d["sd_lin"] = cfg.disturbance.sd_lin;
            d["sd_sin"] = cfg.disturbance.sd_sin;
            break;
        default: break;
    }
    doc["disturbance"] = d;

    doc["run"] = {{"iterations", cfg.iterations}, {"seed", cfg.seed}};
    return doc.dump(2) + "\n";
}

PlantSpec build_example1_plant(const ScenarioConfig& cfg) {
    PlantSpec plant;
    plant.name = "example1";
    plant.rho = 1;
    plant.horizon = 50;
    plant.p_dim = 4;
    plant.regressor = [](const Vector& X, double u) {
        const double x = X(0);
        Vector f(4);
        f << x * std::sin(x) / (1.0 + x * x), std::exp(x / 100.0), u * u * u,
            std::atan(u) + u;
        return f;
    };
    plant.regressor_du = [](const Vector&, double u) {
        Vector d(4);
        d << 0.0, 0.0, 3.0 * u * u, 1.0 / (1.0 + u * u) + 1.0;
        return d;
    };
    plant.theta_schedule = [](int t) {
        Vector th(4);
        th << 0.5 + t / 50.0, 0.75 + t / 75.0, 1.5 + 0.5 * (t % 2 == 0 ? 1.0 : -1.0),
            std::sin(M_PI / 4.0 + M_PI * t / 100.0);
        return th;
    };
    const std::uint64_t seed = cfg.seed;
    if (cfg.init_kind == InitKind::constant) {
        const double v = cfg.init_value;
        plant.initial_states = [v](int) {
            Vector x0(1);
            x0(0) = v;
            return x0;
        };
    } else {
        const double lo = cfg.init_lo, hi = cfg.init_hi;
        plant.initial_states = [seed, lo, hi](int k) {
            Vector x0(1);
            x0(0) = rng::uniform(seed, rng::channel_stream(rng::kStreamInitialState, 1),
                                 static_cast<std::uint64_t>(k), 0, lo, hi);
            return x0;
        };
    }
    return plant;
}

std::vector<ChannelSpec> build_example2_channels(const ScenarioConfig& cfg) {
    std::vector<ChannelSpec> channels(2);
    const double theta_truth[2][4] = {{7.12, 30.0, 12.5, 40.0}, {9.62, 24.0, 10.0, 32.0}};
    for (int c = 0; c < 2; ++c) {
        ChannelSpec& ch = channels[static_cast<std::size_t>(c)];
        ch.name = c == 0 ? "example2-ch1" : "example2-ch2";
        ch.rho = 2;
        ch.horizon = 50;
        ch.p_dim = 4;
        ch.regressor = [](const Vector& x_own, const Vector& x_cross, double u) {
            Vector f(4);
            f << std::sin(x_own(1)), 1.0, std::sin(x_cross(0) - x_cross(1)), std::tanh(u);
            return f;
        };
        ch.regressor_du = [](const Vector&, const Vector&, double u) {
            Vector d(4);
            const double ch_u = std::cosh(u);
            d << 0.0, 0.0, 0.0, 1.0 / (ch_u * ch_u);
            return d;
        };
        ch.known_term = [](const Vector& x_own) { return 2.0 * x_own(0) - x_own(1); };
        Vector th(4);
        th << theta_truth[c][0], theta_truth[c][1], theta_truth[c][2], theta_truth[c][3];
        ch.theta_schedule = [th](int) { return th; };
        const std::uint64_t seed = cfg.seed;
        const int channel = c + 1;
        if (cfg.init_kind == InitKind::constant) {
            const double v = cfg.init_value;
            ch.initial_states = [v](int) {
                Vector x0(2);
                x0 << v, v;
                return x0;
            };
        } else {
            const double lo = cfg.init_lo, hi = cfg.init_hi;
            ch.initial_states = [seed, lo, hi, channel](int k) {
                Vector x0(2);
                const std::uint64_t stream =
                    rng::channel_stream(rng::kStreamInitialState, channel);
                x0 << rng::uniform(seed, stream, static_cast<std::uint64_t>(k), 0, lo, hi),
                    rng::uniform(seed, stream, static_cast<std::uint64_t>(k), 1, lo, hi);
                return x0;
            };
        }
    }
    return channels;
}

RefFn build_reference(const ScenarioConfig& cfg) {
    if (cfg.ref_family == "example1_compare") return refs::example1_compare();
    if (cfg.ref_family == "example1_alternating") return refs::example1_alternating();
    if (cfg.ref_family == "example2_sine") return refs::example2_sine();
    if (cfg.ref_family == "constant") return refs::constant(cfg.ref_offset);
    if (cfg.ref_family == "sine")
        return refs::sine(cfg.ref_amplitude, cfg.ref_period, cfg.ref_phase, cfg.ref_offset);
    if (cfg.ref_family == "square")
        return refs::square(cfg.ref_amplitude, cfg.ref_period, cfg.ref_offset);
    throw ConfigError("reference.family: unknown family '" + cfg.ref_family + "'");
}

ScenarioResult run_scenario(const ScenarioConfig& cfg_in) {
    ScenarioConfig cfg = with_defaults(cfg_in);
    {
        std::vector<std::string> problems;
        validate_config(cfg, problems);
        if (!problems.empty()) {
            std::string msg = "scenario '" + cfg.name + "':";
            for (const std::string& p : problems) msg += "\n  " + p;
            throw ConfigError(msg);
        }
    }

    const auto start = std::chrono::steady_clock::now();
    ScenarioResult out;
    out.config = cfg;

    const RefFn ref = build_reference(cfg);
    ControllerConfig cc;
    cc.input_mode = cfg.input_mode;
    cc.m_mode = cfg.m_mode;
    cc.solver = cfg.solver;
    const bool m_unit = cfg.m_mode == MMode::unit;

    if (cfg.plant == "example1") {
        const PlantSpec plant = build_example1_plant(cfg);
        const int slots = plant.horizon - plant.rho + 1;
        if (cfg.controller_kind == ControllerKind::ailc) {
            const ProjectionBall ball{to_vector(cfg.ball_center), cfg.ball_radius};
            AdaptState ad = make_adapt_state(cfg.variant, cfg.eta, ball, to_vector(cfg.theta0),
                                             slots, 0.0, cfg.w_plus, m_unit);
            DisturbanceSpec d = cfg.disturbance;
            d.seed = cfg.seed;
            d.channel = 1;
            out.runs.push_back(
                make_ailc_run(1, run_experiment(plant, ad, cc, ref, d, cfg.iterations)));
        }
        if (cfg.controller_kind == ControllerKind::ddilc || cfg.with_ddilc_baseline) {
            DisturbanceSpec d = cfg.disturbance;
            d.seed = cfg.seed;
            d.channel = 1;
            DdilcResult dres = ddilc_run_experiment(plant, cfg.ddilc, ref, d, cfg.iterations);
            ScenarioRun run;
            run.controller = "ddilc";
            run.channel = 1;
            run.traces = std::move(dres.traces);
            run.disturbance_sup = dres.disturbance_sup;
            run.theta_final.reserve(dres.theta_p_final.size());
            for (double v : dres.theta_p_final) {
                Vector one(1);
                one(0) = v;
                run.theta_final.push_back(std::move(one));
            }
            out.runs.push_back(std::move(run));
        }
    } else {
        ExperimentSpec spec;
        spec.iterations = cfg.iterations;
        std::vector<ChannelSpec> channels = build_example2_channels(cfg);
        const std::vector<double>& c2 =
            cfg.ball_center2.empty() ? cfg.ball_center : cfg.ball_center2;
        const std::vector<double>* centers[2] = {&cfg.ball_center, &c2};
        for (int c = 0; c < 2; ++c) {
            const int slots = channels[static_cast<std::size_t>(c)].horizon -
                              channels[static_cast<std::size_t>(c)].rho + 1;
            const ProjectionBall ball{to_vector(*centers[c]), cfg.ball_radius};
            ChannelSetup setup;
            setup.plant = channels[static_cast<std::size_t>(c)];
            setup.adapt = make_adapt_state(cfg.variant, cfg.eta, ball, to_vector(cfg.theta0),
                                           slots, 0.0, cfg.w_plus, m_unit);
            setup.cfg = cc;
            setup.reference = ref;
            setup.disturbance = cfg.disturbance;
            setup.disturbance.seed = cfg.seed;
            setup.disturbance.channel = c + 1;
            spec.channels.push_back(std::move(setup));
        }
        ExperimentResult eres = mimo_run_experiment(spec);
        for (int c = 0; c < 2; ++c)
            out.runs.push_back(
                make_ailc_run(c + 1, std::move(eres.channels[static_cast<std::size_t>(c)])));
    }

    const auto stop = std::chrono::steady_clock::now();
    out.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return out;
}

}  // namespace ailc
