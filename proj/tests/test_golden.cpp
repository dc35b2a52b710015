#include "doctest.h"

#include <map>
#include <string>

#include "ailc/scenario.hpp"
#include "golden_values.hpp"

using namespace ailc;

namespace {

const ScenarioResult& cached_run(const std::string& name) {
    static std::map<std::string, ScenarioResult> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        ScenarioConfig cfg = *find_builtin(name);
        cfg.iterations = 25;
        it = cache.emplace(name, run_scenario(cfg)).first;
    }
    return it->second;
}

}  // namespace

TEST_CASE("pinned error trajectories reproduce bit for bit") {
    if (!golden::kPinned) {
        MESSAGE("golden values not pinned yet; skipping");
        return;
    }
    for (const golden::MaxErrPin& pin : golden::kMaxErr) {
        const ScenarioResult& res = cached_run(pin.scenario);
        const ScenarioRun* run = nullptr;
        for (const ScenarioRun& r : res.runs)
            if (r.controller == "ailc" && r.channel == pin.channel) run = &r;
        REQUIRE(run != nullptr);
        REQUIRE(pin.k >= 1);
        REQUIRE(static_cast<std::size_t>(pin.k) <= run->traces.size());
        INFO(pin.scenario, " ch", pin.channel, " k=", pin.k);
        CHECK(run->traces[static_cast<std::size_t>(pin.k) - 1].max_err == pin.value);
    }
}
