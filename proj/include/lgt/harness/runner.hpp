#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lgt/harness/config.hpp"
#include "lgt/harness/table.hpp"

namespace lgt {

// Executes every grid job of the scenario and returns the filled bundle.
// Deterministic: equal configs (and seeds) give byte-identical tables.
ResultBundle run(const ExperimentConfig& cfg);

// Runs and writes to cfg.out_dir.
ResultBundle run_and_write(const ExperimentConfig& cfg);

struct ScenarioInfo {
    std::string name;
    std::string description;
};

// Stable-sorted scenario catalog.
const std::vector<ScenarioInfo>& list_scenarios();
int catalog_version();

// Canonical desk-scale configuration for a named scenario.
ExperimentConfig default_config(const std::string& scenario);

// Worker pool size: LGT_THREADS when set, hardware concurrency otherwise.
int worker_count();
// Runs fn(0..n-1) on the pool; results must go to disjoint slots.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

} // namespace lgt
