#pragma once

#include <functional>

#include "elreg/config.hpp"

namespace elreg {

struct RunResult {
    std::vector<EnergyRecord> records;
    SimState final_state;
    std::vector<std::string> snapshot_paths;
    std::vector<DirectorSample> director_history;  // filled when requested
    double max_cfl = 0.0;  // max over record points of max|v| dt n / L
};

struct RunHooks {
    // invoked at every record point, after the record is assembled
    std::function<void(const SimState&, const EnergyRecord&)> on_record;
    bool keep_director_history = false;
};

// Steps the configured system from t = 0 to t_end, emitting an EnergyRecord
// every record_every steps (plus the initial state) and snapshots every
// snapshot_every steps. Deterministic for a fixed config.
RunResult run_simulation(const SimConfig& cfg, const RunHooks& hooks = {});

}  // namespace elreg
