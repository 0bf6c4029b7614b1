#pragma once

#include <string>

#include "landau/grid.hpp"
#include "landau/stepper.hpp"

namespace landau {

// Run directory layout:
//   manifest.json   config hash + grid + snapshot list + timings
//   steps.csv       per-step log
//   snap_NNNNNN.lndf  snapshots in the binary field format
struct RunArtifacts {
    RunConfig config;
    Trajectory trajectory;
    std::vector<StepRecord> log;
};

void write_run_dir(const std::string& dir, const std::string& config_text,
                   const RunConfig& config, const RunResult& result, double wall_seconds);

RunArtifacts load_run_dir(const std::string& dir);

} // namespace landau
