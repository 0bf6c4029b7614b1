#include "landau/run_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "landau/config.hpp"
#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/snapshot_io.hpp"

namespace landau {

namespace fs = std::filesystem;
using nlohmann::json;

void write_run_dir(const std::string& dir, const std::string& config_text,
                   const RunConfig& config, const RunResult& result, double wall_seconds) {
    fs::create_directories(dir);
    write_step_log_csv(result.log, (fs::path(dir) / "steps.csv").string());

    json manifest;
    manifest["format"] = "landau-run";
    manifest["version"] = 1;
    manifest["config_hash"] = config_hash(config_text);
    manifest["config"] = config_text;
    manifest["grid"] = {{"n", config.grid_n}, {"L", config.grid_L}};
    manifest["gamma"] = config.gamma;
    manifest["n_reg"] = config.kernel_model().n_reg;
    manifest["delta"] = config.delta;
    manifest["viscosity"] = config.viscosity;
    manifest["dt"] = config.dt;
    manifest["save_stride"] = config.save_stride;
    manifest["seed"] = config.seed;
    manifest["max_cfl"] = result.max_cfl;
    manifest["entropy_monotone"] = result.entropy_monotone;
    manifest["max_entropy_rise"] = result.max_entropy_rise;
    manifest["timings"] = {{"wall_seconds", wall_seconds}};

    json snaps = json::array();
    json times = json::array();
    char name[32];
    double max_boundary_mass = 0.0;
    for (std::size_t k = 0; k < result.trajectory.size(); ++k) {
        std::snprintf(name, sizeof(name), "snap_%06zu.lndf", k);
        snapshot::write_file(result.trajectory.snaps[k], (fs::path(dir) / name).string());
        snaps.push_back(name);
        times.push_back(result.trajectory.snaps[k].time);
        max_boundary_mass = std::max(max_boundary_mass,
                                     boundary_mass(result.trajectory.snaps[k]));
    }
    manifest["snapshots"] = snaps;
    manifest["times"] = times;
    manifest["max_boundary_mass"] = max_boundary_mass;

    std::ofstream os(fs::path(dir) / "manifest.json");
    os << manifest.dump(2) << '\n';
}

RunArtifacts load_run_dir(const std::string& dir) {
    std::ifstream is(fs::path(dir) / "manifest.json");
    if (!is) throw validation_error("run dir: missing manifest.json in " + dir);
    json manifest;
    try {
        is >> manifest;
    } catch (const json::exception& e) {
        throw validation_error(std::string("run dir: bad manifest: ") + e.what());
    }
    RunArtifacts out;
    out.config = run_config_from_text(manifest.at("config").get<std::string>());
    out.trajectory = Trajectory(out.config.grid());
    for (const auto& name : manifest.at("snapshots")) {
        auto snap = snapshot::read_file((fs::path(dir) / name.get<std::string>()).string());
        if (snap.grid != out.trajectory.grid)
            throw validation_error("run dir: snapshot grid mismatch in " +
                                   name.get<std::string>());
        out.trajectory.push(std::move(snap));
    }
    if (out.trajectory.size() == 0) throw validation_error("run dir: no snapshots listed");
    return out;
}

} // namespace landau
