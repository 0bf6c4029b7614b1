#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "landau/collision.hpp"
#include "landau/diagnostics.hpp"
#include "landau/grid.hpp"

namespace landau {

struct InitialDataSpec {
    // kinds: maxwellian (rho, theta, ux, uy, uz), gaussian_bump (amp, width,
    // cx, cy, cz), bimodal (rho, theta, sep), ring (amp, rho0, width), zero
    std::string kind = "maxwellian";
    std::map<std::string, double> params;
    // if > 0, apply the truncation + mollification + Gaussian-floor scheme
    // with this index to the sampled data
    double scheme_n = 0.0;
};

struct RunConfig {
    int grid_n = 32;
    double grid_L = 6.0;
    double gamma = -3.0;
    double n_reg = 0.0; // 0 -> recommended_n_reg(h)
    double delta = 0.25;
    double viscosity = 0.0; // coefficient of the added Laplacian
    double dt = 1e-3;
    double t_end = 0.5;
    int save_stride = 10; // snapshot every k-th step
    InitialDataSpec init;
    double renorm_band = 1e-6;
    double floor_rel = 1e-30;
    unsigned seed = 12345; // recorded in the run manifest for reproducibility

    VelocityGrid grid() const { return VelocityGrid(grid_n, grid_L); }
    KernelModel kernel_model() const {
        const double n = n_reg > 0.0 ? n_reg : recommended_n_reg(2.0 * grid_L / grid_n);
        return KernelModel(gamma, delta, n);
    }
};

struct StepRecord {
    double t = 0.0;
    double mass = 0.0;
    Vec3 momentum{};
    double energy = 0.0;
    double entropy = 0.0;
    double renorm_factor = 1.0;
    double clipped_mass = 0.0;
    double cfl = 0.0; // dt * (6 max diag A + 6 nu) / h^2, recorded not enforced
};

struct RunResult {
    Trajectory trajectory;
    std::vector<StepRecord> log;
    double max_cfl = 0.0;
    // H-theorem surrogate over the step log: largest single-step entropy
    // rise; the run is monotone when it stays within entropy_slack
    double max_entropy_rise = 0.0;
    bool entropy_monotone = true;
    static constexpr double entropy_slack = 1e-6;
};

// analytic initial data samples
DistributionField sample_initial_data(const InitialDataSpec& spec, const VelocityGrid& grid);

// f_in^n = zeta_n * (xi_n f_in) + (1/n) (2pi)^{-3/2} e^{-|v|^2/2}
// (radial C^2 truncation at |v| in [n, 2n], mass-normalized mollifier of
// support radius 2/n, Gaussian floor)
DistributionField build_initial_data(const DistributionField& f_in, double n);

class Stepper {
public:
    explicit Stepper(const RunConfig& config);

    const RunConfig& config() const { return config_; }
    CollisionOperator& op() { return *op_; }

    // one semi-implicit step: the second-order diffusion core (lagged A plus
    // the added Laplacian) is treated implicitly, everything else explicitly;
    // the update is clipped at zero and renormalized to the pre-step mass.
    // `source` (optional) adds an explicit forcing, used by manufactured
    // solution tests.
    StepRecord step(DistributionField& f,
                    const std::function<double(std::size_t)>* source = nullptr);

    RunResult run();

private:
    RunConfig config_;
    std::unique_ptr<CollisionOperator> op_;
};

// step-log CSV with the documented column schema
void write_step_log_csv(const std::vector<StepRecord>& log, const std::string& path);

} // namespace landau
