#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "landau/fd.hpp"
#include "landau/fft.hpp"
#include "landau/grid.hpp"
#include "landau/kernel.hpp"

namespace landau {

// One symmetric 3x3 matrix per node; component order xx, yy, zz, xy, xz, yz.
struct MatrixField {
    VelocityGrid grid;
    std::array<std::vector<double>, 6> comp;

    explicit MatrixField(const VelocityGrid& g) : grid(g) {
        for (auto& c : comp) c.assign(g.size(), 0.0);
    }
    Mat3 at(std::size_t i) const {
        Mat3 m;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m(a, b) = comp[kSymIndex[a][b]][i];
        return m;
    }
    double scale() const {
        double s = 0.0;
        for (const auto& c : comp)
            for (double v : c) s = std::max(s, std::fabs(v));
        return s;
    }
    // smallest eigenvalue over all nodes
    double min_eigenvalue_floor() const {
        double m = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            m = std::min(m, min_eigenvalue(at(i)));
        return m;
    }
};

enum class RhsForm { divergence, nondivergence };

struct DissipationSample {
    std::size_t v_index = 0;
    std::size_t w_index = 0;
    Vec3 F{};
};

struct DissipationReport {
    std::vector<DissipationSample> samples;
    double total = 0.0; // (1/2) iint |F|^2 estimate
    std::size_t masked_pairs = 0;
    int stride = 1;
};

// Assembly of the diffusion matrix A = a_n * f, the drift div A, the
// collision right-hand side and the pair dissipation.  Kernel transforms are
// cached per (grid, model); all queries are read-only with respect to the
// input snapshot.
class CollisionOperator {
public:
    CollisionOperator(const VelocityGrid& grid, const KernelModel& model);

    const VelocityGrid& grid() const { return grid_; }
    const KernelModel& model() const { return model_; }

    MatrixField diffusion_matrix(const DistributionField& f, KernelVariant variant);
    fd::VectorField drift_field(const DistributionField& f);
    // mu_n * f where mu_n is the smeared Dirac weight of the mollified kernel
    fd::Field reaction_field(const DistributionField& f);

    fd::Field collision_rhs(const DistributionField& f, RhsForm form);

    // flux of the log form J = f (A g - a_n * (f g)) with g = grad ln f;
    // div J equals the divergence-form right-hand side up to O(h^2) and
    // annihilates Maxwellians exactly on the grid
    struct LogFlux {
        fd::VectorField J;
        fd::VectorField g;
        MatrixField A; // mollified diffusion matrix, reusable by callers
    };
    LogFlux log_flux(const DistributionField& f, double floor_rel = 1e-30);

    // per-node pair dissipation density: int |F(v, w)|^2 dw given the
    // log-gradient field g (FFT route, equal to the pair sum up to roundoff)
    fd::Field pair_dissipation_density(const DistributionField& f, const fd::VectorField& g,
                                       KernelVariant variant);

    // (1/2) iint |F|^2 with g = grad ln f (fast path, no subsampling)
    double total_dissipation(const DistributionField& f, KernelVariant variant);

private:
    void validate_resolution() const;
    const std::array<ConvolutionWorkspace::Spectrum, 6>& matrix_spectra(KernelVariant v);
    const std::array<ConvolutionWorkspace::Spectrum, 3>& drift_spectra();
    const ConvolutionWorkspace::Spectrum& smear_spectrum();

    VelocityGrid grid_;
    KernelModel model_;
    ConvolutionWorkspace ws_;
    std::map<KernelVariant, std::array<ConvolutionWorkspace::Spectrum, 6>> matrix_cache_;
    std::optional<std::array<ConvolutionWorkspace::Spectrum, 3>> drift_cache_;
    std::optional<ConvolutionWorkspace::Spectrum> smear_cache_;
};

// materialized (optionally subsampled) pair field, stride-weighted total
DissipationReport dissipation_pairs(const DistributionField& f, const KernelModel& model,
                                    KernelVariant variant, int stride,
                                    bool collect_samples = false, double floor_rel = 1e-30);

// same pair structure with the truncated log gradient grad ln_+(f/kappa)
DissipationReport truncated_dissipation_pairs(const DistributionField& f,
                                              const KernelModel& model, KernelVariant variant,
                                              double kappa, int stride,
                                              bool collect_samples = false);

// Direct O(N^6) reference paths (the oracles for the FFT routes).
MatrixField diffusion_matrix_direct(const DistributionField& f, const KernelModel& model,
                                    KernelVariant variant);
double total_dissipation_direct(const DistributionField& f, const KernelModel& model,
                                KernelVariant variant, double floor_rel = 1e-30);

} // namespace landau
