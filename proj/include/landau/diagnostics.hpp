#pragma once

#include <limits>
#include <vector>

#include "landau/collision.hpp"
#include "landau/grid.hpp"
#include "landau/kernel.hpp"
#include "landau/scaling.hpp"

namespace landau {

// ---------------------------------------------------------------------------
// moments and entropies

struct EntropyReport {
    double time = 0.0;
    double mass = 0.0;
    Vec3 momentum{};
    double energy = 0.0;      // int |v|^2 f
    double entropy = 0.0;     // int f ln f  (0 ln 0 = 0)
    double entropy_pos = 0.0; // int f ln_+ f
};

EntropyReport moments_and_entropy(const DistributionField& f);

// mass carried by the outermost node layer; monitors how much the
// compact-support truncation at the box boundary is being exercised
double boundary_mass(const DistributionField& f);

// h_+^kappa(r) = r ln_+(r/kappa) - (r - kappa)_+, kappa >= 1
double h_plus_kappa(double r, double kappa);
double truncated_entropy(const DistributionField& f, double kappa);

// (1/2) iint |F^kappa_+|^2 with subsampling; see collision.hpp for the pair
// machinery
double truncated_dissipation(const DistributionField& f, double kappa, const KernelModel& model,
                             int stride);

// ---------------------------------------------------------------------------
// kernels used by the local estimates

// backward-heat test kernel M(t,v) = (lambda^2 - t)^{-3/2} exp(-|v|^2 / (4(lambda^2 - t)))
double heat_kernel(double t, const Vec3& v, double lambda);

// convolution weight of 1/|z|^rho with the singular cell replaced by its
// equal-volume ball average (clipped to the kernel support radius); used by
// every 1/|z| grid convolution
double inv_dist_kernel(const Vec3& z, double h, double rho = 1.0,
                       double support = std::numeric_limits<double>::infinity());

// Z[f_eps] = f_eps * k(eps |.|) 1_{B_1^c} / |.|, maximized over the ball of
// `domain` (single snapshot)
double z_functional(const DistributionField& f_eps, double eps, const KernelModel& model,
                    const ParabolicCylinder& domain);

// per-node field variant (used by the scaled entropy inequality)
std::vector<double> z_functional_field(const DistributionField& f_eps, double eps,
                                       const KernelModel& model);

// ---------------------------------------------------------------------------
// scaled suitable entropy inequality

struct ScaledEntropyTerms {
    double lhs_sup = 0.0;    // sup_t int_{B_r} h_+^kappa(f_eps)
    double lhs_diss = 0.0;   // iint_{Q_r} |grad (f_eps - kappa)_+|^2 / f_eps
    double rhs_t1 = 0.0;     // (kappa + delta^-2) iint f_eps (ln_+ + ln_+^2)
    double rhs_t2 = 0.0;     // delta^-2 iint Z[f_eps] f_eps (ln_+ + ln_+^2)
    double rhs_t3 = 0.0;     // delta^-2 iint (f_eps * 1_{B_1}/|.|) f_eps (ln_+ + ln_+^2)
    double implied_C0 = 0.0; // (lhs_sup + lhs_diss) / (rhs_t1 + rhs_t2 + rhs_t3)
};

struct ScaledEntropyParams {
    double kappa_eps = 1.0; // in [1,2]
    double r_eps = 1.5;     // in (0,2]
    double delta_eps = 0.5; // in (0,1]
    int target_n = 32;      // scaled grid resolution
};

ScaledEntropyTerms scaled_entropy_inequality(const Trajectory& traj, double t0, const Vec3& v0,
                                             double eps, const ScaledEntropyParams& params,
                                             const KernelModel& model);

// ---------------------------------------------------------------------------
// local mass estimate

struct LocalMassTerms {
    double lhs = 0.0;          // ||f_eps||_{Linf_t L1_v(Q_2 lambda)} / lambda^3
    double rhs_t1 = 0.0;       // (1 + lambda^-4 ||F_eps||) ||f_eps||_{Linf L1(Q_2)}
    double rhs_t2 = 0.0;       // lambda^-8 (||F_eps||^2 + 1) ||grad sqrt f_eps||^2
    double rhs_t3 = 0.0;       // lambda^-8 (k(eps)/eps) ||F_eps||^2
    double F_eps_l2 = 0.0;     // ||F_eps||_{L2(Q_2 x R^3)}
    double grad_sqrt_l2 = 0.0; // ||grad sqrt f_eps||^2_{L2(Q_2)}
    double implied_C1 = 0.0;   // lhs / (rhs_t1 + rhs_t2 + rhs_t3)
};

LocalMassTerms local_mass_estimate(const Trajectory& traj, double t0, const Vec3& v0,
                                   double lambda, double eps, const KernelModel& model,
                                   int target_n = 32);

// ---------------------------------------------------------------------------
// local entropy dissipation estimate (both sides)

// C^2 bump: 1 on B_{r_inner}(center), 0 outside B_{r_outer}(center)
struct BumpSpec {
    Vec3 center{};
    double r_inner = 1.0;
    double r_outer = 2.0;

    double value(const Vec3& v) const;
    double grad_norm(const Vec3& v) const; // |grad Psi|, radial profile
    double grad_bound() const { return 1.5 / (r_outer - r_inner); }
};

struct DissipationBoundResult {
    double lhs = 0.0; // symmetrized a_out pair integral
    double rhs = 0.0; // ellipticity term minus penalty
    double measured_c0 = 0.0;
    double penalty = 0.0;
};

DissipationBoundResult entropy_dissipation_lower_bound(const DistributionField& f, double delta,
                                                       const BumpSpec& psi,
                                                       const KernelModel& model,
                                                       double R0 = 1.0);

} // namespace landau
