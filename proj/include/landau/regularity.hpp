#pragma once

#include <cstddef>
#include <vector>

#include "landau/collision.hpp"
#include "landau/grid.hpp"
#include "landau/kernel.hpp"
#include "landau/scaling.hpp"

namespace landau {

// singular-set dimension bound m* = 1 + (5/2)|2+gamma|
double m_star(double gamma);

// De Giorgi schedules: radii shrink from 1 to 1/2, levels rise from 1 to 2
inline double degiorgi_radius(int j) { return 0.5 * (1.0 + std::pow(2.0, -j)); }
inline double degiorgi_level(int j) { return 2.0 - std::pow(2.0, -j); }

// threshold eta_DG = min(1/2, (2 C2)^{-12} / 2)
double degiorgi_eta(double C2);

// level-set functional on a scaled trajectory:
// U_j = sup_saved-t int_{B_{r_j}} (f_eps - kappa_j)_+ +
//       iint_{Q_{r_j}} |grad sqrt f_eps|^2 1_{f_eps >= kappa_j}
double degiorgi_functional(const Trajectory& scaled, int j);

// same quantity with explicit radius/level (the j=0-style hypothesis uses
// radius 2, level 1)
double level_set_energy(const Trajectory& scaled, double radius, double level);

// recurrence U_{j+1} = C2^{j+1} (U_j^{4/3} + Z U_j^{5/3}) iterated at
// equality, tracked in log space to avoid underflow
struct RecurrenceResult {
    std::vector<double> log_U;      // natural log of U_j
    std::vector<double> log_V;      // natural log of V_j = Z^{3/2} U_j
    bool vanishes = false;          // U0 <= eta_DG Z^{-3/2}
    bool bound_holds = true;        // V_j <= (1/2)^{(4/3)^j} whenever vanishes
    bool diverged = false;
};

RecurrenceResult degiorgi_recurrence(double U0, double Z, double C2, int j_max);

struct CertifyParams {
    int target_n = 32;      // scaled grid resolution
    double sup_slack = 0.1; // grid slack on the f_eps <= 2 conclusion
};

struct CertifyResult {
    bool certified = false;
    double hypothesis = 0.0; // level-1 energy over Q_2
    double threshold = 0.0;  // eta_DG Z^{-3/2}
    double sup_half = 0.0;   // grid max of f_eps over Q_{1/2}
    bool hypothesis_ok = false;
    bool conclusion_ok = false;
    bool discretization_alert = false; // hypothesis holds but conclusion fails
};

CertifyResult degiorgi_certify(const Trajectory& traj, double t0, const Vec3& v0, double eps,
                               double Z_eps, double eta_DG, const CertifyParams& params = {});

// ---------------------------------------------------------------------------
// dyadic dissipation scanner

struct ScanParams {
    double lambda = 0.125; // scale ratio, in (0, 1/4)
    int j_max = 6;
    // flag threshold eta_DG+; the default is calibrated so unit-mass
    // equilibrium runs produce zero flags at 32^3 (the |grad sqrt f|^2 term
    // alone contributes ~1 to D_0 there)
    double eta_plus = 1.0;
};

// Feasible scales form an interval: the time window 4 eps_j^2 < t-span
// relaxes as j grows while the resolution floor h <= eps_j / 4 tightens.
// D[k] holds the density at scale first_index + k.
struct ScanOutcome {
    double t0 = 0.0;
    Vec3 v0{};
    double lambda = 0.0;
    std::vector<double> D;  // D_j = eps_j^{-m*} iint_{Q_{2 eps_j}} (|grad sqrt f|^2 + int |F|^2)
    int first_index = 0;    // coarsest evaluated scale
    int floor_index = 0;    // first unresolved scale (first_index + D.size())
    bool flagged = false;   // D at the finest resolved scale exceeds 2 eta_+

    double finest_eps() const {
        return std::pow(lambda, first_index + static_cast<int>(D.size()) - 1);
    }
};

ScanOutcome dissipation_scan(const Trajectory& traj, double t0, const Vec3& v0,
                             const ScanParams& params, const KernelModel& model);

// scaled-path evaluation of the same quantity (two-path consistency check):
// eps^{-5 gamma*/2} iint_{Q_2} (|grad sqrt f_eps|^2 + int |F_eps|^2)
double scan_density_scaled(const Trajectory& traj, double t0, const Vec3& v0, double eps,
                           const KernelModel& model, int target_n);

// ---------------------------------------------------------------------------
// covering

// greedy selection in decreasing radius order; returns indices of the chosen
// pairwise disjoint subfamily.  Every input cylinder intersects a selected
// cylinder of radius >= its own.
std::vector<std::size_t> vitali_cover(const std::vector<ParabolicCylinder>& cylinders);

// The one-sided cylinders Q_r(t,v) = (t-r^2, t] x B_r(v) force the expansion
// used for the covering property to close forward in time:
// expansion(Q_r(t,v)) = Q_{5r}(t + r^2, v).  Containment of every input in
// the expansion of some selected cylinder is then exact.
ParabolicCylinder vitali_expansion(const ParabolicCylinder& c);
bool cylinder_contains(const ParabolicCylinder& outer, const ParabolicCylinder& inner);

struct HausdorffEstimate {
    std::vector<ParabolicCylinder> flagged;
    std::vector<std::size_t> selected; // indices into flagged
    double bound = 0.0;                // sum (5 r_j)^{m*}
};

HausdorffEstimate hausdorff_upper_bound(const std::vector<ScanOutcome>& scans, double eta_plus,
                                        double m_star_value);

} // namespace landau
