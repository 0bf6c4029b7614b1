#pragma once

#include <utility>

#include "landau/grid.hpp"

namespace landau {

// Executable checkers for the functional inequalities used as lemmas.  Every
// check returns both sides; margin() >= 0 means the inequality holds.

struct CheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin() const { return rhs - lhs; }
};

// ||f||_{Lq_t Lp_v(I x B)} vs ||f||_{Linf_t L1_v} + ||grad sqrt f||^2_{L2},
// valid for 1/p + 2/(3q) >= 1; reports the implied constant lhs/rhs
struct InterpolationResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

InterpolationResult interpolation_check(const Trajectory& traj, const Vec3& center,
                                        double radius, double p, double q);

// || f * 1_{B_delta}/|.|^rho ||_{L1_t Linf_v(I x B)}
//   <= (8 pi / (3(2-rho)))^{2/3} delta^{2-rho} ||f||_{L1_t L3_v(I x (B+B_delta))}
CheckResult short_range_check(const Trajectory& traj, const Vec3& center, double radius,
                              double delta, double rho);

// pointwise (g - kbar)_+ <= 6 kbar / (sqrt(kbar)-sqrt(k))^4 (G_+^k)^2 with
// G_+^k = min(r, r^2), r = (sqrt(g)-sqrt(k))_+, plus (G_+^k)^2 <= (g-k)_+
struct PointwiseNonlin {
    bool ok = true;
    double worst_margin = 0.0; // most negative margin observed
};

PointwiseNonlin nonlinearization_pointwise(double g, double kappa, double kappa_bar);

struct NonlinearizationResult {
    std::size_t pointwise_violations = 0;
    std::size_t upper_bound_violations = 0;
    double lhs_norm = 0.0;         // ||(g - kbar)_+||_{Lq Lp}
    double rhs_norm = 0.0;         // kbar/(sqrt(kbar)-sqrt(k))^4 (L-infty-L1 + grad term)
    double implied_constant = 0.0; // lhs / rhs
};

NonlinearizationResult nonlinearization_check(const Trajectory& traj, const Vec3& center,
                                              double radius, double kappa, double kappa_bar,
                                              double p, double q);

// sum_{i=0}^{n-1} (n-i) beta^i and its closed form
// (beta-1)^{-2} (beta^{n+1} - (n+1)(beta-1) - 1)
std::pair<double, double> iteration_sum(double beta, int n);

} // namespace landau
