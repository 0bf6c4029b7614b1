#include "landau/inequalities.hpp"

#include <cmath>

#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/fd.hpp"
#include "landau/fft.hpp"

namespace landau {

namespace {

// ||f||_{Lp_v(ball)} for one slice
double lp_ball(const DistributionField& f, const NodeMask& ball, double p) {
    double s = 0.0;
    for (std::size_t i : ball.nodes) s += std::pow(f.values[i], p);
    return std::pow(s * ball.node_weight, 1.0 / p);
}

} // namespace

InterpolationResult interpolation_check(const Trajectory& traj, const Vec3& center,
                                        double radius, double p, double q) {
    if (1.0 / p + 2.0 / (3.0 * q) < 1.0 - 1e-12)
        throw validation_error("interpolation_check: need 1/p + 2/(3q) >= 1");
    const VelocityGrid& g = traj.grid;
    const auto ball = ball_restrict(g, center, radius);
    const double w = g.cell_volume();

    InterpolationResult out;
    double lq = 0.0, linf_l1 = 0.0, grad2 = 0.0;
    // the trajectory window is (t_first, t_last]; right-endpoint weights
    const double t_open = traj.t_first(), t_close = traj.t_last();
    for (const auto& [k, dt] : traj.slice_weights(t_open, t_close)) {
        const auto& f = traj.snaps[k];
        lq += std::pow(lp_ball(f, ball, p), q) * dt;
        double l1 = 0.0;
        for (std::size_t i : ball.nodes) l1 += f.values[i];
        linf_l1 = std::max(linf_l1, l1 * w);

        std::vector<double> sq(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) sq[i] = std::sqrt(f.values[i]);
        const auto gr = fd::gradient(g, sq);
        double gg = 0.0;
        for (std::size_t i : ball.nodes)
            gg += gr[0][i] * gr[0][i] + gr[1][i] * gr[1][i] + gr[2][i] * gr[2][i];
        grad2 += gg * w * dt;
    }
    out.lhs = std::pow(lq, 1.0 / q);
    out.rhs = linf_l1 + grad2;
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

namespace {

// cell average of 1_{|z|<delta} |z|^{-rho} over the h-cell centered at z,
// by midpoint subsamples; the singular subcell uses its equal-volume ball
// average.  Cell averages keep the discrete kernel's l^{3/2} mass below the
// continuum value (Jensen), which the Hoelder step of the check relies on.
double cell_averaged_kernel(const Vec3& z, double h, double delta, double rho) {
    if (z.norm() > delta + h) return 0.0;
    constexpr int sub = 5;
    const double hs = h / sub;
    double acc = 0.0;
    for (int a = 0; a < sub; ++a)
        for (int b = 0; b < sub; ++b)
            for (int c = 0; c < sub; ++c) {
                const Vec3 q{z.x + (a - (sub - 1) / 2.0) * hs,
                             z.y + (b - (sub - 1) / 2.0) * hs,
                             z.z + (c - (sub - 1) / 2.0) * hs};
                const double r = q.norm();
                if (r >= delta) continue;
                if (r < hs / 2.0) {
                    const double r_eq = std::min(std::cbrt(3.0 / (4.0 * M_PI)) * hs, delta);
                    acc += 4.0 * M_PI * std::pow(r_eq, 3.0 - rho) /
                           ((3.0 - rho) * hs * hs * hs);
                } else {
                    acc += std::pow(r, -rho);
                }
            }
    return acc / (sub * sub * sub);
}

} // namespace

CheckResult short_range_check(const Trajectory& traj, const Vec3& center, double radius,
                              double delta, double rho) {
    if (!(rho > 0.0 && rho < 2.0))
        throw validation_error("short_range_check: need rho in (0,2)");
    if (!(delta > 0.0)) throw validation_error("short_range_check: need delta > 0");
    const VelocityGrid& g = traj.grid;
    const auto ball = ball_restrict(g, center, radius);
    // the cell-averaged kernel reaches one extra cell beyond delta, so the
    // L3 region carries the same quadrature halo
    const auto enlarged = ball_restrict(g, center, radius + delta + 2.0 * g.h());
    const double w = g.cell_volume();

    CheckResult out;
    // the trajectory window is (t_first, t_last]; right-endpoint weights
    const double t_open = traj.t_first(), t_close = traj.t_last();
    for (const auto& [k, dt] : traj.slice_weights(t_open, t_close)) {
        const auto& f = traj.snaps[k];
        const auto conv = fft_convolve(
            g, [&](const Vec3& z) { return cell_averaged_kernel(z, g.h(), delta, rho); },
            f.values);
        double sup = 0.0;
        for (std::size_t i : ball.nodes) sup = std::max(sup, conv[i]);
        out.lhs += sup * dt;

        double l3 = 0.0;
        for (std::size_t i : enlarged.nodes) {
            const double v = f.values[i];
            l3 += v * v * v;
        }
        out.rhs += std::cbrt(l3 * w) * dt;
    }
    out.rhs *= std::pow(8.0 * M_PI / (3.0 * (2.0 - rho)), 2.0 / 3.0) * std::pow(delta, 2.0 - rho);
    return out;
}

PointwiseNonlin nonlinearization_pointwise(double g, double kappa, double kappa_bar) {
    PointwiseNonlin out;
    const double r = std::max(std::sqrt(g) - std::sqrt(kappa), 0.0);
    const double G = std::min(r, r * r);
    const double G2 = G * G;
    const double sk = std::sqrt(kappa_bar) - std::sqrt(kappa);
    const double coeff = 6.0 * kappa_bar / (sk * sk * sk * sk);
    const double lhs1 = std::max(g - kappa_bar, 0.0);
    const double m1 = coeff * G2 - lhs1;
    const double m2 = std::max(g - kappa, 0.0) - G2;
    out.worst_margin = std::min(m1, m2);
    const double slack = 1e-12 * (1.0 + std::fabs(g));
    out.ok = m1 >= -slack && m2 >= -slack;
    return out;
}

NonlinearizationResult nonlinearization_check(const Trajectory& traj, const Vec3& center,
                                              double radius, double kappa, double kappa_bar,
                                              double p, double q) {
    if (!(kappa >= 1.0 && kappa < kappa_bar && kappa_bar < kappa + 1.0))
        throw validation_error("nonlinearization_check: need 1 <= kappa < kappa_bar < kappa+1");
    const VelocityGrid& g = traj.grid;
    const auto ball = ball_restrict(g, center, radius);
    const double w = g.cell_volume();

    NonlinearizationResult out;
    double lq = 0.0, linf_l1 = 0.0, grad2 = 0.0;
    // the trajectory window is (t_first, t_last]; right-endpoint weights
    const double t_open = traj.t_first(), t_close = traj.t_last();
    for (const auto& [k, dt] : traj.slice_weights(t_open, t_close)) {
        const auto& f = traj.snaps[k];
        double lp = 0.0, l1 = 0.0;
        for (std::size_t i : ball.nodes) {
            const double val = f.values[i];
            const auto pw = nonlinearization_pointwise(val, kappa, kappa_bar);
            if (!pw.ok) {
                const double r = std::max(std::sqrt(val) - std::sqrt(kappa), 0.0);
                const double G2 = std::min(r, r * r) * std::min(r, r * r);
                if (std::max(val - kappa, 0.0) < G2) ++out.upper_bound_violations;
                else ++out.pointwise_violations;
            }
            lp += std::pow(std::max(val - kappa_bar, 0.0), p);
            l1 += std::max(val - kappa, 0.0);
        }
        lq += std::pow(std::pow(lp * w, 1.0 / p), q) * dt;
        linf_l1 = std::max(linf_l1, l1 * w);

        // grad (sqrt(f) - sqrt(kappa))_+
        std::vector<double> trunc(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            trunc[i] = std::max(std::sqrt(f.values[i]) - std::sqrt(kappa), 0.0);
        const auto gr = fd::gradient(g, trunc);
        double gg = 0.0;
        for (std::size_t i : ball.nodes)
            gg += gr[0][i] * gr[0][i] + gr[1][i] * gr[1][i] + gr[2][i] * gr[2][i];
        grad2 += gg * w * dt;
    }
    out.lhs_norm = std::pow(lq, 1.0 / q);
    const double sk = std::sqrt(kappa_bar) - std::sqrt(kappa);
    out.rhs_norm = kappa_bar / (sk * sk * sk * sk) * (linf_l1 + grad2);
    out.implied_constant = out.rhs_norm > 0.0 ? out.lhs_norm / out.rhs_norm : 0.0;
    return out;
}

std::pair<double, double> iteration_sum(double beta, int n) {
    if (!(beta > 1.0)) throw validation_error("iteration_sum: need beta > 1");
    if (n < 1) throw validation_error("iteration_sum: need n >= 1");
    double direct = 0.0;
    for (int i = 0; i < n; ++i) direct += (n - i) * std::pow(beta, i);
    const double closed =
        (std::pow(beta, n + 1) - (n + 1) * (beta - 1.0) - 1.0) / ((beta - 1.0) * (beta - 1.0));
    return {direct, closed};
}

} // namespace landau
