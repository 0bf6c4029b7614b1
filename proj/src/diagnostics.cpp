#include "landau/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "landau/errors.hpp"
#include "landau/fft.hpp"

namespace landau {

EntropyReport moments_and_entropy(const DistributionField& f) {
    EntropyReport r;
    r.time = f.time;
    const VelocityGrid& g = f.grid;
    const double w = g.cell_volume();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double fi = f.values[i];
        if (fi == 0.0) continue;
        const Vec3 v = g.node(i);
        r.mass += fi;
        r.momentum = r.momentum + v * fi;
        r.energy += v.norm2() * fi;
        const double lnf = std::log(fi);
        r.entropy += fi * lnf;
        if (lnf > 0.0) r.entropy_pos += fi * lnf;
    }
    r.mass *= w;
    r.momentum = r.momentum * w;
    r.energy *= w;
    r.entropy *= w;
    r.entropy_pos *= w;
    return r;
}

double boundary_mass(const DistributionField& f) {
    const VelocityGrid& g = f.grid;
    double s = 0.0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const bool edge = ix == 0 || iy == 0 || iz == 0 || ix == g.n - 1 ||
                                  iy == g.n - 1 || iz == g.n - 1;
                if (edge) s += f.values[g.index(ix, iy, iz)];
            }
    return s * g.cell_volume();
}

double h_plus_kappa(double r, double kappa) {
    if (r <= kappa) return 0.0;
    return r * std::log(r / kappa) - (r - kappa);
}

double truncated_entropy(const DistributionField& f, double kappa) {
    if (kappa < 1.0) throw validation_error("truncated_entropy: kappa must be >= 1");
    double s = 0.0;
    for (double v : f.values) s += h_plus_kappa(v, kappa);
    return s * f.grid.cell_volume();
}

double truncated_dissipation(const DistributionField& f, double kappa, const KernelModel& model,
                             int stride) {
    return truncated_dissipation_pairs(f, model, KernelVariant::full, kappa, stride).total;
}

double heat_kernel(double t, const Vec3& v, double lambda) {
    if (!(lambda > 0.0)) throw validation_error("heat_kernel: lambda must be positive");
    if (t < -1.0 - 1e-12 || t > 0.0)
        throw window_error("heat_kernel: t must lie in [-1, 0]");
    const double s = lambda * lambda - t;
    if (s <= 0.0) throw window_error("heat_kernel: lambda^2 - t must be positive");
    return std::pow(s, -1.5) * std::exp(-v.norm2() / (4.0 * s));
}

double inv_dist_kernel(const Vec3& z, double h, double rho, double support) {
    const double r = z.norm();
    if (r > 0.0) return std::pow(r, -rho);
    // equal-volume ball average of |z|^-rho over the singular cell, clipped
    // to the kernel support radius so no mass outside it is counted
    const double r_eq = std::min(std::cbrt(3.0 / (4.0 * M_PI)) * h, support);
    return 4.0 * M_PI * std::pow(r_eq, 3.0 - rho) / ((3.0 - rho) * h * h * h);
}

std::vector<double> z_functional_field(const DistributionField& f_eps, double eps,
                                       const KernelModel& model) {
    const VelocityGrid& g = f_eps.grid;
    return fft_convolve(
        g,
        [&](const Vec3& z) {
            const double r = z.norm();
            if (r < 1.0) return 0.0;
            return model.k(eps * r) / r;
        },
        f_eps.values);
}

double z_functional(const DistributionField& f_eps, double eps, const KernelModel& model,
                    const ParabolicCylinder& domain) {
    const auto field = z_functional_field(f_eps, eps, model);
    const auto mask = ball_restrict(f_eps.grid, domain.v0, domain.r);
    double m = 0.0;
    for (std::size_t i : mask.nodes) m = std::max(m, field[i]);
    return m;
}

namespace {

// f (ln_+(f/kappa) + ln_+^2(f/kappa)) pointwise
inline double entropy_weight(double f, double kappa) {
    if (f <= kappa) return 0.0;
    const double l = std::log(f / kappa);
    return f * (l + l * l);
}

} // namespace

ScaledEntropyTerms scaled_entropy_inequality(const Trajectory& traj, double t0, const Vec3& v0,
                                             double eps, const ScaledEntropyParams& p,
                                             const KernelModel& model) {
    if (!(p.kappa_eps >= 1.0 && p.kappa_eps <= 2.0))
        throw validation_error("scaled_entropy_inequality: kappa_eps must lie in [1,2]");
    if (!(p.r_eps > 0.0 && p.r_eps <= 2.0))
        throw validation_error("scaled_entropy_inequality: r_eps must lie in (0,2]");
    if (!(p.delta_eps > 0.0 && p.delta_eps <= 1.0))
        throw validation_error("scaled_entropy_inequality: delta_eps must lie in (0,1]");

    const double R = p.r_eps + p.delta_eps;
    ScaledWindow window;
    // margin so centered gradients inside B_{r_eps} see valid values
    window.target_grid = VelocityGrid(p.target_n, R * 1.05 + 4.0 * R / p.target_n);
    window.t_window = R * R;
    const Trajectory scaled = scaled_solution(traj, t0, v0, eps, window);

    const VelocityGrid& g = scaled.grid;
    const double w = g.cell_volume();
    const auto inner = ball_restrict(g, Vec3{}, p.r_eps);
    const auto outer = ball_restrict(g, Vec3{}, R);

    ScaledEntropyTerms out;

    // left-hand side over Q_{r_eps}
    for (const auto& [k, dt] : scaled.slice_weights(-p.r_eps * p.r_eps, 0.0)) {
        const auto& f = scaled.snaps[k];
        double sup_term = 0.0;
        for (std::size_t i : inner.nodes) sup_term += h_plus_kappa(f.values[i], p.kappa_eps);
        out.lhs_sup = std::max(out.lhs_sup, sup_term * w);

        // |grad (f - kappa)_+|^2 / f on {f > kappa}
        std::vector<double> fk(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            fk[i] = std::max(f.values[i] - p.kappa_eps, 0.0);
        const auto grad = fd::gradient(g, fk);
        double diss = 0.0;
        for (std::size_t i : inner.nodes) {
            if (f.values[i] <= p.kappa_eps) continue;
            const double g2 = grad[0][i] * grad[0][i] + grad[1][i] * grad[1][i] +
                              grad[2][i] * grad[2][i];
            diss += g2 / f.values[i];
        }
        out.lhs_diss += diss * w * dt;
    }

    // right-hand side over Q_{r_eps + delta_eps}
    const double inv_d2 = 1.0 / (p.delta_eps * p.delta_eps);
    for (const auto& [k, dt] : scaled.slice_weights(-R * R, 0.0)) {
        const auto& f = scaled.snaps[k];
        const auto zfield = z_functional_field(f, eps, model);
        const auto short_conv = fft_convolve(
            g,
            [&](const Vec3& z) {
                const double r = z.norm();
                if (r >= 1.0) return 0.0;
                return inv_dist_kernel(z, g.h());
            },
            f.values);
        double t1 = 0.0, t2 = 0.0, t3 = 0.0;
        for (std::size_t i : outer.nodes) {
            const double ew = entropy_weight(f.values[i], p.kappa_eps);
            if (ew == 0.0) continue;
            t1 += ew;
            t2 += zfield[i] * ew;
            t3 += short_conv[i] * ew;
        }
        out.rhs_t1 += (p.kappa_eps + inv_d2) * t1 * w * dt;
        out.rhs_t2 += inv_d2 * t2 * w * dt;
        out.rhs_t3 += inv_d2 * t3 * w * dt;
    }

    const double lhs = out.lhs_sup + out.lhs_diss;
    const double rhs = out.rhs_t1 + out.rhs_t2 + out.rhs_t3;
    if (rhs > 0.0)
        out.implied_C0 = lhs / rhs;
    else
        out.implied_C0 = (lhs > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    return out;
}

LocalMassTerms local_mass_estimate(const Trajectory& traj, double t0, const Vec3& v0,
                                   double lambda, double eps, const KernelModel& model,
                                   int target_n) {
    if (!(lambda > 0.0 && lambda < 0.25))
        throw validation_error("local_mass_estimate: lambda must lie in (0, 1/4)");

    ScaledWindow window;
    window.target_grid = VelocityGrid(target_n, 2.0 * 1.05 + 8.0 / target_n);
    window.t_window = 4.0;
    const Trajectory scaled = scaled_solution(traj, t0, v0, eps, window);

    const VelocityGrid& g = scaled.grid;
    const double w = g.cell_volume();
    const auto b2l = ball_restrict(g, Vec3{}, 2.0 * lambda);
    const auto b2 = ball_restrict(g, Vec3{}, 2.0);

    LocalMassTerms out;

    double lhs_raw = 0.0, linf_l1 = 0.0;
    for (const auto& [k, dt] : scaled.slice_weights(-4.0 * lambda * lambda, 0.0)) {
        (void)dt;
        double m = 0.0;
        for (std::size_t i : b2l.nodes) m += scaled.snaps[k].values[i];
        lhs_raw = std::max(lhs_raw, m * w);
    }

    CollisionOperator op(g, model);
    double F2 = 0.0, grad2 = 0.0;
    for (const auto& [k, dt] : scaled.slice_weights(-4.0, 0.0)) {
        const auto& f = scaled.snaps[k];
        double m = 0.0;
        for (std::size_t i : b2.nodes) m += f.values[i];
        linf_l1 = std::max(linf_l1, m * w);

        std::vector<double> sq(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) sq[i] = std::sqrt(f.values[i]);
        const auto gr = fd::gradient(g, sq);
        double gg = 0.0;
        for (std::size_t i : b2.nodes)
            gg += gr[0][i] * gr[0][i] + gr[1][i] * gr[1][i] + gr[2][i] * gr[2][i];
        grad2 += gg * w * dt;

        // F_eps uses the kernel a_eps(z) = k(eps|z|)/|z| Pi(z) = eps^{gamma+3} a(z)
        const auto gl = fd::log_gradient(g, f.values);
        const auto density = op.pair_dissipation_density(f, gl, KernelVariant::full);
        double dd = 0.0;
        for (std::size_t i : b2.nodes) dd += density[i];
        F2 += std::pow(eps, model.gamma + 3.0) * dd * w * dt;
    }

    const double F = std::sqrt(std::max(F2, 0.0));
    const double l4 = std::pow(lambda, 4.0);
    const double l8 = l4 * l4;
    out.lhs = lhs_raw / (lambda * lambda * lambda);
    out.F_eps_l2 = F;
    out.grad_sqrt_l2 = grad2;
    out.rhs_t1 = (1.0 + F / l4) * linf_l1;
    out.rhs_t2 = (F2 + 1.0) * grad2 / l8;
    out.rhs_t3 = (model.k(eps) / eps) * F2 / l8;
    const double rhs = out.rhs_t1 + out.rhs_t2 + out.rhs_t3;
    out.implied_C1 = rhs > 0.0 ? out.lhs / rhs
                               : (out.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return out;
}

double BumpSpec::value(const Vec3& v) const {
    const double r = (v - center).norm();
    if (r <= r_inner) return 1.0;
    if (r >= r_outer) return 0.0;
    return 1.0 - cutoff_X(0.5 + 0.5 * (r - r_inner) / (r_outer - r_inner));
}

double BumpSpec::grad_norm(const Vec3& v) const {
    const double r = (v - center).norm();
    if (r <= r_inner || r >= r_outer) return 0.0;
    return cutoff_X_prime(0.5 + 0.5 * (r - r_inner) / (r_outer - r_inner)) * 0.5 /
           (r_outer - r_inner);
}

DissipationBoundResult entropy_dissipation_lower_bound(const DistributionField& f, double delta,
                                                       const BumpSpec& psi,
                                                       const KernelModel& model, double R0) {
    if (!(delta > 0.0 && delta < 1.0))
        throw validation_error("entropy_dissipation_lower_bound: delta must lie in (0,1)");
    KernelModel m = model;
    m.delta = delta;

    const VelocityGrid& g = f.grid;
    const double w = g.cell_volume();
    CollisionOperator op(g, m);

    // measured ellipticity constant of A_out relative to k(|v|+R0)/(1+|v|)^3
    const MatrixField Aout = op.diffusion_matrix(f, KernelVariant::out_part);
    double c0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 v = g.node(i);
        const double weight = m.k(v.norm() + R0) / std::pow(1.0 + v.norm(), 3.0);
        if (weight <= 0.0) continue;
        c0 = std::min(c0, min_eigenvalue(Aout.at(i)) / weight);
    }
    if (!std::isfinite(c0)) c0 = 0.0;

    // lhs: pair integral with d(v) = Psi(v) grad f(v) / f(v); reuse the
    // dissipation density with this field in place of the log gradient
    const auto gradf = fd::gradient(g, f.values);
    fd::VectorField d{fd::Field(g.size()), fd::Field(g.size()), fd::Field(g.size())};
    std::vector<double> psi_v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        psi_v[i] = psi.value(g.node(i));
        const double fi = f.values[i];
        if (fi > 0.0)
            for (int a = 0; a < 3; ++a) d[a][i] = psi_v[i] * gradf[a][i] / fi;
    }
    const auto density = op.pair_dissipation_density(f, d, KernelVariant::out_part);
    double lhs = 0.0;
    for (double x : density) lhs += x;
    lhs *= 0.5 * w;

    // rhs: c0 int |grad f|^2 / f k(|v|+R0)(1+|v|)^-3 Psi^2 - penalty
    double main = 0.0, mass_term = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double fi = f.values[i];
        const Vec3 v = g.node(i);
        if (fi > 0.0 && psi_v[i] > 0.0) {
            const double g2 = gradf[0][i] * gradf[0][i] + gradf[1][i] * gradf[1][i] +
                              gradf[2][i] * gradf[2][i];
            main += g2 / fi * m.k(v.norm() + R0) / std::pow(1.0 + v.norm(), 3.0) * psi_v[i] *
                    psi_v[i];
        }
        mass_term += fi * (psi_v[i] + delta * psi.grad_norm(v));
    }
    main *= c0 * w;
    mass_term *= w;
    const double penalty = 40.0 * m.k(delta) / (delta * delta * delta) * mass_term * mass_term;

    DissipationBoundResult out;
    out.lhs = lhs;
    out.rhs = main - penalty;
    out.measured_c0 = c0;
    out.penalty = penalty;
    return out;
}

} // namespace landau
