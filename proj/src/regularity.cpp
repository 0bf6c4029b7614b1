#include "landau/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "landau/errors.hpp"

namespace landau {

double m_star(double gamma) {
    if (!(gamma >= -3.0 && gamma < -2.0))
        throw validation_error("m_star: gamma must lie in [-3,-2)");
    return 1.0 + 2.5 * std::fabs(2.0 + gamma);
}

double degiorgi_eta(double C2) {
    return std::min(0.5, 0.5 * std::pow(2.0 * C2, -12.0));
}

double level_set_energy(const Trajectory& scaled, double radius, double level) {
    const VelocityGrid& g = scaled.grid;
    const double w = g.cell_volume();
    const auto ball = ball_restrict(g, Vec3{}, radius);
    double sup_term = 0.0, diss = 0.0;
    for (const auto& [k, dt] : scaled.slice_weights(-radius * radius, 0.0)) {
        const auto& f = scaled.snaps[k];
        double excess = 0.0;
        for (std::size_t i : ball.nodes) excess += std::max(f.values[i] - level, 0.0);
        sup_term = std::max(sup_term, excess * w);

        std::vector<double> sq(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) sq[i] = std::sqrt(f.values[i]);
        const auto gr = fd::gradient(g, sq);
        double gg = 0.0;
        for (std::size_t i : ball.nodes) {
            if (f.values[i] < level) continue;
            gg += gr[0][i] * gr[0][i] + gr[1][i] * gr[1][i] + gr[2][i] * gr[2][i];
        }
        diss += gg * w * dt;
    }
    return sup_term + diss;
}

double degiorgi_functional(const Trajectory& scaled, int j) {
    return level_set_energy(scaled, degiorgi_radius(j), degiorgi_level(j));
}

RecurrenceResult degiorgi_recurrence(double U0, double Z, double C2, int j_max) {
    if (!(Z >= 1.0)) throw validation_error("degiorgi_recurrence: need Z >= 1");
    if (!(C2 >= 1.0)) throw validation_error("degiorgi_recurrence: need C2 >= 1");
    RecurrenceResult res;
    const double eta = degiorgi_eta(C2);
    res.vanishes = U0 <= eta * std::pow(Z, -1.5) * (1.0 + 1e-12);
    const double lnZ32 = 1.5 * std::log(Z);
    const double lnC2 = std::log(C2);
    const double ln_half = std::log(0.5);
    const double ninf = -std::numeric_limits<double>::infinity();
    double lU = U0 > 0.0 ? std::log(U0) : ninf;
    for (int j = 0; j <= j_max; ++j) {
        res.log_U.push_back(lU);
        const double lV = U0 > 0.0 ? lnZ32 + lU : ninf;
        res.log_V.push_back(lV);
        if (res.vanishes && lV > std::pow(4.0 / 3.0, j) * ln_half + 1e-9)
            res.bound_holds = false;
        if (lV > 200.0) res.diverged = true;
        if (lU == ninf) continue; // U stays exactly 0
        // U_{j+1} = C2^{j+1} (U_j^{4/3} + Z U_j^{5/3}) in log space
        const double a = (4.0 / 3.0) * lU;
        const double b = std::log(Z) + (5.0 / 3.0) * lU;
        const double m = std::max(a, b);
        lU = (j + 1) * lnC2 + m + std::log1p(std::exp(std::min(a, b) - m));
    }
    return res;
}

CertifyResult degiorgi_certify(const Trajectory& traj, double t0, const Vec3& v0, double eps,
                               double Z_eps, double eta_DG, const CertifyParams& params) {
    if (!(Z_eps >= 1.0)) throw validation_error("degiorgi_certify: need Z_eps >= 1");
    CertifyResult out;
    out.threshold = eta_DG * std::pow(Z_eps, -1.5);

    ScaledWindow window;
    window.target_grid =
        VelocityGrid(params.target_n, 2.0 * 1.05 + 8.0 / params.target_n);
    window.t_window = 4.0;
    const Trajectory scaled = scaled_solution(traj, t0, v0, eps, window);

    out.hypothesis = level_set_energy(scaled, 2.0, 1.0);
    out.hypothesis_ok = out.hypothesis <= out.threshold;

    const auto half = ball_restrict(scaled.grid, Vec3{}, 0.5);
    for (const auto& [k, dt] : scaled.slice_weights(-0.25, 0.0)) {
        (void)dt;
        for (std::size_t i : half.nodes)
            out.sup_half = std::max(out.sup_half, scaled.snaps[k].values[i]);
    }
    out.conclusion_ok = out.sup_half <= 2.0 + params.sup_slack;
    out.certified = out.hypothesis_ok && out.conclusion_ok;
    out.discretization_alert = out.hypothesis_ok && !out.conclusion_ok;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct SliceCache {
    std::map<std::size_t, std::vector<double>> density;  // int |F|^2 dw per node
    std::map<std::size_t, fd::VectorField> grad_sqrt;
};

const std::vector<double>& slice_density(SliceCache& cache, CollisionOperator& op,
                                         const Trajectory& traj, std::size_t k) {
    auto it = cache.density.find(k);
    if (it != cache.density.end()) return it->second;
    const auto& f = traj.snaps[k];
    const auto g = fd::log_gradient(traj.grid, f.values);
    auto dens = op.pair_dissipation_density(f, g, KernelVariant::full);
    return cache.density.emplace(k, std::move(dens)).first->second;
}

const fd::VectorField& slice_grad_sqrt(SliceCache& cache, const Trajectory& traj,
                                       std::size_t k) {
    auto it = cache.grad_sqrt.find(k);
    if (it != cache.grad_sqrt.end()) return it->second;
    const auto& f = traj.snaps[k];
    std::vector<double> sq(f.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::sqrt(f.values[i]);
    auto gr = fd::gradient(traj.grid, sq);
    return cache.grad_sqrt.emplace(k, std::move(gr)).first->second;
}

} // namespace

ScanOutcome dissipation_scan(const Trajectory& traj, double t0, const Vec3& v0,
                             const ScanParams& params, const KernelModel& model) {
    if (!(params.lambda > 0.0 && params.lambda < 0.25))
        throw validation_error("dissipation_scan: lambda must lie in (0, 1/4)");
    if (t0 > traj.t_last() + 1e-9 || t0 <= traj.t_first())
        throw window_error("dissipation_scan: t0 " + std::to_string(t0) +
                           " outside the saved range (" + std::to_string(traj.t_first()) +
                           ", " + std::to_string(traj.t_last()) + "]");
    ScanOutcome out;
    out.t0 = t0;
    out.v0 = v0;
    out.lambda = params.lambda;

    const double mst = m_star(model.gamma);
    const double h = traj.grid.h();
    const double w = traj.grid.cell_volume();
    const double t_span = t0 - traj.t_first();

    int j_first = 0; // coarsest scale whose time window fits
    while (j_first <= params.j_max &&
           !(4.0 * std::pow(params.lambda, 2 * j_first) < t_span + 1e-12))
        ++j_first;
    int j_floor = 0; // first scale below the resolution floor
    while (j_floor <= params.j_max && h <= std::pow(params.lambda, j_floor) / 4.0) ++j_floor;
    if (j_first >= j_floor)
        throw window_error(
            "dissipation_scan: no evaluable scale (time window needs eps <= sqrt(span)/2 = " +
            std::to_string(std::sqrt(t_span) / 2.0) +
            ", resolution needs eps >= 4h = " + std::to_string(4.0 * h) + ")");
    out.first_index = j_first;
    out.floor_index = j_floor;

    CollisionOperator op(traj.grid, model);
    SliceCache cache;
    for (int j = j_first; j < j_floor; ++j) {
        const double eps_j = std::pow(params.lambda, j);
        const double radius = 2.0 * eps_j;
        const auto ball = ball_restrict(traj.grid, v0, radius);
        double total = 0.0;
        for (const auto& [k, dt] : traj.slice_weights(t0 - radius * radius, t0)) {
            const auto& dens = slice_density(cache, op, traj, k);
            const auto& gr = slice_grad_sqrt(cache, traj, k);
            double s = 0.0;
            for (std::size_t i : ball.nodes)
                s += dens[i] + gr[0][i] * gr[0][i] + gr[1][i] * gr[1][i] + gr[2][i] * gr[2][i];
            total += s * w * dt;
        }
        out.D.push_back(std::pow(eps_j, -mst) * total);
    }
    out.flagged = !out.D.empty() && out.D.back() > 2.0 * params.eta_plus;
    return out;
}

double scan_density_scaled(const Trajectory& traj, double t0, const Vec3& v0, double eps,
                           const KernelModel& model, int target_n) {
    ScaledWindow window;
    window.target_grid = VelocityGrid(target_n, 2.0 * 1.05 + 8.0 / target_n);
    window.t_window = 4.0;
    const Trajectory scaled = scaled_solution(traj, t0, v0, eps, window);
    const VelocityGrid& g = scaled.grid;
    const double w = g.cell_volume();
    const auto ball = ball_restrict(g, Vec3{}, 2.0);

    CollisionOperator op(g, model);
    double total = 0.0;
    for (const auto& [k, dt] : scaled.slice_weights(-4.0, 0.0)) {
        const auto& f = scaled.snaps[k];
        const auto gl = fd::log_gradient(g, f.values);
        // F_eps kernel a_eps = eps^{gamma+3} a for the power law
        const auto dens = op.pair_dissipation_density(f, gl, KernelVariant::full);
        std::vector<double> sq(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) sq[i] = std::sqrt(f.values[i]);
        const auto gr = fd::gradient(g, sq);
        double s = 0.0;
        for (std::size_t i : ball.nodes)
            s += std::pow(eps, model.gamma + 3.0) * dens[i] + gr[0][i] * gr[0][i] +
                 gr[1][i] * gr[1][i] + gr[2][i] * gr[2][i];
        total += s * w * dt;
    }
    return std::pow(eps, -2.5 * model.gamma_star()) * total;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> vitali_cover(const std::vector<ParabolicCylinder>& cylinders) {
    for (const auto& c : cylinders)
        if (!(c.r > 0.0 && c.r < 1.0))
            throw validation_error("vitali_cover: radii must lie in (0,1)");
    std::vector<std::size_t> order(cylinders.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cylinders[a].r > cylinders[b].r;
    });
    std::vector<std::size_t> selected;
    for (std::size_t idx : order) {
        bool disjoint = true;
        for (std::size_t s : selected)
            if (!cylinders[idx].disjoint(cylinders[s])) {
                disjoint = false;
                break;
            }
        if (disjoint) selected.push_back(idx);
    }
    return selected;
}

ParabolicCylinder vitali_expansion(const ParabolicCylinder& c) {
    return ParabolicCylinder(c.t0 + c.r * c.r, c.v0, 5.0 * c.r);
}

bool cylinder_contains(const ParabolicCylinder& outer, const ParabolicCylinder& inner) {
    const bool time_ok =
        inner.t0 <= outer.t0 + 1e-15 && inner.t_begin() >= outer.t_begin() - 1e-15;
    const bool space_ok = (inner.v0 - outer.v0).norm() + inner.r <= outer.r + 1e-12;
    return time_ok && space_ok;
}

HausdorffEstimate hausdorff_upper_bound(const std::vector<ScanOutcome>& scans, double eta_plus,
                                        double m_star_value) {
    HausdorffEstimate est;
    double lambda = 0.0;
    for (const auto& s : scans) {
        if (lambda == 0.0) lambda = s.lambda;
        else if (std::fabs(lambda - s.lambda) > 1e-15)
            throw validation_error("hausdorff_upper_bound: inconsistent lambda across scans");
        if (s.D.empty()) continue;
        if (s.D.back() > 2.0 * eta_plus)
            est.flagged.emplace_back(s.t0, s.v0, 2.0 * s.finest_eps());
    }
    if (est.flagged.empty()) return est;
    est.selected = vitali_cover(est.flagged);
    for (std::size_t idx : est.selected)
        est.bound += std::pow(5.0 * est.flagged[idx].r, m_star_value);
    return est;
}

} // namespace landau
