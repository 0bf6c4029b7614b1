#include "landau/stepper.hpp"

#include <cmath>
#include <fstream>

#include "landau/errors.hpp"
#include "landau/fft.hpp"

namespace landau {

namespace {

double param(const InitialDataSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

} // namespace

DistributionField sample_initial_data(const InitialDataSpec& spec, const VelocityGrid& grid) {
    auto maxwellian = [](double rho, double theta, const Vec3& u) {
        // normalized so the total mass is rho
        const double norm = rho / std::pow(2.0 * M_PI * theta, 1.5);
        return [=](const Vec3& v) { return norm * std::exp(-(v - u).norm2() / (2.0 * theta)); };
    };
    if (spec.kind == "maxwellian") {
        const double rho = param(spec, "rho", 1.0);
        const double theta = param(spec, "theta", 1.0);
        const Vec3 u{param(spec, "ux", 0.0), param(spec, "uy", 0.0), param(spec, "uz", 0.0)};
        return DistributionField::from_function(grid, 0.0, maxwellian(rho, theta, u));
    }
    if (spec.kind == "gaussian_bump") {
        const double amp = param(spec, "amp", 1.0);
        const double width = param(spec, "width", 1.0);
        const Vec3 c{param(spec, "cx", 0.0), param(spec, "cy", 0.0), param(spec, "cz", 0.0)};
        return DistributionField::from_function(grid, 0.0, [=](const Vec3& v) {
            return amp * std::exp(-(v - c).norm2() / (2.0 * width * width));
        });
    }
    if (spec.kind == "bimodal") {
        const double rho = param(spec, "rho", 1.0);
        const double theta = param(spec, "theta", 0.7);
        const double sep = param(spec, "sep", 2.0);
        auto m1 = maxwellian(rho / 2.0, theta, Vec3{sep / 2.0, 0.0, 0.0});
        auto m2 = maxwellian(rho / 2.0, theta, Vec3{-sep / 2.0, 0.0, 0.0});
        return DistributionField::from_function(grid, 0.0,
                                                [=](const Vec3& v) { return m1(v) + m2(v); });
    }
    if (spec.kind == "ring") {
        // axisymmetric Gaussian ring around the z axis
        const double amp = param(spec, "amp", 1.0);
        const double rho0 = param(spec, "rho0", 1.0);
        const double width = param(spec, "width", 0.4);
        return DistributionField::from_function(grid, 0.0, [=](const Vec3& v) {
            const double rho = std::sqrt(v.x * v.x + v.y * v.y);
            const double d2 = (rho - rho0) * (rho - rho0) + v.z * v.z;
            return amp * std::exp(-d2 / (2.0 * width * width));
        });
    }
    if (spec.kind == "zero") return DistributionField(grid, 0.0);
    throw validation_error("unknown init.kind: " + spec.kind);
}

DistributionField build_initial_data(const DistributionField& f_in, double n) {
    if (n < 1.0) throw validation_error("build_initial_data: index n must be >= 1");
    f_in.check_nonnegative();
    const VelocityGrid& g = f_in.grid;

    // xi(v/n): 1 on B_n, 0 outside B_2n, C^2 in between
    std::vector<double> truncated(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node(i).norm() / n;
        const double xi = r <= 1.0 ? 1.0 : (r >= 2.0 ? 0.0 : 1.0 - cutoff_X(0.5 + 0.5 * (r - 1.0)));
        truncated[i] = xi * f_in.values[i];
    }

    // zeta_n: radial C^2 bump of support radius 2/n, discretely mass-normalized
    const double h = g.h();
    double zeta_mass = 0.0;
    auto zeta_shape = [&](const Vec3& z) {
        const double r = z.norm() * n;
        if (r >= 2.0) return 0.0;
        return r <= 1.0 ? 1.0 : 1.0 - cutoff_X(0.5 + 0.5 * (r - 1.0));
    };
    {
        const int reach = static_cast<int>(std::ceil(2.0 / (n * h))) + 1;
        for (int iz = -reach; iz <= reach; ++iz)
            for (int iy = -reach; iy <= reach; ++iy)
                for (int ix = -reach; ix <= reach; ++ix)
                    zeta_mass += zeta_shape(Vec3{ix * h, iy * h, iz * h});
        zeta_mass *= g.cell_volume();
    }
    std::vector<double> mollified =
        zeta_mass > 0.0
            ? fft_convolve(g, [&](const Vec3& z) { return zeta_shape(z) / zeta_mass; }, truncated)
            : truncated;

    DistributionField out(g, f_in.time);
    const double gauss_norm = 1.0 / (n * std::pow(2.0 * M_PI, 1.5));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double floor = gauss_norm * std::exp(-g.node(i).norm2() / 2.0);
        out.values[i] = std::max(mollified[i], 0.0) + floor;
    }
    return out;
}

Stepper::Stepper(const RunConfig& config) : config_(config) {
    if (!(config.dt >= 0.0)) throw validation_error("RunConfig: dt must be nonnegative");
    if (!(config.t_end >= 0.0)) throw validation_error("RunConfig: t_end must be nonnegative");
    if (config.save_stride < 1) throw validation_error("RunConfig: save_stride must be >= 1");
    op_ = std::make_unique<CollisionOperator>(config.grid(), config.kernel_model());
}

namespace {

// matrix-free BiCGStab for (I - dt L) u = rhs
bool bicgstab(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
              const std::vector<double>& rhs, std::vector<double>& x, int max_iter,
              double rel_tol) {
    const std::size_t n = rhs.size();
    std::vector<double> r(n), r0(n), p(n), v(n), s(n), t(n);
    x.assign(n, 0.0);
    r = rhs;
    r0 = r;
    double rho_old = 1.0, alpha = 1.0, omega = 1.0;
    p.assign(n, 0.0);
    v.assign(n, 0.0);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    const double rhs_norm = std::sqrt(dot(rhs, rhs));
    if (rhs_norm == 0.0) return true;
    for (int it = 0; it < max_iter; ++it) {
        const double rho = dot(r0, r);
        if (rho == 0.0) return false;
        if (it == 0) {
            p = r;
        } else {
            const double beta = (rho / rho_old) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        apply(p, v);
        alpha = rho / dot(r0, v);
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (std::sqrt(dot(s, s)) < rel_tol * rhs_norm) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
            return true;
        }
        apply(s, t);
        omega = dot(t, s) / dot(t, t);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        if (std::sqrt(dot(r, r)) < rel_tol * rhs_norm) return true;
        rho_old = rho;
    }
    return false;
}

} // namespace

StepRecord Stepper::step(DistributionField& f,
                         const std::function<double(std::size_t)>* source) {
    const VelocityGrid& g = f.grid;
    const double dt = config_.dt;
    const double nu = config_.viscosity;

    StepRecord rec;
    const EntropyReport pre = moments_and_entropy(f);

    if (dt > 0.0) {
        auto flux = op_->log_flux(f, config_.floor_rel);
        fd::Field rhs = fd::divergence(g, flux.J);
        if (nu > 0.0) {
            const fd::Field lap = fd::laplacian(g, f.values);
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += nu * lap[i];
        }
        if (source)
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += (*source)(i);

        // implicit correction: (I - dt (A:hess + nu Lap)) delta = dt * rhs,
        // with A frozen at the step start
        const MatrixField& A = flux.A;
        double max_diag = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            max_diag = std::max(max_diag, A.comp[0][i] + A.comp[1][i] + A.comp[2][i]);
        rec.cfl = dt * (2.0 * max_diag + 6.0 * nu) / (g.h() * g.h());

        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] *= dt;
        // the frozen-A diffusion core is applied in divergence form so the
        // implicit correction telescopes (keeps the renormalization factor
        // inside its band); it differs from A:hess by a first-order term
        auto apply = [&](const std::vector<double>& u, std::vector<double>& out) {
            const fd::VectorField gu = fd::gradient(g, u);
            fd::VectorField Agu;
            for (int a = 0; a < 3; ++a) {
                Agu[a].resize(u.size());
                for (std::size_t i = 0; i < u.size(); ++i)
                    Agu[a][i] = A.comp[kSymIndex[a][0]][i] * gu[0][i] +
                                A.comp[kSymIndex[a][1]][i] * gu[1][i] +
                                A.comp[kSymIndex[a][2]][i] * gu[2][i];
            }
            const fd::Field div = fd::divergence(g, Agu);
            const fd::Field lap = fd::laplacian(g, u);
            out.resize(u.size());
            for (std::size_t i = 0; i < u.size(); ++i)
                out[i] = u[i] - dt * (div[i] + nu * lap[i]);
        };
        std::vector<double> delta;
        if (!bicgstab(apply, rhs, delta, 200, 1e-12))
            throw numeric_error("step: implicit solve did not converge at t=" +
                                std::to_string(f.time));
        for (std::size_t i = 0; i < g.size(); ++i) f.values[i] += delta[i];

        // positivity clip, then renormalize mass to the pre-step value
        double clipped = 0.0, mass = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (f.values[i] < 0.0) {
                clipped -= f.values[i];
                f.values[i] = 0.0;
            }
            mass += f.values[i];
        }
        mass *= g.cell_volume();
        rec.clipped_mass = clipped * g.cell_volume();
        if (pre.mass > 0.0 && mass > 0.0) {
            const double factor = pre.mass / mass;
            if (std::fabs(factor - 1.0) > config_.renorm_band)
                throw numeric_error("step: renormalization factor " + std::to_string(factor) +
                                    " out of band at t=" + std::to_string(f.time));
            for (double& v : f.values) v *= factor;
            rec.renorm_factor = factor;
        }
    }

    f.time += dt;
    const EntropyReport post = moments_and_entropy(f);
    rec.t = f.time;
    rec.mass = post.mass;
    rec.momentum = post.momentum;
    rec.energy = post.energy;
    rec.entropy = post.entropy;
    return rec;
}

RunResult Stepper::run() {
    RunResult result;
    DistributionField f = sample_initial_data(config_.init, config_.grid());
    if (config_.init.scheme_n > 0.0) f = build_initial_data(f, config_.init.scheme_n);
    result.trajectory = Trajectory(config_.grid());
    result.trajectory.push(f);

    const int n_steps =
        config_.dt > 0.0 ? static_cast<int>(std::llround(config_.t_end / config_.dt)) : 0;
    double prev_entropy = moments_and_entropy(f).entropy;
    for (int k = 1; k <= n_steps; ++k) {
        StepRecord rec;
        try {
            rec = step(f);
        } catch (const numeric_error& e) {
            throw numeric_error("run: step " + std::to_string(k) + " failed: " + e.what());
        }
        result.log.push_back(rec);
        result.max_cfl = std::max(result.max_cfl, rec.cfl);
        result.max_entropy_rise = std::max(result.max_entropy_rise, rec.entropy - prev_entropy);
        prev_entropy = rec.entropy;
        if (k % config_.save_stride == 0 || k == n_steps) result.trajectory.push(f);
    }
    result.entropy_monotone = result.max_entropy_rise <= RunResult::entropy_slack;
    return result;
}

void write_step_log_csv(const std::vector<StepRecord>& log, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw format_error("cannot open step log for writing: " + path);
    os << "t,mass,px,py,pz,energy,entropy,renorm_factor,clipped_mass\n";
    os.precision(17);
    for (const auto& r : log)
        os << r.t << ',' << r.mass << ',' << r.momentum.x << ',' << r.momentum.y << ','
           << r.momentum.z << ',' << r.energy << ',' << r.entropy << ',' << r.renorm_factor
           << ',' << r.clipped_mass << '\n';
}

} // namespace landau
