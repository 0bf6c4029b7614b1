#include "landau/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/fft.hpp"
#include "landau/regularity.hpp"

namespace landau {

void Axis::validate() const {
    if (std::fabs(direction.norm() - 1.0) > 1e-12)
        throw validation_error("Axis: direction must be a unit vector");
}

std::pair<double, double> Axis::cylindrical(const Vec3& v) const {
    const Vec3 d = v - base;
    const double z = d.dot(direction);
    const double rho = d.cross(direction).norm();
    return {rho, z};
}

std::pair<Vec3, Vec3> Axis::frame() const {
    // any stable orthonormal completion of `direction`
    Vec3 helper = std::fabs(direction.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 e1 = direction.cross(helper);
    e1 = e1 / e1.norm();
    Vec3 e2 = direction.cross(e1);
    return {e1, e2};
}

double AxisymField::sample(double rho, double z) const {
    if (rho < 0.0) rho = -rho;
    const double ur = rho / drho();
    const double uz = (z + z_half) / dz();
    const int ir = static_cast<int>(std::floor(ur));
    const int iz = static_cast<int>(std::floor(uz));
    const double wr = ur - ir, wz = uz - iz;
    auto value = [&](int i, int j) -> double {
        if (j < 0 || j >= n_z) return 0.0;
        if (i < 0) i = -i; // even reflection across the axis
        if (i >= n_rho) return 0.0;
        return values[index(i, j)];
    };
    return (1.0 - wr) * ((1.0 - wz) * value(ir, iz) + wz * value(ir, iz + 1)) +
           wr * ((1.0 - wz) * value(ir + 1, iz) + wz * value(ir + 1, iz + 1));
}

ReduceResult cylindrical_reduce(const DistributionField& f, const Axis& axis, int n_rho,
                                int n_z, double rho_max, double z_half, int n_angles) {
    axis.validate();
    ReduceResult out;
    AxisymField& F = out.field;
    F.axis = axis;
    F.n_rho = n_rho;
    F.n_z = n_z;
    F.rho_max = rho_max;
    F.z_half = z_half;
    F.time = f.time;
    F.values.assign(static_cast<std::size_t>(n_rho) * n_z, 0.0);

    const auto [e1, e2] = axis.frame();
    const double scale = std::max(f.max_value(), 1e-300);
    for (int j = 0; j < n_z; ++j) {
        const double z = F.z_coord(j);
        for (int i = 0; i < n_rho; ++i) {
            const double rho = F.rho_coord(i);
            double sum = 0.0, mn = 0.0, mx = 0.0;
            for (int a = 0; a < n_angles; ++a) {
                const double th = 2.0 * M_PI * a / n_angles;
                const Vec3 v = axis.base + axis.direction * z +
                               (e1 * std::cos(th) + e2 * std::sin(th)) * rho;
                const double val = trilinear_sample(f, v);
                sum += val;
                if (a == 0) { mn = mx = val; }
                else {
                    mn = std::min(mn, val);
                    mx = std::max(mx, val);
                }
            }
            F.values[F.index(i, j)] = sum / n_angles;
            out.residual = std::max(out.residual, (mx - mn) / scale);
        }
    }
    return out;
}

DistributionField axisym_reconstruct(const AxisymField& F, const VelocityGrid& grid) {
    DistributionField out(grid, F.time);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto [rho, z] = F.axis.cylindrical(grid.node(i));
        out.values[i] = F.sample(rho, z);
    }
    return out;
}

namespace axisym_io {

constexpr char kMagic[4] = {'L', 'N', 'D', 'A'};
constexpr std::uint32_t kVersion = 1;

std::vector<std::uint8_t> encode(const AxisymField& f) {
    std::vector<std::uint8_t> buf;
    auto put = [&buf](const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf.insert(buf.end(), b, b + n);
    };
    put(kMagic, 4);
    const std::uint32_t version = kVersion;
    const std::uint32_t nr = static_cast<std::uint32_t>(f.n_rho);
    const std::uint32_t nz = static_cast<std::uint32_t>(f.n_z);
    put(&version, 4);
    put(&nr, 4);
    put(&nz, 4);
    put(&f.rho_max, 8);
    put(&f.z_half, 8);
    put(&f.time, 8);
    put(&f.axis.base, 24);
    put(&f.axis.direction, 24);
    put(f.values.data(), 8 * f.values.size());
    return buf;
}

AxisymField decode(const std::uint8_t* data, std::size_t size) {
    constexpr std::size_t header = 4 + 4 + 4 + 4 + 8 + 8 + 8 + 24 + 24;
    if (size < header) throw format_error("axisym snapshot: truncated header");
    if (std::memcmp(data, kMagic, 4) != 0) throw format_error("axisym snapshot: bad magic");
    std::uint32_t version, nr, nz;
    std::memcpy(&version, data + 4, 4);
    if (version != kVersion)
        throw format_error("axisym snapshot: unsupported version " + std::to_string(version));
    std::memcpy(&nr, data + 8, 4);
    std::memcpy(&nz, data + 12, 4);
    AxisymField f;
    f.n_rho = static_cast<int>(nr);
    f.n_z = static_cast<int>(nz);
    std::memcpy(&f.rho_max, data + 16, 8);
    std::memcpy(&f.z_half, data + 24, 8);
    std::memcpy(&f.time, data + 32, 8);
    std::memcpy(&f.axis.base, data + 40, 24);
    std::memcpy(&f.axis.direction, data + 64, 24);
    const std::size_t count = static_cast<std::size_t>(nr) * nz;
    if (size != header + 8 * count) throw format_error("axisym snapshot: truncated payload");
    f.values.resize(count);
    std::memcpy(f.values.data(), data + header, 8 * count);
    return f;
}

void write_file(const AxisymField& f, const std::string& path) {
    auto buf = encode(f);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw format_error("axisym snapshot: cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

AxisymField read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw format_error("axisym snapshot: cannot open: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
    return decode(buf.data(), buf.size());
}

} // namespace axisym_io

// ---------------------------------------------------------------------------

double angular_interaction_integral(double A, double B, double sigma0, AngularMode mode) {
    if (!(B > 0.0)) throw validation_error("angular_interaction_integral: need B > 0");
    if (!(sigma0 > 0.0)) throw validation_error("angular_interaction_integral: need sigma0 > 0");
    if (mode == AngularMode::arsinh_bound) {
        if (!(A > 0.0))
            throw validation_error("angular_interaction_integral: bound mode needs A > 0");
        const double lnp = sigma0 > A ? std::log(sigma0 / A) : 0.0;
        return M_PI / (2.0 * B) * (std::log(2.0) + lnp);
    }
    // exact quadrature: indicator support is [0, theta*]
    if (A >= sigma0) return 0.0;
    if (A == 0.0) return std::numeric_limits<double>::infinity();
    const double cos_arg = 1.0 - (sigma0 * sigma0 - A * A) / (2.0 * B * B);
    const double theta_star = std::acos(std::fmax(-1.0, std::fmin(1.0, cos_arg)));
    // composite Gauss-Legendre (5-point) on [0, theta*]
    static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double wsq[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891};
    const int panels = 512;
    const double dt = theta_star / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * dt;
        for (int q = 0; q < 5; ++q) {
            const double th = mid + 0.5 * dt * xs[q];
            const double denom = std::sqrt(A * A + 2.0 * B * B * (1.0 - std::cos(th)));
            total += wsq[q] * 0.5 * dt / denom;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------

LongRangeResult long_range_bound(const Trajectory& traj, double t0, const Vec3& v0, double eps,
                                 const Axis& axis, int target_n) {
    axis.validate();
    LongRangeResult out;
    const auto [rho0, z0] = axis.cylindrical(v0);
    (void)z0;
    out.rho0 = rho0;
    if (!(rho0 > 0.0)) throw window_error("long_range_bound: v0 lies on the symmetry axis");
    const double t_span = t0 - traj.t_first();
    if (!(eps > 0.0 && eps < std::min(rho0 / 2.0, std::sqrt(std::max(t_span, 0.0)))))
        throw validation_error("long_range_bound: need eps in (0, rho0/2 ^ sqrt(t0))");

    ScaledWindow window;
    window.target_grid = VelocityGrid(target_n, 1.05 + 4.0 / target_n);
    window.t_window = 1.0;
    const Trajectory scaled = scaled_solution(traj, t0, v0, eps, window);

    const VelocityGrid& g = scaled.grid;
    const auto ball = ball_restrict(g, Vec3{}, 1.0);
    for (const auto& [k, dt] : scaled.slice_weights(-1.0, 0.0)) {
        (void)dt;
        const auto conv = fft_convolve(
            g, [&](const Vec3& z) { return inv_dist_kernel(z, g.h()); },
            scaled.snaps[k].values);
        for (std::size_t i : ball.nodes) out.measured_sup = std::max(out.measured_sup, conv[i]);
    }

    for (const auto& snap : traj.snaps) {
        const auto rep = moments_and_entropy(snap);
        out.sup_f_log = std::max(out.sup_f_log, rep.mass + rep.entropy_pos);
    }
    out.analytic_bound = kLongRangeConstant / rho0 * out.sup_f_log +
                      kLongRangeConstant * rho0 * rho0;
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::size_t, double>> AxisymSeries::slice_weights(double t_open,
                                                                        double t_closed) const {
    std::vector<std::pair<std::size_t, double>> out;
    double prev = t_open;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        const double t = fields[k].time;
        if (t <= t_open + 1e-15 || t > t_closed + 1e-12) continue;
        out.emplace_back(k, t - prev);
        prev = t;
    }
    return out;
}

IntegrabilityResult improved_integrability(const AxisymSeries& series, double t0, double V0_rho,
                                           double V0_z, double r, double rho0) {
    if (series.fields.empty()) throw validation_error("improved_integrability: empty series");
    if (!(rho0 > 0.0 && V0_rho - r >= rho0))
        throw validation_error(
            "improved_integrability: 2-D cylinder must keep distance rho0 from the axis");
    IntegrabilityResult out;
    const AxisymField& proto = series.fields.front();
    const double da = proto.drho() * proto.dz();

    double l2 = 0.0, f_l1sq = 0.0, g_l1sq = 0.0;
    const double r1 = std::sqrt((V0_rho + r) * (V0_rho + r) + r * r);
    for (const auto& [k, dt] : series.slice_weights(t0 - r * r, t0)) {
        const AxisymField& F = series.fields[k];
        double s = 0.0, f_l1 = 0.0, g_l1 = 0.0;
        for (int j = 0; j < F.n_z; ++j)
            for (int i = 0; i < F.n_rho; ++i) {
                const double rho = F.rho_coord(i);
                const double z = F.z_coord(j);
                const double val = F.values[F.index(i, j)];
                const double d2 =
                    (rho - V0_rho) * (rho - V0_rho) + (z - V0_z) * (z - V0_z);
                if (d2 < r * r) s += val * val;
                // 3-D ball B_{r1} centered on the axis at height V0_z
                if (rho * rho + (z - V0_z) * (z - V0_z) < r1 * r1) {
                    f_l1 += val * 2.0 * M_PI * rho;
                    // centered 2-D gradient
                    auto at = [&](int a, int b) -> double {
                        if (a < 0) a = -a;
                        if (a >= F.n_rho || b < 0 || b >= F.n_z) return 0.0;
                        return F.values[F.index(a, b)];
                    };
                    const double gr = (at(i + 1, j) - at(i - 1, j)) / (2.0 * F.drho());
                    const double gz = (at(i, j + 1) - at(i, j - 1)) / (2.0 * F.dz());
                    g_l1 += std::sqrt(gr * gr + gz * gz) * 2.0 * M_PI * rho;
                }
            }
        l2 += s * da * dt;
        f_l1sq += f_l1 * da * f_l1 * da * dt;
        g_l1sq += g_l1 * da * g_l1 * da * dt;
    }
    out.l2_norm = std::sqrt(l2);
    out.bound_path = (std::sqrt(f_l1sq) + std::sqrt(g_l1sq)) / (2.0 * M_PI * rho0);
    return out;
}

// ---------------------------------------------------------------------------

OffAxisVerdict off_axis_criterion(const Trajectory& traj, double t0, const Vec3& v0,
                                  const Axis& axis, const KernelModel& model,
                                  const OffAxisParams& params) {
    axis.validate();
    OffAxisVerdict verdict;
    const auto [rho0, vz0] = axis.cylindrical(v0);
    verdict.rho0 = rho0;
    verdict.save_dt = traj.save_dt();
    if (!(rho0 > 0.0)) throw window_error("off_axis_criterion: v0 lies on the symmetry axis");
    const double gs = model.gamma_star();
    const double t_span = t0 - traj.t_first();
    const double eps_cap = std::min(rho0 / 6.0, std::sqrt(std::max(t_span, 0.0)) / 3.0);

    // hydrodynamic inputs of Z0, measured over saved snapshots
    double mass = 0.0, sup_f_log = 0.0;
    for (const auto& snap : traj.snaps) {
        const auto rep = moments_and_entropy(snap);
        mass = std::max(mass, rep.mass);
        sup_f_log = std::max(sup_f_log, rep.mass + rep.entropy_pos);
    }
    const double lrb = kLongRangeConstant / rho0 * sup_f_log +
                       kLongRangeConstant * rho0 * rho0;
    // split k(eps|z|)/|z| <= (1 - gs) eps + gs / |z| on |z| >= 1
    const double Z0 = 1.0 + (1.0 - gs) * mass + gs * lrb;

    if (!(eps_cap > 0.0))
        throw window_error("off_axis_criterion: t0 leaves no room for the zoom ladder");
    const double h = traj.grid.h();
    double eps = rho0 / 8.0;
    while (eps >= eps_cap) eps *= 0.5;

    // axis copy with the base shifted to the seed's axial height, so the
    // reduced profile's z coordinate is centered on the seed
    Axis seed_axis{axis.base + axis.direction * vz0, axis.direction};

    for (int rung = 0; rung < params.max_rungs && eps > 0.0; ++rung, eps *= 0.5) {
        OffAxisRung rec;
        rec.eps = eps;
        rec.Z0 = Z0;
        rec.threshold = params.eta_DG * std::pow(Z0, -1.5);
        // resolution floor: at least 4 source cells across the Q_3 window
        rec.resolved = 6.0 * eps >= 4.0 * h;
        if (!rec.resolved) {
            verdict.rungs.push_back(rec);
            break;
        }

        // direct iint_{Q_3} f_eps^2
        {
            ScaledWindow window;
            window.target_grid =
                VelocityGrid(params.target_n, 3.0 * 1.05 + 12.0 / params.target_n);
            window.t_window = 9.0;
            const Trajectory scaled = scaled_solution(traj, t0, v0, eps, window);
            const auto ball = ball_restrict(scaled.grid, Vec3{}, 3.0);
            const double w = scaled.grid.cell_volume();
            for (const auto& [k, dt] : scaled.slice_weights(-9.0, 0.0)) {
                double s = 0.0;
                for (std::size_t i : ball.nodes) {
                    const double v = scaled.snaps[k].values[i];
                    s += v * v;
                }
                rec.direct_q3 += s * w * dt;
            }
        }

        // cylindrical-shell bound:
        // (3 pi (rho0+3)/rho0) int_{t0-9eps^2}^{t0} int_{shell} F^2 ds drho dz
        {
            const double margin = 3.0 * eps;
            const int n2 = 48;
            AxisymSeries series;
            for (const auto& snap : traj.snaps) {
                const double lag = traj.save_dt() > 0.0 ? traj.save_dt() : 1.0;
                if (snap.time <= t0 - 9.0 * eps * eps - lag || snap.time > t0 + 1e-12)
                    continue;
                auto red = cylindrical_reduce(snap, seed_axis, n2, n2,
                                              rho0 + margin + 2.0 * h, margin + 2.0 * h, 64);
                series.fields.push_back(std::move(red.field));
            }
            double shell = 0.0;
            const int nq = 24;
            const double drho = 2.0 * margin / nq, dz = 2.0 * margin / nq;
            for (const auto& [k, dt] : series.slice_weights(t0 - 9.0 * eps * eps, t0)) {
                const AxisymField& F = series.fields[k];
                double s = 0.0;
                for (int a = 0; a < nq; ++a)
                    for (int b = 0; b < nq; ++b) {
                        const double rho = rho0 - margin + (a + 0.5) * drho;
                        const double zloc = -margin + (b + 0.5) * dz;
                        if (rho < 0.0) continue;
                        const double val = F.sample(rho, zloc);
                        s += val * val;
                    }
                shell += s * drho * dz * dt;
            }
            rec.shell_bound = 3.0 * M_PI * (rho0 + 3.0) / rho0 * shell;
        }

        // De Giorgi certification at this scale
        const CertifyParams cp{params.target_n, params.sup_slack};
        const auto cert = degiorgi_certify(traj, t0, v0, eps, Z0, params.eta_DG, cp);
        rec.hypothesis = cert.hypothesis;
        rec.certified = cert.certified;
        verdict.rungs.push_back(rec);
        if (rec.certified) {
            verdict.certified = true;
            break;
        }
    }
    return verdict;
}

} // namespace landau
