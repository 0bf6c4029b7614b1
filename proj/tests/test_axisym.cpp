#include <doctest.h>

#include <cmath>
#include <random>

#include "landau/axisym.hpp"
#include "landau/diagnostics.hpp"

using namespace landau;

namespace {

std::mt19937 rng(31415);

Trajectory steady_trajectory(const DistributionField& f, double t_end, int slices) {
    Trajectory traj(f.grid);
    for (int k = 0; k <= slices; ++k) {
        DistributionField snap = f;
        snap.time = t_end * k / slices;
        traj.push(std::move(snap));
    }
    return traj;
}

DistributionField ring_field(const VelocityGrid& g, double rho0, double width, double amp) {
    return DistributionField::from_function(g, 0.0, [=](const Vec3& v) {
        const double rho = std::sqrt(v.x * v.x + v.y * v.y);
        const double d2 = (rho - rho0) * (rho - rho0) + v.z * v.z;
        return amp * std::exp(-d2 / (2.0 * width * width));
    });
}

} // namespace

TEST_CASE("cylindrical reduction") {
    VelocityGrid g(32, 4.0);
    const Axis axis{{0, 0, 0}, {0, 0, 1}};

    SUBCASE("axisymmetric input: small residual, faithful profile") {
        const auto f = ring_field(g, 1.5, 0.5, 2.0);
        const auto red = cylindrical_reduce(f, axis, 32, 32, 4.0, 4.0);
        CHECK(red.residual < 5e-2); // trilinear interpolation level on 32^3
        // profile matches the generator away from the boundary
        for (int j = 8; j < 24; ++j)
            for (int i = 0; i < 24; ++i) {
                const double rho = red.field.rho_coord(i);
                const double z = red.field.z_coord(j);
                const double d2 = (rho - 1.5) * (rho - 1.5) + z * z;
                const double expected = 2.0 * std::exp(-d2 / 0.5);
                if (expected < 0.05) continue;
                CHECK(red.field.values[red.field.index(i, j)] ==
                      doctest::Approx(expected).epsilon(0.08));
            }
    }
    SUBCASE("radial field is axisymmetric for every axis") {
        const auto f = DistributionField::from_function(
            g, 0.0, [](const Vec3& v) { return std::exp(-v.norm2() / 2.0); });
        for (const Vec3 dir : {Vec3{0, 0, 1}, Vec3{1, 0, 0},
                               Vec3{1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0),
                                    1.0 / std::sqrt(3.0)}}) {
            const Axis a{{0, 0, 0}, dir};
            const auto red = cylindrical_reduce(f, a, 24, 24, 3.5, 3.5);
            CHECK(red.residual < 2e-2);
        }
    }
    SUBCASE("reduce -> reconstruct -> reduce stabilizes at interpolation level") {
        // the composition is linear but not an exact projection with
        // tri/bilinear sampling; repeated application must not amplify
        const auto f = ring_field(g, 1.5, 0.5, 2.0);
        const auto red1 = cylindrical_reduce(f, axis, 32, 32, 4.0, 4.0);
        const auto red2 =
            cylindrical_reduce(axisym_reconstruct(red1.field, g), axis, 32, 32, 4.0, 4.0);
        const auto red3 =
            cylindrical_reduce(axisym_reconstruct(red2.field, g), axis, 32, 32, 4.0, 4.0);
        auto gap = [](const AxisymField& a, const AxisymField& b) {
            double worst = 0.0;
            for (std::size_t i = 0; i < a.values.size(); ++i)
                worst = std::max(worst, std::fabs(a.values[i] - b.values[i]));
            return worst;
        };
        const double d12 = gap(red1.field, red2.field);
        const double d23 = gap(red2.field, red3.field);
        CHECK(d12 < 5e-2);
        CHECK(d23 <= d12 * 1.05 + 1e-12);
        CHECK(red2.residual < 5e-2);
    }
    SUBCASE("2-D snapshot round trip") {
        const auto red =
            cylindrical_reduce(ring_field(g, 1.0, 0.4, 1.0), axis, 16, 16, 4.0, 4.0);
        const auto buf = axisym_io::encode(red.field);
        const auto back = axisym_io::decode(buf.data(), buf.size());
        CHECK(back.n_rho == red.field.n_rho);
        CHECK(back.values == red.field.values);
        auto bad = buf;
        bad[0] = 'X';
        CHECK_THROWS_AS(axisym_io::decode(bad.data(), bad.size()), format_error);
    }
}

TEST_CASE("angular interaction integral") {
    SUBCASE("empty indicator") {
        CHECK(angular_interaction_integral(0.5, 1.0, 0.3, AngularMode::exact_quadrature) == 0.0);
    }
    SUBCASE("exact below the closed-form bound") {
        const double ex =
            angular_interaction_integral(0.1, 1.0, 0.2, AngularMode::exact_quadrature);
        const double bd = angular_interaction_integral(0.1, 1.0, 0.2, AngularMode::arsinh_bound);
        CHECK(ex > 0.0);
        CHECK(ex <= bd);
    }
    SUBCASE("1000 random triples, zero violations") {
        std::uniform_real_distribution<double> uA(1e-3, 1.0), uB(0.05, 3.0), s(1.0, 2.0);
        for (int trial = 0; trial < 1000; ++trial) {
            const double A = uA(rng);
            const double B = uB(rng);
            const double sigma0 = A * s(rng); // keep A <= sigma0
            const double ex =
                angular_interaction_integral(A, B, sigma0, AngularMode::exact_quadrature);
            const double bd =
                angular_interaction_integral(A, B, sigma0, AngularMode::arsinh_bound);
            CHECK(ex <= bd * (1.0 + 1e-10));
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(angular_interaction_integral(0.1, 0.0, 0.2, AngularMode::arsinh_bound),
                        validation_error);
        CHECK_THROWS_AS(angular_interaction_integral(0.0, 1.0, 0.2, AngularMode::arsinh_bound),
                        validation_error);
    }
}

TEST_CASE("long range bound") {
    const Axis axis{{0, 0, 0}, {0, 0, 1}};
    VelocityGrid g(32, 6.0);

    SUBCASE("zero field") {
        const auto traj = steady_trajectory(DistributionField(g, 0.0), 1.0, 4);
        const auto r = long_range_bound(traj, 1.0, Vec3{1.0, 0, 0}, 0.3, axis);
        CHECK(r.measured_sup == 0.0);
        CHECK(r.analytic_bound == doctest::Approx(kLongRangeConstant * 1.0));
    }
    SUBCASE("constant value") {
        CHECK(kLongRangeConstant == doctest::Approx(111.66).epsilon(1e-4));
    }
    SUBCASE("ring fields at several radii") {
        for (double rho0 : {0.5, 1.0, 2.0}) {
            const auto f = ring_field(g, rho0, 0.4, 1.0);
            const auto traj = steady_trajectory(f, 1.0, 4);
            const double eps = std::min(0.1, rho0 / 4.0);
            const auto r = long_range_bound(traj, 1.0, Vec3{rho0, 0, 0}, eps, axis);
            CHECK(r.measured_sup > 0.0);
            CHECK(r.measured_sup <= r.analytic_bound);
        }
    }
    SUBCASE("on-axis point rejected") {
        const auto traj = steady_trajectory(ring_field(g, 1.0, 0.4, 1.0), 1.0, 4);
        CHECK_THROWS_AS(long_range_bound(traj, 1.0, Vec3{0, 0, 0.5}, 0.1, axis), window_error);
    }
}

TEST_CASE("improved integrability") {
    const Axis axis{{0, 0, 0}, {0, 0, 1}};

    auto make_series = [&](auto&& profile, int n2, double rho_max, double z_half, double t_end,
                           int slices) {
        AxisymSeries series;
        for (int k = 0; k <= slices; ++k) {
            AxisymField F;
            F.axis = axis;
            F.n_rho = F.n_z = n2;
            F.rho_max = rho_max;
            F.z_half = z_half;
            F.time = t_end * k / slices;
            F.values.resize(static_cast<std::size_t>(n2) * n2);
            for (int j = 0; j < n2; ++j)
                for (int i = 0; i < n2; ++i)
                    F.values[F.index(i, j)] = profile(F.rho_coord(i), F.z_coord(j));
            series.fields.push_back(std::move(F));
        }
        return series;
    };

    SUBCASE("constant profile: closed-form L2 norm") {
        const double c = 1.7;
        const auto series =
            make_series([&](double, double) { return c; }, 96, 4.0, 4.0, 1.0, 10);
        const double r = 0.5;
        const auto res = improved_integrability(series, 1.0, 2.0, 0.0, r, 1.0);
        const double expected = c * std::sqrt(M_PI * r * r * (r * r));
        CHECK(res.l2_norm == doctest::Approx(expected).epsilon(0.03));
    }
    SUBCASE("homogeneity: doubling the profile doubles the norm") {
        auto prof = [](double rho, double z) {
            return std::exp(-((rho - 2.0) * (rho - 2.0) + z * z));
        };
        const auto s1 = make_series(prof, 64, 4.0, 4.0, 1.0, 8);
        const auto s2 = make_series([&](double r, double z) { return 2.0 * prof(r, z); }, 64,
                                    4.0, 4.0, 1.0, 8);
        const auto r1 = improved_integrability(s1, 1.0, 2.0, 0.0, 0.5, 1.0);
        const auto r2 = improved_integrability(s2, 1.0, 2.0, 0.0, 0.5, 1.0);
        CHECK(r2.l2_norm == doctest::Approx(2.0 * r1.l2_norm).epsilon(1e-12));
        CHECK(r1.bound_path > 0.0);
    }
    SUBCASE("Gaussian profile: refinement stable") {
        auto prof = [](double rho, double z) {
            return std::exp(-((rho - 2.0) * (rho - 2.0) + z * z));
        };
        const auto coarse = make_series(prof, 48, 4.0, 4.0, 1.0, 8);
        const auto fine = make_series(prof, 96, 4.0, 4.0, 1.0, 8);
        const auto rc = improved_integrability(coarse, 1.0, 2.0, 0.0, 0.6, 1.0);
        const auto rf = improved_integrability(fine, 1.0, 2.0, 0.0, 0.6, 1.0);
        CHECK(std::fabs(rf.l2_norm - rc.l2_norm) / rf.l2_norm < 0.05);
    }
    SUBCASE("cylinder touching the axis rejected") {
        const auto series =
            make_series([](double, double) { return 1.0; }, 32, 4.0, 4.0, 1.0, 4);
        CHECK_THROWS_AS(improved_integrability(series, 1.0, 0.4, 0.0, 0.5, 0.2),
                        validation_error);
    }
}

TEST_CASE("proof-step inequalities") {
    SUBCASE("arcsin y <= (pi/2) y on [0,1], dense sampling") {
        for (int i = 0; i <= 10000; ++i) {
            const double y = i / 10000.0;
            CHECK(std::asin(y) <= M_PI_2 * y + 1e-15);
        }
    }
    SUBCASE("Fenchel step p q <= p ln_+ p + e^q on (0,10]^2") {
        std::uniform_real_distribution<double> u(1e-6, 10.0);
        for (int trial = 0; trial < 10000; ++trial) {
            const double p = u(rng), q = u(rng);
            const double lhs = p * q;
            const double rhs = p * std::max(std::log(p), 0.0) + std::exp(q);
            CHECK(lhs <= rhs * (1.0 + 1e-12));
        }
    }
    SUBCASE("rho-window bookkeeping of the long-range proof") {
        std::uniform_real_distribution<double> u(-1.0, 1.0), rr(0.3, 3.0);
        for (int trial = 0; trial < 2000; ++trial) {
            const double rho0 = rr(rng);
            const double sigma0 = rho0 / 4.0 * (0.2 + 0.8 * std::fabs(u(rng)));
            const double eps = rho0 / 2.0 * (0.2 + 0.8 * std::fabs(u(rng)));
            // v = v0 + eps vbar with vbar in B_1
            Vec3 vbar{u(rng), u(rng), u(rng)};
            if (vbar.norm() > 1.0) vbar = vbar / (vbar.norm() * 1.0001);
            const Vec3 v0{rho0, 0, 0};
            const Vec3 v = v0 + vbar * eps;
            const double rho_v = std::sqrt(v.x * v.x + v.y * v.y);
            CHECK(rho_v >= rho0 / 2.0 - 1e-12);
            CHECK(rho_v <= 1.5 * rho0 + 1e-12);
            // w within sigma0 of v
            Vec3 d{u(rng), u(rng), u(rng)};
            if (d.norm() > 0.0) d = d / d.norm();
            const Vec3 w = v + d * (sigma0 * std::fabs(u(rng)));
            const double rho_w = std::sqrt(w.x * w.x + w.y * w.y);
            CHECK(rho_w >= rho0 / 4.0 - 1e-12);
            CHECK(rho_w <= 2.0 * rho0 + 1e-12);
        }
    }
}

TEST_CASE("off-axis criterion") {
    const Axis axis{{0, 0, 0}, {0, 0, 1}};
    VelocityGrid g(32, 6.0);
    KernelModel model(-3.0, 0.5, 1.0);

    SUBCASE("steady radial field: certified, shell bound dominates") {
        const auto f = DistributionField::from_function(g, 0.0, [](const Vec3& v) {
            return std::exp(-v.norm2() / 2.0) / std::pow(2.0 * M_PI, 1.5);
        });
        const auto traj = steady_trajectory(f, 1.5, 15);
        const auto verdict = off_axis_criterion(traj, 1.5, Vec3{2.0, 0, 0}, axis, model);
        CHECK(verdict.rho0 == doctest::Approx(2.0));
        CHECK(verdict.certified);
        bool any_resolved = false;
        for (const auto& rung : verdict.rungs) {
            if (!rung.resolved) continue;
            any_resolved = true;
            CHECK(rung.direct_q3 <= rung.shell_bound * (1.0 + 1e-9));
            CHECK(rung.Z0 >= 1.0);
        }
        CHECK(any_resolved);
    }
    SUBCASE("on-axis seed rejected") {
        const auto traj = steady_trajectory(DistributionField(g, 0.0), 1.5, 5);
        CHECK_THROWS_AS(off_axis_criterion(traj, 1.5, Vec3{0, 0, 1.0}, axis, model),
                        window_error);
    }
    SUBCASE("shell integral decreases along a multi-rung ladder") {
        // field dense enough at the seed radius that certification fails and
        // the ladder keeps descending
        VelocityGrid fine(48, 3.0);
        const auto f = DistributionField::from_function(fine, 0.0, [](const Vec3& v) {
            return 400.0 * std::exp(-v.norm2() / 2.0);
        });
        const auto traj = steady_trajectory(f, 0.5, 10);
        const auto verdict = off_axis_criterion(traj, 0.5, Vec3{1.6, 0, 0}, axis, model);
        std::vector<double> shells;
        for (const auto& rung : verdict.rungs)
            if (rung.resolved) {
                shells.push_back(rung.shell_bound);
                CHECK(rung.direct_q3 <= rung.shell_bound * (1.0 + 1e-9));
            }
        REQUIRE(shells.size() >= 2);
        for (std::size_t k = 1; k < shells.size(); ++k) CHECK(shells[k] < shells[k - 1]);
    }
}
