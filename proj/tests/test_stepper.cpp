#include <doctest.h>

#include <cmath>

#include "landau/config.hpp"
#include "landau/diagnostics.hpp"
#include "landau/stepper.hpp"

using namespace landau;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.grid_n = 16;
    c.grid_L = 6.0;
    c.gamma = -3.0;
    c.n_reg = 1.0;
    c.viscosity = 0.0;
    c.dt = 2e-3;
    c.t_end = 0.1;
    c.save_stride = 10;
    c.init.kind = "maxwellian";
    return c;
}

} // namespace

TEST_CASE("initial data scheme") {
    VelocityGrid g(16, 6.0);

    SUBCASE("zero input gives exactly the (1/n)-scaled Gaussian") {
        DistributionField zero(g, 0.0);
        const double n = 4.0;
        const auto out = build_initial_data(zero, n);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double expected =
                std::exp(-g.node(i).norm2() / 2.0) / (n * std::pow(2.0 * M_PI, 1.5));
            CHECK(out.values[i] == doctest::Approx(expected).epsilon(1e-14));
        }
    }
    SUBCASE("mass identity: int f_in^n = int xi_n f_in + 1/n") {
        // interior-supported input so no mollified mass leaves the box
        auto f = DistributionField::from_function(g, 0.0, [](const Vec3& v) {
            const double r2 = v.norm2() / 9.0;
            return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
        });
        const double n = 8.0; // truncation inactive inside the box
        const auto out = build_initial_data(f, n);
        const auto in_rep = moments_and_entropy(f);
        const auto out_rep = moments_and_entropy(out);
        // Gaussian floor mass on this box misses only the e^{-L^2/2} tail
        CHECK(out_rep.mass == doctest::Approx(in_rep.mass + 1.0 / n).epsilon(1e-7));
    }
    SUBCASE("strictly positive everywhere") {
        DistributionField zero(g, 0.0);
        const auto out = build_initial_data(zero, 16.0);
        const double corner_floor =
            std::exp(-3.0 * g.L * g.L / 2.0) / (16.0 * std::pow(2.0 * M_PI, 1.5));
        for (double v : out.values) CHECK(v >= corner_floor * (1.0 - 1e-12));
    }
    SUBCASE("negative input rejected") {
        DistributionField bad(g, 0.0);
        bad.values[7] = -1.0;
        CHECK_THROWS_AS(build_initial_data(bad, 2.0), validation_error);
    }
}

TEST_CASE("single step") {
    SUBCASE("dt = 0 is the identity") {
        auto c = small_config();
        c.dt = 0.0;
        Stepper stepper(c);
        auto f = sample_initial_data(c.init, c.grid());
        const auto before = f.values;
        stepper.step(f);
        CHECK(f.values == before);
    }
    SUBCASE("Maxwellian is a discrete equilibrium") {
        auto c = small_config();
        c.dt = 1e-3;
        Stepper stepper(c);
        auto f = sample_initial_data(c.init, c.grid());
        const auto f0 = f.values;
        const double peak = f.max_value();
        for (int k = 0; k < 20; ++k) stepper.step(f);
        double drift = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            drift = std::max(drift, std::fabs(f.values[i] - f0[i]));
        // 20 steps of dt=1e-3: well under 1e-4 per unit time
        CHECK(drift / peak < 1e-4 * 20 * 1e-3);
    }
    SUBCASE("two half steps vs one full step differ at O(dt^2)") {
        auto gap = [&](double dt) {
            auto c = small_config();
            c.init.kind = "bimodal";
            c.dt = dt;
            Stepper full(c);
            auto f1 = sample_initial_data(c.init, c.grid());
            full.step(f1);

            c.dt = dt / 2.0;
            Stepper half(c);
            auto f2 = sample_initial_data(c.init, c.grid());
            half.step(f2);
            half.step(f2);

            double d = 0.0;
            for (std::size_t i = 0; i < f1.values.size(); ++i)
                d = std::max(d, std::fabs(f1.values[i] - f2.values[i]));
            return d;
        };
        const double g1 = gap(4e-3);
        const double g2 = gap(2e-3);
        CHECK(g2 < g1 / 3.0); // ~4x for O(dt^2)
        CHECK(g1 > 0.0);
    }
}

TEST_CASE("run diagnostics") {
    SUBCASE("Maxwellian run: entropy flat, mass exact") {
        auto c = small_config();
        Stepper stepper(c);
        const auto result = stepper.run();
        REQUIRE(!result.log.empty());
        const double H0 = moments_and_entropy(result.trajectory.snaps.front()).entropy;
        for (const auto& rec : result.log) {
            CHECK(std::fabs(rec.entropy - H0) < 1e-6);
            CHECK(std::fabs(rec.renorm_factor - 1.0) <= 1e-6);
        }
        CHECK(result.trajectory.size() >= 2);
    }
    SUBCASE("bimodal run: entropy non-increasing, moments stable") {
        auto c = small_config();
        c.init.kind = "bimodal";
        c.t_end = 0.06;
        c.dt = 2e-3;
        Stepper stepper(c);
        const auto result = stepper.run();
        const auto first = moments_and_entropy(result.trajectory.snaps.front());
        double prev = first.entropy;
        for (const auto& rec : result.log) {
            CHECK(rec.entropy <= prev + 1e-6);
            prev = rec.entropy;
            CHECK(rec.mass == doctest::Approx(first.mass).epsilon(1e-12));
            CHECK(rec.energy == doctest::Approx(first.energy).epsilon(1e-3));
        }
        // positivity of every snapshot
        for (const auto& snap : result.trajectory.snaps)
            for (double v : snap.values) CHECK(v >= 0.0);
    }
    SUBCASE("very soft non-Coulomb run keeps the same structure") {
        auto c = small_config();
        c.gamma = -2.5;
        c.init.kind = "bimodal";
        c.t_end = 0.04;
        Stepper stepper(c);
        const auto result = stepper.run();
        CHECK(result.entropy_monotone);
        const double mass0 = result.log.front().mass;
        for (const auto& rec : result.log) {
            CHECK(rec.mass == doctest::Approx(mass0).epsilon(1e-12));
            CHECK(std::fabs(rec.renorm_factor - 1.0) <= 1e-6);
        }
    }
    SUBCASE("initial-data scheme through the run path") {
        auto c = small_config();
        c.init.kind = "bimodal";
        c.init.scheme_n = 4.0;
        c.t_end = 0.02;
        Stepper stepper(c);
        const auto result = stepper.run();
        // the Gaussian floor keeps every snapshot strictly positive
        for (const auto& snap : result.trajectory.snaps)
            for (double v : snap.values) CHECK(v > 0.0);
        CHECK(result.entropy_monotone);
    }
    SUBCASE("manufactured solution: first order in time") {
        // forced run against the discrete operator isolates the time error
        auto c = small_config();
        c.t_end = 0.0; // stepped manually below
        const VelocityGrid g = c.grid();
        const double c0 = std::exp(-0.5);
        auto exact = [&](double t) {
            return DistributionField::from_function(g, t, [&](const Vec3& v) {
                return std::exp(-v.norm2() / 2.0) *
                       (1.0 + 0.2 * std::sin(t) * (std::cos(v.x) - c0));
            });
        };
        auto error_at = [&](double dt) {
            auto cc = c;
            cc.dt = dt;
            Stepper stepper(cc);
            auto f = exact(0.0);
            const double T = 0.04;
            const int steps = static_cast<int>(std::lround(T / dt));
            for (int k = 0; k < steps; ++k) {
                // S = d_t f_exact - Q_h(f_exact) at the step start
                const auto fe = exact(f.time);
                auto flux = stepper.op().log_flux(fe);
                const auto Q = fd::divergence(g, flux.J);
                const auto fe2 = exact(f.time + 1e-6);
                std::vector<double> S(g.size());
                for (std::size_t i = 0; i < g.size(); ++i)
                    S[i] = (fe2.values[i] - fe.values[i]) / 1e-6 - Q[i];
                std::function<double(std::size_t)> src = [&S](std::size_t i) { return S[i]; };
                stepper.step(f, &src);
            }
            const auto fe = exact(f.time);
            double err = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
                err = std::max(err, std::fabs(f.values[i] - fe.values[i]));
            return err;
        };
        const double e1 = error_at(4e-3);
        const double e2 = error_at(2e-3);
        CHECK(e2 < e1 / 1.6); // ~2x for first order
    }
}

TEST_CASE("config parsing") {
    SUBCASE("round trip of documented keys") {
        const std::string text = R"(
# comment
grid.n = 16
grid.L = 6.0
gamma = -3
n_reg = 1
viscosity = 1e-4
dt = 0.002
t_end = 0.1
save_stride = 5
init.kind = bimodal
init.sep = 2.5
seed = 42
)";
        const auto c = run_config_from_text(text);
        CHECK(c.grid_n == 16);
        CHECK(c.grid_L == 6.0);
        CHECK(c.viscosity == 1e-4);
        CHECK(c.init.kind == "bimodal");
        CHECK(c.init.params.at("sep") == 2.5);
        CHECK(c.seed == 42);
    }
    SUBCASE("unknown key names the offender") {
        CHECK_THROWS_WITH_AS(run_config_from_text("grid.m = 3\n"),
                             doctest::Contains("grid.m"), validation_error);
    }
    SUBCASE("bad numeric value names the key") {
        CHECK_THROWS_WITH_AS(run_config_from_text("dt = fast\n"), doctest::Contains("dt"),
                             validation_error);
    }
}
