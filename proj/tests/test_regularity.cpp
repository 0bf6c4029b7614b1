#include <doctest.h>

#include <cmath>
#include <random>

#include "landau/diagnostics.hpp"
#include "landau/regularity.hpp"

using namespace landau;

namespace {

std::mt19937 rng(161803);

Trajectory steady_trajectory(const DistributionField& f, double t_end, int slices) {
    Trajectory traj(f.grid);
    for (int k = 0; k <= slices; ++k) {
        DistributionField snap = f;
        snap.time = t_end * k / slices;
        traj.push(std::move(snap));
    }
    return traj;
}

DistributionField maxwellian(const VelocityGrid& g, double rho = 1.0) {
    const double norm = rho / std::pow(2.0 * M_PI, 1.5);
    return DistributionField::from_function(
        g, 0.0, [=](const Vec3& v) { return norm * std::exp(-v.norm2() / 2.0); });
}

} // namespace

TEST_CASE("m_star formula") {
    CHECK(m_star(-3.0) == doctest::Approx(3.5));
    CHECK(m_star(-12.0 / 5.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(m_star(-2.0), validation_error); // boundary excluded; limit value is 1
    CHECK_THROWS_AS(m_star(-3.5), validation_error);
    CHECK_THROWS_AS(m_star(0.0), validation_error);
}

TEST_CASE("De Giorgi schedules") {
    CHECK(degiorgi_radius(0) == 1.0);
    CHECK(degiorgi_level(0) == 1.0);
    for (int j = 0; j < 40; ++j) {
        CHECK(degiorgi_radius(j) - degiorgi_radius(j + 1) == std::pow(2.0, -j - 2));
        CHECK(degiorgi_level(j + 1) - degiorgi_level(j) == std::pow(2.0, -j - 1));
        CHECK(degiorgi_radius(j) > degiorgi_radius(j + 1));
        CHECK(degiorgi_level(j) < degiorgi_level(j + 1));
        CHECK(degiorgi_radius(j + 1) > 0.5);
        CHECK(degiorgi_level(j + 1) < 2.0);
    }
}

TEST_CASE("De Giorgi level-set functional") {
    SUBCASE("below level 1 everywhere: U_j = 0 for all j") {
        VelocityGrid g(16, 2.5);
        auto f = DistributionField::from_function(
            g, 0.0, [](const Vec3& v) { return 0.8 * std::exp(-v.norm2()); });
        f.time = 0.0;
        Trajectory scaled(g);
        for (int k = 0; k <= 4; ++k) {
            DistributionField snap = f;
            snap.time = -1.0 + 0.25 * k;
            scaled.push(std::move(snap));
        }
        for (int j = 0; j < 5; ++j) CHECK(degiorgi_functional(scaled, j) == 0.0);
    }
    SUBCASE("nonincreasing in j, brute-force agreement on 8^3") {
        VelocityGrid g(8, 2.0);
        Trajectory scaled(g);
        for (int k = 0; k <= 4; ++k) {
            auto f = DistributionField::from_function(g, 0.0, [&](const Vec3& v) {
                return 3.0 * std::exp(-v.norm2()) + 0.02 * k;
            });
            f.time = -1.0 + 0.25 * k;
            scaled.push(std::move(f));
        }
        double prev = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 6; ++j) {
            const double Uj = degiorgi_functional(scaled, j);
            CHECK(Uj <= prev + 1e-14);
            prev = Uj;
        }
        // independent direct sum for j = 1
        const int j = 1;
        const double r = degiorgi_radius(j), kappa = degiorgi_level(j);
        const double w = g.cell_volume();
        double sup_term = 0.0, diss = 0.0;
        double prev_t = -r * r;
        for (const auto& snap : scaled.snaps) {
            if (snap.time <= -r * r || snap.time > 0.0) continue;
            double excess = 0.0, gg = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (g.node(i).norm() >= r) continue;
                excess += std::max(snap.values[i] - kappa, 0.0);
                if (snap.values[i] < kappa) continue;
                // centered gradient of sqrt(f), zero extension
                for (int a = 0; a < 3; ++a) {
                    Vec3 vp = g.node(i), vm = g.node(i);
                    vp[a] += g.h();
                    vm[a] -= g.h();
                    auto val = [&](const Vec3& q) -> double {
                        const int ix = static_cast<int>(std::lround((q.x + g.L) / g.h()));
                        const int iy = static_cast<int>(std::lround((q.y + g.L) / g.h()));
                        const int iz = static_cast<int>(std::lround((q.z + g.L) / g.h()));
                        if (ix < 0 || iy < 0 || iz < 0 || ix >= g.n || iy >= g.n || iz >= g.n)
                            return 0.0;
                        return std::sqrt(snap.values[g.index(ix, iy, iz)]);
                    };
                    const double d = (val(vp) - val(vm)) / (2.0 * g.h());
                    gg += d * d;
                }
            }
            sup_term = std::max(sup_term, excess * w);
            diss += gg * w * (snap.time - prev_t);
            prev_t = snap.time;
        }
        CHECK(degiorgi_functional(scaled, j) ==
              doctest::Approx(sup_term + diss).epsilon(1e-12));
    }
}

TEST_CASE("De Giorgi recurrence simulator") {
    SUBCASE("threshold start satisfies the (1/2)^{(4/3)^j} bound") {
        for (double C2 : {1.0, 2.0, 10.0})
            for (double Z : {1.0, 2.0, 10.0}) {
                const double U0 = degiorgi_eta(C2) * std::pow(Z, -1.5);
                const auto res = degiorgi_recurrence(U0, Z, C2, 30);
                CHECK(res.vanishes);
                CHECK(res.bound_holds);
                for (int j = 0; j <= 30; ++j)
                    CHECK(res.log_V[j] <= std::pow(4.0 / 3.0, j) * std::log(0.5) + 1e-9);
            }
    }
    SUBCASE("zero start stays zero") {
        const auto res = degiorgi_recurrence(0.0, 1.0, 2.0, 10);
        CHECK(res.vanishes);
        for (double lu : res.log_U) CHECK(lu == -std::numeric_limits<double>::infinity());
    }
    SUBCASE("large start diverges without a vanishing verdict") {
        const auto res = degiorgi_recurrence(10.0, 1.0, 2.0, 30);
        CHECK(!res.vanishes);
        CHECK(res.diverged);
        CHECK(res.log_U.back() > res.log_U.front());
    }
}

TEST_CASE("De Giorgi certification") {
    KernelModel model(-3.0, 0.5, 1.0);
    (void)model;

    SUBCASE("zero field certifies") {
        VelocityGrid g(16, 6.0);
        const auto traj = steady_trajectory(DistributionField(g, 0.0), 2.0, 10);
        const auto res = degiorgi_certify(traj, 2.0, Vec3{}, 0.5, 1.0, 0.5);
        CHECK(res.certified);
        CHECK(res.hypothesis == 0.0);
        CHECK(res.sup_half == 0.0);
    }
    SUBCASE("small-amplitude Maxwellian certifies; amplified field does not") {
        VelocityGrid g(16, 6.0);
        const auto traj = steady_trajectory(maxwellian(g), 2.0, 10);
        const auto ok = degiorgi_certify(traj, 2.0, Vec3{}, 0.5, 1.0, 0.5);
        CHECK(ok.certified);

        // amplitude scaling drives (f_eps - 1)_+ mass above any threshold
        const auto big = steady_trajectory(maxwellian(g, 500.0), 2.0, 10);
        const auto bad = degiorgi_certify(big, 2.0, Vec3{}, 0.6, 1.0, 0.5);
        CHECK(!bad.certified);
        CHECK(bad.hypothesis > bad.threshold);
    }
}

TEST_CASE("dissipation scan") {
    KernelModel model(-3.0, 0.5, 1.0);
    // h = 0.25 resolves the coarsest scale eps_0 = 1 (h <= eps/4)
    VelocityGrid g(48, 6.0);

    SUBCASE("equilibrium scan: one resolved scale, no flag at the default") {
        const auto traj = steady_trajectory(maxwellian(g), 4.5, 18);
        ScanParams params;
        params.lambda = 0.2;
        params.j_max = 3;
        const auto scan = dissipation_scan(traj, 4.25, Vec3{0.5, 0, 0}, params, model);
        REQUIRE(!scan.D.empty());
        CHECK(!scan.flagged);
        CHECK(scan.floor_index == static_cast<int>(scan.D.size()));
        CHECK(scan.D.size() == 1); // eps_1 = 0.2 is below the floor here
    }
    SUBCASE("two-path consistency: direct vs scaled evaluation") {
        auto f = DistributionField::from_function(g, 0.0, [](const Vec3& v) {
            return std::exp(-v.norm2() / 2.0) * (1.0 + 0.4 * std::sin(1.3 * v.x));
        });
        const auto traj = steady_trajectory(f, 4.5, 18);
        ScanParams params;
        params.lambda = 0.2;
        params.j_max = 0;
        const auto scan = dissipation_scan(traj, 4.25, Vec3{}, params, model);
        REQUIRE(scan.D.size() == 1);
        const double scaled = scan_density_scaled(traj, 4.25, Vec3{}, 1.0, model, 24);
        CHECK(scan.D[0] == doctest::Approx(scaled).epsilon(0.25));
    }
}

TEST_CASE("vitali covering") {
    SUBCASE("two identical cylinders") {
        std::vector<ParabolicCylinder> fam{ParabolicCylinder(0.0, Vec3{}, 0.3),
                                           ParabolicCylinder(0.0, Vec3{}, 0.3)};
        const auto sel = vitali_cover(fam);
        CHECK(sel.size() == 1);
        CHECK(cylinder_contains(vitali_expansion(fam[sel[0]]), fam[1 - sel[0]]));
    }
    SUBCASE("disjoint family fully selected") {
        std::vector<ParabolicCylinder> fam;
        for (int i = 0; i < 10; ++i)
            fam.emplace_back(0.0, Vec3{2.0 * i, 0, 0}, 0.4);
        CHECK(vitali_cover(fam).size() == fam.size());
    }
    SUBCASE("randomized postconditions, 1000 trials") {
        std::uniform_real_distribution<double> rad(0.05, 0.95), pos(-2.0, 2.0), time(0.0, 2.0);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<ParabolicCylinder> fam;
            const int n = 3 + static_cast<int>(rng() % 15);
            for (int i = 0; i < n; ++i)
                fam.emplace_back(time(rng), Vec3{pos(rng), pos(rng), pos(rng)}, rad(rng));
            const auto sel = vitali_cover(fam);
            // pairwise disjoint
            for (std::size_t a = 0; a < sel.size(); ++a)
                for (std::size_t b = a + 1; b < sel.size(); ++b)
                    CHECK(fam[sel[a]].disjoint(fam[sel[b]]));
            // every input lies in the expansion of a selected cylinder of
            // radius >= its own
            for (const auto& c : fam) {
                bool covered = false;
                for (std::size_t s : sel) {
                    if (fam[s].r < c.r - 1e-15) continue;
                    if (cylinder_contains(vitali_expansion(fam[s]), c)) {
                        covered = true;
                        break;
                    }
                }
                CHECK(covered);
            }
        }
    }
    SUBCASE("radius validation") {
        std::vector<ParabolicCylinder> fam{ParabolicCylinder(0.0, Vec3{}, 1.5)};
        CHECK_THROWS_AS(vitali_cover(fam), validation_error);
    }
}

TEST_CASE("hausdorff upper bound") {
    auto make_scan = [](double t0, const Vec3& v0, double lambda, std::vector<double> D) {
        ScanOutcome s;
        s.t0 = t0;
        s.v0 = v0;
        s.lambda = lambda;
        s.D = std::move(D);
        s.floor_index = static_cast<int>(s.D.size());
        return s;
    };

    SUBCASE("no flags means zero bound") {
        std::vector<ScanOutcome> scans{make_scan(1.0, Vec3{}, 0.2, {0.5}),
                                       make_scan(1.0, Vec3{1, 0, 0}, 0.2, {0.1, 0.05})};
        const auto est = hausdorff_upper_bound(scans, 1.0, 3.5);
        CHECK(est.bound == 0.0);
        CHECK(est.flagged.empty());
    }
    SUBCASE("single flagged point at scale r gives (5r)^{m*}") {
        // finest resolved scale is j=1: cylinder radius 2 eps_1 = 0.4 < 1
        std::vector<ScanOutcome> scans{make_scan(1.0, Vec3{}, 0.2, {0.5, 10.0})};
        const auto est = hausdorff_upper_bound(scans, 1.0, 3.5);
        CHECK(est.flagged.size() == 1);
        CHECK(est.bound == doctest::Approx(std::pow(5.0 * 0.4, 3.5)));
    }
    SUBCASE("monotone nonincreasing in the threshold") {
        std::vector<ScanOutcome> scans;
        std::uniform_real_distribution<double> d(0.0, 4.0), pos(-2.0, 2.0);
        for (int i = 0; i < 20; ++i)
            scans.push_back(
                make_scan(1.0, Vec3{pos(rng), pos(rng), pos(rng)}, 0.2, {d(rng), d(rng)}));
        double prev = std::numeric_limits<double>::infinity();
        for (double eta : {0.05, 0.2, 0.5, 1.0, 3.0}) {
            const double b = hausdorff_upper_bound(scans, eta, 3.5).bound;
            CHECK(b <= prev + 1e-12);
            prev = b;
        }
    }
    SUBCASE("superadditive over well-separated flag clusters") {
        std::vector<ScanOutcome> left, right, both;
        for (int i = 0; i < 4; ++i) {
            auto a = make_scan(1.0, Vec3{-40.0 + i, 0, 0}, 0.2, {0.1, 5.0});
            auto b = make_scan(1.0, Vec3{40.0 + i, 0, 0}, 0.2, {0.1, 5.0});
            left.push_back(a);
            right.push_back(b);
            both.push_back(a);
            both.push_back(b);
        }
        const double bl = hausdorff_upper_bound(left, 1.0, 3.5).bound;
        const double br = hausdorff_upper_bound(right, 1.0, 3.5).bound;
        const double bb = hausdorff_upper_bound(both, 1.0, 3.5).bound;
        CHECK(bb == doctest::Approx(bl + br).epsilon(1e-12));
    }
    SUBCASE("inconsistent lambda rejected") {
        std::vector<ScanOutcome> scans{make_scan(1.0, Vec3{}, 0.2, {0.5}),
                                       make_scan(1.0, Vec3{}, 0.1, {0.5})};
        CHECK_THROWS_AS(hausdorff_upper_bound(scans, 1.0, 3.5), validation_error);
    }
}
