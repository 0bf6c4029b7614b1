#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "landau/axisym.hpp"
#include "landau/config.hpp"
#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/regularity.hpp"
#include "landau/run_io.hpp"
#include "landau/stepper.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace landau;

namespace {

std::vector<double> parse_csv_numbers(const std::string& text, std::size_t expected,
                                      const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw validation_error(what + ": bad number '" + item + "'");
        }
    }
    if (out.size() != expected)
        throw validation_error(what + ": expected " + std::to_string(expected) + " numbers");
    return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    std::ifstream is(config_path);
    if (!is) throw validation_error("cannot open config: " + config_path);
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string config_text = ss.str();
    const RunConfig config = run_config_from_text(config_text);

    Stepper stepper(config);
    const auto start = std::chrono::steady_clock::now();
    const RunResult result = stepper.run();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_run_dir(out_dir, config_text, config, result, wall);
    std::cout << "run complete: " << result.trajectory.size() << " snapshots, "
              << result.log.size() << " steps, " << wall << " s\n";
    return 0;
}

int cmd_diagnose(const std::string& run_dir, const std::string& out_dir, double at,
                 double kappa, const std::string& cylinder, double eps, double lambda,
                 double kappa_eps, double r_eps, double delta_eps) {
    const RunArtifacts run = load_run_dir(run_dir);
    fs::create_directories(out_dir);
    const KernelModel model = run.config.kernel_model();

    std::vector<const DistributionField*> selected;
    if (std::isnan(at)) {
        for (const auto& snap : run.trajectory.snaps) selected.push_back(&snap);
    } else {
        // report only the snapshot at the requested time
        const DistributionField* best = nullptr;
        for (const auto& snap : run.trajectory.snaps)
            if (std::fabs(snap.time - at) < 1e-9) best = &snap;
        if (!best)
            throw window_error("--at " + std::to_string(at) + " is not a saved time");
        selected.push_back(best);
    }

    {
        std::ofstream os(fs::path(out_dir) / "entropy.csv");
        os << "t,mass,px,py,pz,energy,entropy,entropy_pos";
        if (kappa >= 1.0) os << ",truncated_entropy";
        os << '\n';
        os.precision(17);
        for (const auto* snap_ptr : selected) {
            const auto& snap = *snap_ptr;
            const auto rep = moments_and_entropy(snap);
            os << rep.time << ',' << rep.mass << ',' << rep.momentum.x << ',' << rep.momentum.y
               << ',' << rep.momentum.z << ',' << rep.energy << ',' << rep.entropy << ','
               << rep.entropy_pos;
            if (kappa >= 1.0) os << ',' << truncated_entropy(snap, kappa);
            os << '\n';
        }
    }

    if (!cylinder.empty()) {
        const auto c = parse_csv_numbers(cylinder, 5, "--cylinder");
        const double t0 = c[0];
        const Vec3 v0{c[1], c[2], c[3]};
        const double r = c[4];
        if (t0 > run.trajectory.t_last() + 1e-12 || t0 - r * r < run.trajectory.t_first() - 1e-12)
            throw window_error("--cylinder: outside the run's time range");

        json report;
        report["cylinder"] = {{"t0", t0}, {"v0", {v0.x, v0.y, v0.z}}, {"r", r}};
        report["eps"] = eps;
        {
            ScaledEntropyParams p;
            if (kappa_eps > 0.0) p.kappa_eps = kappa_eps;
            if (r_eps > 0.0) p.r_eps = r_eps;
            if (delta_eps > 0.0) p.delta_eps = delta_eps;
            const auto terms = scaled_entropy_inequality(run.trajectory, t0, v0, eps, p, model);
            report["scaled_entropy"] = {
                {"kappa_eps", p.kappa_eps}, {"r_eps", p.r_eps},
                {"delta_eps", p.delta_eps}, {"lhs_sup", terms.lhs_sup},
                {"lhs_diss", terms.lhs_diss}, {"rhs_t1", terms.rhs_t1},
                {"rhs_t2", terms.rhs_t2},     {"rhs_t3", terms.rhs_t3},
                {"implied_C0", terms.implied_C0}};
        }
        if (lambda > 0.0) {
            const auto lm = local_mass_estimate(run.trajectory, t0, v0, lambda, eps, model);
            report["local_mass"] = {{"lambda", lambda},
                                    {"lhs", lm.lhs},
                                    {"rhs_t1", lm.rhs_t1},
                                    {"rhs_t2", lm.rhs_t2},
                                    {"rhs_t3", lm.rhs_t3},
                                    {"F_eps_l2", lm.F_eps_l2},
                                    {"grad_sqrt_l2", lm.grad_sqrt_l2},
                                    {"implied_C1", lm.implied_C1}};
        }
        std::ofstream os(fs::path(out_dir) / "cylinder_report.json");
        os << report.dump(2) << '\n';
    }
    std::cout << "reports written to " << out_dir << '\n';
    return 0;
}

int cmd_scan(const std::string& run_dir, const std::string& seeds_path, double lambda,
             double eta, int j_max, const std::string& out_path) {
    const RunArtifacts run = load_run_dir(run_dir);
    const KernelModel model = run.config.kernel_model();

    std::ifstream is(seeds_path);
    if (!is) throw validation_error("cannot open seeds file: " + seeds_path);
    json seeds;
    try {
        is >> seeds;
    } catch (const json::exception& e) {
        throw validation_error(std::string("seeds file: ") + e.what());
    }
    if (!seeds.is_array()) throw validation_error("seeds file: expected a JSON array");

    ScanParams params;
    params.lambda = lambda;
    params.eta_plus = eta;
    params.j_max = j_max;

    std::vector<ScanOutcome> scans;
    json out;
    out["lambda"] = lambda;
    out["eta_plus"] = eta;
    json jscans = json::array();
    for (const auto& s : seeds) {
        const double t0 = s.at(0).get<double>();
        const Vec3 v0{s.at(1).get<double>(), s.at(2).get<double>(), s.at(3).get<double>()};
        auto scan = dissipation_scan(run.trajectory, t0, v0, params, model);
        jscans.push_back({{"seed", {t0, v0.x, v0.y, v0.z}},
                          {"lambda", scan.lambda},
                          {"D", scan.D},
                          {"flagged", scan.flagged},
                          {"first_index", scan.first_index},
                          {"floor_index", scan.floor_index}});
        scans.push_back(std::move(scan));
    }
    out["scans"] = jscans;

    const auto est = hausdorff_upper_bound(scans, eta, m_star(model.gamma));
    out["m_star"] = m_star(model.gamma);
    out["flagged_count"] = est.flagged.size();
    out["selected_count"] = est.selected.size();
    out["hausdorff_bound"] = est.bound;

    std::ofstream os(out_path);
    if (!os) throw validation_error("cannot open output: " + out_path);
    os << out.dump(2) << '\n';
    std::cout << "scan complete: " << est.flagged.size() << " flagged, bound " << est.bound
              << '\n';
    return 0;
}

int cmd_axisym(const std::string& run_dir, const std::string& axis_text,
               const std::string& point_text, const std::string& out_path) {
    const RunArtifacts run = load_run_dir(run_dir);
    const KernelModel model = run.config.kernel_model();

    const auto a = parse_csv_numbers(axis_text, 6, "--axis");
    Vec3 dir{a[3], a[4], a[5]};
    const double n = dir.norm();
    if (n <= 0.0) throw validation_error("--axis: zero direction");
    const Axis axis{{a[0], a[1], a[2]}, dir / n};

    const auto p = parse_csv_numbers(point_text, 4, "--point");
    const double t0 = p[0];
    const Vec3 v0{p[1], p[2], p[3]};

    // axisymmetry quality of the final snapshot
    const auto& last = run.trajectory.snaps.back();
    const auto [rho0, z0] = axis.cylindrical(v0);
    (void)z0;
    const auto reduced = cylindrical_reduce(last, axis, run.config.grid_n / 2,
                                            run.config.grid_n / 2, run.config.grid_L,
                                            run.config.grid_L);

    const auto verdict = off_axis_criterion(run.trajectory, t0, v0, axis, model);

    json out;
    out["axis"] = {{"base", {axis.base.x, axis.base.y, axis.base.z}},
                   {"direction", {axis.direction.x, axis.direction.y, axis.direction.z}}};
    out["point"] = {t0, v0.x, v0.y, v0.z};
    out["rho0"] = verdict.rho0;
    out["axisymmetry_residual"] = reduced.residual;
    out["axisymmetric"] = reduced.residual < 1e-2;
    out["save_dt"] = verdict.save_dt;
    out["certified"] = verdict.certified;
    json rungs = json::array();
    for (const auto& r : verdict.rungs)
        rungs.push_back({{"eps", r.eps},
                         {"resolved", r.resolved},
                         {"direct_q3", r.direct_q3},
                         {"shell_bound", r.shell_bound},
                         {"Z0", r.Z0},
                         {"hypothesis", r.hypothesis},
                         {"threshold", r.threshold},
                         {"certified", r.certified}});
    out["rungs"] = rungs;

    std::ofstream os(out_path);
    if (!os) throw validation_error("cannot open output: " + out_path);
    os << out.dump(2) << '\n';
    std::cout << "verdict: " << (verdict.certified ? "certified" : "not certified") << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic Landau equation lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "run", run_dir, out_path = "report.json";
    std::string cylinder, seeds_path, axis_text, point_text;
    double at = std::numeric_limits<double>::quiet_NaN();
    double kappa = 0.0, eps = 0.5, lambda = 0.0, eta = 1.0;
    double kappa_eps = 0.0, r_eps = 0.0, delta_eps = 0.0;
    int j_max = 4;

    auto* simulate = app.add_subcommand("simulate", "integrate the regularized equation");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--out", out_dir, "output run directory");

    auto* diagnose = app.add_subcommand("diagnose", "entropy/mass reports for a run");
    diagnose->add_option("--run", run_dir, "run directory")->required();
    diagnose->add_option("--out", out_dir, "output report directory");
    diagnose->add_option("--at", at, "restrict reports to the snapshot at this time");
    diagnose->add_option("--kappa", kappa, "truncated entropy level (>= 1)");
    diagnose->add_option("--cylinder", cylinder, "t0,vx,vy,vz,r");
    diagnose->add_option("--eps", eps, "zoom scale for the cylinder report");
    diagnose->add_option("--lambda", lambda, "local-mass lambda in (0,1/4)");
    diagnose->add_option("--kappa-eps", kappa_eps, "scaled entropy level in [1,2]");
    diagnose->add_option("--r-eps", r_eps, "scaled entropy radius in (0,2]");
    diagnose->add_option("--delta-eps", delta_eps, "scaled entropy margin in (0,1]");

    auto* scan = app.add_subcommand("scan-singular", "dyadic dissipation scan + covering bound");
    scan->add_option("--run", run_dir, "run directory")->required();
    scan->add_option("--seeds", seeds_path, "JSON array of [t, vx, vy, vz]")->required();
    scan->add_option("--lambda", lambda, "scale ratio in (0,1/4)")->required();
    scan->add_option("--eta", eta, "flag threshold eta_DG+");
    scan->add_option("--jmax", j_max, "maximum scale index");
    scan->add_option("--out", out_path, "output JSON");

    auto* axisym = app.add_subcommand("axisym", "off-axis regularity verdict");
    axisym->add_option("--run", run_dir, "run directory")->required();
    axisym->add_option("--axis", axis_text, "bx,by,bz,dx,dy,dz")->required();
    axisym->add_option("--point", point_text, "t0,vx,vy,vz")->required();
    axisym->add_option("--out", out_path, "output JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
        if (diagnose->parsed())
            return cmd_diagnose(run_dir, out_dir, at, kappa, cylinder, eps, lambda,
                                kappa_eps, r_eps, delta_eps);
        if (scan->parsed()) return cmd_scan(run_dir, seeds_path, lambda, eta, j_max, out_path);
        if (axisym->parsed()) return cmd_axisym(run_dir, axis_text, point_text, out_path);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const format_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const window_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 1;
}
