#pragma once

#include <cmath>
#include <string>

#include "landau/grid.hpp"

namespace landau {

// Zoom transform f_eps(t, v) = eps^2 f(t0 + eps^2 t, v0 + eps v), realized on
// a fresh grid by trilinear interpolation in velocity and linear
// interpolation in time.  The scaled trajectory carries one slice per source
// save inside the window (t0 - eps^2 t_window, t0], plus the slice at scaled
// time 0.
struct ScaledWindow {
    VelocityGrid target_grid; // grid for the scaled field, in scaled units
    double t_window = 0.0;    // scaled window length: scaled times in (-t_window, 0]
};

inline Trajectory scaled_solution(const Trajectory& traj, double t0, const Vec3& v0,
                                  double eps, const ScaledWindow& window) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw validation_error("scaled_solution: eps must lie in (0,1]");
    const VelocityGrid& src = traj.grid;
    const VelocityGrid& dst = window.target_grid;

    // domain checks: report the violated bound explicitly
    const double t_need = t0 - eps * eps * window.t_window;
    if (t_need < traj.t_first() - 1e-12)
        throw window_error("scaled_solution: window start " + std::to_string(t_need) +
                           " precedes first save " + std::to_string(traj.t_first()));
    if (t0 > traj.t_last() + 1e-12)
        throw window_error("scaled_solution: t0 " + std::to_string(t0) +
                           " beyond last save " + std::to_string(traj.t_last()));
    for (int axis = 0; axis < 3; ++axis) {
        const double lo = v0[axis] - eps * dst.L;
        const double hi = v0[axis] + eps * (dst.L - dst.h());
        if (lo < -src.L - 1e-12 || hi > src.L - src.h() + 1e-12)
            throw window_error("scaled_solution: scaled ball exits source grid on axis " +
                               std::to_string(axis) + " (needs [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "] inside [" +
                               std::to_string(-src.L) + ", " +
                               std::to_string(src.L - src.h()) + "])");
    }

    // scaled times: mapped source saves inside the window, then exactly 0
    std::vector<double> times;
    for (const auto& s : traj.snaps) {
        const double tb = (s.time - t0) / (eps * eps);
        if (tb > -window.t_window - 1e-12 && tb < -1e-12) times.push_back(tb);
    }
    times.push_back(0.0);

    Trajectory out(dst);
    const double e2 = eps * eps;
    for (double tb : times) {
        const double t_src = t0 + e2 * tb;
        DistributionField snap(dst, tb);
        for (int iz = 0; iz < dst.n; ++iz)
            for (int iy = 0; iy < dst.n; ++iy)
                for (int ix = 0; ix < dst.n; ++ix) {
                    const Vec3 vbar = dst.node(ix, iy, iz);
                    const Vec3 v = v0 + vbar * eps;
                    snap.values[dst.index(ix, iy, iz)] =
                        e2 * trajectory_sample(traj, t_src, v);
                }
        out.push(std::move(snap));
    }
    return out;
}

} // namespace landau
