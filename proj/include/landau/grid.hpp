#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "landau/errors.hpp"
#include "landau/vec3.hpp"

namespace landau {

// Uniform Cartesian velocity grid over [-L, L)^3 with n points per axis,
// nodes v_i = -L + i*h and spacing h = 2L/n.  For even n the origin is a
// node.  Flat index is ix + n*(iy + n*iz), ix fastest.
struct VelocityGrid {
    int n = 0;
    double L = 0.0;

    VelocityGrid() = default;
    VelocityGrid(int n_, double L_) : n(n_), L(L_) {
        if (n < 8) throw validation_error("VelocityGrid: need n >= 8, got " + std::to_string(n));
        if (!(L > 0.0)) throw validation_error("VelocityGrid: need L > 0");
    }

    double h() const { return 2.0 * L / n; }
    double cell_volume() const { return h() * h() * h(); }
    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

    double coord(int i) const { return -L + i * h(); }
    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(n) * (static_cast<std::size_t>(iy) +
                                              static_cast<std::size_t>(n) * iz);
    }
    Vec3 node(int ix, int iy, int iz) const { return {coord(ix), coord(iy), coord(iz)}; }
    Vec3 node(std::size_t flat) const {
        const int ix = static_cast<int>(flat % n);
        const int iy = static_cast<int>((flat / n) % n);
        const int iz = static_cast<int>(flat / (static_cast<std::size_t>(n) * n));
        return node(ix, iy, iz);
    }

    bool operator==(const VelocityGrid& o) const { return n == o.n && L == o.L; }
    bool operator!=(const VelocityGrid& o) const { return !(*this == o); }
};

// One snapshot of the distribution at a fixed time.  Nonnegative values.
struct DistributionField {
    VelocityGrid grid;
    double time = 0.0;
    std::vector<double> values;

    DistributionField() = default;
    DistributionField(const VelocityGrid& g, double t)
        : grid(g), time(t), values(g.size(), 0.0) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double max_value() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }

    template <class F>
    static DistributionField from_function(const VelocityGrid& g, double t, F&& f) {
        DistributionField out(g, t);
        for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = f(g.node(i));
        return out;
    }

    void check_nonnegative() const {
        for (double v : values)
            if (v < 0.0) throw validation_error("DistributionField: negative value");
    }
};

// Q_r(t0, v0) = (t0 - r^2, t0] x B_r(v0)
struct ParabolicCylinder {
    double t0 = 0.0;
    Vec3 v0{};
    double r = 0.0;

    ParabolicCylinder() = default;
    ParabolicCylinder(double t0_, const Vec3& v0_, double r_) : t0(t0_), v0(v0_), r(r_) {
        if (!(r > 0.0)) throw validation_error("ParabolicCylinder: need r > 0");
    }

    double t_begin() const { return t0 - r * r; } // open end
    bool contains_time(double t) const { return t > t_begin() && t <= t0; }
    bool contains_point(const Vec3& v) const { return (v - v0).norm() < r; }
    bool contains(double t, const Vec3& v) const {
        return contains_time(t) && contains_point(v);
    }

    // Disjointness: time intervals disjoint OR balls disjoint.
    bool disjoint(const ParabolicCylinder& o) const {
        const bool time_overlap = (t_begin() < o.t0) && (o.t_begin() < t0);
        if (!time_overlap) return true;
        return (v0 - o.v0).norm() >= r + o.r;
    }
    bool intersects(const ParabolicCylinder& o) const { return !disjoint(o); }
};

// Discretized integration domain: nodes of one snapshot inside a ball,
// with quadrature weight h^3 each.
struct NodeMask {
    std::vector<std::size_t> nodes;
    double node_weight = 0.0; // h^3
    double weight_sum() const { return node_weight * static_cast<double>(nodes.size()); }
};

inline NodeMask ball_restrict(const VelocityGrid& g, const Vec3& center, double radius) {
    NodeMask mask;
    mask.node_weight = g.cell_volume();
    // bounding box to avoid a full sweep
    const double h = g.h();
    auto lo = [&](double c) {
        int i = static_cast<int>(std::ceil((c - radius + g.L) / h));
        return std::max(i, 0);
    };
    auto hi = [&](double c) {
        int i = static_cast<int>(std::floor((c + radius + g.L) / h));
        return std::min(i, g.n - 1);
    };
    const double r2 = radius * radius;
    for (int iz = lo(center.z); iz <= hi(center.z); ++iz)
        for (int iy = lo(center.y); iy <= hi(center.y); ++iy)
            for (int ix = lo(center.x); ix <= hi(center.x); ++ix) {
                if ((g.node(ix, iy, iz) - center).norm2() < r2)
                    mask.nodes.push_back(g.index(ix, iy, iz));
            }
    return mask;
}

// Time series of snapshots on a shared grid, strictly increasing times.
struct Trajectory {
    VelocityGrid grid;
    std::vector<DistributionField> snaps;

    Trajectory() = default;
    explicit Trajectory(const VelocityGrid& g) : grid(g) {}

    void push(DistributionField f) {
        if (f.grid != grid) throw validation_error("Trajectory: snapshot grid mismatch");
        if (!snaps.empty() && f.time <= snaps.back().time)
            throw validation_error("Trajectory: times must be strictly increasing");
        snaps.push_back(std::move(f));
    }

    std::size_t size() const { return snaps.size(); }
    double t_first() const { return snaps.front().time; }
    double t_last() const { return snaps.back().time; }

    // indices of saved slices with time in (t_open, t_closed]
    std::vector<std::size_t> slices_in(double t_open, double t_closed) const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < snaps.size(); ++k)
            if (snaps[k].time > t_open && snaps[k].time <= t_closed) out.push_back(k);
        return out;
    }

    // uniform save stride, 0 for single-snapshot trajectories
    double save_dt() const {
        if (snaps.size() < 2) return 0.0;
        return snaps[1].time - snaps[0].time;
    }

    // right-endpoint quadrature weights for integrals over (t_open, t_closed];
    // slice k gets the length of (max(t_{k-1}, t_open), t_k]
    std::vector<std::pair<std::size_t, double>> slice_weights(double t_open,
                                                              double t_closed) const {
        std::vector<std::pair<std::size_t, double>> out;
        double prev = t_open;
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            const double t = snaps[k].time;
            if (t <= t_open + 1e-15 || t > t_closed + 1e-12) continue;
            out.emplace_back(k, t - prev);
            prev = t;
        }
        return out;
    }
};

// Trilinear interpolation; nodes outside the grid contribute 0 (the field is
// extended by zero).  Exact on grid nodes and bounded by the stencil values.
inline double trilinear_sample(const DistributionField& f, const Vec3& v) {
    const VelocityGrid& g = f.grid;
    const double h = g.h();
    auto axis = [&](double c, int& i0, double& w) {
        double u = (c + g.L) / h;
        double fl = std::floor(u);
        i0 = static_cast<int>(fl);
        w = u - fl;
        // snap to node on exact hits so that eps=1 rescaling is bit-exact
        if (w < 1e-12) w = 0.0;
        else if (w > 1.0 - 1e-12) { w = 0.0; i0 += 1; }
    };
    int ix, iy, iz;
    double wx, wy, wz;
    axis(v.x, ix, wx);
    axis(v.y, iy, wy);
    axis(v.z, iz, wz);
    auto value = [&](int jx, int jy, int jz) -> double {
        if (jx < 0 || jy < 0 || jz < 0 || jx >= g.n || jy >= g.n || jz >= g.n) return 0.0;
        return f.values[g.index(jx, jy, jz)];
    };
    double out = 0.0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double w = (dx ? wx : 1.0 - wx) * (dy ? wy : 1.0 - wy) * (dz ? wz : 1.0 - wz);
                if (w != 0.0) out += w * value(ix + dx, iy + dy, iz + dz);
            }
    return out;
}

// Linear interpolation in time between saved snapshots (exact at saves),
// trilinear in velocity.
inline double trajectory_sample(const Trajectory& traj, double t, const Vec3& v) {
    const auto& snaps = traj.snaps;
    if (snaps.empty()) throw window_error("trajectory_sample: empty trajectory");
    if (t < snaps.front().time - 1e-12 || t > snaps.back().time + 1e-12)
        throw window_error("trajectory_sample: time " + std::to_string(t) +
                           " outside [" + std::to_string(snaps.front().time) + ", " +
                           std::to_string(snaps.back().time) + "]");
    // locate bracketing slices
    std::size_t k1 = 0;
    while (k1 + 1 < snaps.size() && snaps[k1 + 1].time <= t) ++k1;
    if (k1 + 1 == snaps.size() || std::fabs(snaps[k1].time - t) < 1e-12)
        return trilinear_sample(snaps[k1], v);
    const std::size_t k2 = k1 + 1;
    if (std::fabs(snaps[k2].time - t) < 1e-12) return trilinear_sample(snaps[k2], v);
    const double w = (t - snaps[k1].time) / (snaps[k2].time - snaps[k1].time);
    return (1.0 - w) * trilinear_sample(snaps[k1], v) + w * trilinear_sample(snaps[k2], v);
}

} // namespace landau
