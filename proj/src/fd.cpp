#include "landau/fd.hpp"

#include <algorithm>
#include <cmath>

namespace landau {
namespace fd {

VectorField gradient(const VelocityGrid& g, const Field& f) {
    VectorField out{Field(g.size()), Field(g.size()), Field(g.size())};
    const double inv2h = 1.0 / (2.0 * g.h());
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const std::size_t i = g.index(ix, iy, iz);
                out[0][i] = (at(g, f, ix + 1, iy, iz) - at(g, f, ix - 1, iy, iz)) * inv2h;
                out[1][i] = (at(g, f, ix, iy + 1, iz) - at(g, f, ix, iy - 1, iz)) * inv2h;
                out[2][i] = (at(g, f, ix, iy, iz + 1) - at(g, f, ix, iy, iz - 1)) * inv2h;
            }
    return out;
}

Field divergence(const VelocityGrid& g, const VectorField& J) {
    Field out(g.size());
    const double inv2h = 1.0 / (2.0 * g.h());
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const std::size_t i = g.index(ix, iy, iz);
                out[i] = (at(g, J[0], ix + 1, iy, iz) - at(g, J[0], ix - 1, iy, iz)) * inv2h +
                         (at(g, J[1], ix, iy + 1, iz) - at(g, J[1], ix, iy - 1, iz)) * inv2h +
                         (at(g, J[2], ix, iy, iz + 1) - at(g, J[2], ix, iy, iz - 1)) * inv2h;
            }
    return out;
}

Field laplacian(const VelocityGrid& g, const Field& f) {
    Field out(g.size());
    const double invh2 = 1.0 / (g.h() * g.h());
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const std::size_t i = g.index(ix, iy, iz);
                const double c = f[i];
                out[i] = (at(g, f, ix + 1, iy, iz) + at(g, f, ix - 1, iy, iz) +
                          at(g, f, ix, iy + 1, iz) + at(g, f, ix, iy - 1, iz) +
                          at(g, f, ix, iy, iz + 1) + at(g, f, ix, iy, iz - 1) - 6.0 * c) *
                         invh2;
            }
    return out;
}

Field matrix_hessian_contraction(const VelocityGrid& g, const std::array<Field, 6>& A_comp,
                                 const Field& f) {
    Field out(g.size());
    const double h = g.h();
    const double invh2 = 1.0 / (h * h);
    const double inv4h2 = 1.0 / (4.0 * h * h);
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const std::size_t i = g.index(ix, iy, iz);
                const double c = f[i];
                const double dxx =
                    (at(g, f, ix + 1, iy, iz) - 2.0 * c + at(g, f, ix - 1, iy, iz)) * invh2;
                const double dyy =
                    (at(g, f, ix, iy + 1, iz) - 2.0 * c + at(g, f, ix, iy - 1, iz)) * invh2;
                const double dzz =
                    (at(g, f, ix, iy, iz + 1) - 2.0 * c + at(g, f, ix, iy, iz - 1)) * invh2;
                const double dxy = (at(g, f, ix + 1, iy + 1, iz) - at(g, f, ix + 1, iy - 1, iz) -
                                    at(g, f, ix - 1, iy + 1, iz) + at(g, f, ix - 1, iy - 1, iz)) *
                                   inv4h2;
                const double dxz = (at(g, f, ix + 1, iy, iz + 1) - at(g, f, ix + 1, iy, iz - 1) -
                                    at(g, f, ix - 1, iy, iz + 1) + at(g, f, ix - 1, iy, iz - 1)) *
                                   inv4h2;
                const double dyz = (at(g, f, ix, iy + 1, iz + 1) - at(g, f, ix, iy + 1, iz - 1) -
                                    at(g, f, ix, iy - 1, iz + 1) + at(g, f, ix, iy - 1, iz - 1)) *
                                   inv4h2;
                out[i] = A_comp[0][i] * dxx + A_comp[1][i] * dyy + A_comp[2][i] * dzz +
                         2.0 * (A_comp[3][i] * dxy + A_comp[4][i] * dxz + A_comp[5][i] * dyz);
            }
    return out;
}

VectorField log_gradient(const VelocityGrid& g, const Field& f, double floor_rel) {
    const double peak = *std::max_element(f.begin(), f.end());
    const double floor = std::max(floor_rel * peak, 1e-300);
    Field lnf(g.size());
    for (std::size_t i = 0; i < f.size(); ++i) lnf[i] = std::log(std::max(f[i], floor));
    // centered in the interior; one-sided at the boundary (ln f has no
    // meaningful zero extension)
    VectorField out{Field(g.size()), Field(g.size()), Field(g.size())};
    const double h = g.h();
    const long sx = 1;
    const long sy = g.n;
    const long sz = static_cast<long>(g.n) * g.n;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const long i = static_cast<long>(g.index(ix, iy, iz));
                auto axis_diff = [&](int pos, long stride) {
                    int lo = -1, hi = 1;
                    if (pos == 0) lo = 0;
                    if (pos == g.n - 1) hi = 0;
                    return (lnf[i + hi * stride] - lnf[i + lo * stride]) / ((hi - lo) * h);
                };
                out[0][i] = axis_diff(ix, sx);
                out[1][i] = axis_diff(iy, sy);
                out[2][i] = axis_diff(iz, sz);
            }
    return out;
}

VectorField truncated_log_gradient(const VelocityGrid& g, const Field& f, double kappa) {
    Field lnp(g.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        lnp[i] = f[i] > kappa ? std::log(f[i] / kappa) : 0.0;
    return gradient(g, lnp);
}

} // namespace fd
} // namespace landau
