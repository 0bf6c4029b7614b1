#pragma once

#include <array>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

// Centered finite differences on a velocity grid; the field is extended by
// zero outside [-L, L)^3.
namespace fd {

using Field = std::vector<double>;
using VectorField = std::array<Field, 3>;

inline double at(const VelocityGrid& g, const Field& f, int ix, int iy, int iz) {
    if (ix < 0 || iy < 0 || iz < 0 || ix >= g.n || iy >= g.n || iz >= g.n) return 0.0;
    return f[g.index(ix, iy, iz)];
}

VectorField gradient(const VelocityGrid& g, const Field& f);
Field divergence(const VelocityGrid& g, const VectorField& J);
Field laplacian(const VelocityGrid& g, const Field& f);

// sum_ij A_ij d_i d_j f with centered second differences (mixed terms use the
// four-point formula)
Field matrix_hessian_contraction(const VelocityGrid& g,
                                 const std::array<Field, 6>& A_comp, const Field& f);

// log-gradient with relative floor: grad of ln(max(f, floor_rel * max f))
VectorField log_gradient(const VelocityGrid& g, const Field& f, double floor_rel = 1e-30);

// gradient of ln_+(f/kappa) (zero wherever f <= kappa)
VectorField truncated_log_gradient(const VelocityGrid& g, const Field& f, double kappa);

} // namespace fd

// symmetric component order for 3x3 matrix fields
inline constexpr int kSymIndex[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};

} // namespace landau
