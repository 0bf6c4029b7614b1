#pragma once

#include <cmath>
#include <string>

#include "landau/errors.hpp"
#include "landau/vec3.hpp"

namespace landau {

// Smooth transition X: equal to 0 on (-inf,1/2], to 1 on [1,+inf), with
// 0 <= X' <= 3.  The slope profile ramps up to its plateau value 3 with
// C^1 joints, so X is C^2.
namespace detail {
inline double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
inline double smoothstep_primitive(double u) { return u * u * u - 0.5 * u * u * u * u; }

// slope profile on s in [0,1]; plateau 1 on [1/3,2/3]
inline double slope_profile(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (s < 1.0 / 3.0) return smoothstep(3.0 * s);
    if (s <= 2.0 / 3.0) return 1.0;
    return smoothstep(3.0 * (1.0 - s));
}

inline double slope_profile_primitive(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 2.0 / 3.0;
    if (s < 1.0 / 3.0) return smoothstep_primitive(3.0 * s) / 3.0;
    if (s <= 2.0 / 3.0) return 1.0 / 6.0 + (s - 1.0 / 3.0);
    return 0.5 + (0.5 - smoothstep_primitive(3.0 * (1.0 - s))) / 3.0;
}
} // namespace detail

inline double cutoff_X(double r) {
    if (r <= 0.5) return 0.0;
    if (r >= 1.0) return 1.0;
    const double s = 2.0 * (r - 0.5);
    return 1.5 * detail::slope_profile_primitive(s);
}

inline double cutoff_X_prime(double r) {
    if (r <= 0.5 || r >= 1.0) return 0.0;
    const double s = 2.0 * (r - 0.5);
    return 3.0 * detail::slope_profile(s);
}

// Power-law collision kernel a(z) = k(|z|)/|z| * Pi(z) with k(r) = r^{gamma+3},
// together with its mollified (index n) and short/long-range (radius delta)
// variants.
struct KernelModel {
    double gamma = -3.0; // in [-3,-2)
    double delta = 0.25; // split radius, in (0,1)
    double n_reg = 1.0;  // mollification index, >= 1; a_n vanishes for |z| <= 1/(2n)

    KernelModel() = default;
    KernelModel(double gamma_, double delta_, double n_reg_)
        : gamma(gamma_), delta(delta_), n_reg(n_reg_) {
        validate();
    }

    void validate() const {
        if (!(gamma >= -3.0 && gamma < -2.0))
            throw validation_error("KernelModel: gamma must lie in [-3,-2), got " +
                                   std::to_string(gamma));
        if (!(delta > 0.0 && delta < 1.0))
            throw validation_error("KernelModel: delta must lie in (0,1), got " +
                                   std::to_string(delta));
        if (!(n_reg >= 1.0))
            throw validation_error("KernelModel: n_reg must be >= 1, got " +
                                   std::to_string(n_reg));
    }

    double k(double r) const {
        if (r <= 0.0) return k0();
        return std::pow(r, gamma + 3.0);
    }
    double k_prime(double r) const {
        if (gamma == -3.0) return 0.0;
        return (gamma + 3.0) * std::pow(r, gamma + 2.0);
    }
    // k(0) as the r->0 limit of r^{gamma+3}: 1 in the borderline case
    // gamma=-3 (where the Dirac term of the hessian survives), 0 otherwise.
    double k0() const { return gamma == -3.0 ? 1.0 : 0.0; }

    double gamma_star() const { return -(gamma + 2.0); }
};

enum class KernelVariant { full, mollified, in_part, out_part };
enum class DivergenceVariant { full, mollified, out_part, in_part_mollified };
enum class HessianVariant { out_part, in_part_mollified };

inline Mat3 projection_matrix(const Vec3& z) {
    const double n2 = z.norm2();
    if (n2 <= 0.0) throw window_error("projection_matrix: z must be nonzero");
    return Mat3::identity() - Mat3::outer(z, z) * (1.0 / n2);
}

// The scalar in front of Pi(z) for each variant; 0 at z=0 for the variants
// that extend by zero there.
inline double kernel_prefactor(const Vec3& z, const KernelModel& m, KernelVariant variant) {
    const double r = z.norm();
    if (r <= 0.0) {
        if (variant == KernelVariant::mollified || variant == KernelVariant::out_part)
            return 0.0;
        throw window_error("kernel_matrix: z=0 is outside the kernel domain");
    }
    const double base = m.k(r) / r;
    switch (variant) {
        case KernelVariant::full: return base;
        case KernelVariant::mollified: return cutoff_X(m.n_reg * r) * base;
        case KernelVariant::in_part: return (1.0 - cutoff_X(r / m.delta)) * base;
        case KernelVariant::out_part: return cutoff_X(r / m.delta) * base;
    }
    return 0.0;
}

inline Mat3 kernel_matrix(const Vec3& z, const KernelModel& m, KernelVariant variant) {
    const double r = z.norm();
    if (r <= 0.0) {
        if (variant == KernelVariant::mollified || variant == KernelVariant::out_part)
            return Mat3{};
        throw window_error("kernel_matrix: z=0 is outside the kernel domain");
    }
    return projection_matrix(z) * kernel_prefactor(z, m, variant);
}

inline Mat3 kernel_sqrt(const Vec3& z, const KernelModel& m) {
    const double r = z.norm();
    if (r <= 0.0) throw window_error("kernel_sqrt: z=0 is outside the kernel domain");
    return projection_matrix(z) * std::sqrt(m.k(r) / r);
}

// Divergence of the matrix columns, (div a)_i = sum_j d_j a_ij.
// full:              k(|z|) grad(2/|z|) = -2 k(|z|) z / |z|^3
// out_part:          same times X(|z|/delta)
// in_part_mollified: same times X(n|z|)(1 - X(|z|/delta))
inline Vec3 kernel_divergence(const Vec3& z, const KernelModel& m, DivergenceVariant variant) {
    const double r = z.norm();
    if (r <= 0.0) throw window_error("kernel_divergence: z=0 is outside the kernel domain");
    double factor = 1.0;
    switch (variant) {
        case DivergenceVariant::full: break;
        case DivergenceVariant::mollified: factor = cutoff_X(m.n_reg * r); break;
        case DivergenceVariant::out_part: factor = cutoff_X(r / m.delta); break;
        case DivergenceVariant::in_part_mollified:
            factor = cutoff_X(m.n_reg * r) * (1.0 - cutoff_X(r / m.delta));
            break;
    }
    return z * (-2.0 * m.k(r) * factor / (r * r * r));
}

// Absolutely continuous part of sum_ij d_i d_j a_ij for the cut variants.
// The Dirac mass that the full kernel carries at the origin (weight
// -8 pi k(0)) is never represented on a grid; diagnostics that need it add
// the explicit scalar 8 pi k(0) kappa out of band.
inline double kernel_hessian_trace(const Vec3& z, const KernelModel& m, HessianVariant variant) {
    const double r = z.norm();
    if (r <= 0.0) throw window_error("kernel_hessian_trace: z=0 is outside the kernel domain");
    switch (variant) {
        case HessianVariant::out_part:
            return -2.0 *
                   (m.k_prime(r) * cutoff_X(r / m.delta) +
                    m.k(r) / m.delta * cutoff_X_prime(r / m.delta)) /
                   (r * r);
        case HessianVariant::in_part_mollified: {
            if (m.delta <= 2.0 / m.n_reg)
                throw validation_error(
                    "kernel_hessian_trace(in_part_mollified): requires delta > 2/n_reg");
            const double xn = cutoff_X(m.n_reg * r);
            const double xd = cutoff_X(r / m.delta);
            const double term = -m.k_prime(r) * xn * (1.0 - xd) -
                                m.k(r) * m.n_reg * cutoff_X_prime(m.n_reg * r) +
                                m.k(r) / m.delta * cutoff_X_prime(r / m.delta);
            return term * 2.0 / (r * r);
        }
    }
    return 0.0;
}

// Smeared replacement of the Dirac part of -hess:a for the mollified kernel:
// mu_n(z) = -(hess : a_n)(z) restricted to its absolutely continuous part,
//         = 2 (k(r) X(n r))' / r^2 ... = 2(k' X(nr) + k n X'(nr)) / r^2.
// Integrates to 8 pi k(infty-limit cutoff mass); for gamma=-3 its total mass
// is exactly 8 pi, matching the quadratic term of the Coulomb form.
inline double kernel_dirac_smear(const Vec3& z, const KernelModel& m) {
    const double r = z.norm();
    if (r <= 0.0) return 0.0;
    const double kd = m.k_prime(r) * cutoff_X(m.n_reg * r) +
                      m.k(r) * m.n_reg * cutoff_X_prime(m.n_reg * r);
    return 2.0 * kd / (r * r);
}

// Recommended mollification index for spacing h: aims at 1/n = 3h, clamped to
// the validity range [1, 1/h] (the hard resolution requirement is
// 1/(2n) >= h/2).
inline double recommended_n_reg(double h) {
    double n = 1.0 / (3.0 * h);
    if (n < 1.0) n = 1.0;
    if (n > 1.0 / h) n = 1.0 / h;
    return n;
}

} // namespace landau
