#pragma once

#include <string>
#include <vector>

#include "landau/grid.hpp"
#include "landau/kernel.hpp"
#include "landau/scaling.hpp"

namespace landau {

struct Axis {
    Vec3 base{};              // a point on the axis
    Vec3 direction{0, 0, 1};  // unit vector

    void validate() const;
    // cylindrical coordinates of v relative to the axis: (rho, z)
    std::pair<double, double> cylindrical(const Vec3& v) const;
    // orthonormal frame (e1, e2) spanning the plane orthogonal to direction
    std::pair<Vec3, Vec3> frame() const;
};

// 2-D profile F(rho, z) with rho in [0, rho_max) (n_rho cells of width
// drho = rho_max/n_rho, nodes at i*drho) and z in [-z_half, z_half)
// (nodes at -z_half + j*dz).  Flat index i_rho + n_rho * i_z.
struct AxisymField {
    Axis axis;
    int n_rho = 0, n_z = 0;
    double rho_max = 0.0, z_half = 0.0;
    double time = 0.0;
    std::vector<double> values;

    double drho() const { return rho_max / n_rho; }
    double dz() const { return 2.0 * z_half / n_z; }
    double rho_coord(int i) const { return i * drho(); }
    double z_coord(int j) const { return -z_half + j * dz(); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_rho) * j;
    }
    // bilinear sample, zero outside; reflection across rho=0 for rho<0 queries
    double sample(double rho, double z) const;
};

struct ReduceResult {
    AxisymField field;
    double residual = 0.0; // max over circles of (max - min)/global scale
};

ReduceResult cylindrical_reduce(const DistributionField& f, const Axis& axis, int n_rho,
                                int n_z, double rho_max, double z_half, int n_angles = 64);

DistributionField axisym_reconstruct(const AxisymField& F, const VelocityGrid& grid);

// binary 2-D snapshot, magic "LNDA"
namespace axisym_io {
std::vector<std::uint8_t> encode(const AxisymField& f);
AxisymField decode(const std::uint8_t* data, std::size_t size);
void write_file(const AxisymField& f, const std::string& path);
AxisymField read_file(const std::string& path);
} // namespace axisym_io

// ---------------------------------------------------------------------------
// angular interaction integral
// exact:  int_0^pi 1{A^2 + 2 B^2 (1-cos t) <= s0^2} / sqrt(A^2 + 2B^2(1-cos t)) dt
// bound:  (pi / 2B) (ln 2 + ln_+(s0 / A))
enum class AngularMode { exact_quadrature, arsinh_bound };
double angular_interaction_integral(double A, double B, double sigma0, AngularMode mode);

// ---------------------------------------------------------------------------
// long-range interaction bound (axisymmetric fields off the axis)

struct LongRangeResult {
    double measured_sup = 0.0;  // sup over Q_1 of f_eps * 1/|.|
    double analytic_bound = 0.0;   // (C*/rho0) sup_t int f (1 + ln_+ f) + C* rho0^2
    double sup_f_log = 0.0;     // the sup_t int f (1 + ln_+ f) factor
    double rho0 = 0.0;
};

inline constexpr double kLongRangeConstant = 8.0 * M_SQRT2 * M_PI * M_PI; // 8 sqrt(2) pi^2

LongRangeResult long_range_bound(const Trajectory& traj, double t0, const Vec3& v0, double eps,
                                 const Axis& axis, int target_n = 32);

// ---------------------------------------------------------------------------
// improved integrability of the 2-D profile away from the axis

struct AxisymSeries {
    std::vector<AxisymField> fields; // strictly increasing times
    std::vector<std::pair<std::size_t, double>> slice_weights(double t_open,
                                                              double t_closed) const;
};

struct IntegrabilityResult {
    double l2_norm = 0.0;    // ||F||_{L2} over the 2-D cylinder
    double bound_path = 0.0; // (2 pi rho0)^{-1} (L2_t L1 norms of F and grad F)
};

// 2-D cylinder (t0 - r^2, t0] x {|(rho,z) - V0| < r}; requires V0_rho - r >= rho0 > 0
IntegrabilityResult improved_integrability(const AxisymSeries& series, double t0, double V0_rho,
                                           double V0_z, double r, double rho0);

// ---------------------------------------------------------------------------
// off-axis regularity criterion (epsilon-ladder search)

struct OffAxisParams {
    double eta_DG = 0.5;
    int target_n = 32;
    int max_rungs = 6;
    double sup_slack = 0.1;
};

struct OffAxisRung {
    double eps = 0.0;
    bool resolved = false;
    double direct_q3 = 0.0;     // iint_{Q_3} f_eps^2
    double shell_bound = 0.0;   // 3 pi (rho0+3)/rho0 x shell integral
    double Z0 = 0.0;
    double hypothesis = 0.0;
    double threshold = 0.0;
    bool certified = false;
};

struct OffAxisVerdict {
    double rho0 = 0.0;
    double save_dt = 0.0; // temporal resolution of every esssup surrogate
    std::vector<OffAxisRung> rungs;
    bool certified = false;
};

OffAxisVerdict off_axis_criterion(const Trajectory& traj, double t0, const Vec3& v0,
                                  const Axis& axis, const KernelModel& model,
                                  const OffAxisParams& params = {});

} // namespace landau
