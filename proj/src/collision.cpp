#include "landau/collision.hpp"

#include <cmath>

#include "landau/errors.hpp"

namespace landau {

namespace {

// matrix kernel sample with the variant's zero extension at the origin
double kernel_component(const Vec3& z, const KernelModel& m, KernelVariant variant, int a,
                        int b) {
    const double r2 = z.norm2();
    if (r2 <= 0.0) return 0.0; // pair v == w never contributes
    const double pre = kernel_prefactor(z, m, variant);
    const double pi_ab = (a == b ? 1.0 : 0.0) - z[a] * z[b] / r2;
    return pre * pi_ab;
}

} // namespace

CollisionOperator::CollisionOperator(const VelocityGrid& grid, const KernelModel& model)
    : grid_(grid), model_(model), ws_(grid) {}

void CollisionOperator::validate_resolution() const {
    // the mollification hole must not fall below the grid scale
    const double hole = 1.0 / (2.0 * model_.n_reg);
    if (hole < grid_.h() / 2.0)
        throw validation_error("CollisionOperator: kernel/grid resolution mismatch, 1/(2n)=" +
                               std::to_string(hole) + " < h/2=" +
                               std::to_string(grid_.h() / 2.0));
}

const std::array<ConvolutionWorkspace::Spectrum, 6>& CollisionOperator::matrix_spectra(
    KernelVariant v) {
    if (v == KernelVariant::mollified) validate_resolution();
    auto it = matrix_cache_.find(v);
    if (it != matrix_cache_.end()) return it->second;
    std::array<ConvolutionWorkspace::Spectrum, 6> spectra;
    const int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    for (int c = 0; c < 6; ++c) {
        const int a = pairs[c][0], b = pairs[c][1];
        spectra[c] = ws_.kernel_spectrum(
            [&](const Vec3& z) { return kernel_component(z, model_, v, a, b); });
    }
    return matrix_cache_.emplace(v, std::move(spectra)).first->second;
}

const std::array<ConvolutionWorkspace::Spectrum, 3>& CollisionOperator::drift_spectra() {
    validate_resolution();
    if (!drift_cache_) {
        std::array<ConvolutionWorkspace::Spectrum, 3> spectra;
        for (int a = 0; a < 3; ++a)
            spectra[a] = ws_.kernel_spectrum([&](const Vec3& z) {
                if (z.norm2() <= 0.0) return 0.0;
                return kernel_divergence(z, model_, DivergenceVariant::mollified)[a];
            });
        drift_cache_ = std::move(spectra);
    }
    return *drift_cache_;
}

const ConvolutionWorkspace::Spectrum& CollisionOperator::smear_spectrum() {
    validate_resolution();
    if (!smear_cache_)
        smear_cache_ =
            ws_.kernel_spectrum([&](const Vec3& z) { return kernel_dirac_smear(z, model_); });
    return *smear_cache_;
}

MatrixField CollisionOperator::diffusion_matrix(const DistributionField& f,
                                                KernelVariant variant) {
    const auto& spectra = matrix_spectra(variant);
    auto fs = ws_.forward_field(f.values);
    MatrixField A(grid_);
    ConvolutionWorkspace::Spectrum prod(ws_.spectrum_size());
    for (int c = 0; c < 6; ++c) {
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = spectra[c][i] * fs[i];
        A.comp[c] = ws_.inverse(prod);
    }
    return A;
}

fd::VectorField CollisionOperator::drift_field(const DistributionField& f) {
    const auto& spectra = drift_spectra();
    auto fs = ws_.forward_field(f.values);
    fd::VectorField b;
    ConvolutionWorkspace::Spectrum prod(ws_.spectrum_size());
    for (int a = 0; a < 3; ++a) {
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = spectra[a][i] * fs[i];
        b[a] = ws_.inverse(prod);
    }
    return b;
}

fd::Field CollisionOperator::reaction_field(const DistributionField& f) {
    auto fs = ws_.forward_field(f.values);
    const auto& sm = smear_spectrum();
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i] *= sm[i];
    return ws_.inverse(fs);
}

CollisionOperator::LogFlux CollisionOperator::log_flux(const DistributionField& f,
                                                       double floor_rel) {
    LogFlux out{fd::VectorField{}, fd::VectorField{}, MatrixField(grid_)};
    out.g = fd::log_gradient(grid_, f.values, floor_rel);
    out.A = diffusion_matrix(f, KernelVariant::mollified);

    const auto& spectra = matrix_spectra(KernelVariant::mollified);
    std::array<ConvolutionWorkspace::Spectrum, 3> fg_spec;
    {
        std::vector<double> fg(grid_.size());
        for (int a = 0; a < 3; ++a) {
            for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = f.values[i] * out.g[a][i];
            fg_spec[a] = ws_.forward_field(fg);
        }
    }

    // J_a = f * [ (A g)_a - (a * (f g))_a ]
    ConvolutionWorkspace::Spectrum acc(ws_.spectrum_size());
    for (int a = 0; a < 3; ++a) {
        std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
        for (int b = 0; b < 3; ++b)
            ConvolutionWorkspace::multiply_accumulate(acc, spectra[kSymIndex[a][b]], fg_spec[b]);
        auto conv_fg = ws_.inverse(acc);
        std::vector<double> Ja(grid_.size());
        for (std::size_t i = 0; i < Ja.size(); ++i) {
            const double Ag = out.A.comp[kSymIndex[a][0]][i] * out.g[0][i] +
                              out.A.comp[kSymIndex[a][1]][i] * out.g[1][i] +
                              out.A.comp[kSymIndex[a][2]][i] * out.g[2][i];
            Ja[i] = f.values[i] * (Ag - conv_fg[i]);
        }
        out.J[a] = std::move(Ja);
    }
    return out;
}

fd::Field CollisionOperator::collision_rhs(const DistributionField& f, RhsForm form) {
    if (form == RhsForm::nondivergence) {
        if (model_.gamma != -3.0)
            throw validation_error("collision_rhs: nondivergence form requires gamma = -3");
        const MatrixField A = diffusion_matrix(f, KernelVariant::mollified);
        fd::Field rhs = fd::matrix_hessian_contraction(grid_, A.comp, f.values);
        const fd::Field mu = reaction_field(f);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += mu[i] * f.values[i];
        return rhs;
    }
    // divergence form: div(A grad f - (div A) f), centered differences
    const MatrixField A = diffusion_matrix(f, KernelVariant::mollified);
    const fd::VectorField b = drift_field(f);
    const fd::VectorField gradf = fd::gradient(grid_, f.values);
    fd::VectorField flux;
    for (int a = 0; a < 3; ++a) {
        flux[a].assign(grid_.size(), 0.0);
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            double Agrad = 0.0;
            for (int c = 0; c < 3; ++c) Agrad += A.comp[kSymIndex[a][c]][i] * gradf[c][i];
            flux[a][i] = Agrad - b[a][i] * f.values[i];
        }
    }
    return fd::divergence(grid_, flux);
}

fd::Field CollisionOperator::pair_dissipation_density(const DistributionField& f,
                                                      const fd::VectorField& g,
                                                      KernelVariant variant) {
    // int |F(v,w)|^2 dw
    //   = f(v) [ g^T A g  -  2 g . (a*(f g))  +  sum_ab a_ab * (f g_a g_b) ](v)
    const auto& spectra = matrix_spectra(variant);
    auto fs = ws_.forward_field(f.values);

    std::array<ConvolutionWorkspace::Spectrum, 3> fg_spec;
    std::array<ConvolutionWorkspace::Spectrum, 6> fgg_spec;
    {
        std::vector<double> tmp(grid_.size());
        for (int a = 0; a < 3; ++a) {
            for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = f.values[i] * g[a][i];
            fg_spec[a] = ws_.forward_field(tmp);
        }
        const int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
        for (int c = 0; c < 6; ++c) {
            const int a = pairs[c][0], b = pairs[c][1];
            for (std::size_t i = 0; i < tmp.size(); ++i)
                tmp[i] = f.values[i] * g[a][i] * g[b][i];
            fgg_spec[c] = ws_.forward_field(tmp);
        }
    }

    ConvolutionWorkspace::Spectrum acc(ws_.spectrum_size());
    fd::Field density(grid_.size(), 0.0);

    // term 1: g^T (a*f) g  and term 2: -2 g . (a*(fg))
    for (int a = 0; a < 3; ++a) {
        std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
        for (int b = 0; b < 3; ++b)
            ConvolutionWorkspace::multiply_accumulate(acc, spectra[kSymIndex[a][b]], fg_spec[b]);
        auto conv_fg = ws_.inverse(acc);
        std::array<std::vector<double>, 3> Arow;
        for (int b = 0; b < 3; ++b) {
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] = spectra[kSymIndex[a][b]][i] * fs[i];
            Arow[b] = ws_.inverse(acc);
        }
        for (std::size_t i = 0; i < density.size(); ++i) {
            const double Ag =
                Arow[0][i] * g[0][i] + Arow[1][i] * g[1][i] + Arow[2][i] * g[2][i];
            density[i] += g[a][i] * Ag - 2.0 * g[a][i] * conv_fg[i];
        }
    }
    // term 3: sum_ab a_ab * (f g_a g_b)
    {
        std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
        const int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
        for (int c = 0; c < 6; ++c) {
            const double mult = (pairs[c][0] == pairs[c][1]) ? 1.0 : 2.0;
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] += mult * spectra[c][i] * fgg_spec[c][i];
        }
        auto conv = ws_.inverse(acc);
        for (std::size_t i = 0; i < density.size(); ++i) density[i] += conv[i];
    }
    for (std::size_t i = 0; i < density.size(); ++i) density[i] *= f.values[i];
    return density;
}

double CollisionOperator::total_dissipation(const DistributionField& f, KernelVariant variant) {
    // (1/2) iint |F|^2 dv dw = sum_v J(v) . g(v) h^3 for the log flux with
    // the same kernel variant; evaluated via the density for generality
    const auto g = fd::log_gradient(grid_, f.values);
    const auto density = pair_dissipation_density(f, g, variant);
    double total = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) total += density[i];
    return 0.5 * total * grid_.cell_volume();
}

namespace {

DissipationReport pair_sum(const DistributionField& f, const KernelModel& model,
                           KernelVariant variant, const fd::VectorField& g, int stride,
                           bool collect_samples, double floor_abs) {
    if (stride < 1) throw validation_error("dissipation_pairs: stride must be >= 1");
    const VelocityGrid& grid = f.grid;
    DissipationReport report;
    report.stride = stride;
    std::vector<std::size_t> nodes;
    for (int iz = 0; iz < grid.n; iz += stride)
        for (int iy = 0; iy < grid.n; iy += stride)
            for (int ix = 0; ix < grid.n; ix += stride) nodes.push_back(grid.index(ix, iy, iz));
    const double w_node = grid.cell_volume() * stride * stride * stride;
    double total = 0.0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const std::size_t iv = nodes[a];
        const double fv = f.values[iv];
        const Vec3 v = grid.node(iv);
        for (std::size_t b = 0; b < nodes.size(); ++b) {
            if (a == b) continue;
            const std::size_t iw = nodes[b];
            const double fw = f.values[iw];
            if (fv <= 0.0 || fw <= 0.0) continue; // F vanishes with the density
            if (fv < floor_abs || fw < floor_abs) {
                ++report.masked_pairs;
                continue;
            }
            const Vec3 w = grid.node(iw);
            const Vec3 z = v - w;
            const double pre = kernel_prefactor(z, model, variant);
            if (pre == 0.0) continue;
            const Vec3 d{g[0][iv] - g[0][iw], g[1][iv] - g[1][iw], g[2][iv] - g[2][iw]};
            // sqrt(a) d = sqrt(pre) Pi d
            const Vec3 zd = z * (z.dot(d) / z.norm2());
            const Vec3 Fd = (d - zd) * std::sqrt(pre * fv * fw);
            total += Fd.norm2() * w_node * w_node;
            if (collect_samples) report.samples.push_back({iv, iw, Fd});
        }
    }
    report.total = 0.5 * total;
    return report;
}

} // namespace

DissipationReport dissipation_pairs(const DistributionField& f, const KernelModel& model,
                                    KernelVariant variant, int stride, bool collect_samples,
                                    double floor_rel) {
    const auto g = fd::log_gradient(f.grid, f.values, floor_rel);
    const double floor_abs = floor_rel * f.max_value();
    return pair_sum(f, model, variant, g, stride, collect_samples, floor_abs);
}

DissipationReport truncated_dissipation_pairs(const DistributionField& f,
                                              const KernelModel& model, KernelVariant variant,
                                              double kappa, int stride, bool collect_samples) {
    if (kappa < 1.0)
        throw validation_error("truncated_dissipation: kappa must be >= 1");
    const auto g = fd::truncated_log_gradient(f.grid, f.values, kappa);
    return pair_sum(f, model, variant, g, stride, collect_samples, 0.0);
}

MatrixField diffusion_matrix_direct(const DistributionField& f, const KernelModel& model,
                                    KernelVariant variant) {
    const VelocityGrid& g = f.grid;
    MatrixField A(g);
    const double w = g.cell_volume();
    for (std::size_t iv = 0; iv < g.size(); ++iv) {
        const Vec3 v = g.node(iv);
        for (std::size_t iw = 0; iw < g.size(); ++iw) {
            const double fw = f.values[iw];
            if (fw == 0.0) continue;
            const Vec3 z = v - g.node(iw);
            if (z.norm2() <= 0.0) continue;
            const double pre = kernel_prefactor(z, model, variant);
            if (pre == 0.0) continue;
            const double r2 = z.norm2();
            const int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
            for (int c = 0; c < 6; ++c) {
                const int a = pairs[c][0], b = pairs[c][1];
                const double pi_ab = (a == b ? 1.0 : 0.0) - z[a] * z[b] / r2;
                A.comp[c][iv] += pre * pi_ab * fw * w;
            }
        }
    }
    return A;
}

double total_dissipation_direct(const DistributionField& f, const KernelModel& model,
                                KernelVariant variant, double floor_rel) {
    auto report = dissipation_pairs(f, model, variant, 1, false, floor_rel);
    return report.total;
}

} // namespace landau
