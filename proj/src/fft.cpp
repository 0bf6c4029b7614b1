#include "landau/fft.hpp"

#include <fftw3.h>

#include <cstring>

namespace landau {

ConvolutionWorkspace::ConvolutionWorkspace(const VelocityGrid& grid) : grid_(grid) {
    m_ = 2 * grid.n;
    spec_size_ = static_cast<std::size_t>(m_) * m_ * (m_ / 2 + 1);
    const std::size_t real_size = static_cast<std::size_t>(m_) * m_ * m_;
    rbuf_ = fftw_alloc_real(real_size);
    cbuf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(spec_size_));
    // plans are created on the persistent buffers and always executed there
    plan_fwd_ = fftw_plan_dft_r2c_3d(m_, m_, m_, rbuf_,
                                     reinterpret_cast<fftw_complex*>(cbuf_), FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_3d(m_, m_, m_, reinterpret_cast<fftw_complex*>(cbuf_),
                                     rbuf_, FFTW_ESTIMATE);
}

ConvolutionWorkspace::~ConvolutionWorkspace() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(rbuf_);
    fftw_free(cbuf_);
}

ConvolutionWorkspace::Spectrum ConvolutionWorkspace::forward_field(
    const std::vector<double>& field) {
    const int n = grid_.n;
    const std::size_t real_size = static_cast<std::size_t>(m_) * m_ * m_;
    std::memset(rbuf_, 0, real_size * sizeof(double));
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy) {
            const std::size_t src = grid_.index(0, iy, iz);
            const std::size_t dst =
                (static_cast<std::size_t>(iz) * m_ + iy) * m_;
            std::memcpy(rbuf_ + dst, field.data() + src, n * sizeof(double));
        }
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    return Spectrum(cbuf_, cbuf_ + spec_size_);
}

ConvolutionWorkspace::Spectrum ConvolutionWorkspace::kernel_spectrum(
    const std::function<double(const Vec3&)>& sample) {
    const double h = grid_.h();
    const double w = grid_.cell_volume();
    for (int iz = 0; iz < m_; ++iz) {
        const int sz = (iz < m_ / 2) ? iz : iz - m_;
        for (int iy = 0; iy < m_; ++iy) {
            const int sy = (iy < m_ / 2) ? iy : iy - m_;
            for (int ix = 0; ix < m_; ++ix) {
                const int sx = (ix < m_ / 2) ? ix : ix - m_;
                const Vec3 offset{sx * h, sy * h, sz * h};
                rbuf_[(static_cast<std::size_t>(iz) * m_ + iy) * m_ + ix] =
                    w * sample(offset);
            }
        }
    }
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    return Spectrum(cbuf_, cbuf_ + spec_size_);
}

std::vector<double> ConvolutionWorkspace::inverse(const Spectrum& spec) {
    std::memcpy(cbuf_, spec.data(), spec_size_ * sizeof(std::complex<double>));
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    const int n = grid_.n;
    const double norm = 1.0 / (static_cast<double>(m_) * m_ * m_);
    std::vector<double> out(grid_.size());
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy) {
            const std::size_t dst = grid_.index(0, iy, iz);
            const std::size_t src = (static_cast<std::size_t>(iz) * m_ + iy) * m_;
            for (int ix = 0; ix < n; ++ix) out[dst + ix] = rbuf_[src + ix] * norm;
        }
    return out;
}

void ConvolutionWorkspace::multiply_accumulate(Spectrum& acc, const Spectrum& a,
                                               const Spectrum& b) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a[i] * b[i];
}

std::vector<double> fft_convolve(const VelocityGrid& grid,
                                 const std::function<double(const Vec3&)>& kernel,
                                 const std::vector<double>& field) {
    ConvolutionWorkspace ws(grid);
    auto kf = ws.kernel_spectrum(kernel);
    auto ff = ws.forward_field(field);
    for (std::size_t i = 0; i < kf.size(); ++i) kf[i] *= ff[i];
    return ws.inverse(kf);
}

} // namespace landau
