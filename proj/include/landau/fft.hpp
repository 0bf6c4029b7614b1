#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

// Linear (non-circular) discrete convolution on the velocity grid via FFT:
// padding to (2n)^3 removes wraparound, so the fast path reproduces the
// direct pair sum up to roundoff.  Results carry the quadrature weight h^3:
//   convolve(K, f)(v) = sum_w K(v - w) f(w) h^3.
class ConvolutionWorkspace {
public:
    using Spectrum = std::vector<std::complex<double>>;

    explicit ConvolutionWorkspace(const VelocityGrid& grid);
    ~ConvolutionWorkspace();
    ConvolutionWorkspace(const ConvolutionWorkspace&) = delete;
    ConvolutionWorkspace& operator=(const ConvolutionWorkspace&) = delete;

    const VelocityGrid& grid() const { return grid_; }

    // FFT of the zero-padded field
    Spectrum forward_field(const std::vector<double>& field);

    // FFT of a kernel sampled at signed offsets (h^3 folded in);
    // sample(offset) with offset components in (-2L, 2L)
    Spectrum kernel_spectrum(const std::function<double(const Vec3&)>& sample);

    // inverse FFT, restricted to the n^3 block
    std::vector<double> inverse(const Spectrum& spec);

    // pointwise multiply-accumulate: acc += a * b
    static void multiply_accumulate(Spectrum& acc, const Spectrum& a, const Spectrum& b);

    std::size_t spectrum_size() const { return spec_size_; }

private:
    VelocityGrid grid_;
    int m_;                 // padded extent 2n
    std::size_t spec_size_; // m*m*(m/2+1)
    double* rbuf_;
    std::complex<double>* cbuf_;
    void* plan_fwd_;
    void* plan_inv_;
};

// One-shot convolution helper for diagnostics paths.
std::vector<double> fft_convolve(const VelocityGrid& grid,
                                 const std::function<double(const Vec3&)>& kernel,
                                 const std::vector<double>& field);

} // namespace landau
