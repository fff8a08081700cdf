#include "kslab/fft_conv.hpp"

#include <cstring>
#include <stdexcept>

#include <fftw3.h>

namespace kslab {

struct PaddedFft::Impl {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PaddedFft::PaddedFft(int n) : n_(n), p_(2 * n), impl_(new Impl) {
    if (n < 2) throw std::invalid_argument("PaddedFft: n >= 2 required");
    impl_->real = fftw_alloc_real(realSize());
    impl_->cplx = fftw_alloc_complex(spectrumSize());
    impl_->fwd = fftw_plan_dft_r2c_2d(p_, p_, impl_->real, impl_->cplx, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_c2r_2d(p_, p_, impl_->cplx, impl_->real, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("PaddedFft: planning failed");
}

PaddedFft::~PaddedFft() {
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->real);
    fftw_free(impl_->cplx);
}

std::vector<std::complex<double>> PaddedFft::forward(const std::vector<double>& real) {
    if (real.size() != realSize()) throw std::invalid_argument("PaddedFft::forward: size");
    std::memcpy(impl_->real, real.data(), realSize() * sizeof(double));
    fftw_execute(impl_->fwd);
    std::vector<std::complex<double>> out(spectrumSize());
    std::memcpy(reinterpret_cast<double*>(out.data()), impl_->cplx,
                spectrumSize() * sizeof(fftw_complex));
    return out;
}

std::vector<double> PaddedFft::inverse(const std::vector<std::complex<double>>& spec) {
    if (spec.size() != spectrumSize()) throw std::invalid_argument("PaddedFft::inverse: size");
    std::memcpy(impl_->cplx, reinterpret_cast<const double*>(spec.data()),
                spectrumSize() * sizeof(fftw_complex));
    fftw_execute(impl_->bwd);
    std::vector<double> out(realSize());
    const double scale = 1.0 / (double(p_) * double(p_));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = impl_->real[k] * scale;
    return out;
}

std::vector<double> PaddedFft::pad(const std::vector<double>& cells) const {
    if (cells.size() != std::size_t(n_) * n_) throw std::invalid_argument("PaddedFft::pad: size");
    std::vector<double> out(realSize(), 0.0);
    for (int iy = 0; iy < n_; ++iy)
        std::memcpy(out.data() + std::size_t(iy) * p_, cells.data() + std::size_t(iy) * n_,
                    std::size_t(n_) * sizeof(double));
    return out;
}

std::vector<std::complex<double>> multiplySpectra(const std::vector<std::complex<double>>& a,
                                                  const std::vector<std::complex<double>>& b) {
    std::vector<std::complex<double>> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

std::vector<std::complex<double>> multiplyConj(const std::vector<std::complex<double>>& a,
                                               const std::vector<std::complex<double>>& b) {
    std::vector<std::complex<double>> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * std::conj(b[k]);
    return out;
}

} // namespace kslab
