#pragma once

// Zero-padded FFT transforms on a P x P grid with P = 2n. Linear
// convolutions and autocorrelations of n x n cell data have displacement
// ranges that fit the 2n residues exactly, so the circular transform
// introduces no aliasing; plans use FFTW_ESTIMATE so planning is
// deterministic for a fixed build.

#include <complex>
#include <memory>
#include <vector>

namespace kslab {

class PaddedFft {
  public:
    explicit PaddedFft(int n);
    ~PaddedFft();
    PaddedFft(const PaddedFft&) = delete;
    PaddedFft& operator=(const PaddedFft&) = delete;

    int n() const { return n_; }
    int P() const { return p_; }
    std::size_t realSize() const { return std::size_t(p_) * p_; }
    std::size_t spectrumSize() const { return std::size_t(p_) * (p_ / 2 + 1); }

    // real input is row-major P x P; output spectrum is P x (P/2+1)
    std::vector<std::complex<double>> forward(const std::vector<double>& real);
    // inverse includes the 1/P^2 normalization
    std::vector<double> inverse(const std::vector<std::complex<double>>& spec);

    // n x n row-major cells placed in the top-left corner of a P x P buffer
    std::vector<double> pad(const std::vector<double>& cells) const;

  private:
    struct Impl;
    int n_, p_;
    std::unique_ptr<Impl> impl_;
};

// pointwise a * b
std::vector<std::complex<double>> multiplySpectra(const std::vector<std::complex<double>>& a,
                                                  const std::vector<std::complex<double>>& b);
// pointwise a * conj(b) (correlation)
std::vector<std::complex<double>> multiplyConj(const std::vector<std::complex<double>>& a,
                                               const std::vector<std::complex<double>>& b);

// Residue -> signed displacement on the padded torus: r in [0, P) maps to
// [-n, n-1] without collision; the autocorrelation support [-(n-1), n-1]
// sits strictly inside.
inline int liftResidue(int r, int P) { return r < P / 2 ? r : r - P; }

} // namespace kslab
