#include "kslab/kernel_sum.hpp"

#include "kslab/kernel.hpp"

namespace kslab {

namespace {

void kernelSumScalar(const double* tx, const double* ty, std::size_t nt,
                     const double* sx, const double* sy, const double* w,
                     std::size_t ns, double eps, double* outx, double* outy) {
    const double c = -1.0 / kTwoPi;
    for (std::size_t i = 0; i < nt; ++i) {
        double ax = 0.0, ay = 0.0;
        const double xi = tx[i], yi = ty[i];
        for (std::size_t j = 0; j < ns; ++j) {
            const double dx = xi - sx[j];
            const double dy = yi - sy[j];
            const double inv = w[j] / ((dx * dx + dy * dy) + eps);
            ax += dx * inv;
            ay += dy * inv;
        }
        outx[i] = c * ax;
        outy[i] = c * ay;
    }
}

void ballCountScalar(const double* tx, const double* ty, std::size_t nt,
                     const double* sx, const double* sy, std::size_t ns,
                     double radius, std::uint64_t* out) {
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < nt; ++i) {
        std::uint64_t count = 0;
        const double xi = tx[i], yi = ty[i];
        for (std::size_t j = 0; j < ns; ++j) {
            const double dx = xi - sx[j];
            const double dy = yi - sy[j];
            count += ((dx * dx) + (dy * dy)) < r2 ? 1u : 0u;
        }
        out[i] = count;
    }
}

} // namespace

const PairBackend& scalarBackend() {
    static const PairBackend be{"scalar", kernelSumScalar, ballCountScalar};
    return be;
}

} // namespace kslab
