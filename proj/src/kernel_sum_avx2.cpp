// AVX2 variants of the pairwise loops. Four targets per vector, sources
// broadcast, so each lane accumulates in the same order as the scalar
// reference. Plain mul/add only (no FMA contraction): ballCount must match
// the scalar backend bit-for-bit, and kernelSum stays directly comparable.

#include <immintrin.h>

#include "kslab/kernel.hpp"
#include "kslab/kernel_sum.hpp"

namespace kslab {

namespace {

void kernelSumAvx2(const double* tx, const double* ty, std::size_t nt,
                   const double* sx, const double* sy, const double* w,
                   std::size_t ns, double eps, double* outx, double* outy) {
    const double c = -1.0 / kTwoPi;
    const __m256d veps = _mm256_set1_pd(eps);
    std::size_t i = 0;
    for (; i + 4 <= nt; i += 4) {
        const __m256d xi = _mm256_loadu_pd(tx + i);
        const __m256d yi = _mm256_loadu_pd(ty + i);
        __m256d ax = _mm256_setzero_pd();
        __m256d ay = _mm256_setzero_pd();
        for (std::size_t j = 0; j < ns; ++j) {
            const __m256d dx = _mm256_sub_pd(xi, _mm256_set1_pd(sx[j]));
            const __m256d dy = _mm256_sub_pd(yi, _mm256_set1_pd(sy[j]));
            const __m256d r2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            const __m256d inv = _mm256_div_pd(_mm256_set1_pd(w[j]), _mm256_add_pd(r2, veps));
            ax = _mm256_add_pd(ax, _mm256_mul_pd(dx, inv));
            ay = _mm256_add_pd(ay, _mm256_mul_pd(dy, inv));
        }
        _mm256_storeu_pd(outx + i, _mm256_mul_pd(_mm256_set1_pd(c), ax));
        _mm256_storeu_pd(outy + i, _mm256_mul_pd(_mm256_set1_pd(c), ay));
    }
    for (; i < nt; ++i) { // remainder, scalar with identical op order
        double ax = 0.0, ay = 0.0;
        for (std::size_t j = 0; j < ns; ++j) {
            const double dx = tx[i] - sx[j];
            const double dy = ty[i] - sy[j];
            const double inv = w[j] / ((dx * dx + dy * dy) + eps);
            ax += dx * inv;
            ay += dy * inv;
        }
        outx[i] = c * ax;
        outy[i] = c * ay;
    }
}

void ballCountAvx2(const double* tx, const double* ty, std::size_t nt,
                   const double* sx, const double* sy, std::size_t ns,
                   double radius, std::uint64_t* out) {
    const double r2s = radius * radius;
    const __m256d r2 = _mm256_set1_pd(r2s);
    std::size_t i = 0;
    for (; i + 4 <= nt; i += 4) {
        const __m256d xi = _mm256_loadu_pd(tx + i);
        const __m256d yi = _mm256_loadu_pd(ty + i);
        __m256i count = _mm256_setzero_si256();
        const __m256i one = _mm256_set1_epi64x(1);
        for (std::size_t j = 0; j < ns; ++j) {
            const __m256d dx = _mm256_sub_pd(xi, _mm256_set1_pd(sx[j]));
            const __m256d dy = _mm256_sub_pd(yi, _mm256_set1_pd(sy[j]));
            const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            const __m256d lt = _mm256_cmp_pd(d2, r2, _CMP_LT_OQ);
            count = _mm256_add_epi64(count, _mm256_and_si256(_mm256_castpd_si256(lt), one));
        }
        alignas(32) std::uint64_t lanes[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), count);
        for (int k = 0; k < 4; ++k) out[i + k] = lanes[k];
    }
    for (; i < nt; ++i) {
        std::uint64_t count = 0;
        for (std::size_t j = 0; j < ns; ++j) {
            const double dx = tx[i] - sx[j];
            const double dy = ty[i] - sy[j];
            count += ((dx * dx) + (dy * dy)) < r2s ? 1u : 0u;
        }
        out[i] = count;
    }
}

} // namespace

const PairBackend& avx2Backend() {
    static const PairBackend be{"avx2", kernelSumAvx2, ballCountAvx2};
    return be;
}

} // namespace kslab
