#pragma once

// Hot pairwise loops behind a runtime-dispatched backend: a scalar reference
// implementation and an AVX2 variant selected at startup (overridable with
// KSLAB_SIMD=scalar|avx2). Both backends consume SoA buffers.
//
// kernelSum:  out[i] = sum_j w[j] * K_eps(t[i] - s[j]); a source coinciding
//             with its target contributes exactly zero (K_eps(0) = 0).
// ballCount:  out[i] = #{ j : |t[i] - s[j]| < radius }  (open ball).
//             No fused ops on this path, so backends agree bit-for-bit.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "kslab/vec2.hpp"

namespace kslab {

using KernelSumFn = void (*)(const double* tx, const double* ty, std::size_t nt,
                             const double* sx, const double* sy, const double* w,
                             std::size_t ns, double eps, double* outx, double* outy);
using BallCountFn = void (*)(const double* tx, const double* ty, std::size_t nt,
                             const double* sx, const double* sy, std::size_t ns,
                             double radius, std::uint64_t* out);

struct PairBackend {
    const char* name;
    KernelSumFn kernelSum;
    BallCountFn ballCount;
};

const PairBackend& scalarBackend();
#ifdef KSLAB_HAVE_AVX2_TU
const PairBackend& avx2Backend();
#endif

// Backend chosen from CPU features and the KSLAB_SIMD override.
const PairBackend& activeBackend();
// Lookup by name ("scalar", "avx2"); nullptr when absent in this build.
const PairBackend* backendByName(std::string_view name);

// Convenience wrappers (AoS in, AoS out) used by the solvers.
std::vector<Vec2> kernelSumAt(const std::vector<Vec2>& targets,
                              const std::vector<Vec2>& sources,
                              const std::vector<double>& weights, double eps,
                              const PairBackend& be = activeBackend());
std::vector<std::uint64_t> ballCountAt(const std::vector<Vec2>& targets,
                                       const std::vector<Vec2>& sources, double radius,
                                       const PairBackend& be = activeBackend());

} // namespace kslab
