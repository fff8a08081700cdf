#include "kslab/kernel_sum.hpp"

#include <cstdlib>
#include <cstring>

namespace kslab {

namespace {

const PairBackend& pickBackend() {
    const char* env = std::getenv("KSLAB_SIMD");
    if (env) {
        if (const PairBackend* be = backendByName(env)) return *be;
        // unknown or unavailable name: fall through to auto selection
    }
#ifdef KSLAB_HAVE_AVX2_TU
    if (__builtin_cpu_supports("avx2")) return avx2Backend();
#endif
    return scalarBackend();
}

} // namespace

const PairBackend& activeBackend() {
    static const PairBackend& be = pickBackend();
    return be;
}

const PairBackend* backendByName(std::string_view name) {
    if (name == "scalar") return &scalarBackend();
#ifdef KSLAB_HAVE_AVX2_TU
    if (name == "avx2" && __builtin_cpu_supports("avx2")) return &avx2Backend();
#endif
    return nullptr;
}

std::vector<Vec2> kernelSumAt(const std::vector<Vec2>& targets,
                              const std::vector<Vec2>& sources,
                              const std::vector<double>& weights, double eps,
                              const PairBackend& be) {
    const std::size_t nt = targets.size(), ns = sources.size();
    std::vector<double> tx(nt), ty(nt), sx(ns), sy(ns), ox(nt), oy(nt);
    for (std::size_t i = 0; i < nt; ++i) { tx[i] = targets[i].x; ty[i] = targets[i].y; }
    for (std::size_t j = 0; j < ns; ++j) { sx[j] = sources[j].x; sy[j] = sources[j].y; }
    be.kernelSum(tx.data(), ty.data(), nt, sx.data(), sy.data(), weights.data(), ns,
                 eps, ox.data(), oy.data());
    std::vector<Vec2> out(nt);
    for (std::size_t i = 0; i < nt; ++i) out[i] = {ox[i], oy[i]};
    return out;
}

std::vector<std::uint64_t> ballCountAt(const std::vector<Vec2>& targets,
                                       const std::vector<Vec2>& sources, double radius,
                                       const PairBackend& be) {
    const std::size_t nt = targets.size(), ns = sources.size();
    std::vector<double> tx(nt), ty(nt), sx(ns), sy(ns);
    for (std::size_t i = 0; i < nt; ++i) { tx[i] = targets[i].x; ty[i] = targets[i].y; }
    for (std::size_t j = 0; j < ns; ++j) { sx[j] = sources[j].x; sy[j] = sources[j].y; }
    std::vector<std::uint64_t> out(nt);
    be.ballCount(tx.data(), ty.data(), nt, sx.data(), sy.data(), ns, radius, out.data());
    return out;
}

} // namespace kslab
