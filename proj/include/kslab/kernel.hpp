#pragma once

// Attraction kernel K(z) = -z / (2 pi |z|^2), K(0) = 0, and its bounded
// regularization K_eps(z) = -z / (2 pi (|z|^2 + eps)), eps in (0,1].

#include <cmath>
#include <stdexcept>

#include "kslab/vec2.hpp"

namespace kslab {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEightPi = 8.0 * kPi;

struct KernelParams {
    double epsilon = 1.0; // 0 allowed only for pointwise K evaluation

    explicit KernelParams(double eps) : epsilon(eps) {
        if (!(eps >= 0.0 && eps <= 1.0))
            throw std::domain_error("KernelParams: epsilon must lie in [0,1]");
    }
};

inline void requireEps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::domain_error("kernel: eps must lie in (0,1]");
}

inline Vec2 evalK(const Vec2& z) {
    const double r2 = z.norm2();
    if (r2 == 0.0) return {0.0, 0.0};
    const double s = -1.0 / (kTwoPi * r2);
    return {s * z.x, s * z.y};
}

inline Vec2 evalKEps(const Vec2& z, double eps) {
    requireEps(eps);
    const double s = -1.0 / (kTwoPi * (z.norm2() + eps));
    return {s * z.x, s * z.y};
}

// |K_eps| peaks at |z| = sqrt(eps) with value 1 / (4 pi sqrt(eps)).
inline double kernelMaxNorm(double eps) {
    requireEps(eps);
    return 1.0 / (4.0 * kPi * std::sqrt(eps));
}

// |z| * |K(z) - K_eps(z)|; equals eps / (2 pi (eps + |z|^2)) identically.
// Returned value is the measured difference; closedForm receives the formula.
inline double kernelGap(const Vec2& z, double eps, double* closedForm = nullptr) {
    requireEps(eps);
    const double r2 = z.norm2();
    if (r2 == 0.0) throw std::domain_error("kernelGap: z must be nonzero");
    const Vec2 d = evalK(z) - evalKEps(z, eps);
    const double measured = std::sqrt(r2) * d.norm();
    if (closedForm) *closedForm = eps / (kTwoPi * (eps + r2));
    return measured;
}

// Debug-level bound certificates, toggleable by callers (checked in tests and
// in the `check kernels` suite; solvers skip them in release paths).
struct KernelBoundReport {
    double scaledNorm;   // |z| |K_eps(z)|, must be <= 1/(2 pi)
    double gap;          // |z| |K - K_eps|
    double gapClosed;    // eps / (2 pi (eps + |z|^2))
    double boundMinForm; // min(1, eps/|z|^2) / (2 pi)
    double boundGammaForm; // eps^{1-g/2} |z|^{g-2} / (2 pi)
    double boundLogForm; // log(1+|z|^-2) / (2 pi log(1+1/eps))
};

inline KernelBoundReport kernelBounds(const Vec2& z, double eps, double gamma) {
    KernelBoundReport rep{};
    const double r2 = z.norm2();
    rep.scaledNorm = std::sqrt(r2) * evalKEps(z, eps).norm();
    rep.gap = kernelGap(z, eps, &rep.gapClosed);
    rep.boundMinForm = std::min(1.0, eps / r2) / kTwoPi;
    rep.boundGammaForm = std::pow(eps, 1.0 - gamma / 2.0) * std::pow(r2, gamma / 2.0 - 1.0) / kTwoPi;
    rep.boundLogForm = std::log1p(1.0 / r2) / (kTwoPi * std::log1p(1.0 / eps));
    return rep;
}

} // namespace kslab
