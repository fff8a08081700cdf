#pragma once

// Triangle-edge inequality machinery: for X + Y + Z = 0 and nonincreasing
// positive radial weights, the bilinear form Delta is nonnegative, with the
// refined lower bound [phi(|X|)-phi(|Y|)][psi(|X|)-psi(|Y|)]|X|^2 after
// sorting |X| <= |Y| <= |Z|. The G_eps triple functional is the instance
// with phi = L(r^2), psi = 1/(r^2+eps) driving the critical-case estimate.

#include <cstdint>
#include <vector>

#include "kslab/ensemble.hpp"
#include "kslab/vec2.hpp"

namespace kslab {

// Registered nonincreasing (0,inf) -> (0,inf) families, the instances the
// estimates actually use.
struct MonotoneFn {
    enum class Kind {
        InversePower,     // r^-p, p in (0,2]
        InvSquarePlusEps, // 1/(r^2 + eps)
        ShiftedPower,     // (a + r^2)^(gamma/2 - 1), gamma in (0,2)
        LogInvSquare,     // log(1 + 1/r^2)
    };
    Kind kind = Kind::InversePower;
    double p = 1.0;
    double eps = 1.0;
    double a = 1.0;
    double gamma = 1.5;

    double operator()(double r) const;
    void validate() const;
};

struct BarycentricResult {
    double delta = 0.0;
    double refinedLB = 0.0;
};

// X, Y are two triangle edges; Z = -X-Y. All three must have positive norm.
BarycentricResult barycentricDelta(const Vec2& X, const Vec2& Y, const MonotoneFn& phi,
                                   const MonotoneFn& psi);

// G_eps(x,y,z) with X = x-y, Y = y-z, Z = z-x and L(r) = log(1+1/r):
// (sum L(|.|^2) edge) . (sum edge/(|.|^2+eps)). Nonnegative; infinite when
// two of the points coincide.
ExtReal gEps(const Vec2& x, const Vec2& y, const Vec2& z, double eps);

// w^3 * sum over ordered distinct triples (i,j,k), in loop order
// i, then j, then k. Infinite flag when a distinct-index pair coincides.
ExtReal gEpsTriple(const WeightedEnsemble& e, double eps);

// Same sum with per-atom masses (used by the grid's coarse-block estimate).
ExtReal gEpsTripleWeighted(const std::vector<Vec2>& pos, const std::vector<double>& mass,
                           double eps);

} // namespace kslab
