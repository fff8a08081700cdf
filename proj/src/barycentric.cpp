#include "kslab/barycentric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kslab {

double MonotoneFn::operator()(double r) const {
    switch (kind) {
    case Kind::InversePower:
        return std::pow(r, -p);
    case Kind::InvSquarePlusEps:
        return 1.0 / (r * r + eps);
    case Kind::ShiftedPower:
        return std::pow(a + r * r, 0.5 * gamma - 1.0);
    case Kind::LogInvSquare:
        return std::log1p(1.0 / (r * r));
    }
    throw std::logic_error("MonotoneFn: bad kind");
}

void MonotoneFn::validate() const {
    switch (kind) {
    case Kind::InversePower:
        if (!(p > 0.0 && p <= 2.0)) throw std::domain_error("MonotoneFn: p must be in (0, 2]");
        return;
    case Kind::InvSquarePlusEps:
        if (!(eps > 0.0)) throw std::domain_error("MonotoneFn: eps must be positive");
        return;
    case Kind::ShiftedPower:
        if (!(a > 0.0)) throw std::domain_error("MonotoneFn: a must be positive");
        if (!(gamma > 0.0 && gamma < 2.0))
            throw std::domain_error("MonotoneFn: gamma must be in (0, 2)");
        return;
    case Kind::LogInvSquare:
        return;
    }
    throw std::logic_error("MonotoneFn: bad kind");
}

BarycentricResult barycentricDelta(const Vec2& X, const Vec2& Y, const MonotoneFn& phi,
                                   const MonotoneFn& psi) {
    phi.validate();
    psi.validate();
    const Vec2 Z = -(X + Y);
    const double nx = X.norm();
    const double ny = Y.norm();
    const double nz = Z.norm();
    if (nx == 0.0 || ny == 0.0 || nz == 0.0)
        throw std::domain_error("barycentricDelta: degenerate triangle (zero edge)");

    const Vec2 A = phi(nx) * X + phi(ny) * Y + phi(nz) * Z;
    const Vec2 B = psi(nx) * X + psi(ny) * Y + psi(nz) * Z;

    double norms[3] = {nx, ny, nz};
    std::sort(norms, norms + 3);
    const double n1 = norms[0];
    const double n2 = norms[1];

    BarycentricResult r;
    r.delta = A.dot(B);
    // Both factors are nonnegative for nonincreasing weights; a negative
    // product can only be rounding, so the bound is clamped at zero.
    r.refinedLB = std::max(0.0, (phi(n1) - phi(n2)) * (psi(n1) - psi(n2)) * n1 * n1);
    return r;
}

ExtReal gEps(const Vec2& x, const Vec2& y, const Vec2& z, double eps) {
    const Vec2 X = x - y;
    const Vec2 Y = y - z;
    const Vec2 Z = z - x;
    const double rx = X.norm2();
    const double ry = Y.norm2();
    const double rz = Z.norm2();
    if (rx == 0.0 || ry == 0.0 || rz == 0.0) return {0.0, true};
    const Vec2 A = std::log1p(1.0 / rx) * X + std::log1p(1.0 / ry) * Y + std::log1p(1.0 / rz) * Z;
    const Vec2 B = (1.0 / (rx + eps)) * X + (1.0 / (ry + eps)) * Y + (1.0 / (rz + eps)) * Z;
    return {A.dot(B), false};
}

ExtReal gEpsTriple(const WeightedEnsemble& e, double eps) {
    const std::size_t n = e.size();
    const double w3 = e.weight * e.weight * e.weight;
    double acc = 0.0;
    bool inf = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const ExtReal g = gEps(e.positions[i], e.positions[j], e.positions[k], eps);
                if (g.infinite) {
                    inf = true;
                    continue;
                }
                acc += g.value;
            }
        }
    }
    return {w3 * acc, inf};
}

ExtReal gEpsTripleWeighted(const std::vector<Vec2>& pos, const std::vector<double>& mass,
                           double eps) {
    if (pos.size() != mass.size())
        throw std::invalid_argument("gEpsTripleWeighted: size mismatch");
    const std::size_t n = pos.size();
    double acc = 0.0;
    bool inf = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const ExtReal g = gEps(pos[i], pos[j], pos[k], eps);
                if (g.infinite) {
                    inf = true;
                    continue;
                }
                acc += mass[i] * mass[j] * mass[k] * g.value;
            }
        }
    }
    return {acc, inf};
}

} // namespace kslab
