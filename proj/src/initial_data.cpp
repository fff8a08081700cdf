#include "kslab/initial_data.hpp"

#include <cmath>
#include <string>

#include "kslab/kernel.hpp"
#include "kslab/rng.hpp"

namespace kslab {

double InitialMeasure::mass() const {
    double m = 0.0;
    for (const Atom& a : atoms) m += a.mass;
    for (const GaussianBlob& g : gaussians) m += g.mass;
    return m;
}

Vec2 InitialMeasure::centerOfMass() const {
    Vec2 acc{0.0, 0.0};
    for (const Atom& a : atoms) acc += a.pos * a.mass;
    for (const GaussianBlob& g : gaussians) acc += g.mean * g.mass;
    return acc * (1.0 / mass());
}

double InitialMeasure::m2(const Vec2& center) const {
    double acc = 0.0;
    for (const Atom& a : atoms) acc += a.mass * (a.pos - center).norm2();
    for (const GaussianBlob& g : gaussians)
        acc += g.mass * ((g.mean - center).norm2() + 2.0 * g.var);
    return acc;
}

MassRegime InitialMeasure::regime() const {
    const double M = mass();
    if (std::abs(M - kEightPi) <= 1e-9 * kEightPi) return MassRegime::Critical;
    return M < kEightPi ? MassRegime::Subcritical : MassRegime::Supercritical;
}

bool InitialMeasure::criticalAdmissible() const {
    for (const Atom& a : atoms)
        if (!(a.mass < kEightPi)) return false;
    return true;
}

void InitialMeasure::validate() const {
    if (atoms.empty() && gaussians.empty())
        throw std::invalid_argument("initial measure: at least one component required");
    for (const Atom& a : atoms) {
        if (!(a.mass > 0.0) || !std::isfinite(a.mass))
            throw std::invalid_argument("initial measure: atom mass must be positive");
        if (!std::isfinite(a.pos.x) || !std::isfinite(a.pos.y))
            throw std::invalid_argument("initial measure: non-finite atom position");
    }
    for (const GaussianBlob& g : gaussians) {
        if (!(g.mass > 0.0) || !std::isfinite(g.mass))
            throw std::invalid_argument("initial measure: gaussian mass must be positive");
        if (!(g.var > 0.0) || !std::isfinite(g.var))
            throw std::invalid_argument("initial measure: gaussian variance must be positive");
        if (!std::isfinite(g.mean.x) || !std::isfinite(g.mean.y))
            throw std::invalid_argument("initial measure: non-finite gaussian mean");
    }
}

double mollifiedDensity(const InitialMeasure& f0, double eps, const Vec2& x) {
    requireEps(eps);
    double acc = 0.0;
    for (const Atom& a : f0.atoms)
        acc += a.mass * std::exp(-(x - a.pos).norm2() / (2.0 * eps)) / (kTwoPi * eps);
    for (const GaussianBlob& g : f0.gaussians) {
        const double s2 = g.var + eps;
        acc += g.mass * std::exp(-(x - g.mean).norm2() / (2.0 * s2)) / (kTwoPi * s2);
    }
    return acc;
}

namespace {

// Mass fraction of an isotropic Gaussian (variance s2, given mean) in [-L,L].
double axisCapture(double mean, double s2, double L) {
    const double s = std::sqrt(2.0 * s2);
    return 0.5 * (std::erf((L - mean) / s) - std::erf((-L - mean) / s));
}

} // namespace

double boxCaptureFraction(const InitialMeasure& f0, double eps, double L) {
    requireEps(eps);
    double captured = 0.0;
    for (const Atom& a : f0.atoms)
        captured += a.mass * axisCapture(a.pos.x, eps, L) * axisCapture(a.pos.y, eps, L);
    for (const GaussianBlob& g : f0.gaussians) {
        const double s2 = g.var + eps;
        captured += g.mass * axisCapture(g.mean.x, s2, L) * axisCapture(g.mean.y, s2, L);
    }
    return captured / f0.mass();
}

WeightedEnsemble sampleMollified(const InitialMeasure& f0, double eps, int N,
                                 std::uint64_t seed) {
    requireEps(eps);
    f0.validate();
    if (N < 1) throw std::domain_error("sampleMollified: N >= 1 required");
    const double M = f0.mass();
    const CounterRng rng(seed, StreamTag::InitSample);
    WeightedEnsemble e;
    e.weight = M / double(N);
    e.positions.resize(std::size_t(N));
    for (int i = 0; i < N; ++i) {
        const double u = rng.uniform2(std::uint64_t(i), 0)[0] * M;
        // walk the mixture by cumulative mass
        double cum = 0.0;
        Vec2 center{0.0, 0.0};
        double s2 = eps;
        bool found = false;
        for (const Atom& a : f0.atoms) {
            cum += a.mass;
            if (u < cum) { center = a.pos; s2 = eps; found = true; break; }
        }
        if (!found)
            for (const GaussianBlob& g : f0.gaussians) {
                cum += g.mass;
                if (u < cum) { center = g.mean; s2 = g.var + eps; found = true; break; }
            }
        if (!found) { // u == M up to rounding: last component
            if (!f0.gaussians.empty()) {
                center = f0.gaussians.back().mean;
                s2 = f0.gaussians.back().var + eps;
            } else {
                center = f0.atoms.back().pos;
                s2 = eps;
            }
        }
        e.positions[std::size_t(i)] = center + std::sqrt(s2) * rng.normal2(std::uint64_t(i), 1);
    }
    return e;
}

GridDensity projectToGrid(const InitialMeasure& f0, double eps, double L, int n) {
    requireEps(eps);
    f0.validate();
    const double captured = boxCaptureFraction(f0, eps, L);
    if (captured < 1.0 - 1e-6)
        throw CaptureError(captured, "projectToGrid: box captures only " +
                                         std::to_string(captured) + " of the mollified mass");
    GridDensity g;
    g.halfWidth = L;
    g.cellsPerSide = n;
    g.values.resize(std::size_t(n) * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            g.values[std::size_t(iy) * n + ix] = mollifiedDensity(f0, eps, g.cellCenter(ix, iy));
    const double gridMass = g.mass();
    const double scale = f0.mass() / gridMass;
    for (double& v : g.values) v *= scale;
    return g;
}

} // namespace kslab
