#include "kslab/particle_solver.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "kslab/barycentric.hpp"
#include "kslab/errors.hpp"
#include "kslab/kernel.hpp"
#include "kslab/kernel_sum.hpp"

namespace kslab {

double dtMax(double eps, double totalMass) {
    requireEps(eps);
    if (!(totalMass > 0.0)) throw ConfigError("dtMax: total mass must be positive");
    const double cap = 4.0 * kPi * std::sqrt(eps) / (10.0 * totalMass);
    return std::min(0.1, cap);
}

void ParticleConfig::validate(double totalMass) const {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("epsilon must lie in (0,1]");
    if (N < 1) throw ConfigError("particles.N must be at least 1");
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("T must be finite and nonnegative");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("particles.dt must be finite and nonnegative");
    if (sampleEvery < 1) throw ConfigError("particles.sampleEvery must be at least 1");
    if (forceMethod == Force::CellList && !(cutoff > 0.0))
        throw ConfigError("particles.cutoff must be positive for the cell-list force");
    if (dt > 0.0 && !dtOverride) {
        const double cap = dtMax(eps, totalMass);
        if (dt > cap * (1.0 + 1e-12))
            throw ConfigError("particles.dt " + std::to_string(dt) + " exceeds the stability cap " +
                              std::to_string(cap) + " (set dtOverride to accept it)");
    }
}

std::vector<Vec2> driftField(const WeightedEnsemble& e, double eps) {
    const std::vector<double> w(e.size(), e.weight);
    return kernelSumAt(e.positions, e.positions, w, eps);
}

std::vector<Vec2> driftFieldCellList(const WeightedEnsemble& e, double eps, double cutoff) {
    requireEps(eps);
    if (!(cutoff > 0.0)) throw ConfigError("cell list: cutoff must be positive");
    const std::size_t n = e.size();
    const double rc2 = cutoff * cutoff;

    auto cellKey = [cutoff](const Vec2& p) {
        const auto bx = std::int64_t(std::floor(p.x / cutoff));
        const auto by = std::int64_t(std::floor(p.y / cutoff));
        return (std::uint64_t(std::uint32_t(bx)) << 32) | std::uint64_t(std::uint32_t(by));
    };

    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> bins;
    bins.reserve(n);
    for (std::size_t i = 0; i < n; ++i) bins[cellKey(e.positions[i])].push_back(std::uint32_t(i));

    std::vector<Vec2> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 xi = e.positions[i];
        const auto bx = std::int64_t(std::floor(xi.x / cutoff));
        const auto by = std::int64_t(std::floor(xi.y / cutoff));
        double ax = 0.0, ay = 0.0;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const std::uint64_t key =
                    (std::uint64_t(std::uint32_t(bx + dx)) << 32) | std::uint64_t(std::uint32_t(by + dy));
                const auto it = bins.find(key);
                if (it == bins.end()) continue;
                for (const std::uint32_t j : it->second) {
                    if (j == i) continue;
                    const double ddx = xi.x - e.positions[j].x;
                    const double ddy = xi.y - e.positions[j].y;
                    const double r2 = ddx * ddx + ddy * ddy;
                    if (r2 > rc2) continue;
                    const double inv = e.weight / (r2 + eps);
                    ax += ddx * inv;
                    ay += ddy * inv;
                }
            }
        }
        out[i] = {-ax / kTwoPi, -ay / kTwoPi};
    }
    return out;
}

ParticleStepper::ParticleStepper(double eps, std::uint64_t seed, ParticleConfig::Force method,
                                 double cutoff)
    : eps_(eps), cutoff_(cutoff), method_(method), noise_(seed, StreamTag::StepNoise) {
    requireEps(eps);
}

void ParticleStepper::step(ParticleState& s, double dt, const StepHooks& hooks) const {
    if (!(dt > 0.0)) throw SolverError("particle step: dt must be positive");
    const std::size_t n = s.ensemble.size();
    std::vector<Vec2> b;
    if (hooks.drift) {
        b = method_ == ParticleConfig::Force::CellList
                ? driftFieldCellList(s.ensemble, eps_, cutoff_)
                : driftField(s.ensemble, eps_);
    }
    const double sigma = std::sqrt(2.0 * dt);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2& x = s.ensemble.positions[i];
        if (hooks.drift) x += dt * b[i];
        if (hooks.noise) x += sigma * noise_.normal2(s.stepIndex, std::uint32_t(i));
    }
    s.t += dt;
    s.stepIndex += 1;
}

DiagnosticRow rowFromEnsemble(const WeightedEnsemble& e, double t, double eps,
                              const DiagnosticsConfig& diag) {
    DiagnosticRow row;
    row.t = t;
    row.mass = e.mass();
    row.com = centerOfMass(e);
    row.m2 = momentGamma(e, 2.0, Vec2{0.0, 0.0});
    const PairRow pr = pairRow(e, diag.gamma, eps);
    row.sGamma = pr.sGamma;
    row.dGamma = pr.dGamma;
    row.logPair1 = pr.logPair1;
    row.logPair2 = pr.logPair2;
    row.ccc1 = pr.ccc1;
    row.maxBallMass = maxBallMass(e, diag.nu);
    row.momentGammaOrigin = momentGamma(e, diag.gamma, Vec2{0.0, 0.0});
    if (diag.gTripleSubsample > 0) {
        const std::size_t k = std::min<std::size_t>(e.size(), std::size_t(diag.gTripleSubsample));
        WeightedEnsemble sub;
        sub.positions.assign(e.positions.begin(), e.positions.begin() + std::ptrdiff_t(k));
        sub.weight = e.mass() / double(k);
        row.gTriple = gEpsTriple(sub, eps).asDouble();
    } else {
        row.gTriple = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

ParticleRunResult runParticles(const ParticleConfig& cfg, const InitialMeasure& f0,
                               const DiagnosticsConfig& diag) {
    f0.validate();
    const double M = f0.mass();
    cfg.validate(M);

    ParticleRunResult out;
    out.finalState.ensemble = sampleMollified(f0, cfg.eps, cfg.N, cfg.seed);
    out.series.meta = {diag.gamma, cfg.eps, diag.nu, M, cfg.seed};
    out.series.rows.push_back(rowFromEnsemble(out.finalState.ensemble, 0.0, cfg.eps, diag));

    if (cfg.T > 0.0) {
        const ParticleStepper stepper(cfg.eps, cfg.seed, cfg.forceMethod, cfg.cutoff);
        const double dt0 = cfg.dt > 0.0 ? cfg.dt : dtMax(cfg.eps, M);
        const auto nSteps = std::uint64_t(std::ceil(cfg.T / dt0 - 1e-9));
        for (std::uint64_t k = 1; k <= nSteps; ++k) {
            const double dt = (k == nSteps) ? cfg.T - out.finalState.t : dt0;
            stepper.step(out.finalState, dt);
            if (k % std::uint64_t(cfg.sampleEvery) == 0 || k == nSteps)
                out.series.rows.push_back(
                    rowFromEnsemble(out.finalState.ensemble, out.finalState.t, cfg.eps, diag));
        }
    }
    out.series.validate();
    return out;
}

} // namespace kslab
