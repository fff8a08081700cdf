#include "kslab/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "kslab/barycentric.hpp"
#include "kslab/errors.hpp"
#include "kslab/kernel.hpp"
#include "kslab/kernel_sum.hpp"

namespace kslab {

void GridConfig::validate() const {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("epsilon must lie in (0,1]");
    if (n < 4) throw ConfigError("grid.n must be at least 4");
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid.L must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("T must be finite and nonnegative");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("grid.dt must be finite and nonnegative");
    if (!(cflSafety > 0.0 && cflSafety <= 1.0))
        throw ConfigError("grid.cflSafety must lie in (0, 1]");
    if (sampleEvery < 1) throw ConfigError("grid.sampleEvery must be at least 1");
}

double FaceVelocity::maxAbs() const {
    double m = 0.0;
    for (const double v : ux) m = std::max(m, std::abs(v));
    for (const double v : uy) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Face/cell kernel spectra and probe tables for one (n, L, eps) run.
class ConvEngine {
  public:
    ConvEngine(int n, double L, double eps) : n_(n), h_(2.0 * L / n), eps_(eps), fft_(n) {
        const int P = fft_.P();
        std::vector<double> kx(fft_.realSize(), 0.0), ky(fft_.realSize(), 0.0);
        const double h2 = h_ * h_;
        for (int b = -(n - 1); b <= n - 1; ++b) {
            const int rb = b < 0 ? b + P : b;
            for (int a = -(n - 1); a <= n; ++a) {
                const int ra = a < 0 ? a + P : a;
                kx[std::size_t(rb) * P + ra] =
                    h2 * evalKEps({(a - 0.5) * h_, b * h_}, eps_).x;
            }
        }
        for (int b = -(n - 1); b <= n; ++b) {
            const int rb = b < 0 ? b + P : b;
            for (int a = -(n - 1); a <= n - 1; ++a) {
                const int ra = a < 0 ? a + P : a;
                ky[std::size_t(rb) * P + ra] =
                    h2 * evalKEps({a * h_, (b - 0.5) * h_}, eps_).y;
            }
        }
        kxSpec_ = fft_.forward(kx);
        kySpec_ = fft_.forward(ky);
    }

    FaceVelocity faceVelocity(const GridDensity& g) {
        const int P = fft_.P();
        const auto vSpec = fft_.forward(fft_.pad(g.values));
        const auto cx = fft_.inverse(multiplySpectra(kxSpec_, vSpec));
        const auto cy = fft_.inverse(multiplySpectra(kySpec_, vSpec));
        FaceVelocity u;
        u.n = n_;
        u.ux.resize(std::size_t(n_ + 1) * n_);
        u.uy.resize(std::size_t(n_) * (n_ + 1));
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i <= n_; ++i)
                u.ux[std::size_t(j) * (n_ + 1) + i] = cx[std::size_t(j) * P + i];
        for (int j = 0; j <= n_; ++j)
            for (int i = 0; i < n_; ++i)
                u.uy[std::size_t(j) * n_ + i] = cy[std::size_t(j) * P + i];
        return u;
    }

    // Cell-centered velocity, needed only by the residual probe.
    void cellVelocity(const GridDensity& g, std::vector<double>& ucx, std::vector<double>& ucy) {
        ensureCellKernels();
        const int P = fft_.P();
        const auto vSpec = fft_.forward(fft_.pad(g.values));
        const auto cx = fft_.inverse(multiplySpectra(kcxSpec_, vSpec));
        const auto cy = fft_.inverse(multiplySpectra(kcySpec_, vSpec));
        ucx.assign(std::size_t(n_) * n_, 0.0);
        ucy.assign(std::size_t(n_) * n_, 0.0);
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i) {
                ucx[std::size_t(j) * n_ + i] = cx[std::size_t(j) * P + i];
                ucy[std::size_t(j) * n_ + i] = cy[std::size_t(j) * P + i];
            }
    }

    PaddedFft& fft() { return fft_; }
    double h() const { return h_; }

  private:
    void ensureCellKernels() {
        if (!kcxSpec_.empty()) return;
        const int P = fft_.P();
        std::vector<double> kcx(fft_.realSize(), 0.0), kcy(fft_.realSize(), 0.0);
        const double h2 = h_ * h_;
        for (int b = -(n_ - 1); b <= n_ - 1; ++b) {
            const int rb = b < 0 ? b + P : b;
            for (int a = -(n_ - 1); a <= n_ - 1; ++a) {
                const int ra = a < 0 ? a + P : a;
                const Vec2 k = evalKEps({a * h_, b * h_}, eps_);
                kcx[std::size_t(rb) * P + ra] = h2 * k.x;
                kcy[std::size_t(rb) * P + ra] = h2 * k.y;
            }
        }
        kcxSpec_ = fft_.forward(kcx);
        kcySpec_ = fft_.forward(kcy);
    }

    int n_;
    double h_;
    double eps_;
    PaddedFft fft_;
    std::vector<std::complex<double>> kxSpec_, kySpec_, kcxSpec_, kcySpec_;
};

FaceVelocity faceVelocityDirect(const GridDensity& g, double eps) {
    const int n = g.cellsPerSide;
    const double h = g.cellSize();
    std::vector<Vec2> cells(std::size_t(n) * n);
    std::vector<double> w(std::size_t(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            cells[std::size_t(j) * n + i] = g.cellCenter(i, j);
            w[std::size_t(j) * n + i] = h * h * g.values[std::size_t(j) * n + i];
        }

    FaceVelocity u;
    u.n = n;
    std::vector<Vec2> faces;
    faces.reserve(std::size_t(n + 1) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i)
            faces.push_back({-g.halfWidth + i * h, -g.halfWidth + (j + 0.5) * h});
    const auto fx = kernelSumAt(faces, cells, w, eps);
    u.ux.resize(fx.size());
    for (std::size_t k = 0; k < fx.size(); ++k) u.ux[k] = fx[k].x;

    faces.clear();
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i)
            faces.push_back({-g.halfWidth + (i + 0.5) * h, -g.halfWidth + j * h});
    const auto fy = kernelSumAt(faces, cells, w, eps);
    u.uy.resize(fy.size());
    for (std::size_t k = 0; k < fy.size(); ++k) u.uy[k] = fy[k].y;
    return u;
}

double boundaryRingMass(const GridDensity& g) {
    const int n = g.cellsPerSide;
    const double h2 = g.cellSize() * g.cellSize();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        s += g.values[i];                              // iy = 0
        s += g.values[std::size_t(n - 1) * n + i];     // iy = n-1
    }
    for (int j = 1; j < n - 1; ++j) {
        s += g.values[std::size_t(j) * n];             // ix = 0
        s += g.values[std::size_t(j) * n + (n - 1)];   // ix = n-1
    }
    return h2 * s;
}

// chi(r2) = (1 - r2/a)^3 on [0, a], the compactly supported pair test
// function (argument is the squared separation).
constexpr double kChiSupport = 4.0;

double chi(double r2) {
    const double s = 1.0 - r2 / kChiSupport;
    return s > 0.0 ? s * s * s : 0.0;
}
double chiPrime(double r2) {
    const double s = 1.0 - r2 / kChiSupport;
    return s > 0.0 ? -3.0 / kChiSupport * s * s : 0.0;
}
double chiSecond(double r2) {
    const double s = 1.0 - r2 / kChiSupport;
    return s > 0.0 ? 6.0 / (kChiSupport * kChiSupport) * s : 0.0;
}

// Tables driving one residual sample; built once per run.
struct ProbeTables {
    std::vector<double> phi, lap, gx, gy;       // n x n cell tables
    std::vector<double> chiTab, psiTab;         // P x P displacement tables
    std::vector<std::complex<double>> wxSpec, wySpec; // conv kernels chi'(r2) * d

    ProbeTables(const GridDensity& g, ConvEngine& eng) {
        const int n = g.cellsPerSide;
        const double h = g.cellSize();
        const int P = eng.fft().P();
        phi.resize(std::size_t(n) * n);
        lap.resize(phi.size());
        gx.resize(phi.size());
        gy.resize(phi.size());
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Vec2 c = g.cellCenter(i, j);
                const double r2 = c.norm2();
                const double e = std::exp(-0.5 * r2);
                const std::size_t idx = std::size_t(j) * n + i;
                phi[idx] = e;
                lap[idx] = (r2 - 2.0) * e;
                gx[idx] = -c.x * e;
                gy[idx] = -c.y * e;
            }

        chiTab.assign(eng.fft().realSize(), 0.0);
        psiTab.assign(eng.fft().realSize(), 0.0);
        std::vector<double> wx(eng.fft().realSize(), 0.0), wy(eng.fft().realSize(), 0.0);
        const double h2 = h * h;
        for (int ry = 0; ry < P; ++ry) {
            const double dy = liftResidue(ry, P) * h;
            for (int rx = 0; rx < P; ++rx) {
                const double dx = liftResidue(rx, P) * h;
                const double r2 = dx * dx + dy * dy;
                const std::size_t idx = std::size_t(ry) * P + rx;
                chiTab[idx] = chi(r2);
                psiTab[idx] = chiPrime(r2) + r2 * chiSecond(r2);
                wx[idx] = h2 * chiPrime(r2) * dx;
                wy[idx] = h2 * chiPrime(r2) * dy;
            }
        }
        wxSpec = eng.fft().forward(wx);
        wySpec = eng.fft().forward(wy);
    }
};

ResidualSample probeSample(const GridDensity& g, double t, ConvEngine& eng,
                           const ProbeTables& tab) {
    const int n = g.cellsPerSide;
    const double h = g.cellSize();
    const double h2 = h * h;
    const int P = eng.fft().P();

    ResidualSample s;
    s.t = t;
    for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
        s.phiMom += tab.phi[idx] * g.values[idx];
        s.lapTerm += tab.lap[idx] * g.values[idx];
    }
    s.phiMom *= h2;
    s.lapTerm *= h2;

    const auto vSpec = eng.fft().forward(eng.fft().pad(g.values));
    const auto corr = eng.fft().inverse(multiplyConj(vSpec, vSpec));
    double pairPhi = 0.0, pairOp = 0.0;
    for (std::size_t idx = 0; idx < corr.size(); ++idx) {
        if (idx == 0) continue; // diagonal displacement excluded
        pairPhi += corr[idx] * tab.chiTab[idx];
        pairOp += corr[idx] * tab.psiTab[idx];
    }
    s.pairPhi = pairPhi * h2 * h2;
    s.pairOp = pairOp * h2 * h2;

    std::vector<double> ucx, ucy;
    eng.cellVelocity(g, ucx, ucy);
    const auto wxf = eng.fft().inverse(multiplySpectra(tab.wxSpec, vSpec));
    const auto wyf = eng.fft().inverse(multiplySpectra(tab.wySpec, vSpec));
    double drift = 0.0, triple = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t ci = std::size_t(j) * n + i;
            const std::size_t pi = std::size_t(j) * P + i;
            const double v = g.values[ci];
            drift += (tab.gx[ci] * ucx[ci] + tab.gy[ci] * ucy[ci]) * v;
            triple += (wxf[pi] * ucx[ci] + wyf[pi] * ucy[ci]) * v;
        }
    s.driftTerm = drift * h2;
    s.tripleTerm = 4.0 * triple * h2;
    return s;
}

} // namespace

FaceVelocity velocityField(const GridDensity& g, double eps, GridConfig::Conv method) {
    g.validate();
    requireEps(eps);
    if (method == GridConfig::Conv::DirectSum) return faceVelocityDirect(g, eps);
    ConvEngine eng(g.cellsPerSide, g.halfWidth, eps);
    return eng.faceVelocity(g);
}

double cflLimit(const GridDensity& g, const FaceVelocity& u) {
    const double h = g.cellSize();
    const double diffusive = h * h / 4.0;
    const double umax = u.maxAbs();
    return umax > 0.0 ? std::min(diffusive, h / (2.0 * umax)) : diffusive;
}

GridDensity fvStep(const GridDensity& g, const FaceVelocity& u, double dt) {
    const int n = g.cellsPerSide;
    const double h = g.cellSize();
    if (u.n != n || u.ux.size() != std::size_t(n + 1) * n || u.uy.size() != std::size_t(n) * (n + 1))
        throw ConfigError("fvStep: face field does not match the grid");
    if (!(dt > 0.0)) throw SolverError("fvStep: dt must be positive");
    const double limit = cflLimit(g, u);
    if (dt > limit * (1.0 + 1e-12))
        throw SolverError("fvStep: dt " + std::to_string(dt) + " exceeds the CFL limit " +
                          std::to_string(limit) + " (max face speed " +
                          std::to_string(u.maxAbs()) + ")");

    // Fluxes: upwind advection plus central diffusion; boundary faces zero.
    std::vector<double> fx(std::size_t(n + 1) * n, 0.0), fy(std::size_t(n) * (n + 1), 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 1; i < n; ++i) {
            const double vl = g.values[std::size_t(j) * n + (i - 1)];
            const double vr = g.values[std::size_t(j) * n + i];
            const double uf = u.ux[std::size_t(j) * (n + 1) + i];
            fx[std::size_t(j) * (n + 1) + i] = (uf > 0.0 ? uf * vl : uf * vr) - (vr - vl) / h;
        }
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double vb = g.values[std::size_t(j - 1) * n + i];
            const double vt = g.values[std::size_t(j) * n + i];
            const double uf = u.uy[std::size_t(j) * n + i];
            fy[std::size_t(j) * n + i] = (uf > 0.0 ? uf * vb : uf * vt) - (vt - vb) / h;
        }

    GridDensity out = g;
    const double r = dt / h;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t ci = std::size_t(j) * n + i;
            out.values[ci] = g.values[ci] -
                             r * (fx[std::size_t(j) * (n + 1) + (i + 1)] -
                                  fx[std::size_t(j) * (n + 1) + i] +
                                  fy[std::size_t(j + 1) * n + i] - fy[std::size_t(j) * n + i]);
        }

    double maxAbs = 1.0;
    for (const double v : out.values) maxAbs = std::max(maxAbs, std::abs(v));
    const double negTol = 1e-13 * maxAbs;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double& v = out.values[std::size_t(j) * n + i];
            if (v < -negTol)
                throw SolverError("fvStep: cell (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") went negative (" + std::to_string(v) +
                                  "); reduce dt or cflSafety");
            if (v < 0.0) v = 0.0;
        }
    return out;
}

ResidualReport residualReport(const std::vector<ResidualSample>& samples) {
    if (samples.size() < 2)
        throw ConfigError("residualReport: need at least two samples");
    ResidualReport rep;
    double int1 = 0.0, int2 = 0.0;
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const auto& a = samples[k - 1];
        const auto& b = samples[k];
        const double w = 0.5 * (b.t - a.t);
        int1 += w * ((a.lapTerm + a.driftTerm) + (b.lapTerm + b.driftTerm));
        int2 += w * ((8.0 * a.pairOp + a.tripleTerm) + (8.0 * b.pairOp + b.tripleTerm));
    }
    rep.res1 = std::abs(samples.back().phiMom - samples.front().phiMom - int1);
    rep.res2 = std::abs(samples.back().pairPhi - samples.front().pairPhi - int2);
    for (const auto& s : samples) {
        rep.scale1 = std::max(rep.scale1, std::abs(s.phiMom));
        rep.scale2 = std::max(rep.scale2, std::abs(s.pairPhi));
    }
    return rep;
}

DiagnosticRow rowFromGrid(const GridDensity& g, double t, double eps,
                          const DiagnosticsConfig& diag) {
    DiagnosticRow row;
    row.t = t;
    row.mass = g.mass();
    row.com = centerOfMass(g);
    row.m2 = momentGamma(g, 2.0, Vec2{0.0, 0.0});
    const PairRow pr = pairRow(g, diag.gamma, eps);
    row.sGamma = pr.sGamma;
    row.dGamma = pr.dGamma;
    row.logPair1 = pr.logPair1;
    row.logPair2 = pr.logPair2;
    row.ccc1 = pr.ccc1;
    row.maxBallMass = maxBallMass(g, diag.nu);
    row.momentGammaOrigin = momentGamma(g, diag.gamma, Vec2{0.0, 0.0});
    if (diag.gTripleCoarse > 0) {
        const CoarseAtoms ca = coarsen(g, diag.gTripleCoarse);
        row.gTriple = gEpsTripleWeighted(ca.pos, ca.mass, eps).asDouble();
    } else {
        row.gTriple = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

GridRunResult runGrid(const GridConfig& cfg, const InitialMeasure& f0,
                      const DiagnosticsConfig& diag, bool collectResiduals) {
    f0.validate();
    cfg.validate();
    const double M = f0.mass();

    GridRunResult out;
    out.finalDensity = projectToGrid(f0, cfg.eps, cfg.L, cfg.n);
    out.series.meta = {diag.gamma, cfg.eps, diag.nu, M, 0};

    ConvEngine eng(cfg.n, cfg.L, cfg.eps);
    std::unique_ptr<ProbeTables> tabs;
    if (collectResiduals) tabs = std::make_unique<ProbeTables>(out.finalDensity, eng);

    auto sample = [&](double t) {
        out.series.rows.push_back(rowFromGrid(out.finalDensity, t, cfg.eps, diag));
        if (tabs) out.residuals.push_back(probeSample(out.finalDensity, t, eng, *tabs));
    };
    sample(0.0);

    FaceVelocity zero;
    zero.n = cfg.n;
    zero.ux.assign(std::size_t(cfg.n + 1) * cfg.n, 0.0);
    zero.uy.assign(std::size_t(cfg.n) * (cfg.n + 1), 0.0);

    double t = 0.0;
    std::uint64_t k = 0;
    const double tEnd = cfg.T;
    while (t < tEnd * (1.0 - 1e-12)) {
        FaceVelocity u;
        if (!cfg.driftEnabled) {
            u = zero;
        } else if (cfg.convolutionMethod == GridConfig::Conv::FftPadded) {
            u = eng.faceVelocity(out.finalDensity);
        } else {
            u = faceVelocityDirect(out.finalDensity, cfg.eps);
        }
        const double limit = cflLimit(out.finalDensity, u);
        double dt = cfg.dt > 0.0 ? cfg.dt : cfg.cflSafety * limit;
        if (cfg.dt > 0.0 && cfg.dt > cfg.cflSafety * limit * (1.0 + 1e-12))
            throw SolverError("runGrid: configured dt " + std::to_string(cfg.dt) +
                              " exceeds cflSafety * limit = " +
                              std::to_string(cfg.cflSafety * limit) + " (max face speed " +
                              std::to_string(u.maxAbs()) + ")");
        if (t + dt > tEnd) dt = tEnd - t;
        out.finalDensity = fvStep(out.finalDensity, u, dt);
        t += dt;
        if (t > tEnd * (1.0 - 1e-12)) t = tEnd;
        ++k;
        if (boundaryRingMass(out.finalDensity) > 1e-6 * M) out.boxTruncated = true;
        if (k % std::uint64_t(cfg.sampleEvery) == 0 || t >= tEnd) sample(t);
    }
    out.steps = k;
    out.series.validate();
    return out;
}

} // namespace kslab
