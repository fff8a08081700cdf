#include "kslab/grid_density.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "kslab/fft_conv.hpp"

namespace kslab {

double GridDensity::mass() const {
    const double h = cellSize();
    double acc = 0.0;
    for (double v : values) acc += v;
    return h * h * acc;
}

void GridDensity::validate() const {
    if (cellsPerSide < 4) throw std::invalid_argument("grid: n >= 4 required");
    if (!(halfWidth > 0.0)) throw std::invalid_argument("grid: L > 0 required");
    if (values.size() != std::size_t(cellsPerSide) * cellsPerSide)
        throw std::invalid_argument("grid: values size mismatch");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("grid: non-finite value");
        if (v < 0.0) throw std::invalid_argument("grid: negative value");
    }
}

double momentGamma(const GridDensity& g, double gamma, const Vec2& center) {
    if (!(gamma > 0.0 && gamma <= 2.0)) throw std::domain_error("gamma outside (0,2]");
    const int n = g.cellsPerSide;
    const double h = g.cellSize();
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double v = g.values[std::size_t(iy) * n + ix];
            if (v == 0.0) continue;
            acc += v * powGammaFromSquare((g.cellCenter(ix, iy) - center).norm2(), gamma);
        }
    return h * h * acc;
}

Vec2 centerOfMass(const GridDensity& g) {
    const int n = g.cellsPerSide;
    Vec2 acc{0.0, 0.0};
    double massAcc = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double v = g.values[std::size_t(iy) * n + ix];
            acc += g.cellCenter(ix, iy) * v;
            massAcc += v;
        }
    if (massAcc == 0.0) return {0.0, 0.0};
    return acc * (1.0 / massAcc);
}

double totalMass(const GridDensity& g) { return g.mass(); }

namespace {

// Autocorrelation over displacements d: A(d) = sum_c v(c) v(c+d), lifted
// from the 2n x 2n circular correlation (no aliasing at P = 2n).
struct AutoCorr {
    int P = 0;
    std::vector<double> a; // row-major P x P, residue indices

    double at(int rx, int ry) const { return a[std::size_t(ry) * P + rx]; }
};

AutoCorr autocorr(const GridDensity& g) {
    const int n = g.cellsPerSide;
    static int cachedN = -1;
    static std::unique_ptr<PaddedFft> fft;
    if (cachedN != n) {
        fft = std::make_unique<PaddedFft>(n);
        cachedN = n;
    }
    const auto spec = fft->forward(fft->pad(g.values));
    AutoCorr ac;
    ac.P = fft->P();
    ac.a = fft->inverse(multiplyConj(spec, spec));
    return ac;
}

struct PairWeights {
    double sg, dg, l1, l2, cc;
};

PairWeights pairWeights(double r2, double gamma, double eps) {
    PairWeights w;
    const double rg = powGammaFromSquare(r2, gamma);
    w.sg = rg;
    w.dg = rg / r2;
    const double lp2 = std::log1p(1.0 / r2);
    w.l1 = std::log1p(1.0 / std::sqrt(r2));
    w.l2 = lp2;
    w.cc = lp2 * eps / (r2 + eps);
    return w;
}

} // namespace

PairRow pairRow(const GridDensity& g, double gamma, double eps) {
    if (!(gamma > 0.0 && gamma <= 2.0)) throw std::domain_error("gamma outside (0,2]");
    const double h = g.cellSize();
    const AutoCorr ac = autocorr(g);
    double sg = 0.0, dg = 0.0, l1 = 0.0, l2 = 0.0, cc = 0.0;
    for (int ry = 0; ry < ac.P; ++ry) {
        const int dy = liftResidue(ry, ac.P);
        for (int rx = 0; rx < ac.P; ++rx) {
            const int dx = liftResidue(rx, ac.P);
            if (dx == 0 && dy == 0) continue;
            const double a = ac.at(rx, ry);
            if (a == 0.0) continue;
            const double r2 = (dx * h) * (dx * h) + (dy * h) * (dy * h);
            const PairWeights w = pairWeights(r2, gamma, eps);
            sg += a * w.sg;
            dg += a * w.dg;
            l1 += a * w.l1;
            l2 += a * w.l2;
            cc += a * w.cc;
        }
    }
    const double h4 = h * h * h * h;
    PairRow row;
    row.sGamma = h4 * sg;
    row.dGamma = {h4 * dg, false};
    row.logPair1 = {h4 * l1, false};
    row.logPair2 = {h4 * l2, false};
    row.ccc1 = {h4 * cc, false};
    return row;
}

PairRow pairRowBrute(const GridDensity& g, double gamma, double eps) {
    const int n = g.cellsPerSide;
    const double h = g.cellSize();
    double sg = 0.0, dg = 0.0, l1 = 0.0, l2 = 0.0, cc = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double vi = g.values[std::size_t(iy) * n + ix];
            if (vi == 0.0) continue;
            for (int jy = 0; jy < n; ++jy)
                for (int jx = 0; jx < n; ++jx) {
                    if (ix == jx && iy == jy) continue;
                    const double vj = g.values[std::size_t(jy) * n + jx];
                    if (vj == 0.0) continue;
                    const double dx = (ix - jx) * h, dy = (iy - jy) * h;
                    const PairWeights w = pairWeights(dx * dx + dy * dy, gamma, eps);
                    const double a = vi * vj;
                    sg += a * w.sg;
                    dg += a * w.dg;
                    l1 += a * w.l1;
                    l2 += a * w.l2;
                    cc += a * w.cc;
                }
        }
    const double h4 = h * h * h * h;
    PairRow row;
    row.sGamma = h4 * sg;
    row.dGamma = {h4 * dg, false};
    row.logPair1 = {h4 * l1, false};
    row.logPair2 = {h4 * l2, false};
    row.ccc1 = {h4 * cc, false};
    return row;
}

double pairMoment(const GridDensity& g, double gamma) { return pairRow(g, gamma, 1.0).sGamma; }
ExtReal pairDissipation(const GridDensity& g, double gamma) {
    if (!(gamma > 0.0 && gamma < 2.0)) throw std::domain_error("gamma outside (0,2)");
    return pairRow(g, gamma, 1.0).dGamma;
}
LogPairMoments logPairMoments(const GridDensity& g) {
    const PairRow r = pairRow(g, 1.0, 1.0);
    return {r.logPair1, r.logPair2};
}
ExtReal ccc1Term(const GridDensity& g, double eps) { return pairRow(g, 1.0, eps).ccc1; }

double maxBallMass(const GridDensity& g, double radius) {
    if (!(radius > 0.0)) throw std::domain_error("maxBallMass: radius must be positive");
    const int n = g.cellsPerSide;
    const double h = g.cellSize();
    PaddedFft fft(n);
    const int P = fft.P();
    std::vector<double> indicator(fft.realSize(), 0.0);
    for (int ry = 0; ry < P; ++ry) {
        const int dy = liftResidue(ry, P);
        for (int rx = 0; rx < P; ++rx) {
            const int dx = liftResidue(rx, P);
            const double r2 = (dx * h) * (dx * h) + (dy * h) * (dy * h);
            if (r2 < radius * radius) indicator[std::size_t(ry) * P + rx] = 1.0;
        }
    }
    const auto conv =
        fft.inverse(multiplySpectra(fft.forward(fft.pad(g.values)), fft.forward(indicator)));
    double best = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            best = std::max(best, conv[std::size_t(iy) * P + ix]);
    return h * h * best;
}

double maxBallMassBrute(const GridDensity& g, double radius) {
    const int n = g.cellsPerSide;
    const double h = g.cellSize();
    double best = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            double acc = 0.0;
            for (int jy = 0; jy < n; ++jy)
                for (int jx = 0; jx < n; ++jx) {
                    const double dx = (ix - jx) * h, dy = (iy - jy) * h;
                    if (dx * dx + dy * dy < radius * radius)
                        acc += g.values[std::size_t(jy) * n + jx];
                }
            best = std::max(best, acc);
        }
    return h * h * best;
}

CoarseAtoms coarsen(const GridDensity& g, int blocksPerSide) {
    const int n = g.cellsPerSide;
    const int b = std::max(1, blocksPerSide);
    const int blockCells = (n + b - 1) / b;
    const double h = g.cellSize();
    CoarseAtoms out;
    for (int by = 0; by < n; by += blockCells)
        for (int bx = 0; bx < n; bx += blockCells) {
            double m = 0.0;
            Vec2 c{0.0, 0.0};
            for (int iy = by; iy < std::min(by + blockCells, n); ++iy)
                for (int ix = bx; ix < std::min(bx + blockCells, n); ++ix) {
                    const double v = g.values[std::size_t(iy) * n + ix];
                    if (v == 0.0) continue;
                    m += v;
                    c += g.cellCenter(ix, iy) * v;
                }
            if (m > 0.0) {
                out.pos.push_back(c * (1.0 / m));
                out.mass.push_back(m * h * h);
            }
        }
    return out;
}

} // namespace kslab
