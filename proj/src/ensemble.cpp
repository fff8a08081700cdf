#include "kslab/ensemble.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kslab/kernel_sum.hpp"

namespace kslab {

double ExtReal::asDouble() const {
    return infinite ? std::numeric_limits<double>::infinity() : value;
}

void WeightedEnsemble::validate() const {
    if (positions.empty()) throw std::invalid_argument("ensemble: N >= 1 required");
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw std::invalid_argument("ensemble: weight must be positive and finite");
    for (const Vec2& p : positions)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("ensemble: non-finite coordinate");
}

double powGammaFromSquare(double r2, double gamma) {
    if (gamma == 2.0) return r2;
    if (gamma == 1.0) return std::sqrt(r2);
    if (gamma == 1.5) { const double r = std::sqrt(r2); return r * std::sqrt(r); }
    if (gamma == 0.5) return std::sqrt(std::sqrt(r2));
    return std::pow(r2, 0.5 * gamma);
}

namespace {

void requireGamma(double gamma, double hi) {
    if (!(gamma > 0.0 && gamma <= hi))
        throw std::domain_error("gamma outside admissible range");
}

} // namespace

double momentGamma(const WeightedEnsemble& e, double gamma, const Vec2& center) {
    requireGamma(gamma, 2.0);
    double acc = 0.0;
    for (const Vec2& p : e.positions) acc += powGammaFromSquare((p - center).norm2(), gamma);
    return e.weight * acc;
}

double pairMoment(const WeightedEnsemble& e, double gamma) {
    requireGamma(gamma, 2.0);
    const std::size_t n = e.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            acc += powGammaFromSquare((e.positions[i] - e.positions[j]).norm2(), gamma);
    return 2.0 * e.weight * e.weight * acc; // ordered pairs
}

ExtReal pairDissipation(const WeightedEnsemble& e, double gamma) {
    if (!(gamma > 0.0 && gamma < 2.0))
        throw std::domain_error("pairDissipation: gamma must lie in (0,2)");
    const std::size_t n = e.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r2 = (e.positions[i] - e.positions[j]).norm2();
            if (r2 == 0.0) return {0.0, true};
            acc += powGammaFromSquare(r2, gamma) / r2;
        }
    return {2.0 * e.weight * e.weight * acc, false};
}

LogPairMoments logPairMoments(const WeightedEnsemble& e) {
    const std::size_t n = e.size();
    double a1 = 0.0, a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r2 = (e.positions[i] - e.positions[j]).norm2();
            if (r2 == 0.0) return {{0.0, true}, {0.0, true}};
            a1 += std::log1p(1.0 / std::sqrt(r2));
            a2 += std::log1p(1.0 / r2);
        }
    const double w2 = 2.0 * e.weight * e.weight;
    return {{w2 * a1, false}, {w2 * a2, false}};
}

ExtReal ccc1Term(const WeightedEnsemble& e, double eps) {
    const std::size_t n = e.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r2 = (e.positions[i] - e.positions[j]).norm2();
            if (r2 == 0.0) return {0.0, true};
            acc += std::log1p(1.0 / r2) * eps / (r2 + eps);
        }
    return {2.0 * e.weight * e.weight * acc, false};
}

double maxBallMass(const WeightedEnsemble& e, double radius) {
    if (!(radius > 0.0)) throw std::domain_error("maxBallMass: radius must be positive");
    const auto counts = ballCountAt(e.positions, e.positions, radius);
    std::uint64_t best = 0;
    for (std::uint64_t c : counts) best = std::max(best, c);
    return e.weight * double(best);
}

Vec2 centerOfMass(const WeightedEnsemble& e) {
    Vec2 acc{0.0, 0.0};
    for (const Vec2& p : e.positions) acc += p;
    return acc * (1.0 / double(e.size()));
}

double totalMass(const WeightedEnsemble& e) { return e.mass(); }

PairRow pairRow(const WeightedEnsemble& e, double gamma, double eps) {
    requireGamma(gamma, 2.0);
    const std::size_t n = e.size();
    PairRow row;
    double sg = 0.0, dg = 0.0, l1 = 0.0, l2 = 0.0, cc = 0.0;
    bool collided = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 pi = e.positions[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r2 = (pi - e.positions[j]).norm2();
            if (r2 == 0.0) { collided = true; continue; }
            const double rg = powGammaFromSquare(r2, gamma);
            sg += rg;
            dg += rg / r2;
            const double inv2 = 1.0 / r2;
            const double lp2 = std::log1p(inv2);
            l1 += std::log1p(std::sqrt(inv2));
            l2 += lp2;
            cc += lp2 * eps / (r2 + eps);
        }
    }
    const double w2 = 2.0 * e.weight * e.weight;
    row.sGamma = w2 * sg; // collisions contribute 0 to |.|^gamma, gamma > 0
    row.dGamma = {w2 * dg, collided};
    row.logPair1 = {w2 * l1, collided};
    row.logPair2 = {w2 * l2, collided};
    row.ccc1 = {w2 * cc, collided};
    return row;
}

} // namespace kslab
