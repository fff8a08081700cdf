#pragma once

// Atomic approximation of the evolving measure: N planar points of equal
// weight w, mass M = N*w, plus the single- and pair-moment functionals
// evaluated on it. Pair functionals exclude the diagonal i = j; an exact
// collision between distinct indices makes the singular ones infinite,
// which is carried as an explicit flag instead of a floating overflow.

#include <cstdint>
#include <vector>

#include "kslab/vec2.hpp"

namespace kslab {

// Extended real: value plus an explicit infinity flag.
struct ExtReal {
    double value = 0.0;
    bool infinite = false;

    double asDouble() const; // +inf when flagged
};

struct WeightedEnsemble {
    std::vector<Vec2> positions;
    double weight = 1.0;

    std::size_t size() const { return positions.size(); }
    double mass() const { return weight * double(positions.size()); }
    void validate() const; // throws std::invalid_argument
};

// sum_i w |x_i - center|^gamma, gamma in (0,2].
double momentGamma(const WeightedEnsemble& e, double gamma, const Vec2& center);

// sum over ordered pairs (i,j) of w^2 |x_i - x_j|^gamma, gamma in (0,2];
// the diagonal contributes 0.
double pairMoment(const WeightedEnsemble& e, double gamma);

// sum_{i != j} w^2 |x_i - x_j|^{gamma-2}, gamma in (0,2); infinite flag on
// an exact collision.
ExtReal pairDissipation(const WeightedEnsemble& e, double gamma);

struct LogPairMoments {
    ExtReal logPair1; // sum_{i != j} w^2 log(1 + 1/|x_i - x_j|)
    ExtReal logPair2; // sum_{i != j} w^2 log(1 + |x_i - x_j|^-2)
};
LogPairMoments logPairMoments(const WeightedEnsemble& e);

// sum_{i != j} w^2 log(1 + |x_i-x_j|^-2) * eps / (|x_i-x_j|^2 + eps):
// companion term of the critical-case log-moment estimate.
ExtReal ccc1Term(const WeightedEnsemble& e, double eps);

// max over candidate centers (all particle positions) of the mass carried
// within the open ball of the given radius.
double maxBallMass(const WeightedEnsemble& e, double radius);

Vec2 centerOfMass(const WeightedEnsemble& e);
double totalMass(const WeightedEnsemble& e);

// One O(N^2) pass producing every pair column of a diagnostics row.
struct PairRow {
    double sGamma = 0.0;
    ExtReal dGamma;
    ExtReal logPair1;
    ExtReal logPair2;
    ExtReal ccc1;
};
PairRow pairRow(const WeightedEnsemble& e, double gamma, double eps);

// |x|^gamma from the squared norm, with fast paths for half-integer gamma.
double powGammaFromSquare(double r2, double gamma);

} // namespace kslab
