// Local hidden variable side of the argument.
//
// Any local deterministic assignment of +/-1 to F, D (side A) and G, E
// (side B) obeys
//   1[D=+1, E=+1] <= 1[F=+1, G=+1] + 1[D=+1, G=-1] + 1[F=-1, E=+1],
// so every mixture satisfies q4 <= q1 + q2 + q3.

#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "cabello/cabello_engine.hpp"

namespace cabello {

struct DeterministicStrategy {
    Outcome f = Outcome::Plus;
    Outcome d = Outcome::Plus;
    Outcome g = Outcome::Plus;
    Outcome e = Outcome::Plus;

    /// Strategy number k in [0, 16): bits 3..0 select -1 for F, D, G, E.
    static DeterministicStrategy from_index(unsigned k);
    static std::array<DeterministicStrategy, 16> all();

    int q1_event() const { return f == Outcome::Plus && g == Outcome::Plus; }
    int q2_event() const { return d == Outcome::Plus && g == Outcome::Minus; }
    int q3_event() const { return f == Outcome::Minus && e == Outcome::Plus; }
    int q4_event() const { return d == Outcome::Plus && e == Outcome::Plus; }
};

struct StrategyRow {
    DeterministicStrategy strategy;
    int lhs = 0;  // 1[D=+1, E=+1]
    int rhs = 0;  // sum of the three other indicators
    bool holds = false;
};

struct LocalBoundReport {
    bool all_hold = false;
    std::array<StrategyRow, 16> rows{};
};

LocalBoundReport local_bound_check();

/// Probabilities of the four events under a mixture of the 16 strategies,
/// indexed as in DeterministicStrategy::from_index. Weights must be
/// non-negative and sum to 1 within 1e-12.
CabelloProbs mixture_probs(std::span<const double, 16> weights);

/// q4 - q1 - q2 - q3. Positive values violate the local bound.
double quantum_violation(const SchmidtState& state, const Settings& settings);

struct SampleStats {
    // Events (F+,G+), (D+,G-), (F-,E+), (D+,E+), each from its own run of
    // trials_per_pair measurements.
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t trials_per_pair = 0;
    std::uint64_t seed = 0;

    std::array<double, 4> frequencies() const;
    double gap() const;  // q4_hat - q1_hat
};

/// Monte Carlo estimate of q1..q4 by inverse-CDF sampling of the exact joint
/// outcome distribution of each observable pair. Pair k (in q1..q4 order)
/// draws from make_engine(seed, k).
SampleStats sample_probs(const SchmidtState& state, const Settings& settings,
                         std::uint64_t trials_per_pair, std::uint64_t seed);

}  // namespace cabello
