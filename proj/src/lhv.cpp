#include "cabello/lhv.hpp"

#include <cmath>
#include <random>

#include "cabello/random.hpp"

namespace cabello {

DeterministicStrategy DeterministicStrategy::from_index(unsigned k) {
    if (k >= 16) throw DomainError("strategy index must be below 16");
    const auto bit = [k](unsigned b) { return (k >> b) & 1u ? Outcome::Minus : Outcome::Plus; };
    return {bit(3), bit(2), bit(1), bit(0)};
}

std::array<DeterministicStrategy, 16> DeterministicStrategy::all() {
    std::array<DeterministicStrategy, 16> out;
    for (unsigned k = 0; k < 16; ++k) out[k] = from_index(k);
    return out;
}

LocalBoundReport local_bound_check() {
    LocalBoundReport report;
    report.all_hold = true;
    const auto strategies = DeterministicStrategy::all();
    for (std::size_t k = 0; k < strategies.size(); ++k) {
        const auto& s = strategies[k];
        StrategyRow& row = report.rows[k];
        row.strategy = s;
        row.lhs = s.q4_event();
        row.rhs = s.q1_event() + s.q2_event() + s.q3_event();
        row.holds = row.lhs <= row.rhs;
        report.all_hold = report.all_hold && row.holds;
    }
    return report;
}

CabelloProbs mixture_probs(std::span<const double, 16> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw DomainError("mixture weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");

    CabelloProbs p;
    for (unsigned k = 0; k < 16; ++k) {
        const auto s = DeterministicStrategy::from_index(k);
        p.q1 += weights[k] * s.q1_event();
        p.q2 += weights[k] * s.q2_event();
        p.q3 += weights[k] * s.q3_event();
        p.q4 += weights[k] * s.q4_event();
    }
    return p;
}

double quantum_violation(const SchmidtState& state, const Settings& settings) {
    const CabelloProbs p = cabello_probs(state, settings);
    return p.q4 - p.q1 - p.q2 - p.q3;
}

std::array<double, 4> SampleStats::frequencies() const {
    std::array<double, 4> f{};
    if (trials_per_pair == 0) return f;
    for (std::size_t i = 0; i < 4; ++i)
        f[i] = static_cast<double>(counts[i]) / static_cast<double>(trials_per_pair);
    return f;
}

double SampleStats::gap() const {
    const auto f = frequencies();
    return f[3] - f[0];
}

namespace {

struct PairSpec {
    const Direction* a;
    const Direction* b;
    Outcome out_a;  // event of interest
    Outcome out_b;
};

}  // namespace

SampleStats sample_probs(const SchmidtState& state, const Settings& settings,
                         std::uint64_t trials_per_pair, std::uint64_t seed) {
    if (trials_per_pair == 0) throw DomainError("trials per pair must be at least 1");

    const std::array<PairSpec, 4> pairs{{
        {&settings.f, &settings.g, Outcome::Plus, Outcome::Plus},
        {&settings.d, &settings.g, Outcome::Plus, Outcome::Minus},
        {&settings.f, &settings.e, Outcome::Minus, Outcome::Plus},
        {&settings.d, &settings.e, Outcome::Plus, Outcome::Plus},
    }};
    constexpr std::array<std::pair<Outcome, Outcome>, 4> outcomes{{
        {Outcome::Plus, Outcome::Plus},
        {Outcome::Plus, Outcome::Minus},
        {Outcome::Minus, Outcome::Plus},
        {Outcome::Minus, Outcome::Minus},
    }};

    SampleStats stats;
    stats.trials_per_pair = trials_per_pair;
    stats.seed = seed;

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const PairSpec& pair = pairs[k];
        std::array<double, 4> cdf{};
        double acc = 0.0;
        std::size_t target = 0;
        for (std::size_t o = 0; o < 4; ++o) {
            acc += joint_probability_oracle(state, *pair.a, outcomes[o].first, *pair.b,
                                            outcomes[o].second);
            cdf[o] = acc;
            if (outcomes[o].first == pair.out_a && outcomes[o].second == pair.out_b) target = o;
        }
        cdf[3] = 1.0;  // absorb rounding of the total

        std::mt19937_64 rng = make_engine(seed, k);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials_per_pair; ++t) {
            const double u = unit_uniform(rng);
            std::size_t o = 0;
            while (o < 3 && u >= cdf[o]) ++o;
            hits += (o == target);
        }
        stats.counts[k] = hits;
    }
    return stats;
}

}  // namespace cabello
