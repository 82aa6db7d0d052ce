#include "cabello/cabello_engine.hpp"

#include <algorithm>
#include <cmath>

#include "cabello/random.hpp"

namespace cabello {

namespace {

struct HalfAngle {
    double c;
    double s;
    explicit HalfAngle(double theta) : c(std::cos(theta / 2.0)), s(std::sin(theta / 2.0)) {}
};

// c^2 ua^2 ub^2 + s^2 va^2 vb^2 + 2 c s (ua va)(ub vb) cos(phase)
double pair_probability(double cb, double sb, double ua, double va, double ub, double vb,
                        double phase) {
    return cb * cb * ua * ua * ub * ub + sb * sb * va * va * vb * vb +
           2.0 * cb * sb * ua * va * ub * vb * std::cos(phase);
}

void require_entangled(const SchmidtState& state) {
    if (state.is_product())
        throw DomainError("product state: the zero-probability conditions cannot be met");
}

}  // namespace

CabelloProbs cabello_probs(const SchmidtState& state, const Settings& st) {
    const double cb = state.cos_beta();
    const double sb = state.sin_beta();
    const double gamma = state.gamma();
    const HalfAngle f(st.f.theta), d(st.d.theta), g(st.g.theta), e(st.e.theta);

    CabelloProbs p;
    p.q1 = pair_probability(cb, sb, f.c, f.s, g.c, g.s, st.f.phi + st.g.phi - gamma);
    // Outcome -1 on G swaps its half-angle cosine and sine.
    p.q2 = pair_probability(cb, sb, d.c, d.s, g.s, g.c, st.d.phi + st.g.phi + kPi - gamma);
    p.q3 = pair_probability(cb, sb, f.s, f.c, e.c, e.s, st.f.phi + st.e.phi + kPi - gamma);
    p.q4 = pair_probability(cb, sb, d.c, d.s, e.c, e.s, st.d.phi + st.e.phi - gamma);
    return p;
}

CabelloProbs cabello_probs_oracle(const SchmidtState& state, const Settings& st) {
    constexpr auto plus = Outcome::Plus;
    constexpr auto minus = Outcome::Minus;
    return {joint_probability_oracle(state, st.f, plus, st.g, plus),
            joint_probability_oracle(state, st.d, plus, st.g, minus),
            joint_probability_oracle(state, st.f, minus, st.e, plus),
            joint_probability_oracle(state, st.d, plus, st.e, plus)};
}

std::string to_string(Clause c) {
    switch (c) {
        case Clause::Q2Nonzero: return "q2 nonzero";
        case Clause::Q3Nonzero: return "q3 nonzero";
        case Clause::GapNotPositive: return "gap not positive";
        case Clause::Q1NotPositive: return "q1 not positive";
    }
    return "unknown";
}

std::string Verdict::reason() const {
    if (holds) return "holds";
    std::string out;
    for (Clause c : failed) {
        if (!out.empty()) out += "; ";
        out += to_string(c);
    }
    return out;
}

Verdict check_conditions(const CabelloProbs& p, const ConditionTolerances& tol) {
    if (!(tol.zero > 0.0) || !(tol.positive > 0.0))
        throw DomainError("condition tolerances must be positive");
    Verdict v;
    if (p.q2 > tol.zero) v.failed.push_back(Clause::Q2Nonzero);
    if (p.q3 > tol.zero) v.failed.push_back(Clause::Q3Nonzero);
    if (!(p.q4 - p.q1 > tol.positive)) v.failed.push_back(Clause::GapNotPositive);
    if (!(p.q1 > tol.positive)) v.failed.push_back(Clause::Q1NotPositive);
    v.holds = v.failed.empty();
    return v;
}

Verdict check_conditions(const CabelloProbs& p, double tol) {
    return check_conditions(p, ConditionTolerances::uniform(tol));
}

double linked_polar_angle(double tan_beta, double theta_in) {
    return 2.0 * std::atan(tan_beta * std::tan(theta_in / 2.0));
}

ConstraintSolution solve_constraints(const SchmidtState& state, double theta_d, double theta_e,
                                     Branch branch, double free_phase) {
    require_entangled(state);
    for (double t : {theta_d, theta_e}) {
        if (!std::isfinite(t) || t <= -kPi || t >= kPi)
            throw DomainError("constrained polar angles must lie in (-pi, pi), got " +
                              std::to_string(t));
    }
    if (!std::isfinite(free_phase)) throw DomainError("free phase must be finite");

    const double tb = state.tan_beta();
    const double gamma = state.gamma();
    const double theta_g = linked_polar_angle(tb, theta_d);
    const double theta_f = linked_polar_angle(tb, theta_e);

    const double phi_d = free_phase;
    const double phi_g = gamma - phi_d;
    const double phi_e = gamma - phi_d + (branch == Branch::Minus ? kPi : 0.0);
    const double phi_f = gamma - phi_e;

    ConstraintSolution sol;
    sol.settings = {Direction::canonical(theta_f, phi_f), Direction::canonical(theta_d, phi_d),
                    Direction::canonical(theta_g, phi_g), Direction::canonical(theta_e, phi_e)};
    sol.branch = branch;
    sol.free_phase = free_phase;
    sol.phase_unconstrained = std::sin(theta_d) * std::sin(theta_g) == 0.0 ||
                              std::sin(theta_f) * std::sin(theta_e) == 0.0;
    return sol;
}

Settings witness_settings(const SchmidtState& state, double theta_e, double theta_f) {
    require_entangled(state);
    if (state.is_maximal())
        throw NoGoError("maximally entangled state: no observables satisfy the conditions");
    if (!(theta_e > 0.0 && theta_e < kPi) || !(theta_f >= 0.0 && theta_f <= kPi))
        throw DomainError("witness needs theta_E in (0, pi) and theta_F in [0, pi]");

    const double tb = state.tan_beta();
    const double expected_f = linked_polar_angle(tb, theta_e);
    if (std::abs(expected_f - theta_f) > 1e-9)
        throw DomainError("theta_F violates tan(theta_F/2) = tan(beta) tan(theta_E/2)");

    const HalfAngle e(theta_e), f(theta_f);
    const bool high = tb > 1.0;
    if (high ? !(e.c > f.c) : !(e.s > f.s))
        throw DomainError(high ? "witness needs cos(theta_E/2) > cos(theta_F/2)"
                               : "witness needs sin(theta_E/2) > sin(theta_F/2)");

    const double theta_dg = high ? 0.0 : kPi;
    const double gamma = state.gamma();
    const double phi_d = 0.0;
    const double phi_g = gamma - phi_d;
    const double phi_e = gamma - phi_d + kPi;
    const double phi_f = gamma - phi_e;
    return {Direction::canonical(theta_f, phi_f), Direction::canonical(theta_dg, phi_d),
            Direction::canonical(theta_dg, phi_g), Direction::canonical(theta_e, phi_e)};
}

Settings witness_settings(const SchmidtState& state, double theta_e) {
    require_entangled(state);
    if (state.is_maximal())
        throw NoGoError("maximally entangled state: no observables satisfy the conditions");
    if (!(theta_e > 0.0 && theta_e < kPi))
        throw DomainError("witness needs theta_E in (0, pi)");
    return witness_settings(state, theta_e, linked_polar_angle(state.tan_beta(), theta_e));
}

NoGoReport nogo_verify(double gamma, double theta_d, double theta_e, const NoGoPhases& phases) {
    const SchmidtState state = SchmidtState::maximally_entangled(gamma);
    const double g = state.gamma();

    NoGoReport r;
    r.settings = {Direction::canonical(theta_e, g - phases.phi_e),
                  Direction::canonical(theta_d, phases.phi_d),
                  Direction::canonical(theta_d, g - phases.phi_d),
                  Direction::canonical(theta_e, phases.phi_e)};

    const Settings& st = r.settings;
    const HalfAngle d(st.d.theta), e(st.e.theta);
    const double base = 0.5 * d.c * d.c * e.c * e.c + 0.5 * d.s * d.s * e.s * e.s;
    const double cross = d.c * d.s * e.c * e.s;
    r.q1 = base + cross * std::cos(st.f.phi + st.g.phi - g);
    r.q4 = base + cross * std::cos(st.d.phi + st.e.phi - g);
    r.gap = r.q4 - r.q1;
    r.probs = cabello_probs(state, st);
    return r;
}

NoGoSweep nogo_sweep(std::uint64_t trials, std::uint64_t seed, bool keep_rows) {
    if (trials == 0) throw DomainError("no-go sweep needs at least one trial");
    NoGoSweep out;
    out.trials = trials;
    out.seed = seed;
    if (keep_rows) out.rows.reserve(trials);

    std::mt19937_64 rng = make_engine(seed);
    double worst = -1.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        NoGoTrial trial;
        trial.gamma = uniform(rng, 0.0, kTwoPi);
        trial.theta_d = uniform(rng, 0.0, kPi);
        trial.theta_e = uniform(rng, 0.0, kPi);
        trial.phases.phi_d = uniform(rng, 0.0, kTwoPi);
        trial.phases.phi_e = uniform(rng, 0.0, kTwoPi);
        trial.report = nogo_verify(trial.gamma, trial.theta_d, trial.theta_e, trial.phases);

        const NoGoReport& r = trial.report;
        const double g = std::abs(r.gap);
        out.max_abs_gap = std::max(out.max_abs_gap, g);
        out.max_abs_q2 = std::max(out.max_abs_q2, std::abs(r.probs.q2));
        out.max_abs_q3 = std::max(out.max_abs_q3, std::abs(r.probs.q3));
        out.max_form_delta = std::max(
            {out.max_form_delta, std::abs(r.q1 - r.probs.q1), std::abs(r.q4 - r.probs.q4)});
        if (g > worst) {
            worst = g;
            out.worst = trial;
        }
        if (keep_rows) out.rows.push_back(trial);
    }
    return out;
}

}  // namespace cabello
