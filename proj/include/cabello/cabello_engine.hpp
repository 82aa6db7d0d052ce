// Closed-form Cabello probabilities, the zero-probability constraint solver,
// witness settings for non-maximally entangled states and the
// maximal-entanglement no-go check.
//
// Observables F and D act on particle A, G and E on particle B. The four
// probabilities are
//   q1 = P(F=+1, G=+1)   q2 = P(D=+1, G=-1)
//   q3 = P(F=-1, E=+1)   q4 = P(D=+1, E=+1)
// and the argument runs when q2 = q3 = 0 and 0 < q1 < q4.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cabello/quantum_core.hpp"

namespace cabello {

struct Settings {
    Direction f;  // side A
    Direction d;  // side A
    Direction g;  // side B
    Direction e;  // side B
};

struct CabelloProbs {
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
    double q4 = 0.0;

    double gap() const { return q4 - q1; }
};

/// Sign s of cos(phi_D + phi_E - gamma) = s chosen by the constraint solver.
enum class Branch : int { Minus = -1, Plus = +1 };

inline double sign(Branch b) { return static_cast<double>(static_cast<int>(b)); }

CabelloProbs cabello_probs(const SchmidtState& state, const Settings& settings);

/// The same quadruple from the trace oracle, outcome patterns
/// (F+,G+), (D+,G-), (F-,E+), (D+,E+).
CabelloProbs cabello_probs_oracle(const SchmidtState& state, const Settings& settings);

enum class Clause { Q2Nonzero, Q3Nonzero, GapNotPositive, Q1NotPositive };

std::string to_string(Clause c);

struct ConditionTolerances {
    double zero = 1e-12;      // q2, q3 <= zero
    double positive = 1e-9;   // q1 > positive, q4 - q1 > positive

    static ConditionTolerances uniform(double tol) { return {tol, tol}; }
};

struct Verdict {
    bool holds = false;
    std::vector<Clause> failed;  // in the order q2, q3, gap, q1

    std::string reason() const;
};

Verdict check_conditions(const CabelloProbs& probs, const ConditionTolerances& tol = {});
Verdict check_conditions(const CabelloProbs& probs, double tol);

struct ConstraintSolution {
    Settings settings;
    Branch branch = Branch::Minus;
    double free_phase = 0.0;
    // sin(theta_D) sin(theta_G) == 0 or sin(theta_F) sin(theta_E) == 0: the
    // corresponding phase sum does not enter q2 (or q3) and was left at the
    // gauge default.
    bool phase_unconstrained = false;
};

/// Half-angle relation tan(theta_out/2) = tan(beta) tan(theta_in/2), on the
/// branch with theta_out/2 in (-pi/2, pi/2).
double linked_polar_angle(double tan_beta, double theta_in);

/// Builds settings with q2 = q3 = 0 from (theta_D, theta_E).
///
/// theta_G and theta_F follow from the half-angle tangent relations, phases
/// from phi_D = free_phase, phi_D + phi_G = gamma, phi_F + phi_E = gamma and
/// cos(phi_D + phi_E - gamma) = branch. Polar angles may be signed in
/// (-pi, pi); a negative value denotes the axis (|theta|, phi + pi). All
/// returned directions are canonical.
ConstraintSolution solve_constraints(const SchmidtState& state, double theta_d, double theta_e,
                                     Branch branch = Branch::Minus, double free_phase = 0.0);

/// Explicit settings satisfying all four conditions.
///
/// tan(beta) > 1: theta_D = theta_G = 0 and cos(theta_E/2) > cos(theta_F/2).
/// tan(beta) < 1: theta_D = theta_G = pi and sin(theta_E/2) > sin(theta_F/2).
/// theta_F must satisfy tan(theta_F/2) = tan(beta) tan(theta_E/2).
/// Throws NoGoError for the maximally entangled state, DomainError for
/// product states and inputs violating the branch inequality.
Settings witness_settings(const SchmidtState& state, double theta_e, double theta_f);

/// As above with theta_F derived from theta_E.
Settings witness_settings(const SchmidtState& state, double theta_e);

struct NoGoPhases {
    double phi_d = 0.0;
    double phi_e = 0.0;
};

struct NoGoReport {
    double q1 = 0.0;    // half-angle form for tan(beta) = 1
    double q4 = 0.0;
    double gap = 0.0;
    Settings settings;
    CabelloProbs probs;  // full closed forms at the same settings
};

/// Evaluates q1 and q4 on the maximally entangled state for the constrained
/// family theta_G = theta_D, theta_F = theta_E, phi_G = gamma - phi_D,
/// phi_F = gamma - phi_E.
NoGoReport nogo_verify(double gamma, double theta_d, double theta_e, const NoGoPhases& phases = {});

struct NoGoTrial {
    double gamma = 0.0;
    double theta_d = 0.0;
    double theta_e = 0.0;
    NoGoPhases phases;
    NoGoReport report;
};

struct NoGoSweep {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double max_abs_gap = 0.0;      // |q4 - q1|
    double max_abs_q2 = 0.0;
    double max_abs_q3 = 0.0;
    double max_form_delta = 0.0;   // half-angle forms vs full closed forms
    NoGoTrial worst;
    std::vector<NoGoTrial> rows;   // filled when keep_rows
};

/// nogo_verify over random admissible parameters: gamma, phi_D, phi_E
/// uniform in [0, 2 pi), theta_D, theta_E uniform in [0, pi).
NoGoSweep nogo_sweep(std::uint64_t trials, std::uint64_t seed, bool keep_rows = false);

}  // namespace cabello
