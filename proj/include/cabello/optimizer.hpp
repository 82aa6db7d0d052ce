// Maximization of the success gap q4 - q1 over constraint-satisfying
// settings, stationarity diagnostics, the Hardy special case (q1 = 0) and
// state sweeps.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cabello/cabello_engine.hpp"

namespace cabello {

/// q4 - q1 on the constrained family as a function of (theta_D, theta_E).
/// phase_cos is cos(phi_D + phi_E - gamma). Polar angles may be signed in
/// (-pi, pi), matching solve_constraints.
class GapObjective {
public:
    GapObjective(double beta, Branch branch = Branch::Minus);

    double beta() const { return beta_; }
    Branch branch() const { return branch_; }

    double operator()(double theta_d, double theta_e) const;

private:
    double beta_;
    Branch branch_;
};

/// General constrained gap, written with the auxiliary products
///   k1 = 1 / ((T^2 a^2 + 1)(T^2 b^2 + 1)),  k2 = 1 / ((a^2 + 1)(b^2 + 1))
/// where T = tan(beta), a = tan(theta_D/2), b = tan(theta_E/2).
double gap_general(double beta, double theta_d, double theta_e, double phase_cos);

/// The gap at cos(phi_D + phi_E - gamma) = -1 written as a difference of
/// two squared ratios.
double gap_phase_minus(double beta, double theta_d, double theta_e);

/// The gap on the symmetric line theta_D = theta_E = theta, phase -1.
double gap_symmetric(double beta, double theta);

struct StationarityReport {
    // Partial derivatives of the phase -1 gap from the factored stationarity
    // conditions: dG/dtheta_D = -c^2 (1 + a^2) (T b + a) R_D / den.
    double analytic_d = 0.0;
    double analytic_e = 0.0;
    // Central differences with step fd_step.
    double fd_d = 0.0;
    double fd_e = 0.0;

    double residual() const;        // max |analytic|
    double fd_residual() const;     // max |fd|
    double disagreement() const;    // max |analytic - fd|
};

/// Factors of the stationarity condition in theta_D: the linear factor
/// T tan(theta_E/2) + tan(theta_D/2) and the polynomial residual
/// (1 - T a b)(1 + T^2 a^2)^2 (1 + T^2 b^2) - T^2 (1 - T^3 a b)(1 + a^2)^2 (1 + b^2).
/// Swap the arguments for the theta_E condition.
struct StationarityFactors {
    double linear = 0.0;
    double polynomial = 0.0;
};
StationarityFactors stationarity_factors(double beta, double theta_d, double theta_e);

StationarityReport stationarity_residual(double beta, double theta_d, double theta_e,
                                         Branch branch = Branch::Minus, double fd_step = 1e-6);

struct HardyOptions {
    std::size_t grid_size = 2000;
    double refine_tol = 1e-12;
};

struct OptimizeOptions {
    std::size_t grid_size = 400;
    double refine_tol = 1e-10;
    Branch branch = Branch::Minus;
    std::size_t max_sweeps = 200;
    HardyOptions hardy;  // for OptimumRecord::hardy_star
};

struct OptimumRecord {
    double beta = 0.0;
    double theta_d_star = 0.0;
    double theta_e_star = 0.0;
    double gap_star = 0.0;
    double q1_star = 0.0;
    double q4_star = 0.0;
    double hardy_star = 0.0;
    double stationarity_residual = 0.0;
    Branch branch = Branch::Minus;
    // theta_D* = theta_E* (branch -1) or theta_D* = -theta_E* (branch +1)
    // within 1e-6.
    bool symmetric_optimum = false;
    bool nogo = false;  // maximally entangled, gap identically zero
};

/// Coarse grid over the polar-angle box, then alternating golden-section
/// line searches along the axes and both diagonals.
///
/// The box is [0, pi)^2 for branch -1. For branch +1 theta_E ranges over
/// (-pi, 0], which holds the mirror image of the branch -1 optimum.
OptimumRecord maximize_gap(double beta, const OptimizeOptions& opts = {});

struct HardyPoint {
    double theta_d = 0.0;
    double theta_e = 0.0;
    double q4 = 0.0;
};

/// q4 on the Hardy family (q1 = q2 = q3 = 0, phase -1) parameterized by
/// theta_D; theta_E follows from tan(theta_F/2) tan(theta_G/2) = cot(beta).
double hardy_q4(double beta, double theta_d);

/// Maximum of q4 subject to q1 = q2 = q3 = 0.
HardyPoint hardy_optimum(double beta, const HardyOptions& opts = {});
double hardy_max(double beta, const HardyOptions& opts = {});

/// Brute-force reference: max of hardy_q4 over n midpoints of (0, pi).
HardyPoint hardy_max_grid(double beta, std::size_t n = 100000);

struct BetaOptimum {
    double beta = 0.0;
    double value = 0.0;
};

/// Maximum of hardy_max over beta in (0, pi/2).
BetaOptimum hardy_global_max(std::size_t beta_grid = 400, double beta_tol = 1e-10);

struct SweepEntry {
    std::size_t index = 0;
    double beta = 0.0;
    std::optional<OptimumRecord> record;
    std::string error;

    bool ok() const { return record.has_value(); }
};

struct SweepOptions {
    OptimizeOptions optimize;
    unsigned workers = 0;  // 0: hardware concurrency
};

/// One entry per grid value, in grid order. Failures are captured per entry.
std::vector<SweepEntry> sweep(std::span<const double> beta_grid, const SweepOptions& opts = {});

/// Grid of cos(beta) = i / (n + 1), i = 1..n, returned as beta values in
/// increasing cos(beta) order.
std::vector<double> cos_beta_grid(std::size_t n);

}  // namespace cabello
