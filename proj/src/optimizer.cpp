#include "cabello/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cabello/golden.hpp"

namespace cabello {

namespace {

void require_open_beta(double beta) {
    if (!std::isfinite(beta) || beta <= 0.0 || beta >= kPi / 2.0)
        throw DomainError("beta must lie in (0, pi/2), got " + std::to_string(beta));
}

void require_signed_polar(double theta) {
    if (!std::isfinite(theta) || theta <= -kPi || theta >= kPi)
        throw DomainError("polar angle must lie in (-pi, pi), got " + std::to_string(theta));
}

// Unchecked constrained gap from the k1/k2 expansion.
double gap_k_form(double tb, double cb, double theta_d, double theta_e, double phase_cos) {
    const double a = std::tan(theta_d / 2.0);
    const double b = std::tan(theta_e / 2.0);
    const double t2 = tb * tb;
    const double k1 = 1.0 / ((t2 * a * a + 1.0) * (t2 * b * b + 1.0));
    const double k2 = 1.0 / ((a * a + 1.0) * (b * b + 1.0));
    const double ab = a * b;
    return cb * cb *
           ((k2 - k1) + t2 * ab * ab * (k2 - k1 * t2 * t2) +
            2.0 * tb * ab * (k2 - k1 * t2) * phase_cos);
}

// dG/dtheta_D of the phase -1 gap assembled from its stationarity factors.
double analytic_partial(double tb, double cb, double theta_d, double theta_e) {
    const double a = std::tan(theta_d / 2.0);
    const double b = std::tan(theta_e / 2.0);
    const double t2 = tb * tb;
    const double linear = tb * b + a;
    const double pa = 1.0 + a * a, pb = 1.0 + b * b;
    const double qa = 1.0 + t2 * a * a, qb = 1.0 + t2 * b * b;
    const double poly =
        (1.0 - tb * a * b) * qa * qa * qb - t2 * (1.0 - t2 * tb * a * b) * pa * pa * pb;
    return -cb * cb * linear * poly / (pa * pb * qa * qa * qb);
}

constexpr double kSymmetryTol = 1e-6;
constexpr double kLogTanLimit = 30.0;  // |ln tan(theta/2)|, keeps theta inside (0, pi)
constexpr double kLineWidth = 1.0;

}  // namespace

GapObjective::GapObjective(double beta, Branch branch) : beta_(beta), branch_(branch) {
    require_open_beta(beta);
}

double GapObjective::operator()(double theta_d, double theta_e) const {
    return gap_k_form(std::tan(beta_), std::cos(beta_), theta_d, theta_e, sign(branch_));
}

double gap_general(double beta, double theta_d, double theta_e, double phase_cos) {
    require_open_beta(beta);
    require_signed_polar(theta_d);
    require_signed_polar(theta_e);
    if (!(phase_cos >= -1.0 && phase_cos <= 1.0))
        throw DomainError("phase cosine must lie in [-1, 1]");
    return gap_k_form(std::tan(beta), std::cos(beta), theta_d, theta_e, phase_cos);
}

double gap_phase_minus(double beta, double theta_d, double theta_e) {
    require_open_beta(beta);
    require_signed_polar(theta_d);
    require_signed_polar(theta_e);
    const double tb = std::tan(beta);
    const double cb = std::cos(beta);
    const double a = std::tan(theta_d / 2.0);
    const double b = std::tan(theta_e / 2.0);
    const double t2 = tb * tb;
    const double num4 = 1.0 - tb * a * b;
    const double num1 = 1.0 - t2 * tb * a * b;
    return cb * cb *
           (num4 * num4 / ((a * a + 1.0) * (b * b + 1.0)) -
            num1 * num1 / ((t2 * a * a + 1.0) * (t2 * b * b + 1.0)));
}

double gap_symmetric(double beta, double theta) {
    require_open_beta(beta);
    if (!std::isfinite(theta) || theta < 0.0 || theta >= kPi)
        throw DomainError("symmetric polar angle must lie in [0, pi)");
    const double tb = std::tan(beta);
    const double cb = std::cos(beta);
    const double u = std::tan(theta / 2.0);
    const double u2 = u * u;
    const double t2 = tb * tb;
    const double r4 = (1.0 - tb * u2) / (u2 + 1.0);
    const double r1 = (1.0 - t2 * tb * u2) / (t2 * u2 + 1.0);
    return cb * cb * (r4 * r4 - r1 * r1);
}

double StationarityReport::residual() const {
    return std::max(std::abs(analytic_d), std::abs(analytic_e));
}

double StationarityReport::fd_residual() const {
    return std::max(std::abs(fd_d), std::abs(fd_e));
}

double StationarityReport::disagreement() const {
    return std::max(std::abs(analytic_d - fd_d), std::abs(analytic_e - fd_e));
}

StationarityFactors stationarity_factors(double beta, double theta_d, double theta_e) {
    require_open_beta(beta);
    const double tb = std::tan(beta);
    const double a = std::tan(theta_d / 2.0);
    const double b = std::tan(theta_e / 2.0);
    const double t2 = tb * tb;
    const double pa = 1.0 + a * a, pb = 1.0 + b * b;
    const double qa = 1.0 + t2 * a * a, qb = 1.0 + t2 * b * b;
    return {tb * b + a,
            (1.0 - tb * a * b) * qa * qa * qb - t2 * (1.0 - t2 * tb * a * b) * pa * pa * pb};
}

StationarityReport stationarity_residual(double beta, double theta_d, double theta_e,
                                         Branch branch, double fd_step) {
    require_open_beta(beta);
    require_signed_polar(theta_d);
    require_signed_polar(theta_e);
    if (!(fd_step > 0.0)) throw DomainError("finite-difference step must be positive");

    const double tb = std::tan(beta);
    const double cb = std::cos(beta);
    StationarityReport r;

    // The branch +1 gap is the branch -1 gap with theta_E mirrored.
    const double mirror = branch == Branch::Minus ? 1.0 : -1.0;
    const double te = mirror * theta_e;
    r.analytic_d = analytic_partial(tb, cb, theta_d, te);
    r.analytic_e = mirror * analytic_partial(tb, cb, te, theta_d);

    const double s = sign(branch);
    const double h = fd_step;
    r.fd_d = (gap_k_form(tb, cb, theta_d + h, theta_e, s) -
              gap_k_form(tb, cb, theta_d - h, theta_e, s)) / (2.0 * h);
    r.fd_e = (gap_k_form(tb, cb, theta_d, theta_e + h, s) -
              gap_k_form(tb, cb, theta_d, theta_e - h, s)) / (2.0 * h);
    return r;
}

OptimumRecord maximize_gap(double beta, const OptimizeOptions& opts) {
    require_open_beta(beta);
    if (opts.grid_size < 2) throw DomainError("optimizer grid needs at least 2 points per axis");
    if (!(opts.refine_tol > 0.0)) throw DomainError("refine tolerance must be positive");

    const SchmidtState state(beta);
    OptimumRecord rec;
    rec.beta = beta;
    rec.branch = opts.branch;
    rec.hardy_star = hardy_max(beta, opts.hardy);

    const double tb = state.tan_beta();
    const double s = sign(opts.branch);
    const double mirror = opts.branch == Branch::Minus ? 1.0 : -1.0;

    if (state.is_maximal()) {
        const CabelloProbs p =
            cabello_probs(state, solve_constraints(state, 0.0, 0.0, opts.branch).settings);
        rec.q1_star = p.q1;
        rec.q4_star = p.q4;
        rec.symmetric_optimum = true;
        rec.nogo = true;
        return rec;
    }

    // Coarse grid: product form over cos^2(beta), tabulated half-angle tangents.
    const std::size_t n = opts.grid_size;
    const double step = kPi / static_cast<double>(n);
    std::vector<double> theta(n), tan_half(n), inv_p(n), inv_q(n);
    for (std::size_t i = 0; i < n; ++i) {
        theta[i] = step * static_cast<double>(i);
        tan_half[i] = std::tan(theta[i] / 2.0);
        inv_p[i] = 1.0 / (1.0 + tan_half[i] * tan_half[i]);
        inv_q[i] = 1.0 / (1.0 + tb * tb * tan_half[i] * tan_half[i]);
    }
    const double t3 = tb * tb * tb;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ab = mirror * tan_half[i] * tan_half[j];
            const double u4 = 1.0 + s * tb * ab;
            const double u1 = 1.0 + s * t3 * ab;
            const double v = u4 * u4 * inv_p[i] * inv_p[j] - u1 * u1 * inv_q[i] * inv_q[j];
            if (v > best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }

    // Refinement in log-tangent coordinates u = ln|tan(theta/2)|. The gap
    // depends on the half-angle tangents mostly through their product, so
    // its ridge is the straight line u_D + u_E = const there.
    const GapObjective objective(beta, opts.branch);
    const auto to_theta = [](double u) { return 2.0 * std::atan(std::exp(u)); };
    const auto to_log = [step](double t) { return std::log(std::tan(std::max(t, step / 2.0) / 2.0)); };
    const auto eval = [&](double ud, double ue) {
        return objective(to_theta(ud), mirror * to_theta(ue));
    };

    std::array<double, 2> u{to_log(theta[bi]), to_log(theta[bj])};
    double fu = eval(u[0], u[1]);

    const double r2 = std::sqrt(0.5);
    const std::array<std::array<double, 2>, 4> dirs{{{1.0, 0.0}, {0.0, 1.0}, {r2, r2}, {r2, -r2}}};
    for (std::size_t sweep_no = 0; sweep_no < opts.max_sweeps; ++sweep_no) {
        const std::array<double, 2> start = u;
        for (const auto& dir : dirs) {
            double t_lo = -kLineWidth, t_hi = kLineWidth;
            for (int k = 0; k < 2; ++k) {
                if (dir[k] == 0.0) continue;
                double a = (-kLogTanLimit - u[k]) / dir[k];
                double b = (kLogTanLimit - u[k]) / dir[k];
                if (a > b) std::swap(a, b);
                t_lo = std::max(t_lo, a);
                t_hi = std::min(t_hi, b);
            }
            if (t_hi <= t_lo) continue;
            const auto line = [&](double t) { return eval(u[0] + t * dir[0], u[1] + t * dir[1]); };
            const LineMax m = golden_section_max(line, t_lo, t_hi, opts.refine_tol);
            if (m.f > fu) {
                u = {u[0] + m.x * dir[0], u[1] + m.x * dir[1]};
                fu = m.f;
            }
        }
        const double moved = std::hypot(to_theta(u[0]) - to_theta(start[0]),
                                        to_theta(u[1]) - to_theta(start[1]));
        if (moved < opts.refine_tol) break;
    }

    std::array<double, 2> x{to_theta(u[0]), mirror * to_theta(u[1])};
    double fx = objective(x[0], x[1]);
    // A boundary grid point (theta = 0) can only be matched, not beaten, in
    // log coordinates.
    const double f_grid = objective(theta[bi], mirror * theta[bj]);
    if (f_grid > fx) {
        x = {theta[bi], mirror * theta[bj]};
        fx = f_grid;
    }

    rec.theta_d_star = x[0];
    rec.theta_e_star = x[1];
    rec.gap_star = std::max(fx, 0.0);

    const CabelloProbs p =
        cabello_probs(state, solve_constraints(state, x[0], x[1], opts.branch).settings);
    rec.q1_star = p.q1;
    rec.q4_star = p.q4;
    if (std::abs(p.gap() - fx) > 1e-10)
        throw NumericalError("gap objective disagrees with the assembled probabilities");

    rec.stationarity_residual = stationarity_residual(beta, x[0], x[1], opts.branch).residual();
    rec.symmetric_optimum = std::abs(x[0] - mirror * x[1]) <= kSymmetryTol;
    return rec;
}

double hardy_q4(double beta, double theta_d) {
    require_open_beta(beta);
    if (!std::isfinite(theta_d) || theta_d < 0.0 || theta_d > kPi)
        throw DomainError("Hardy polar angle must lie in [0, pi]");
    const double tb = std::tan(beta);
    const double a = std::tan(theta_d / 2.0);
    // q1 = 0 forces tan(theta_D/2) tan(theta_E/2) = cot(beta)^3.
    const double theta_e = 2.0 * std::atan(1.0 / (tb * tb * tb * a));
    const double amp = std::cos(beta) * std::cos(theta_d / 2.0) * std::cos(theta_e / 2.0) -
                       std::sin(beta) * std::sin(theta_d / 2.0) * std::sin(theta_e / 2.0);
    return amp * amp;
}

namespace {

double hardy_partner(double beta, double theta_d) {
    const double tb = std::tan(beta);
    return 2.0 * std::atan(1.0 / (tb * tb * tb * std::tan(theta_d / 2.0)));
}

}  // namespace

HardyPoint hardy_optimum(double beta, const HardyOptions& opts) {
    require_open_beta(beta);
    if (opts.grid_size < 2) throw DomainError("Hardy grid needs at least 2 points");
    const std::size_t n = opts.grid_size;
    const double step = kPi / static_cast<double>(n);

    double best_x = step / 2.0;
    double best_f = hardy_q4(beta, best_x);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = step * (static_cast<double>(i) + 0.5);
        const double f = hardy_q4(beta, x);
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }
    const auto q4 = [beta](double t) { return hardy_q4(beta, t); };
    const LineMax m = golden_section_max(q4, std::max(0.0, best_x - step),
                                         std::min(kPi, best_x + step), opts.refine_tol);
    if (m.f > best_f) {
        best_f = m.f;
        best_x = m.x;
    }
    return {best_x, hardy_partner(beta, best_x), best_f};
}

double hardy_max(double beta, const HardyOptions& opts) { return hardy_optimum(beta, opts).q4; }

HardyPoint hardy_max_grid(double beta, std::size_t n) {
    require_open_beta(beta);
    if (n == 0) throw DomainError("grid must be non-empty");
    HardyPoint best;
    best.q4 = -1.0;
    const double step = kPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = step * (static_cast<double>(i) + 0.5);
        const double f = hardy_q4(beta, x);
        if (f > best.q4) best = {x, 0.0, f};
    }
    best.theta_e = hardy_partner(beta, best.theta_d);
    return best;
}

BetaOptimum hardy_global_max(std::size_t beta_grid, double beta_tol) {
    if (beta_grid < 2) throw DomainError("beta grid needs at least 2 points");
    const double step = (kPi / 2.0) / static_cast<double>(beta_grid);
    BetaOptimum best{step / 2.0, hardy_max(step / 2.0)};
    for (std::size_t i = 1; i < beta_grid; ++i) {
        const double b = step * (static_cast<double>(i) + 0.5);
        const double v = hardy_max(b);
        if (v > best.value) best = {b, v};
    }
    const auto f = [](double b) { return hardy_max(b); };
    const LineMax m = golden_section_max(f, std::max(best.beta - step, step / 2.0),
                                         std::min(best.beta + step, kPi / 2.0 - step / 2.0),
                                         beta_tol);
    if (m.f > best.value) best = {m.x, m.f};
    return best;
}

std::vector<SweepEntry> sweep(std::span<const double> beta_grid, const SweepOptions& opts) {
    std::vector<SweepEntry> out(beta_grid.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < beta_grid.size(); i = next++) {
            SweepEntry& entry = out[i];
            entry.index = i;
            entry.beta = beta_grid[i];
            try {
                entry.record = maximize_gap(beta_grid[i], opts.optimize);
            } catch (const std::exception& ex) {
                entry.error = ex.what();
            }
        }
    };

    unsigned workers = opts.workers ? opts.workers : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(
        std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(beta_grid.size(), 1)));
    if (workers == 1) {
        work();
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    pool.clear();
    return out;
}

std::vector<double> cos_beta_grid(std::size_t n) {
    if (n == 0) throw DomainError("grid must be non-empty");
    std::vector<double> betas(n);
    for (std::size_t i = 0; i < n; ++i)
        betas[i] = std::acos(static_cast<double>(i + 1) / static_cast<double>(n + 1));
    return betas;
}

}  // namespace cabello
