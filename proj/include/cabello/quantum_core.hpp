// Two-qubit pure states, spin-1/2 projectors and the Born-rule trace oracle.
//
// Basis ordering is {|00>, |01>, |10>, |11>} with particle A as the left
// tensor factor.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cabello {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angle tolerance used for the product / maximal-entanglement predicates.
inline constexpr double kAngleTol = 1e-12;

/// Input outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the request is well formed but lands on the maximally
/// entangled state, for which no Cabello setting exists.
class NoGoError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A floating-point result failed a consistency check.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reduces an angle to [0, 2*pi).
double wrap_two_pi(double angle);

/// cos(beta)|00> + e^{i gamma} sin(beta)|11>, beta in [0, pi/2].
class SchmidtState {
public:
    SchmidtState(double beta, double gamma = 0.0);

    static SchmidtState from_cos_beta(double cos_beta, double gamma = 0.0);
    static SchmidtState maximally_entangled(double gamma = 0.0) {
        return SchmidtState(kPi / 4.0, gamma);
    }

    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    double cos_beta() const { return std::cos(beta_); }
    double sin_beta() const { return std::sin(beta_); }
    double tan_beta() const { return std::tan(beta_); }

    bool is_product(double tol = kAngleTol) const;
    bool is_maximal(double tol = kAngleTol) const;

    /// Amplitudes in the computational basis.
    Eigen::Vector4cd amplitudes() const;

private:
    double beta_;
    double gamma_;
};

/// Bloch direction (sin t cos p, sin t sin p, cos t).
struct Direction {
    double theta = 0.0;
    double phi = 0.0;

    Direction() = default;
    Direction(double theta, double phi);

    /// Maps a signed polar angle onto the canonical chart: a negative theta
    /// is the same axis as (|theta|, phi + pi). Also wraps theta into [0, pi]
    /// modulo 2*pi.
    static Direction canonical(double theta, double phi);

    Eigen::Vector3d bloch_vector() const;
};

enum class Outcome : int { Plus = +1, Minus = -1 };

inline int value(Outcome o) { return static_cast<int>(o); }
inline Outcome flip(Outcome o) { return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus; }
std::string to_string(Outcome o);

const Matrix2c& pauli_x();
const Matrix2c& pauli_y();
const Matrix2c& pauli_z();

/// rho = |psi><psi|.
Matrix4c density_matrix(const SchmidtState& state);

/// The same density matrix assembled from its Pauli-basis expansion.
Matrix4c density_matrix_pauli(const SchmidtState& state);

/// (I + o n.sigma) / 2.
Matrix2c projector(const Direction& direction, Outcome outcome);

struct OracleOptions {
    double imag_tol = 1e-10;
    double range_tol = 1e-10;
};

/// Tr[rho (P_A (x) P_B)], clamped to [0, 1]. Throws NumericalError when the
/// raw trace has a significant imaginary part or falls outside [0, 1] by more
/// than the range tolerance.
double joint_probability_oracle(const SchmidtState& state, const Direction& dir_a,
                                Outcome out_a, const Direction& dir_b, Outcome out_b,
                                const OracleOptions& opts = {});

}  // namespace cabello
