#include "cabello/quantum_core.hpp"

#include <algorithm>

#include <unsupported/Eigen/KroneckerProduct>

namespace cabello {

double wrap_two_pi(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative number can round up to exactly 2*pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

SchmidtState::SchmidtState(double beta, double gamma) : beta_(beta), gamma_(0.0) {
    if (!std::isfinite(beta) || !std::isfinite(gamma))
        throw DomainError("Schmidt angles must be finite");
    if (beta < 0.0 || beta > kPi / 2.0)
        throw DomainError("beta must lie in [0, pi/2], got " + std::to_string(beta));
    gamma_ = wrap_two_pi(gamma);
}

SchmidtState SchmidtState::from_cos_beta(double cos_beta, double gamma) {
    if (!std::isfinite(cos_beta) || cos_beta < 0.0 || cos_beta > 1.0)
        throw DomainError("cos(beta) must lie in [0, 1], got " + std::to_string(cos_beta));
    return SchmidtState(std::acos(cos_beta), gamma);
}

bool SchmidtState::is_product(double tol) const {
    return beta_ <= tol || beta_ >= kPi / 2.0 - tol;
}

bool SchmidtState::is_maximal(double tol) const {
    return std::abs(beta_ - kPi / 4.0) <= tol;
}

Eigen::Vector4cd SchmidtState::amplitudes() const {
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(0) = cos_beta();
    psi(3) = std::polar(sin_beta(), gamma_);
    return psi;
}

Direction::Direction(double theta_, double phi_) : theta(theta_), phi(wrap_two_pi(phi_)) {
    if (!std::isfinite(theta_) || !std::isfinite(phi_))
        throw DomainError("direction angles must be finite");
    if (theta_ < 0.0 || theta_ > kPi)
        throw DomainError("polar angle must lie in [0, pi], got " + std::to_string(theta_));
}

Direction Direction::canonical(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw DomainError("direction angles must be finite");
    // Bring theta into (-pi, pi], the axis is 2*pi periodic in theta.
    double t = std::remainder(theta, kTwoPi);
    if (t < 0.0) {
        t = -t;
        phi += kPi;
    }
    return Direction(std::min(t, kPi), phi);
}

Eigen::Vector3d Direction::bloch_vector() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::string to_string(Outcome o) { return o == Outcome::Plus ? "+1" : "-1"; }

const Matrix2c& pauli_x() {
    static const Matrix2c m = (Matrix2c() << 0, 1, 1, 0).finished();
    return m;
}

const Matrix2c& pauli_y() {
    static const Matrix2c m = (Matrix2c() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    return m;
}

const Matrix2c& pauli_z() {
    static const Matrix2c m = (Matrix2c() << 1, 0, 0, -1).finished();
    return m;
}

Matrix4c density_matrix(const SchmidtState& state) {
    const Eigen::Vector4cd psi = state.amplitudes();
    return psi * psi.adjoint();
}

Matrix4c density_matrix_pauli(const SchmidtState& state) {
    using Eigen::kroneckerProduct;
    const Matrix2c id = Matrix2c::Identity();
    const Matrix2c& x = pauli_x();
    const Matrix2c& y = pauli_y();
    const Matrix2c& z = pauli_z();

    const double c = state.cos_beta();
    const double s = state.sin_beta();
    const double pol = c * c - s * s;
    const double coh_re = 2.0 * c * s * std::cos(state.gamma());
    const double coh_im = 2.0 * c * s * std::sin(state.gamma());

    Matrix4c rho = kroneckerProduct(id, id);
    rho += pol * Matrix4c(kroneckerProduct(id, z));
    rho += pol * Matrix4c(kroneckerProduct(z, id));
    rho += coh_re * Matrix4c(kroneckerProduct(x, x));
    rho += coh_im * Matrix4c(kroneckerProduct(x, y));
    rho += coh_im * Matrix4c(kroneckerProduct(y, x));
    rho -= coh_re * Matrix4c(kroneckerProduct(y, y));
    rho += Matrix4c(kroneckerProduct(z, z));
    return rho / 4.0;
}

Matrix2c projector(const Direction& direction, Outcome outcome) {
    const Eigen::Vector3d n = direction.bloch_vector();
    const Matrix2c n_sigma = n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z();
    return (Matrix2c::Identity() + static_cast<double>(value(outcome)) * n_sigma) / 2.0;
}

double joint_probability_oracle(const SchmidtState& state, const Direction& dir_a,
                                Outcome out_a, const Direction& dir_b, Outcome out_b,
                                const OracleOptions& opts) {
    const Matrix4c rho = density_matrix(state);
    const Matrix4c joint =
        Eigen::kroneckerProduct(projector(dir_a, out_a), projector(dir_b, out_b));
    const Complex tr = (rho * joint).trace();

    if (std::abs(tr.imag()) > opts.imag_tol)
        throw NumericalError("trace oracle: imaginary part " + std::to_string(tr.imag()));
    if (tr.real() < -opts.range_tol || tr.real() > 1.0 + opts.range_tol)
        throw NumericalError("trace oracle: probability out of range " +
                             std::to_string(tr.real()));
    return std::clamp(tr.real(), 0.0, 1.0);
}

}  // namespace cabello
