#include <gtest/gtest.h>

#include <cmath>

#include "cabello/quantum_core.hpp"
#include "cabello/random.hpp"

using namespace cabello;

namespace {

Direction random_direction(std::mt19937_64& rng) {
    return Direction(uniform(rng, 0.0, kPi), uniform(rng, 0.0, kTwoPi));
}

SchmidtState random_state(std::mt19937_64& rng) {
    return SchmidtState(uniform(rng, 0.0, kPi / 2.0), uniform(rng, 0.0, kTwoPi));
}

}  // namespace

TEST(SchmidtState, RejectsOutOfRange) {
    EXPECT_THROW(SchmidtState(-0.1), DomainError);
    EXPECT_THROW(SchmidtState(kPi / 2.0 + 1e-6), DomainError);
    EXPECT_THROW(SchmidtState(std::nan("")), DomainError);
    EXPECT_THROW(SchmidtState::from_cos_beta(1.2), DomainError);
    EXPECT_NO_THROW(SchmidtState(0.0));
    EXPECT_NO_THROW(SchmidtState(kPi / 2.0));
}

TEST(SchmidtState, GammaWrapsAndClassifies) {
    SchmidtState s(0.3, -1.0);
    EXPECT_NEAR(s.gamma(), kTwoPi - 1.0, 1e-15);
    EXPECT_TRUE(SchmidtState(0.0).is_product());
    EXPECT_TRUE(SchmidtState(kPi / 2.0).is_product());
    EXPECT_TRUE(SchmidtState::maximally_entangled().is_maximal());
    EXPECT_FALSE(SchmidtState(0.5).is_maximal());
    EXPECT_NEAR(SchmidtState::from_cos_beta(0.485).cos_beta(), 0.485, 1e-15);
}

TEST(SchmidtState, AmplitudesNormalized) {
    auto rng = make_engine(3);
    for (int i = 0; i < 100; ++i) EXPECT_NEAR(random_state(rng).amplitudes().norm(), 1.0, 1e-15);
}

TEST(Direction, ValidatesAndCanonicalizes) {
    EXPECT_THROW(Direction(-0.1, 0.0), DomainError);
    EXPECT_THROW(Direction(kPi + 0.1, 0.0), DomainError);
    const Direction d = Direction::canonical(-0.7, 0.2);
    EXPECT_NEAR(d.theta, 0.7, 1e-15);
    EXPECT_NEAR(d.phi, 0.2 + kPi, 1e-15);
    const Eigen::Vector3d a = Direction::canonical(-0.7, 0.2).bloch_vector();
    const Eigen::Vector3d b(std::sin(-0.7) * std::cos(0.2), std::sin(-0.7) * std::sin(0.2),
                            std::cos(-0.7));
    EXPECT_LT((a - b).norm(), 1e-15);
}

TEST(DensityMatrix, ProductState) {
    const Matrix4c rho = density_matrix(SchmidtState(0.0));
    Matrix4c expected = Matrix4c::Zero();
    expected(0, 0) = 1.0;
    EXPECT_LT((rho - expected).norm(), 1e-15);
}

TEST(DensityMatrix, BellStateCorners) {
    const Matrix4c rho = density_matrix(SchmidtState(kPi / 4.0));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
            EXPECT_NEAR(std::abs(rho(r, c) - Complex(corner ? 0.5 : 0.0, 0.0)), 0.0, 1e-15);
        }
}

TEST(DensityMatrix, CornerPhase) {
    const Matrix4c rho = density_matrix(SchmidtState(0.5, 1.0));
    const Complex expected = std::cos(0.5) * std::sin(0.5) * std::exp(Complex(0.0, -1.0));
    EXPECT_NEAR(std::abs(rho(0, 3) - expected), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rho(0, 3)), std::cos(0.5) * std::sin(0.5), 1e-15);
}

TEST(DensityMatrix, PauliExpansionAgrees) {
    auto rng = make_engine(11);
    for (int i = 0; i < 200; ++i) {
        const SchmidtState s = random_state(rng);
        const Matrix4c diff = density_matrix(s) - density_matrix_pauli(s);
        EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Projector, ZAndX) {
    Matrix2c up = Matrix2c::Zero();
    up(0, 0) = 1.0;
    Matrix2c down = Matrix2c::Zero();
    down(1, 1) = 1.0;
    EXPECT_LT((projector(Direction(0.0, 0.0), Outcome::Plus) - up).norm(), 1e-15);
    EXPECT_LT((projector(Direction(kPi, 0.0), Outcome::Plus) - down).norm(), 1e-15);
    const Matrix2c px = projector(Direction(kPi / 2.0, 0.0), Outcome::Plus);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(px(r, c) - Complex(0.5, 0.0)), 0.0, 1e-15);
}

TEST(Projector, CompleteAndIdempotent) {
    auto rng = make_engine(5);
    for (int i = 0; i < 200; ++i) {
        const Direction d = random_direction(rng);
        const Matrix2c p = projector(d, Outcome::Plus);
        const Matrix2c m = projector(d, Outcome::Minus);
        EXPECT_LT((p + m - Matrix2c::Identity()).norm(), 1e-14);
        EXPECT_LT((p * p - p).norm(), 1e-14);
        EXPECT_LT((m * m - m).norm(), 1e-14);
        EXPECT_LT((p.adjoint() - p).norm(), 1e-15);
    }
}

TEST(Oracle, TrivialCases) {
    const Direction z(0.0, 0.0);
    EXPECT_NEAR(joint_probability_oracle(SchmidtState(0.0), z, Outcome::Plus, z, Outcome::Plus), 1.0,
                1e-15);
    const Direction x(kPi / 2.0, 0.0);
    EXPECT_NEAR(joint_probability_oracle(SchmidtState(kPi / 4.0), x, Outcome::Plus, x, Outcome::Plus),
                0.5, 1e-15);
}

TEST(Oracle, MatchesPlusPlusClosedForm) {
    // P(+,+) = c^2 cA^2 cB^2 + s^2 sA^2 sB^2 + 2 c s cA sA cB sB cos(phiA + phiB - gamma)
    // with half-angle cosines cA, cB and sines sA, sB.
    auto rng = make_engine(17);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const SchmidtState s = random_state(rng);
        const Direction a = random_direction(rng);
        const Direction b = random_direction(rng);
        const double c = s.cos_beta(), sn = s.sin_beta();
        const double ca = std::cos(a.theta / 2), sa = std::sin(a.theta / 2);
        const double cb = std::cos(b.theta / 2), sb = std::sin(b.theta / 2);
        const double closed = c * c * ca * ca * cb * cb + sn * sn * sa * sa * sb * sb +
                              2 * c * sn * ca * sa * cb * sb * std::cos(a.phi + b.phi - s.gamma());
        const double oracle = joint_probability_oracle(s, a, Outcome::Plus, b, Outcome::Plus);
        worst = std::max(worst, std::abs(closed - oracle));
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(Oracle, NormalizationAndNoSignalling) {
    auto rng = make_engine(23);
    const Outcome outs[2] = {Outcome::Plus, Outcome::Minus};
    for (int i = 0; i < 500; ++i) {
        const SchmidtState s = random_state(rng);
        const Direction a = random_direction(rng), a2 = random_direction(rng);
        const Direction b = random_direction(rng), b2 = random_direction(rng);
        double total = 0.0;
        for (Outcome oa : outs)
            for (Outcome ob : outs) total += joint_probability_oracle(s, a, oa, b, ob);
        EXPECT_NEAR(total, 1.0, 1e-12);
        for (Outcome oa : outs) {
            const double m1 = joint_probability_oracle(s, a, oa, b, Outcome::Plus) +
                              joint_probability_oracle(s, a, oa, b, Outcome::Minus);
            const double m2 = joint_probability_oracle(s, a, oa, b2, Outcome::Plus) +
                              joint_probability_oracle(s, a, oa, b2, Outcome::Minus);
            EXPECT_NEAR(m1, m2, 1e-12);
        }
        for (Outcome ob : outs) {
            const double m1 = joint_probability_oracle(s, a, Outcome::Plus, b, ob) +
                              joint_probability_oracle(s, a, Outcome::Minus, b, ob);
            const double m2 = joint_probability_oracle(s, a2, Outcome::Plus, b, ob) +
                              joint_probability_oracle(s, a2, Outcome::Minus, b, ob);
            EXPECT_NEAR(m1, m2, 1e-12);
        }
    }
}

TEST(Outcome, Helpers) {
    EXPECT_EQ(value(Outcome::Minus), -1);
    EXPECT_EQ(flip(Outcome::Plus), Outcome::Minus);
    EXPECT_EQ(to_string(Outcome::Plus), "+1");
}

TEST(Random, SeededStreamsAreReproducible) {
    auto a = make_engine(42, 1);
    auto b = make_engine(42, 1);
    auto c = make_engine(42, 2);
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    for (int i = 0; i < 1000; ++i) {
        const double u = unit_uniform(a);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
