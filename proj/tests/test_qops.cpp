#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace ewit;
using namespace testing_util;

TEST(SiteDims, RejectsBadDimensionsAndCap) {
    EXPECT_THROW(SiteDims(std::vector<std::size_t>{}), ConfigError);
    EXPECT_THROW(SiteDims({2, 1}), ConfigError);
    EXPECT_THROW(SiteDims::qubits(15), ResourceError);
    EXPECT_NO_THROW(SiteDims::qubits(14));
    EXPECT_THROW(SiteDims({4, 4}, 8), ResourceError);
    EXPECT_EQ(SiteDims({2, 3, 4}).strides(), (std::vector<std::size_t>{12, 4, 1}));
}

TEST(HermitianOperator, RejectsNonHermitian) {
    CMatrix m(2, 2);
    m << 1, 2, 0, 1;
    EXPECT_THROW(HermitianOperator(m, SiteDims::qubits(1)), ConfigError);
    EXPECT_THROW(HermitianOperator(CMatrix::Identity(3, 3), SiteDims::qubits(1)), ConfigError);
}

TEST(DensityOperator, RejectsBadTraceOrNegativeEigenvalue) {
    EXPECT_THROW(DensityOperator(CMatrix::Identity(2, 2), SiteDims::qubits(1)), ConfigError);
    CMatrix m(2, 2);
    m << 1.5, 0, 0, -0.5;
    EXPECT_THROW(DensityOperator(m, SiteDims::qubits(1)), ConfigError);
}

TEST(TensorProduct, IdentityDiagonalAndBitFlip) {
    auto id = HermitianOperator(CMatrix::Identity(2, 2), SiteDims::qubits(1));
    EXPECT_LT(max_abs(tensor_product(id, id).matrix() - CMatrix::Identity(4, 4)), 1e-15);

    auto    zz = tensor_product(pauli_op('Z'), pauli_op('Z'));
    CMatrix expect = CMatrix::Zero(4, 4);
    expect.diagonal() << 1, -1, -1, 1;
    EXPECT_LT(max_abs(zz.matrix() - expect), 1e-15);
    EXPECT_EQ(zz.dims(), SiteDims::qubits(2));

    auto    xx  = tensor_product(pauli_op('X'), pauli_op('X'));
    CVector k00 = PureState::basis(SiteDims::qubits(2), 0).amplitudes();
    CVector out = xx.matrix() * k00;
    EXPECT_LT((out - PureState::basis(SiteDims::qubits(2), 3).amplitudes()).norm(), 1e-15);
}

TEST(TensorProduct, CapExceeded) {
    // 2^7 x 2^8 exceeds 2^14; rejected before any allocation
    auto a = HermitianOperator(CMatrix::Identity(128, 128), SiteDims::qubits(7));
    auto b = HermitianOperator(CMatrix::Identity(256, 256), SiteDims::qubits(8));
    EXPECT_THROW((void)tensor_product(a, b), ResourceError);
    EXPECT_EQ(a.dims().concat(SiteDims::qubits(7)).total(), 16384u);
}

TEST(PartialTrace, BellProductAndW) {
    auto r = partial_trace(DensityOperator::projector(bell()), {0});
    EXPECT_LT(max_abs(r.matrix() - CMatrix::Identity(2, 2) / 2.0), 1e-15);

    auto prod = tensor_product(PureState::basis(SiteDims::qubits(1), 0), PureState::basis(SiteDims::qubits(1), 1));
    auto r1   = partial_trace(DensityOperator::projector(prod), {1});
    CMatrix one = CMatrix::Zero(2, 2);
    one(1, 1)   = 1;
    EXPECT_LT(max_abs(r1.matrix() - one), 1e-15);

    // W state, brute-force oracle over the 8x8 projector
    auto                  w = w3();
    std::vector<oracle::cd> amps(w.amplitudes().data(), w.amplitudes().data() + 8);
    auto                  ref = oracle::reduce_to_qubit(amps, 3, 0);
    auto                  r0  = partial_trace(DensityOperator::projector(w), {0});
    EXPECT_NEAR(ref[0][0].real(), 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(ref[1][1].real(), 1.0 / 3.0, 1e-14);
    for(int a = 0; a < 2; ++a)
        for(int b = 0; b < 2; ++b) EXPECT_NEAR(std::abs(r0.matrix()(a, b) - ref[a][b]), 0.0, 1e-14);
}

TEST(PartialTrace, Errors) {
    auto rho = DensityOperator::projector(bell());
    EXPECT_THROW((void)partial_trace(rho, {}), ConfigError);
    EXPECT_THROW((void)partial_trace(rho, {2}), ConfigError);
}

TEST(PartialTrace, FactorizesOnTensorProducts) {
    std::mt19937_64 rng(7);
    for(int trial = 0; trial < 20; ++trial) {
        auto a  = random_density(SiteDims({2, 3}), rng);
        auto b  = random_density(SiteDims({2}), rng);
        auto ab = tensor_product(a, b);
        EXPECT_LT(max_abs(partial_trace(ab, {0, 1}).matrix() - a.matrix()), 1e-10);
        EXPECT_LT(max_abs(partial_trace(ab, {2}).matrix() - b.matrix()), 1e-10);
        EXPECT_NEAR(partial_trace(ab, {1}).matrix().trace().real(), 1.0, 1e-10);
    }
}

TEST(EigHermitian, PauliAndHeisenberg) {
    auto z = eig_hermitian(pauli_op('Z'));
    EXPECT_NEAR(z.eigenvalues(0), -1, 1e-14);
    EXPECT_NEAR(z.eigenvalues(1), 1, 1e-14);

    auto x = eig_hermitian(pauli_op('X'));
    EXPECT_NEAR(x.eigenvalues(0), -1, 1e-14);
    const double s = 1 / std::sqrt(2.0);
    // phase convention: largest-magnitude (first on ties) component real positive
    EXPECT_NEAR(std::abs(x.eigenvectors(0, 0) - s), 0, 1e-12);
    EXPECT_NEAR(std::abs(x.eigenvectors(1, 0) + s), 0, 1e-12);
    EXPECT_NEAR(std::abs(x.eigenvectors(0, 1) - s), 0, 1e-12);
    EXPECT_NEAR(std::abs(x.eigenvectors(1, 1) - s), 0, 1e-12);

    CMatrix heis = CMatrix::Zero(4, 4);
    for(char c : {'X', 'Y', 'Z'}) heis += Eigen::kroneckerProduct(pauli(c), pauli(c)).eval();
    auto h = eig_hermitian(HermitianOperator(heis, SiteDims::qubits(2)));
    EXPECT_NEAR(h.eigenvalues(0), -3, 1e-12);
    for(int i = 1; i < 4; ++i) EXPECT_NEAR(h.eigenvalues(i), 1, 1e-12);
}

TEST(EigHermitian, RandomReconstructionAndOrthonormality) {
    std::mt19937_64 rng(2024);
    for(std::size_t n : {2u, 3u, 8u, 17u, 64u}) {
        auto a  = random_hermitian(SiteDims({n}), rng);
        auto sp = eig_hermitian(a);
        EXPECT_LT(max_abs(a.matrix() - sp.reconstruct()), 1e-8);
        EXPECT_LT(max_abs(sp.eigenvectors.adjoint() * sp.eigenvectors - CMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))), 1e-8);
        for(Eigen::Index i = 1; i < sp.eigenvalues.size(); ++i) EXPECT_LE(sp.eigenvalues(i - 1), sp.eigenvalues(i));
    }
}

TEST(EigHermitian, DeterministicPhases) {
    std::mt19937_64 rng(5);
    auto            a  = random_hermitian(SiteDims({6}), rng);
    auto            s1 = eig_hermitian(a);
    auto            s2 = eig_hermitian(a);
    EXPECT_EQ(max_abs(s1.eigenvectors - s2.eigenvectors), 0.0);
    for(Eigen::Index j = 0; j < 6; ++j) {
        Eigen::Index k;
        s1.eigenvectors.col(j).cwiseAbs().maxCoeff(&k);
        EXPECT_NEAR(s1.eigenvectors(k, j).imag(), 0.0, 1e-14);
        EXPECT_GT(s1.eigenvectors(k, j).real(), 0.0);
    }
}

TEST(VonNeumannEntropy, Examples) {
    EXPECT_NEAR(von_neumann_entropy(DensityOperator::projector(bell())), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(DensityOperator::maximally_mixed(SiteDims::qubits(2))), std::log(4.0), 1e-12);
    CMatrix d = CMatrix::Zero(2, 2);
    d.diagonal() << 1.0 / 3.0, 2.0 / 3.0;
    EXPECT_NEAR(von_neumann_entropy(DensityOperator(d, SiteDims::qubits(1))), oracle::w_state_entropy, 1e-12);
}

TEST(VonNeumannEntropy, AdditiveOnProducts) {
    std::mt19937_64 rng(11);
    for(int i = 0; i < 50; ++i) {
        auto a = random_density(SiteDims::qubits(1), rng);
        auto b = random_density(SiteDims::qubits(1), rng);
        EXPECT_NEAR(von_neumann_entropy(tensor_product(a, b)), von_neumann_entropy(a) + von_neumann_entropy(b), 1e-8);
    }
}

TEST(RelativeEntropy, Examples) {
    std::mt19937_64 rng(3);
    auto            r = random_density(SiteDims::qubits(2), rng);
    EXPECT_NEAR(quantum_relative_entropy(r, r), 0.0, 1e-10);

    auto zero = DensityOperator::projector(PureState::basis(SiteDims::qubits(1), 0));
    auto one  = DensityOperator::projector(PureState::basis(SiteDims::qubits(1), 1));
    EXPECT_NEAR(quantum_relative_entropy(zero, DensityOperator::maximally_mixed(SiteDims::qubits(1))), oracle::ln2, 1e-12);
    EXPECT_TRUE(std::isinf(quantum_relative_entropy(zero, one)));
    EXPECT_THROW((void)quantum_relative_entropy(zero, r), ConfigError);
}

TEST(RelativeEntropy, KleinInequality) {
    std::mt19937_64 rng(99);
    for(int i = 0; i < 100; ++i) {
        SiteDims dims({2, 3});
        auto     s = random_density(dims, rng);
        auto     r = random_density(dims, rng);
        EXPECT_GE(quantum_relative_entropy(s, r), -1e-9);
    }
}

TEST(PartialTranspose, ProductBellAndMixed) {
    auto prod = DensityOperator::projector(tensor_product(PureState::basis(SiteDims::qubits(1), 0), PureState::basis(SiteDims::qubits(1), 1)));
    auto pt   = partial_transpose(prod, {1});
    EXPECT_GE(eig_hermitian(pt).eigenvalues.minCoeff(), -1e-12);

    auto bpt = eig_hermitian(partial_transpose(DensityOperator::projector(bell()), {1}));
    EXPECT_NEAR(bpt.eigenvalues(0), -0.5, 1e-12);

    auto mixed = DensityOperator::maximally_mixed(SiteDims::qubits(2));
    EXPECT_LT(max_abs(partial_transpose(mixed, {0}).matrix() - mixed.matrix()), 1e-15);
    EXPECT_THROW((void)partial_transpose(mixed, {3}), ConfigError);
}

TEST(PartialTranspose, MatchesExplicitFormulaOnQutrit) {
    // (rho^{T_B})_{(a b),(a' b')} = rho_{(a b'),(a' b)}
    std::mt19937_64 rng(1);
    SiteDims        dims({2, 3});
    auto            rho = random_density(dims, rng);
    auto            pt  = partial_transpose(rho, {1});
    for(int a = 0; a < 2; ++a)
        for(int b = 0; b < 3; ++b)
            for(int a2 = 0; a2 < 2; ++a2)
                for(int b2 = 0; b2 < 3; ++b2)
                    EXPECT_NEAR(std::abs(pt.matrix()(a * 3 + b, a2 * 3 + b2) - rho.matrix()(a * 3 + b2, a2 * 3 + b)), 0.0, 1e-15);
}
