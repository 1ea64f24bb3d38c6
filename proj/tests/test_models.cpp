#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace ewit;
using namespace testing_util;

TEST(SpinHamiltonian, HeisenbergTwoSites) {
    auto h  = build_spin_hamiltonian(model(SpinModelKind::heisenberg, 2, 1.0));
    auto sp = eig_hermitian(h);
    EXPECT_NEAR(sp.eigenvalues(0), -3, 1e-12);
    for(int i = 1; i < 4; ++i) EXPECT_NEAR(sp.eigenvalues(i), 1, 1e-12);

    CMatrix ref = CMatrix::Zero(4, 4);
    for(char c : {'X', 'Y', 'Z'}) ref += Eigen::kroneckerProduct(pauli(c), pauli(c)).eval();
    EXPECT_LT(max_abs(h.matrix() - ref), 1e-15);
}

TEST(SpinHamiltonian, XYTwoSites) {
    auto sp = eig_hermitian(build_spin_hamiltonian(model(SpinModelKind::xy, 2, 1.0)));
    std::vector<double> expect{-2, 0, 0, 2};
    for(int i = 0; i < 4; ++i) EXPECT_NEAR(sp.eigenvalues(i), expect[static_cast<std::size_t>(i)], 1e-12);
}

TEST(SpinHamiltonian, TransverseIsingNoninteracting) {
    auto    h   = build_spin_hamiltonian(model(SpinModelKind::transverse_ising, 2, 0.0, 1.0));
    CMatrix id  = CMatrix::Identity(2, 2);
    CMatrix ref = -(Eigen::kroneckerProduct(pauli('X'), id).eval() + Eigen::kroneckerProduct(id, pauli('X')).eval());
    EXPECT_LT(max_abs(h.matrix() - ref), 1e-15);

    auto gs = ground_state(h);
    EXPECT_NEAR(gs.energy, -2, 1e-12);
    EXPECT_EQ(gs.degeneracy, 1u);
    for(Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(gs.state.amplitudes()(i) - 0.5), 0.0, 1e-10); // |++>
}

TEST(SpinHamiltonian, MatchesKroneckerConstructionForCustomTerms) {
    SpinModelSpec s;
    s.kind         = SpinModelKind::custom_terms;
    s.n_sites      = 3;
    s.custom_terms = {{{0, 2}, "XY", 0.7}, {{1}, "Z", -0.3}, {{2, 0, 1}, "YZX", 1.1}};
    auto h = build_spin_hamiltonian(s);

    auto kron3 = [](const CMatrix &a, const CMatrix &b, const CMatrix &c) {
        return Eigen::kroneckerProduct(Eigen::kroneckerProduct(a, b).eval(), c).eval();
    };
    CMatrix id  = CMatrix::Identity(2, 2);
    CMatrix ref = 0.7 * kron3(pauli('X'), id, pauli('Y')) - 0.3 * kron3(id, pauli('Z'), id) +
                  1.1 * kron3(pauli('Z'), pauli('X'), pauli('Y'));
    EXPECT_LT(max_abs(h.matrix() - ref), 1e-14);
}

TEST(SpinHamiltonian, InvalidSpecs) {
    EXPECT_THROW((void)build_spin_hamiltonian(model(SpinModelKind::heisenberg, 13, 1.0)), ResourceError);
    EXPECT_THROW((void)build_spin_hamiltonian(model(SpinModelKind::heisenberg, 1, 1.0)), ConfigError);
    EXPECT_THROW((void)build_spin_hamiltonian(model(SpinModelKind::heisenberg, 2, 1.0, 0.5)), ConfigError);
    SpinModelSpec s;
    s.kind         = SpinModelKind::custom_terms;
    s.n_sites      = 2;
    s.custom_terms = {{{0, 2}, "XX", 1.0}};
    EXPECT_THROW((void)build_spin_hamiltonian(s), ConfigError);
    s.custom_terms = {{{0, 1}, "XQ", 1.0}};
    EXPECT_THROW((void)build_spin_hamiltonian(s), ConfigError);
    s.custom_terms = {{{0, 0}, "XX", 1.0}};
    EXPECT_THROW((void)build_spin_hamiltonian(s), ConfigError);
}

TEST(SpinHamiltonian, PeriodicAddsExactlyTheWrapBond) {
    for(auto kind : {SpinModelKind::heisenberg, SpinModelKind::xy, SpinModelKind::transverse_ising}) {
        auto open     = spin_terms(model(kind, 5, 1.0, kind == SpinModelKind::transverse_ising ? 0.5 : 0.0));
        auto periodic = spin_terms(model(kind, 5, 1.0, kind == SpinModelKind::transverse_ising ? 0.5 : 0.0, Boundary::periodic));
        std::size_t per_bond = kind == SpinModelKind::heisenberg ? 3 : kind == SpinModelKind::xy ? 2 : 1;
        ASSERT_EQ(periodic.size(), open.size() + per_bond);
        for(std::size_t i = 0; i < periodic.size(); ++i) {
            bool wrap = std::find(periodic[i].sites.begin(), periodic[i].sites.end(), 4u) != periodic[i].sites.end() &&
                        std::find(periodic[i].sites.begin(), periodic[i].sites.end(), 0u) != periodic[i].sites.end();
            if(wrap) {
                EXPECT_EQ(periodic[i].sites, (std::vector<std::size_t>{4, 0}));
            }
        }
    }
}

TEST(SpinHamiltonian, PeriodicSpectrumIsTranslationInvariant) {
    // Relabel sites cyclically (i -> i+1) and compare spectra.
    for(auto kind : {SpinModelKind::heisenberg, SpinModelKind::xy, SpinModelKind::transverse_ising}) {
        auto spec  = model(kind, 5, 0.8, kind == SpinModelKind::transverse_ising ? 0.6 : 0.0, Boundary::periodic);
        auto terms = spin_terms(spec);
        auto shifted = terms;
        for(auto &t : shifted)
            for(auto &s : t.sites) s = (s + 1) % 5;
        auto a = eig_hermitian(assemble_pauli_sum(terms, 5)).eigenvalues;
        auto b = eig_hermitian(assemble_pauli_sum(shifted, 5)).eigenvalues;
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(SpinHamiltonian, AlwaysHermitian) {
    std::mt19937_64                        rng(17);
    std::uniform_real_distribution<double> u(-2, 2);
    for(std::size_t n = 2; n <= 6; ++n)
        for(auto kind : {SpinModelKind::heisenberg, SpinModelKind::xy, SpinModelKind::transverse_ising}) {
            auto h = build_spin_hamiltonian(model(kind, n, u(rng), kind == SpinModelKind::transverse_ising ? u(rng) : 0.0, Boundary::periodic));
            EXPECT_EQ(detail::max_antihermitian_entry(h.matrix()), 0.0);
        }
}

TEST(GroundState, HeisenbergSinglet) {
    auto gs = ground_state(build_spin_hamiltonian(model(SpinModelKind::heisenberg, 2, 1.0)));
    EXPECT_NEAR(gs.energy, -3, 1e-12);
    EXPECT_EQ(gs.degeneracy, 1u);
    const double s = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(gs.state.amplitudes()(1) - s), 0, 1e-10);
    EXPECT_NEAR(std::abs(gs.state.amplitudes()(2) + s), 0, 1e-10);
}

TEST(GroundState, ManifestDegeneracy) {
    auto h  = tensor_product(pauli_op('Z'), HermitianOperator(CMatrix::Identity(2, 2), SiteDims::qubits(1)));
    auto gs = ground_state(h);
    EXPECT_EQ(gs.degeneracy, 2u);
    EXPECT_NEAR(gs.energy, -1, 1e-12);
    EXPECT_NEAR(expectation(h, gs.state), -1, 1e-12);
}

TEST(ModeSpectrum, Generators) {
    auto u = make_frequencies(SpectrumKind::uniform, {4, 1.0, 0.0, {}});
    EXPECT_EQ(u, (std::vector<double>{1, 1, 1, 1}));
    auto l = make_frequencies(SpectrumKind::linear_dispersion, {3, 0.0, 0.5, {}});
    ASSERT_EQ(l.size(), 3u);
    EXPECT_DOUBLE_EQ(l[0], 0.5);
    EXPECT_DOUBLE_EQ(l[1], 1.0);
    EXPECT_DOUBLE_EQ(l[2], 1.5);
    auto c = make_frequencies(SpectrumKind::custom, {0, 0, 0, {2, 1, 3}});
    EXPECT_EQ(c, (std::vector<double>{1, 2, 3}));
    EXPECT_THROW((void)make_frequencies(SpectrumKind::custom, {0, 0, 0, {1, -2}}), ConfigError);
    EXPECT_THROW((void)make_frequencies(SpectrumKind::uniform, {3, 0.0, 0, {}}), ConfigError);
}

TEST(ModeSpectrum, Invariants) {
    EXPECT_THROW(ModeSpectrum({1, 2}, Statistics::bose, ChemicalPotential{1.0}), ConfigError);
    EXPECT_NO_THROW(ModeSpectrum({1, 2}, Statistics::bose, ChemicalPotential{0.99}));
    EXPECT_THROW(ModeSpectrum({1, 2}, Statistics::fermi, ParticleNumber{2.0}), ConfigError);
    EXPECT_THROW(ModeSpectrum({1, 2}, Statistics::fermi, ParticleNumber{-1.0}), ConfigError);
    ModeSpectrum s({3, 1, 2}, Statistics::fermi, ParticleNumber{1.0});
    EXPECT_EQ(s.frequencies(), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(s.particle_target(), 1.0);
    EXPECT_FALSE(s.chemical_potential());
}
