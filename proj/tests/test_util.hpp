#pragma once

#include <ewit/ewit.hpp>

#include <cmath>
#include <random>

namespace testing_util {

using namespace ewit;

inline CMatrix pauli(char c) {
    CMatrix m(2, 2);
    switch(c) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m = CMatrix::Identity(2, 2);
    }
    return m;
}

inline HermitianOperator pauli_op(char c) { return {pauli(c), SiteDims::qubits(1)}; }

inline PureState qubits_state(std::initializer_list<Complex> amps, std::size_t n) {
    CVector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for(auto a : amps) v(i++) = a;
    return PureState::normalized(v, SiteDims::qubits(n));
}

inline PureState bell() { return qubits_state({1, 0, 0, 1}, 2); }
inline PureState singlet() { return qubits_state({0, 1, -1, 0}, 2); }
inline PureState ghz3() { return qubits_state({1, 0, 0, 0, 0, 0, 0, 1}, 3); }
inline PureState w3() { return qubits_state({0, 1, 1, 0, 1, 0, 0, 0}, 3); }

/// sqrt(l)|00> + sqrt(1-l)|11>
inline PureState schmidt2(double l) { return qubits_state({std::sqrt(l), 0, 0, std::sqrt(1 - l)}, 2); }

inline CMatrix random_matrix(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMatrix                          m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for(Eigen::Index i = 0; i < m.rows(); ++i)
        for(Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline HermitianOperator random_hermitian(const SiteDims &dims, std::mt19937_64 &rng) {
    CMatrix m = random_matrix(dims.total(), rng);
    return {0.5 * (m + m.adjoint()), dims};
}

/// Full-rank random density matrix A A^dag / tr.
inline DensityOperator random_density(const SiteDims &dims, std::mt19937_64 &rng) {
    CMatrix a = random_matrix(dims.total(), rng);
    CMatrix r = a * a.adjoint();
    r /= r.trace().real();
    return {0.5 * (r + r.adjoint()), dims};
}

inline PureState random_pure(const SiteDims &dims, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CVector                          v(static_cast<Eigen::Index>(dims.total()));
    for(Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
    return PureState::normalized(v, dims);
}

inline std::vector<double> random_levels(std::size_t n, std::mt19937_64 &rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<double>                    e(n);
    for(auto &x : e) x = u(rng);
    return e;
}

inline HermitianOperator diagonal_hamiltonian(const std::vector<double> &levels) {
    return HermitianOperator::diagonal(levels, SiteDims({levels.size()}));
}

inline double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

inline SpinModelSpec model(SpinModelKind kind, std::size_t n, double j, double h = 0.0, Boundary b = Boundary::open) {
    SpinModelSpec s;
    s.kind     = kind;
    s.n_sites  = n;
    s.coupling = j;
    s.field    = h;
    s.boundary = b;
    return s;
}

} // namespace testing_util
