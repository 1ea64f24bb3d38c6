#pragma once

// Spin-chain Hamiltonians and free-mode spectra.
//
// Pauli operators X, Y, Z have eigenvalues +-1 (no spin-1/2 factors).
//   heisenberg       : H = J sum_<ij> (X_i X_j + Y_i Y_j + Z_i Z_j)
//   xy               : H = J sum_<ij> (X_i X_j + Y_i Y_j)
//   transverse_ising : H = -J sum_<ij> Z_i Z_j - h sum_i X_i
//   custom_terms     : H = sum_k c_k P_k for user-supplied Pauli strings P_k
// Bonds <ij> are (i, i+1) for open chains; periodic chains add (n-1, 0).

#include "qops.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ewit {

inline constexpr std::size_t max_qubit_sites = 12;
inline constexpr double      default_degeneracy_tol = 1e-9;

enum class SpinModelKind { heisenberg, xy, transverse_ising, custom_terms };
enum class Boundary { open, periodic };

/// coefficient * prod_k paulis[k] acting on sites[k].
struct PauliTerm {
    std::vector<std::size_t> sites;
    std::string              paulis;
    double                   coefficient = 1.0;
};

struct SpinModelSpec {
    SpinModelKind          kind     = SpinModelKind::heisenberg;
    std::size_t            n_sites  = 2;
    double                 coupling = 1.0; // J
    double                 field    = 0.0; // h, transverse_ising only
    Boundary               boundary = Boundary::open;
    std::vector<PauliTerm> custom_terms;
};

namespace detail {

inline void validate(const SpinModelSpec &spec) {
    if(spec.n_sites < 2) throw ConfigError("spin model: n_sites must be >= 2");
    if(spec.n_sites > max_qubit_sites)
        throw ResourceError("spin model: n_sites = " + std::to_string(spec.n_sites) + " exceeds the qubit cap of " +
                            std::to_string(max_qubit_sites));
    if(!std::isfinite(spec.coupling) || !std::isfinite(spec.field)) throw ConfigError("spin model: J and h must be finite");
    if(spec.field != 0.0 && (spec.kind == SpinModelKind::heisenberg || spec.kind == SpinModelKind::xy))
        throw ConfigError("spin model: field h is only defined for transverse_ising");
    if(spec.kind == SpinModelKind::custom_terms && spec.custom_terms.empty())
        throw ConfigError("spin model: custom_terms kind requires at least one term");
    for(const auto &t : spec.custom_terms) {
        if(t.sites.size() != t.paulis.size()) throw ConfigError("spin model: term has " + std::to_string(t.sites.size()) + " sites but " + std::to_string(t.paulis.size()) + " Pauli labels");
        if(!std::isfinite(t.coefficient)) throw ConfigError("spin model: non-finite term coefficient");
        std::vector<bool> seen(spec.n_sites, false);
        for(std::size_t k = 0; k < t.sites.size(); ++k) {
            if(t.sites[k] >= spec.n_sites) throw ConfigError("spin model: term references site " + std::to_string(t.sites[k]) + " out of range");
            if(seen[t.sites[k]]) throw ConfigError("spin model: term repeats site " + std::to_string(t.sites[k]));
            seen[t.sites[k]] = true;
            char c = t.paulis[k];
            if(c != 'I' && c != 'X' && c != 'Y' && c != 'Z') throw ConfigError(std::string("spin model: unknown Pauli label '") + c + "'");
        }
    }
}

} // namespace detail

/// Nearest-neighbour bonds of the chain.
[[nodiscard]] inline std::vector<std::pair<std::size_t, std::size_t>> chain_bonds(std::size_t n_sites, Boundary boundary) {
    std::vector<std::pair<std::size_t, std::size_t>> bonds;
    for(std::size_t i = 0; i + 1 < n_sites; ++i) bonds.emplace_back(i, i + 1);
    if(boundary == Boundary::periodic) bonds.emplace_back(n_sites - 1, 0);
    return bonds;
}

/// Expands a model into its Pauli-string terms.
[[nodiscard]] inline std::vector<PauliTerm> spin_terms(const SpinModelSpec &spec) {
    detail::validate(spec);
    std::vector<PauliTerm> terms;
    const auto             bonds = chain_bonds(spec.n_sites, spec.boundary);
    const double           J     = spec.coupling;
    switch(spec.kind) {
        case SpinModelKind::heisenberg:
            for(auto [i, j] : bonds)
                for(const char *p : {"XX", "YY", "ZZ"}) terms.push_back({{i, j}, p, J});
            break;
        case SpinModelKind::xy:
            for(auto [i, j] : bonds)
                for(const char *p : {"XX", "YY"}) terms.push_back({{i, j}, p, J});
            break;
        case SpinModelKind::transverse_ising:
            for(auto [i, j] : bonds) terms.push_back({{i, j}, "ZZ", -J});
            for(std::size_t i = 0; i < spec.n_sites; ++i) terms.push_back({{i}, "X", -spec.field});
            break;
        case SpinModelKind::custom_terms: terms = spec.custom_terms; break;
    }
    return terms;
}

/// Dense matrix of a sum of Pauli strings on n qubits. Each string is a
/// signed permutation: P|x> = phase(x) |x xor flip>.
[[nodiscard]] inline HermitianOperator assemble_pauli_sum(const std::vector<PauliTerm> &terms, std::size_t n_sites) {
    auto       dims    = SiteDims::qubits(n_sites);
    const auto strides = dims.strides();
    const auto dim     = dims.total();
    CMatrix    h       = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for(const auto &t : terms) {
        std::size_t flip = 0;
        for(std::size_t k = 0; k < t.sites.size(); ++k)
            if(t.paulis[k] == 'X' || t.paulis[k] == 'Y') flip |= strides[t.sites[k]];
        for(std::size_t x = 0; x < dim; ++x) {
            Complex phase = t.coefficient;
            for(std::size_t k = 0; k < t.sites.size(); ++k) {
                bool up = (x & strides[t.sites[k]]) != 0;
                switch(t.paulis[k]) {
                    case 'Z':
                        if(up) phase = -phase;
                        break;
                    case 'Y': phase *= up ? Complex(0, -1) : Complex(0, 1); break;
                    default: break;
                }
            }
            h(static_cast<Eigen::Index>(x ^ flip), static_cast<Eigen::Index>(x)) += phase;
        }
    }
    return {std::move(h), std::move(dims)};
}

[[nodiscard]] inline HermitianOperator build_spin_hamiltonian(const SpinModelSpec &spec) {
    return assemble_pauli_sum(spin_terms(spec), spec.n_sites);
}

struct GroundStateResult {
    PureState   state;
    double      energy = 0.0;
    std::size_t degeneracy = 1;
};

[[nodiscard]] inline std::size_t ground_degeneracy(const RVector &ascending, double degeneracy_tol = default_degeneracy_tol) {
    std::size_t g = 1;
    while(g < static_cast<std::size_t>(ascending.size()) && ascending(static_cast<Eigen::Index>(g)) - ascending(0) <= degeneracy_tol) ++g;
    return g;
}

/// Lowest eigenvector (phase-fixed); for a degenerate ground level this is the
/// lowest-index eigenvector of the ground space and `degeneracy` > 1.
[[nodiscard]] inline GroundStateResult ground_state(const SpectralDecomposition &spectral, double degeneracy_tol = default_degeneracy_tol) {
    return {PureState::normalized(spectral.eigenvectors.col(0), spectral.dims), spectral.eigenvalues(0),
            ground_degeneracy(spectral.eigenvalues, degeneracy_tol)};
}

[[nodiscard]] inline GroundStateResult ground_state(const HermitianOperator &h, double degeneracy_tol = default_degeneracy_tol) {
    return ground_state(eig_hermitian(h), degeneracy_tol);
}

// ---------------------------------------------------------------------------
// Mode spectra

enum class Statistics { bose, fermi, boltzmann };
enum class SpectrumKind { uniform, linear_dispersion, custom };

struct ParticleNumber {
    double value;
};
struct ChemicalPotential {
    double value;
};
using Filling = std::variant<ParticleNumber, ChemicalPotential>;

/// Single-particle mode energies, ascending and strictly positive, with the
/// particle statistics and either a target particle number or a fixed
/// chemical potential.
class ModeSpectrum {
public:
    ModeSpectrum(std::vector<double> frequencies, Statistics statistics, Filling filling)
        : frequencies_(std::move(frequencies)), statistics_(statistics), filling_(filling) {
        if(frequencies_.empty()) throw ConfigError("ModeSpectrum: at least one mode is required");
        for(double w : frequencies_)
            if(!(w > 0.0) || !std::isfinite(w)) throw ConfigError("ModeSpectrum: frequencies must be positive and finite");
        std::sort(frequencies_.begin(), frequencies_.end());
        if(auto n = particle_target()) {
            if(!(*n > 0.0) || !std::isfinite(*n)) throw ConfigError("ModeSpectrum: particle number must be positive");
            if(statistics_ == Statistics::fermi && *n >= static_cast<double>(frequencies_.size()))
                throw ConfigError("ModeSpectrum: Pauli bound violated, fermionic N must be < M = " + std::to_string(frequencies_.size()));
        }
        if(auto mu = chemical_potential()) {
            if(!std::isfinite(*mu)) throw ConfigError("ModeSpectrum: chemical potential must be finite");
            if(statistics_ == Statistics::bose && !(*mu < frequencies_.front()))
                throw ConfigError("ModeSpectrum: bosonic chemical potential must lie below the lowest mode");
        }
    }

    [[nodiscard]] const std::vector<double> &frequencies() const { return frequencies_; }
    [[nodiscard]] std::size_t                modes() const { return frequencies_.size(); }
    [[nodiscard]] Statistics                 statistics() const { return statistics_; }
    [[nodiscard]] double                     min_frequency() const { return frequencies_.front(); }
    [[nodiscard]] double                     max_frequency() const { return frequencies_.back(); }

    [[nodiscard]] std::optional<double> particle_target() const {
        if(auto *n = std::get_if<ParticleNumber>(&filling_)) return n->value;
        return std::nullopt;
    }
    [[nodiscard]] std::optional<double> chemical_potential() const {
        if(auto *m = std::get_if<ChemicalPotential>(&filling_)) return m->value;
        return std::nullopt;
    }

private:
    std::vector<double> frequencies_;
    Statistics          statistics_;
    Filling             filling_;
};

struct SpectrumParams {
    std::size_t         modes = 0;    // M, uniform and linear_dispersion
    double              omega = 1.0;  // uniform level
    double              slope = 1.0;  // c in omega_k = c k
    std::vector<double> custom;       // custom frequencies
};

[[nodiscard]] inline std::vector<double> make_frequencies(SpectrumKind kind, const SpectrumParams &params) {
    std::vector<double> w;
    switch(kind) {
        case SpectrumKind::uniform:
            if(params.modes == 0) throw ConfigError("uniform spectrum: M must be >= 1");
            w.assign(params.modes, params.omega);
            break;
        case SpectrumKind::linear_dispersion:
            if(params.modes == 0) throw ConfigError("linear_dispersion spectrum: M must be >= 1");
            for(std::size_t k = 1; k <= params.modes; ++k) w.push_back(params.slope * static_cast<double>(k));
            break;
        case SpectrumKind::custom: w = params.custom; break;
    }
    for(double x : w)
        if(!(x > 0.0) || !std::isfinite(x)) throw ConfigError("spectrum: nonpositive frequency " + std::to_string(x));
    std::sort(w.begin(), w.end());
    return w;
}

[[nodiscard]] inline ModeSpectrum make_spectrum(SpectrumKind kind, const SpectrumParams &params, Statistics statistics, Filling filling) {
    return {make_frequencies(kind, params), statistics, filling};
}

} // namespace ewit
