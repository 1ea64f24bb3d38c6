#pragma once

// Canonical ensemble of an exactly diagonalized Hamiltonian (k_B = 1).
//
// All Boltzmann factors are shifted by the ground energy E0:
//   w_i = exp(-beta (E_i - E0)),  Z' = sum_i w_i,  ln Z = -beta E0 + ln Z'
// so that beta up to ~1e6 never overflows. The ground-state weight is
// p = 1 / Z' and -ln p = ln Z' is available without cancellation.

#include "models.hpp"
#include "qops.hpp"

#include <cmath>
#include <memory>

namespace ewit {

class ThermalEnsemble {
public:
    ThermalEnsemble(std::shared_ptr<const SpectralDecomposition> spectral, double temperature)
        : spectral_(std::move(spectral)), temperature_(temperature) {
        if(!spectral_) throw ConfigError("thermal_ensemble: missing spectral decomposition");
        if(!(temperature_ > 0.0) || !std::isfinite(temperature_))
            throw ConfigError("thermal_ensemble: temperature must be positive and finite");
        beta_ = 1.0 / temperature_;

        const auto &e  = spectral_->eigenvalues;
        const auto  e0 = e(0);
        // scalar exp: Eigen's packet exp clamps instead of underflowing to 0
        RVector w(e.size());
        for(Eigen::Index i = 0; i < e.size(); ++i) w(i) = std::exp(-beta_ * (e(i) - e0));
        ln_z_shifted_  = std::log(w.sum());
        probabilities_ = w / w.sum();

        // U - E0 and S are accumulated from non-negative terms.
        excitation_ = probabilities_.dot((e.array() - e0).matrix());
        entropy_    = 0.0;
        for(Eigen::Index i = 0; i < e.size(); ++i) {
            double neg_ln_q = beta_ * (e(i) - e0) + ln_z_shifted_;
            entropy_ += probabilities_(i) * neg_ln_q;
        }
        entropy_ = std::max(0.0, entropy_);
    }

    [[nodiscard]] double temperature() const { return temperature_; }
    [[nodiscard]] double beta() const { return beta_; }
    [[nodiscard]] double ground_energy() const { return spectral_->eigenvalues(0); }
    [[nodiscard]] double log_partition() const { return -beta_ * ground_energy() + ln_z_shifted_; }
    [[nodiscard]] double partition() const { return std::exp(log_partition()); }
    [[nodiscard]] double free_energy() const { return -temperature_ * log_partition(); }
    [[nodiscard]] double internal_energy() const { return ground_energy() + excitation_; }
    /// U - E0 >= 0
    [[nodiscard]] double excitation_energy() const { return excitation_; }
    /// Spectral (von Neumann) entropy of rho_T.
    [[nodiscard]] double entropy() const { return entropy_; }
    /// Weight of one ground state, exp(-beta E0) / Z, regardless of degeneracy.
    [[nodiscard]] double ground_weight() const { return std::exp(-ln_z_shifted_); }
    /// -ln p
    [[nodiscard]] double neg_log_ground_weight() const { return ln_z_shifted_; }
    [[nodiscard]] const RVector               &probabilities() const { return probabilities_; }
    [[nodiscard]] const SpectralDecomposition &spectral() const { return *spectral_; }
    [[nodiscard]] std::size_t                  ground_degeneracy(double tol = default_degeneracy_tol) const {
        return ewit::ground_degeneracy(spectral_->eigenvalues, tol);
    }

    /// rho_T = sum_i q_i |E_i><E_i|, assembled on demand (O(D^3)).
    [[nodiscard]] DensityOperator density() const {
        return DensityOperator::from_spectrum(spectral_->eigenvectors, probabilities_, spectral_->dims);
    }

private:
    std::shared_ptr<const SpectralDecomposition> spectral_;
    double                                       temperature_;
    double                                       beta_ = 0.0;
    double                                       ln_z_shifted_ = 0.0;
    double                                       excitation_ = 0.0;
    double                                       entropy_ = 0.0;
    RVector                                      probabilities_;
};

[[nodiscard]] inline ThermalEnsemble thermal_ensemble(std::shared_ptr<const SpectralDecomposition> spectral, double temperature) {
    return {std::move(spectral), temperature};
}

[[nodiscard]] inline ThermalEnsemble thermal_ensemble(const HermitianOperator &h, double temperature) {
    if(!(temperature > 0.0)) throw ConfigError("thermal_ensemble: temperature must be positive");
    return {std::make_shared<const SpectralDecomposition>(eig_hermitian(h)), temperature};
}

[[nodiscard]] inline double ground_weight(const ThermalEnsemble &ens) { return ens.ground_weight(); }

/// S(|psi><psi| || rho_T) = beta <psi|H|psi> + ln Z, evaluated as
/// beta (<H> - E0) + ln Z' to stay finite at large beta.
[[nodiscard]] inline double rel_entropy_pure_to_thermal(const PureState &psi, const ThermalEnsemble &ens) {
    const auto &sp = ens.spectral();
    if(!(psi.dims() == sp.dims)) throw ConfigError("rel_entropy_pure_to_thermal: dimension mismatch");
    RVector overlap = (sp.eigenvectors.adjoint() * psi.amplitudes()).cwiseAbs2();
    double  gap     = overlap.dot((sp.eigenvalues.array() - sp.eigenvalues(0)).matrix()) / overlap.sum();
    return ens.beta() * gap + ens.neg_log_ground_weight();
}

struct GroundWeightBound {
    double p;
    double exp_neg_entropy;
    bool   holds;
    double slack; // ln p + S = beta (U - E0)
};

/// p >= exp(-S), with slack ln p + S = beta (U - E0) >= 0.
[[nodiscard]] inline GroundWeightBound check_ground_weight_bound(const ThermalEnsemble &ens) {
    GroundWeightBound out{};
    out.p               = ens.ground_weight();
    out.exp_neg_entropy = std::exp(-ens.entropy());
    out.holds           = out.p >= out.exp_neg_entropy - 1e-10;
    out.slack           = ens.beta() * ens.excitation_energy();
    return out;
}

} // namespace ewit
