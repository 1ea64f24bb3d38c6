#pragma once

// Thermal entanglement witnesses built on the ground-state entanglement E of
// |psi0> (k_B = 1). At temperature T the thermal state is certified
// entangled when
//   ground-weight witness :  -ln p  < E     (p = single ground-state weight)
//   entropy witness       :  S(rho_T) < E
// Since -ln p <= S, the entropy witness firing implies the ground-weight
// witness fires. Ties count as "not detected".

#include "ent.hpp"
#include "models.hpp"
#include "thermo.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace ewit {

inline constexpr double witness_guard = 1e-12;
inline constexpr double max_search_temperature = 1e6;

enum class WitnessKind { ground_weight, entropy };

struct WitnessReport {
    double                temperature = 0.0;
    double                entropy     = 0.0;
    double                ground_weight = 0.0;
    double                neg_log_ground_weight = 0.0;
    double                e_lower = 0.0;
    std::optional<double> e_upper;
    bool                  ground_weight_fires = false;
    bool                  entropy_fires       = false;
    std::size_t           ground_degeneracy   = 1;
};

[[nodiscard]] inline WitnessReport evaluate_witness(const ThermalEnsemble &ens, const EntanglementEstimate &e) {
    WitnessReport r;
    r.temperature           = ens.temperature();
    r.entropy               = ens.entropy();
    r.ground_weight         = ens.ground_weight();
    r.neg_log_ground_weight = ens.neg_log_ground_weight();
    r.e_lower               = e.lower;
    r.e_upper               = e.upper;
    r.ground_weight_fires   = r.neg_log_ground_weight < e.lower - witness_guard;
    r.entropy_fires         = r.entropy < e.lower - witness_guard;
    r.ground_degeneracy     = ens.ground_degeneracy();
    if(r.entropy_fires && !r.ground_weight_fires)
        throw NumericalError("evaluate_witness: entropy witness fired without the ground-weight witness at T = " + std::to_string(r.temperature));
    return r;
}

[[nodiscard]] inline WitnessReport evaluate_witness(const HermitianOperator &h, double temperature, const EntanglementEstimate &e) {
    return evaluate_witness(thermal_ensemble(h, temperature), e);
}

/// Largest temperature below which the witness fires: root of
/// quantity(T) = e_lower by bisection, where quantity is S (entropy) or
/// -ln p (ground weight), both nondecreasing in T. The upper end of the
/// bracket doubles up to 1e6 if needed. Absent when the witness does not fire
/// at the lower end (e.g. e_lower <= 0, or S(0) = ln g >= e_lower).
[[nodiscard]] inline std::optional<double> critical_temperature(std::shared_ptr<const SpectralDecomposition> spectral, WitnessKind kind,
                                                                double e_lower, double t_lo, double t_hi, double tol = 1e-9) {
    if(!(t_lo > 0.0) || !(t_hi > t_lo) || !std::isfinite(t_hi)) throw ConfigError("critical_temperature: need 0 < T_lo < T_hi");
    if(!(tol > 0.0)) throw ConfigError("critical_temperature: tolerance must be positive");
    if(!(e_lower > 0.0)) return std::nullopt;

    auto excess = [&](double t) {
        ThermalEnsemble ens(spectral, t);
        double          q = kind == WitnessKind::entropy ? ens.entropy() : ens.neg_log_ground_weight();
        return q - e_lower;
    };
    if(excess(t_lo) >= -witness_guard) return std::nullopt;
    while(excess(t_hi) < 0.0) {
        if(t_hi >= max_search_temperature) return std::nullopt;
        t_lo = t_hi;
        t_hi = std::min(2.0 * t_hi, max_search_temperature);
    }
    while(t_hi - t_lo >= tol) {
        double mid = 0.5 * (t_lo + t_hi);
        if(mid <= t_lo || mid >= t_hi) break;
        (excess(mid) < 0.0 ? t_lo : t_hi) = mid;
    }
    return 0.5 * (t_lo + t_hi);
}

[[nodiscard]] inline std::optional<double> critical_temperature(const HermitianOperator &h, WitnessKind kind, double e_lower, double t_lo,
                                                                double t_hi, double tol = 1e-9) {
    return critical_temperature(std::make_shared<const SpectralDecomposition>(eig_hermitian(h)), kind, e_lower, t_lo, t_hi, tol);
}

struct SweepSettings {
    bool             compute_upper = true;
    FrankWolfeConfig upper{};
    double           bisection_tol = 1e-9;
    double           bracket_lo    = 1e-6;
};

struct SweepResult {
    std::vector<WitnessReport> reports;
    std::optional<double>      t_star_ground_weight;
    std::optional<double>      t_star_entropy;
    EntanglementEstimate       entanglement;
    double                     ground_energy     = 0.0;
    std::size_t                ground_degeneracy = 1;
};

/// One report per grid temperature. The ground-state entanglement bounds are
/// computed once and reused; critical temperatures come from bisection and
/// are not limited to the grid.
[[nodiscard]] inline SweepResult sweep(const HermitianOperator &h, const std::vector<double> &grid, const SweepSettings &settings = {}) {
    if(grid.empty()) throw ConfigError("sweep: temperature grid is empty");
    for(std::size_t i = 0; i < grid.size(); ++i) {
        if(!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw ConfigError("sweep: temperatures must be positive and finite");
        if(i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("sweep: temperature grid must be strictly ascending");
    }

    auto spectral = std::make_shared<const SpectralDecomposition>(eig_hermitian(h));
    auto ground   = ground_state(*spectral);

    SweepResult out;
    out.ground_energy     = ground.energy;
    out.ground_degeneracy = ground.degeneracy;
    out.entanglement      = ree_lower_bound(ground.state);
    if(settings.compute_upper) {
        auto upper                    = ree_upper_bound(DensityOperator::projector(ground.state), settings.upper);
        out.entanglement.upper        = upper.upper;
        out.entanglement.converged    = upper.converged;
        out.entanglement.duality_gap  = upper.duality_gap;
    }

    out.reports.reserve(grid.size());
    for(double t : grid) out.reports.push_back(evaluate_witness(ThermalEnsemble(spectral, t), out.entanglement));

    const double lo = std::min(settings.bracket_lo, grid.front());
    const double hi = std::max(grid.back(), 2.0 * lo);
    const double e  = out.entanglement.lower;
    out.t_star_ground_weight = critical_temperature(spectral, WitnessKind::ground_weight, e, lo, hi, settings.bisection_tol);
    out.t_star_entropy       = critical_temperature(spectral, WitnessKind::entropy, e, lo, hi, settings.bisection_tol);
    return out;
}

} // namespace ewit
