#pragma once

// Ideal quantum gases on a set of single-particle modes omega_i (k_B = 1).
//
// With x_i = beta (omega_i - mu):
//   bose      n_i = 1 / (e^x - 1)   Omega = +T sum ln(1 - e^-x)
//   fermi     n_i = 1 / (e^x + 1)   Omega = -T sum ln(1 + e^-x)
//   boltzmann n_i = e^-x            Omega = -T sum e^-x
// and the entropy S = -dOmega/dT at fixed mu is, mode by mode,
//   bose      (1 + n) ln(1 + n) - n ln n
//   fermi     -n ln n - (1 - n) ln(1 - n)
//   boltzmann n (1 - ln n)

#include "errors.hpp"
#include "models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace ewit {

namespace detail {

inline void require_temperature(double t, const char *who) {
    if(!(t > 0.0) || !std::isfinite(t)) throw ConfigError(std::string(who) + ": temperature must be positive and finite");
}

/// Occupation as a function of x = beta (omega - mu).
inline double occupation_x(double x, Statistics stats) {
    switch(stats) {
        case Statistics::bose: return 1.0 / std::expm1(x);
        case Statistics::fermi:
            if(x >= 0.0) {
                double e = std::exp(-x);
                return e / (1.0 + e);
            }
            return 1.0 / (std::exp(x) + 1.0);
        case Statistics::boltzmann: return std::exp(-x);
    }
    return 0.0;
}

/// 1 + n for bosons, 1 - n for fermions, computed without cancellation.
inline double complement_x(double x, Statistics stats) {
    switch(stats) {
        case Statistics::bose: return -1.0 / std::expm1(-x);
        case Statistics::fermi: return occupation_x(-x, Statistics::fermi);
        case Statistics::boltzmann: return 1.0;
    }
    return 1.0;
}

inline double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

inline double mode_entropy(double n, double complement, Statistics stats) {
    switch(stats) {
        case Statistics::bose: return n > 0.0 ? -n * std::log(n) + (1.0 + n) * std::log1p(n) : 0.0;
        case Statistics::fermi: return -xlogx(n) - xlogx(complement);
        case Statistics::boltzmann: return n > 0.0 ? n * (1.0 - std::log(n)) : 0.0;
    }
    return 0.0;
}

inline double mode_grand_potential(double x, double t, Statistics stats) {
    switch(stats) {
        case Statistics::bose: return x > 0.6931471805599453 ? t * std::log1p(-std::exp(-x)) : t * std::log(-std::expm1(-x));
        case Statistics::fermi: return x >= 0.0 ? -t * std::log1p(std::exp(-x)) : -t * (-x + std::log1p(std::exp(x)));
        case Statistics::boltzmann: return -t * std::exp(-x);
    }
    return 0.0;
}

inline void require_bose_domain(const ModeSpectrum &spectrum, double mu, const char *who) {
    if(spectrum.statistics() == Statistics::bose && !(mu < spectrum.min_frequency()))
        throw ConfigError(std::string(who) + ": bosonic chemical potential must lie below the lowest mode");
}

inline double total_particles(const ModeSpectrum &spectrum, double mu, double t) {
    double n = 0.0;
    for(double w : spectrum.frequencies()) n += occupation_x((w - mu) / t, spectrum.statistics());
    return n;
}

/// sum_i n_i - target. Fermi modes below mu enter as 1 - h_i (h the hole
/// occupation) so the residual keeps relative precision deep in a gap.
inline double particle_residual(const ModeSpectrum &spectrum, double mu, double t, double target) {
    if(spectrum.statistics() != Statistics::fermi) return total_particles(spectrum, mu, t) - target;
    double filled = 0.0, tail = 0.0;
    for(double w : spectrum.frequencies()) {
        double x = (w - mu) / t;
        if(x < 0.0) {
            filled += 1.0;
            tail -= complement_x(x, Statistics::fermi);
        } else {
            tail += occupation_x(x, Statistics::fermi);
        }
    }
    return (filled - target) + tail;
}

} // namespace detail

[[nodiscard]] inline double occupation(double omega, double mu, double temperature, Statistics stats) {
    detail::require_temperature(temperature, "occupation");
    if(stats == Statistics::bose && !(mu < omega)) throw ConfigError("occupation: bosonic occupation diverges for mu >= omega");
    return detail::occupation_x((omega - mu) / temperature, stats);
}

/// Chemical potential giving sum_i n_i = N at temperature T, by bisection on
/// the strictly increasing particle count.
[[nodiscard]] inline double solve_mu(const ModeSpectrum &spectrum, double particles, double temperature) {
    detail::require_temperature(temperature, "solve_mu");
    if(!(particles > 0.0) || !std::isfinite(particles)) throw ConfigError("solve_mu: particle number must be positive");
    const auto stats = spectrum.statistics();
    const auto m     = static_cast<double>(spectrum.modes());
    if(stats == Statistics::fermi && particles >= m)
        throw ConfigError("solve_mu: Pauli bound violated, fermionic N must be < M = " + std::to_string(spectrum.modes()));

    if(stats == Statistics::boltzmann) {
        // N = e^{beta mu} sum e^{-beta omega}
        double shift = spectrum.min_frequency();
        double acc   = 0.0;
        for(double w : spectrum.frequencies()) acc += std::exp(-(w - shift) / temperature);
        return temperature * (std::log(particles) - std::log(acc)) + shift;
    }

    const double scale = 1e6 * spectrum.max_frequency();
    double       lo    = -scale;
    double       hi    = scale;
    if(stats == Statistics::bose) {
        double wmin = spectrum.min_frequency();
        hi          = std::min(wmin - 1e-12, std::nextafter(wmin, -std::numeric_limits<double>::infinity()));
    }
    auto residual = [&](double mu) { return detail::particle_residual(spectrum, mu, temperature, particles); };
    if(residual(lo) > 0.0 || residual(hi) < 0.0) throw NumericalError("solve_mu: particle number outside the chemical-potential bracket");

    // Run to bracket collapse: inside a gap the count is nearly flat, and a
    // small residual alone does not pin mu.
    double best_mu = hi, best_res = std::numeric_limits<double>::infinity();
    for(int it = 0; it < 4000; ++it) {
        double mid = 0.5 * (lo + hi);
        if(mid <= lo || mid >= hi) break;
        double r = residual(mid);
        if(std::abs(r) <= best_res) {
            best_res = std::abs(r);
            best_mu  = mid;
        }
        if(r == 0.0) break;
        (r < 0.0 ? lo : hi) = mid;
    }
    if(best_res > 1e-10 && best_res > 1e-8 * std::max(1.0, particles))
        throw NumericalError("solve_mu: bisection stalled with particle-number residual " + std::to_string(best_res));
    return best_mu;
}

/// Resolved grand-canonical state of the gas at one temperature.
struct GasState {
    ModeSpectrum        spectrum;
    double              temperature = 0.0;
    double              mu          = 0.0;
    std::vector<double> occupations;
    std::vector<double> complements; // 1 + n (bose), 1 - n (fermi), 1 (boltzmann)
    double              entropy     = 0.0;
    double              free_energy = 0.0;
    double              particles   = 0.0;
};

[[nodiscard]] inline double gas_entropy(const GasState &state) {
    double s = 0.0;
    for(std::size_t i = 0; i < state.occupations.size(); ++i)
        s += detail::mode_entropy(state.occupations[i], state.complements[i], state.spectrum.statistics());
    return std::max(0.0, s);
}

/// Grand potential at fixed (mu, T), summed over modes.
[[nodiscard]] inline double gas_free_energy(const ModeSpectrum &spectrum, double mu, double temperature) {
    detail::require_temperature(temperature, "gas_free_energy");
    detail::require_bose_domain(spectrum, mu, "gas_free_energy");
    double f = 0.0;
    for(double w : spectrum.frequencies()) f += detail::mode_grand_potential((w - mu) / temperature, temperature, spectrum.statistics());
    return f;
}

[[nodiscard]] inline double gas_free_energy(const GasState &state) { return gas_free_energy(state.spectrum, state.mu, state.temperature); }

/// Gas at temperature T with mu taken from the spectrum or solved for its
/// particle target.
[[nodiscard]] inline GasState gas_state(const ModeSpectrum &spectrum, double temperature) {
    detail::require_temperature(temperature, "gas_state");
    GasState st{spectrum, temperature, 0.0, {}, {}, 0.0, 0.0, 0.0};
    if(auto mu = spectrum.chemical_potential())
        st.mu = *mu;
    else
        st.mu = solve_mu(spectrum, *spectrum.particle_target(), temperature);
    detail::require_bose_domain(spectrum, st.mu, "gas_state");
    for(double w : spectrum.frequencies()) {
        double x = (w - st.mu) / temperature;
        st.occupations.push_back(detail::occupation_x(x, spectrum.statistics()));
        st.complements.push_back(detail::complement_x(x, spectrum.statistics()));
    }
    for(double n : st.occupations) st.particles += n;
    st.entropy     = gas_entropy(st);
    st.free_energy = gas_free_energy(st);
    return st;
}

// ---------------------------------------------------------------------------
// Low-temperature scaling S ~ N (T / omega_tilde)^p

struct FitWindow {
    double lo;
    double hi;
};

struct ScalingFit {
    double      exponent    = 0.0; // p
    double      omega_tilde = 0.0; // temperature where the fitted S equals N
    double      r_squared   = 0.0;
    FitWindow   window{0.0, 0.0};  // range of the samples actually used
    double      intercept   = 0.0; // ln S = intercept + p ln T
    double      n_reference = 0.0;
    std::size_t samples     = 0;
};

inline constexpr std::size_t min_fit_samples = 8;

/// Least-squares line through (ln T, ln S) for samples with T in `window`.
[[nodiscard]] inline ScalingFit fit_power_law(const std::vector<double> &temperatures, const std::vector<double> &entropies, double n_reference,
                                              std::optional<FitWindow> window = std::nullopt) {
    if(temperatures.size() != entropies.size()) throw ConfigError("fit_power_law: sample arrays differ in length");
    if(!(n_reference > 0.0)) throw ConfigError("fit_power_law: reference particle number must be positive");
    std::vector<double> lx, ly;
    for(std::size_t i = 0; i < temperatures.size(); ++i) {
        double t = temperatures[i];
        if(window && (t < window->lo || t > window->hi)) continue;
        if(!(t > 0.0)) throw ConfigError("fit_power_law: temperatures must be positive");
        if(!(entropies[i] > 0.0)) throw ConfigError("fit_power_law: entropy sample <= 0 at T = " + std::to_string(t));
        lx.push_back(std::log(t));
        ly.push_back(std::log(entropies[i]));
    }
    if(lx.size() < min_fit_samples)
        throw ConfigError("fit_power_law: " + std::to_string(lx.size()) + " samples in the fit window, need at least " + std::to_string(min_fit_samples));

    const double n  = static_cast<double>(lx.size());
    double       mx = 0.0, my = 0.0;
    for(std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for(std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if(!(sxx > 0.0)) throw ConfigError("fit_power_law: temperatures in the window are all equal");

    ScalingFit fit;
    fit.exponent  = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss_res = 0.0;
    for(std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    if(!(fit.exponent > 0.0)) throw NumericalError("fit_power_law: fitted exponent is not positive");
    fit.n_reference = n_reference;
    fit.omega_tilde = std::exp((std::log(n_reference) - fit.intercept) / fit.exponent);
    fit.window      = {std::exp(*std::min_element(lx.begin(), lx.end())), std::exp(*std::max_element(lx.begin(), lx.end()))};
    fit.samples     = lx.size();
    return fit;
}

/// [5 dw, 0.1 omega_max], dw the smallest nonzero level spacing (omega_min
/// when all levels coincide). Closer to dw the discrete mode sum still carries
/// a ln(T/dw) correction that steepens the apparent exponent.
[[nodiscard]] inline FitWindow default_fit_window(const ModeSpectrum &spectrum) {
    const auto &w       = spectrum.frequencies();
    double      spacing = std::numeric_limits<double>::infinity();
    for(std::size_t i = 1; i < w.size(); ++i)
        if(w[i] > w[i - 1]) spacing = std::min(spacing, w[i] - w[i - 1]);
    if(!std::isfinite(spacing)) spacing = w.front();
    return {5.0 * spacing, 0.1 * w.back()};
}

/// Fits the mode-sum entropy over the low-temperature window. The reference
/// N is the particle target, or for fixed-mu spectra the mean particle number
/// at the geometric centre of the window.
[[nodiscard]] inline ScalingFit fit_entropy_scaling(const ModeSpectrum &spectrum, const std::vector<double> &temperatures,
                                                    std::optional<FitWindow> window = std::nullopt) {
    for(std::size_t i = 0; i < temperatures.size(); ++i) {
        detail::require_temperature(temperatures[i], "fit_entropy_scaling");
        if(i > 0 && !(temperatures[i] > temperatures[i - 1])) throw ConfigError("fit_entropy_scaling: temperatures must be ascending");
    }
    if(temperatures.size() < min_fit_samples) throw ConfigError("fit_entropy_scaling: need at least 8 temperature samples");
    FitWindow win = window.value_or(default_fit_window(spectrum));
    win.lo        = std::max(win.lo, temperatures.front());
    win.hi        = std::min(win.hi, temperatures.back());
    if(!(win.hi > win.lo)) throw ConfigError("fit_entropy_scaling: fit window does not overlap the sampled temperatures");

    std::vector<double> ts, ss;
    for(double t : temperatures) {
        if(t < win.lo || t > win.hi) continue;
        ts.push_back(t);
        ss.push_back(gas_state(spectrum, t).entropy);
    }
    if(ts.size() < min_fit_samples)
        throw ConfigError("fit_entropy_scaling: " + std::to_string(ts.size()) + " samples in the fit window, need at least 8");
    double n_ref = spectrum.particle_target().value_or(0.0);
    if(!spectrum.particle_target()) n_ref = gas_state(spectrum, std::sqrt(ts.front() * ts.back())).particles;
    return fit_power_law(ts, ss, n_ref);
}

/// Temperature below which S = N (T/omega_tilde)^p stays under E = kappa N:
/// T* = omega_tilde kappa^(1/p); kappa = 1 gives T* = omega_tilde.
[[nodiscard]] inline double critical_temperature_estimate(const ScalingFit &fit, double entanglement_per_particle = 1.0) {
    if(!(fit.omega_tilde > 0.0) || !(fit.exponent > 0.0)) throw ConfigError("critical_temperature_estimate: invalid fit");
    if(!(entanglement_per_particle > 0.0)) throw ConfigError("critical_temperature_estimate: entanglement per particle must be positive");
    return fit.omega_tilde * std::pow(entanglement_per_particle, 1.0 / fit.exponent);
}

struct ClassicalCheck {
    double s_mb;          // N ln T + N (1 - ln omega_tilde_g)
    double e_assumed;     // kappa N
    double omega_tilde_g; // exp(sum_i ln omega_i / N)
    bool   fires;
};

/// exp(sum_i ln omega_i / N)
[[nodiscard]] inline double geometric_frequency(const ModeSpectrum &spectrum, double particles) {
    double acc = 0.0;
    for(double w : spectrum.frequencies()) acc += std::log(w);
    return std::exp(acc / particles);
}

/// Maxwell-Boltzmann estimate of the entropy witness in the classical regime
/// T >= omega_tilde_g. There S_mb >= N, so the witness never fires.
[[nodiscard]] inline ClassicalCheck mb_witness_check(const ModeSpectrum &spectrum, double particles, double temperature,
                                                     double entanglement_per_particle = 1.0) {
    detail::require_temperature(temperature, "mb_witness_check");
    if(!(particles > 0.0) || !std::isfinite(particles)) throw ConfigError("mb_witness_check: particle number must be positive");
    ClassicalCheck out{};
    out.omega_tilde_g = geometric_frequency(spectrum, particles);
    if(temperature < out.omega_tilde_g)
        throw ConfigError("mb_witness_check: T = " + std::to_string(temperature) + " is below the classical regime (T >= " +
                          std::to_string(out.omega_tilde_g) + "); use gas_state / gas_entropy with quantum statistics instead");
    out.s_mb      = particles * (1.0 + std::log(temperature / out.omega_tilde_g));
    out.e_assumed = entanglement_per_particle * particles;
    out.fires     = out.s_mb < out.e_assumed;
    return out;
}

} // namespace ewit
