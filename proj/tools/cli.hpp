#pragma once

// Command-line front end. Everything here writes to caller-supplied streams
// so tests can drive it in-process; main() only forwards argv.

#include <ewit/ewit.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ewit::cli {

using nlohmann::json;

enum ExitCode : int { ok = 0, selfcheck_failed = 1, config_error = 2, resource_error = 3, numerical_error = 4 };

enum class Format { csv, json };

struct RunConfig {
    std::string                   command;
    std::string                   model_path;
    std::string                   state_path;
    std::string                   spectrum;
    std::string                   temps;
    std::string                   window;
    std::uint64_t                 seed = SeedTree::default_seed;
    std::string                   out_path;
    Format                        format = Format::csv;
    std::size_t                   restarts = 8;
    std::optional<double>         tol;
    std::size_t                   max_iter = 500;
    bool                          no_upper = false;
    double                        kappa    = 1.0;
    std::optional<double>         energy;
    std::vector<std::string>      tol_overrides; // name=value, selfcheck only
};

// ---------------------------------------------------------------------------
// formatting

inline std::string fmt(double v) {
    if(v == 0.0) v = 0.0; // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt(const std::optional<double> &v) { return v ? fmt(*v) : std::string(); }
inline const char *fmt(bool b) { return b ? "true" : "false"; }

/// JSON number rounded to the same 12 significant digits as the CSV output.
inline json num(double v) { return std::isfinite(v) ? json(std::stod(fmt(v))) : json(nullptr); }
inline json num(const std::optional<double> &v) { return v ? num(*v) : json(nullptr); }

// ---------------------------------------------------------------------------
// input parsing

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if(!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Parses JSON text, turning syntax errors into a ConfigError with the line
/// and column of the offending byte.
inline json parse_json(const std::string &text, const std::string &origin) {
    try {
        return json::parse(text);
    } catch(const json::parse_error &e) {
        std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
        std::size_t line = 1, col = 1;
        for(std::size_t i = 0; i < offset && i < text.size(); ++i) {
            if(text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if(auto p = what.rfind(": "); p != std::string::npos) what = what.substr(p + 2);
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + what);
    }
}

template<typename T>
T field(const json &j, const char *key, const std::string &origin) {
    if(!j.contains(key)) throw ConfigError(origin + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch(const json::exception &) {
        throw ConfigError(origin + ": field '" + key + "' has the wrong type");
    }
}

template<typename T>
T field_or(const json &j, const char *key, T fallback, const std::string &origin) {
    return j.contains(key) ? field<T>(j, key, origin) : fallback;
}

inline SpinModelSpec parse_model(const json &j, const std::string &origin) {
    if(!j.is_object()) throw ConfigError(origin + ": model must be a JSON object");
    static const std::map<std::string, SpinModelKind> kinds = {{"heisenberg", SpinModelKind::heisenberg},
                                                               {"xy", SpinModelKind::xy},
                                                               {"transverse_ising", SpinModelKind::transverse_ising},
                                                               {"custom_terms", SpinModelKind::custom_terms}};
    SpinModelSpec spec;
    auto          kind = field<std::string>(j, "kind", origin);
    auto          it   = kinds.find(kind);
    if(it == kinds.end()) throw ConfigError(origin + ": unknown model kind '" + kind + "'");
    spec.kind     = it->second;
    spec.n_sites  = field<std::size_t>(j, "n_sites", origin);
    spec.coupling = field_or<double>(j, "coupling", 1.0, origin);
    spec.field    = field_or<double>(j, "field", 0.0, origin);
    auto boundary = field_or<std::string>(j, "boundary", "open", origin);
    if(boundary == "open")
        spec.boundary = Boundary::open;
    else if(boundary == "periodic")
        spec.boundary = Boundary::periodic;
    else
        throw ConfigError(origin + ": boundary must be 'open' or 'periodic'");
    if(spec.kind == SpinModelKind::custom_terms) {
        if(!j.contains("terms") || !j["terms"].is_array()) throw ConfigError(origin + ": custom_terms model needs a 'terms' array");
        for(const auto &t : j["terms"])
            spec.custom_terms.push_back({field<std::vector<std::size_t>>(t, "sites", origin), field<std::string>(t, "paulis", origin),
                                         field_or<double>(t, "coefficient", 1.0, origin)});
    }
    return spec;
}

inline SpinModelSpec load_model(const std::string &path) {
    if(path.empty()) throw ConfigError("--model is required");
    return parse_model(parse_json(read_file(path), path), path);
}

/// {"dims": [2, 2], "amplitudes": [[re, im], ...]}; plain numbers are real.
inline PureState load_state(const std::string &path) {
    auto j    = parse_json(read_file(path), path);
    auto dims = field<std::vector<std::size_t>>(j, "dims", path);
    if(!j.contains("amplitudes") || !j["amplitudes"].is_array()) throw ConfigError(path + ": missing 'amplitudes' array");
    const auto &a = j["amplitudes"];
    CVector     v(static_cast<Eigen::Index>(a.size()));
    for(std::size_t i = 0; i < a.size(); ++i) {
        if(a[i].is_number())
            v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
        else if(a[i].is_array() && a[i].size() == 2 && a[i][0].is_number() && a[i][1].is_number())
            v(static_cast<Eigen::Index>(i)) = Complex(a[i][0].get<double>(), a[i][1].get<double>());
        else
            throw ConfigError(path + ": amplitude " + std::to_string(i) + " must be a number or [re, im]");
    }
    SiteDims sd(dims);
    if(static_cast<std::size_t>(v.size()) != sd.total())
        throw ConfigError(path + ": " + std::to_string(v.size()) + " amplitudes for total dimension " + std::to_string(sd.total()));
    return PureState::normalized(v, sd);
}

inline Statistics parse_statistics(const std::string &s, const std::string &origin) {
    if(s == "bose") return Statistics::bose;
    if(s == "fermi") return Statistics::fermi;
    if(s == "boltzmann") return Statistics::boltzmann;
    throw ConfigError(origin + ": statistics must be bose, fermi or boltzmann, got '" + s + "'");
}

inline double parse_number(const std::string &s, const std::string &what) {
    try {
        std::size_t used = 0;
        double      v    = std::stod(s, &used);
        if(used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch(const std::logic_error &) {
        throw ConfigError(what + ": not a number: '" + s + "'");
    }
}

inline std::size_t parse_count(const std::string &s, const std::string &what) {
    double v = parse_number(s, what);
    if(!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw ConfigError(what + ": expected a nonnegative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::string              cur;
    for(char c : s) {
        if(c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

/// Spectrum from a JSON object: either explicit "frequencies" or a generator
/// "kind" with its parameters, plus "statistics" and one of "particles"/"mu".
inline ModeSpectrum parse_spectrum_json(const json &j, const std::string &origin) {
    if(!j.is_object()) throw ConfigError(origin + ": spectrum must be a JSON object");
    auto                stats = parse_statistics(field<std::string>(j, "statistics", origin), origin);
    std::vector<double> w;
    if(j.contains("frequencies")) {
        w = field<std::vector<double>>(j, "frequencies", origin);
    } else {
        auto           kind = field<std::string>(j, "kind", origin);
        SpectrumParams p;
        p.modes = field<std::size_t>(j, "modes", origin);
        p.omega = field_or<double>(j, "omega", 1.0, origin);
        p.slope = field_or<double>(j, "slope", 1.0, origin);
        if(kind == "uniform")
            w = make_frequencies(SpectrumKind::uniform, p);
        else if(kind == "linear_dispersion")
            w = make_frequencies(SpectrumKind::linear_dispersion, p);
        else
            throw ConfigError(origin + ": unknown spectrum kind '" + kind + "'");
    }
    bool has_n = j.contains("particles"), has_mu = j.contains("mu");
    if(has_n == has_mu) throw ConfigError(origin + ": give exactly one of 'particles' or 'mu'");
    if(has_n) return {w, stats, ParticleNumber{field<double>(j, "particles", origin)}};
    return {w, stats, ChemicalPotential{field<double>(j, "mu", origin)}};
}

/// "gen:kind:key=value,..." (keys: modes, omega, slope, stats, N, mu) or a
/// path to a spectrum JSON file.
inline ModeSpectrum load_spectrum(const std::string &spec) {
    if(spec.empty()) throw ConfigError("--spectrum is required");
    if(spec.rfind("gen:", 0) != 0) return parse_spectrum_json(parse_json(read_file(spec), spec), spec);
    auto parts = split(spec.substr(4), ':');
    if(parts.size() != 2) throw ConfigError("--spectrum: expected gen:kind:key=value,...");
    json j;
    j["kind"] = parts[0];
    for(const auto &kv : split(parts[1], ',')) {
        auto eq = kv.find('=');
        if(eq == std::string::npos) throw ConfigError("--spectrum: expected key=value, got '" + kv + "'");
        auto key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if(key == "stats")
            j["statistics"] = val;
        else if(key == "N")
            j["particles"] = parse_number(val, "--spectrum N");
        else if(key == "modes")
            j["modes"] = parse_count(val, "--spectrum modes");
        else if(key == "mu" || key == "omega" || key == "slope")
            j[key] = parse_number(val, "--spectrum " + key);
        else
            throw ConfigError("--spectrum: unknown key '" + key + "'");
    }
    if(!j.contains("statistics")) throw ConfigError("--spectrum: missing stats=bose|fermi|boltzmann");
    return parse_spectrum_json(j, "--spectrum");
}

/// "lo:hi:count[:log]", linear unless ":log" is given.
inline std::vector<double> parse_temps(const std::string &spec) {
    auto parts = split(spec, ':');
    if(parts.size() != 3 && parts.size() != 4) throw ConfigError("--temps: expected lo:hi:count[:log], got '" + spec + "'");
    double      lo    = parse_number(parts[0], "--temps lo");
    double      hi    = parse_number(parts[1], "--temps hi");
    std::size_t count = parse_count(parts[2], "--temps count");
    bool        log   = parts.size() == 4;
    if(log && parts[3] != "log" && parts[3] != "lin") throw ConfigError("--temps: scale must be 'log' or 'lin'");
    log = log && parts[3] == "log";
    if(!(lo > 0.0) || !std::isfinite(hi)) throw ConfigError("--temps: temperatures must be positive and finite");
    if(!(hi > lo)) throw ConfigError("--temps: need lo < hi");
    if(count < 1) throw ConfigError("--temps: count must be >= 1");
    std::vector<double> t;
    if(count == 1) return {lo};
    for(std::size_t i = 0; i < count; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(count - 1);
        t.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
    t.back() = hi;
    return t;
}

inline FitWindow parse_window(const std::string &spec) {
    auto parts = split(spec, ':');
    if(parts.size() != 2) throw ConfigError("--window: expected lo:hi");
    FitWindow w{parse_number(parts[0], "--window lo"), parse_number(parts[1], "--window hi")};
    if(!(w.lo > 0.0) || !(w.hi > w.lo)) throw ConfigError("--window: need 0 < lo < hi");
    return w;
}

// ---------------------------------------------------------------------------
// commands

inline FrankWolfeConfig upper_config(const RunConfig &c) {
    FrankWolfeConfig fw;
    fw.max_iter        = c.max_iter;
    fw.tol             = c.tol.value_or(fw.tol);
    fw.oracle.restarts = c.restarts;
    fw.oracle.seed     = c.seed;
    return fw;
}

inline int run_spin_sweep(const RunConfig &c, std::ostream &out) {
    auto spec  = load_model(c.model_path);
    auto temps = parse_temps(c.temps.empty() ? "0.1:5:50" : c.temps);
    auto h     = build_spin_hamiltonian(spec);

    SweepSettings settings;
    settings.compute_upper = !c.no_upper;
    settings.upper         = upper_config(c);
    auto res               = sweep(h, temps, settings);

    if(c.format == Format::json) {
        json j;
        j["ground_energy"]     = num(res.ground_energy);
        j["ground_degeneracy"] = res.ground_degeneracy;
        j["E_lower"]           = num(res.entanglement.lower);
        j["E_upper"]           = num(res.entanglement.upper);
        j["duality_gap"]       = num(res.entanglement.duality_gap);
        j["reports"]           = json::array();
        for(const auto &r : res.reports)
            j["reports"].push_back({{"T", num(r.temperature)},
                                    {"S", num(r.entropy)},
                                    {"p", num(r.ground_weight)},
                                    {"neg_ln_p", num(r.neg_log_ground_weight)},
                                    {"ground_weight_fires", r.ground_weight_fires},
                                    {"entropy_fires", r.entropy_fires}});
        j["T_star_ground_weight"] = num(res.t_star_ground_weight);
        j["T_star_entropy"]       = num(res.t_star_entropy);
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "T,S,p,neg_ln_p,E_lower,E_upper,ground_weight_fires,entropy_fires\n";
    for(const auto &r : res.reports)
        out << fmt(r.temperature) << ',' << fmt(r.entropy) << ',' << fmt(r.ground_weight) << ',' << fmt(r.neg_log_ground_weight) << ','
            << fmt(r.e_lower) << ',' << fmt(r.e_upper) << ',' << fmt(r.ground_weight_fires) << ',' << fmt(r.entropy_fires) << '\n';
    out << "T_star_ground_weight," << fmt(res.t_star_ground_weight) << '\n';
    out << "T_star_entropy," << fmt(res.t_star_entropy) << '\n';
    return ok;
}

inline int run_gas_scan(const RunConfig &c, std::ostream &out) {
    auto spectrum = load_spectrum(c.spectrum);
    auto temps    = parse_temps(c.temps.empty() ? "0.01:10:60:log" : c.temps);

    std::vector<GasState> states;
    for(double t : temps) states.push_back(gas_state(spectrum, t));

    std::optional<ScalingFit> fit;
    std::string               fit_error;
    try {
        fit = fit_entropy_scaling(spectrum, temps, c.window.empty() ? std::nullopt : std::optional(parse_window(c.window)));
    } catch(const ConfigError &e) {
        fit_error = e.what();
    }

    // Classical-regime rows, T >= omega_tilde_g. The geometric frequency
    // needs a fixed N, so fixed-mu spectra get no MB block.
    struct MbRow {
        double         t;
        ClassicalCheck check;
    };
    std::vector<MbRow> mb;
    if(auto n = spectrum.particle_target())
        for(const auto &st : states)
            if(st.temperature >= geometric_frequency(spectrum, *n)) mb.push_back({st.temperature, mb_witness_check(spectrum, *n, st.temperature, c.kappa)});

    if(c.format == Format::json) {
        json j;
        j["rows"] = json::array();
        for(const auto &st : states)
            j["rows"].push_back({{"T", num(st.temperature)}, {"mu", num(st.mu)}, {"S", num(st.entropy)}, {"F", num(st.free_energy)}, {"N_actual", num(st.particles)}});
        if(fit) {
            j["fit"] = {{"p_fit", num(fit->exponent)},          {"omega_tilde", num(fit->omega_tilde)},
                        {"r_squared", num(fit->r_squared)},     {"T_star", num(critical_temperature_estimate(*fit, c.kappa))},
                        {"window_lo", num(fit->window.lo)},     {"window_hi", num(fit->window.hi)},
                        {"n_reference", num(fit->n_reference)}, {"samples", fit->samples}};
        } else {
            j["fit"] = {{"error", fit_error}};
        }
        j["mb"] = json::array();
        for(const auto &r : mb)
            j["mb"].push_back({{"T", num(r.t)}, {"S_mb", num(r.check.s_mb)}, {"E_assumed", num(r.check.e_assumed)}, {"omega_tilde_g", num(r.check.omega_tilde_g)}, {"fires", r.check.fires}});
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "T,mu,S,F,N_actual\n";
    for(const auto &st : states)
        out << fmt(st.temperature) << ',' << fmt(st.mu) << ',' << fmt(st.entropy) << ',' << fmt(st.free_energy) << ',' << fmt(st.particles) << '\n';
    out << "\n[fit]\n";
    if(fit) {
        out << "p_fit,omega_tilde,r_squared,T_star,window_lo,window_hi,n_reference,samples\n";
        out << fmt(fit->exponent) << ',' << fmt(fit->omega_tilde) << ',' << fmt(fit->r_squared) << ',' << fmt(critical_temperature_estimate(*fit, c.kappa))
            << ',' << fmt(fit->window.lo) << ',' << fmt(fit->window.hi) << ',' << fmt(fit->n_reference) << ',' << fit->samples << '\n';
    } else {
        out << "error\n\"" << fit_error << "\"\n";
    }
    if(!mb.empty()) {
        out << "\n[mb]\nT,S_mb,E_assumed,omega_tilde_g,fires\n";
        for(const auto &r : mb)
            out << fmt(r.t) << ',' << fmt(r.check.s_mb) << ',' << fmt(r.check.e_assumed) << ',' << fmt(r.check.omega_tilde_g) << ',' << fmt(r.check.fires) << '\n';
    }
    return ok;
}

inline int run_ree(const RunConfig &c, std::ostream &out) {
    if(c.model_path.empty() == c.state_path.empty()) throw ConfigError("ree: give exactly one of --model or --state");
    PureState psi = c.state_path.empty() ? ground_state(build_spin_hamiltonian(load_model(c.model_path))).state : load_state(c.state_path);
    auto      lower = ree_lower_bound(psi);
    auto      upper = ree_upper_bound(DensityOperator::projector(psi), upper_config(c));
    if(c.format == Format::json) {
        json j = {{"lower", num(lower.lower)},           {"upper", num(upper.upper)},        {"duality_gap", num(upper.duality_gap)},
                  {"iterations", upper.iterations},      {"converged", upper.converged},     {"cuts", lower.iterations}};
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "lower,upper,duality_gap,iterations,converged\n";
    out << fmt(lower.lower) << ',' << fmt(upper.upper) << ',' << fmt(upper.duality_gap) << ',' << upper.iterations << ',' << fmt(upper.converged) << '\n';
    return ok;
}

inline int run_energy_witness(const RunConfig &c, std::ostream &out) {
    auto h  = build_spin_hamiltonian(load_model(c.model_path));
    auto gs = ground_state(h);
    ProductSearchConfig pc;
    pc.restarts = c.restarts;
    pc.seed     = c.seed;
    pc.tol      = c.tol.value_or(pc.tol);
    double e    = c.energy.value_or(gs.energy);
    auto   r    = energy_witness(h, e, pc);
    if(c.format == Format::json) {
        json j = {{"energy", num(e)}, {"ground_energy", num(gs.energy)}, {"sep_min", num(r.sep_min)}, {"entangled", r.entangled}};
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "energy,ground_energy,sep_min,entangled\n";
    out << fmt(e) << ',' << fmt(gs.energy) << ',' << fmt(r.sep_min) << ',' << fmt(r.entangled) << '\n';
    return ok;
}

// ---------------------------------------------------------------------------
// selfcheck

struct CheckOutcome {
    std::string name;
    bool        pass;
    std::size_t cases;
    double      worst; // largest violation measure; <= tolerance passes
    double      tolerance;
};

inline std::map<std::string, double> default_check_tolerances() {
    return {{"ground_weight_bound", 1e-10},
            {"entropy_identity", 1e-9},
            {"gas_entropy_derivative", 1e-5},
            {"witness_implication", 1e-9},
            {"third_law", 1e-5}};
}

inline std::vector<CheckOutcome> selfcheck(std::uint64_t seed, const std::map<std::string, double> &tol) {
    const SeedTree            root(seed);
    std::vector<CheckOutcome> out;
    auto temps = parse_temps("1e-3:1e3:20:log");

    // random level sets, shared by the first two checks
    std::vector<std::shared_ptr<const SpectralDecomposition>> systems;
    for(std::uint64_t i = 0; i < 30; ++i) {
        auto                                   rng = root.split("selfcheck_levels", i).engine();
        std::uniform_int_distribution<int>     size(4, 64);
        std::uniform_real_distribution<double> level(-5.0, 5.0);
        std::vector<double>                    e(static_cast<std::size_t>(size(rng)));
        for(auto &x : e) x = level(rng);
        systems.push_back(std::make_shared<const SpectralDecomposition>(eig_hermitian(HermitianOperator::diagonal(e, SiteDims({e.size()})))));
    }

    {
        CheckOutcome c{"ground_weight_bound", true, 0, 0.0, tol.at("ground_weight_bound")};
        for(const auto &sys : systems)
            for(double t : temps) {
                ThermalEnsemble ens(sys, t);
                auto            b = check_ground_weight_bound(ens);
                // p >= e^-S, slack >= 0, and ln p + S == slack
                c.worst = std::max({c.worst, b.exp_neg_entropy - b.p, -b.slack,
                                    std::abs(std::log(b.p) + ens.entropy() - b.slack) / std::max(1.0, ens.entropy())});
                ++c.cases;
            }
        out.push_back(c);
    }
    {
        CheckOutcome c{"entropy_identity", true, 0, 0.0, tol.at("entropy_identity")};
        for(const auto &sys : systems)
            for(double t : temps) {
                ThermalEnsemble ens(sys, t);
                double          s = (ens.internal_energy() - ens.free_energy()) / t;
                c.worst           = std::max(c.worst, std::abs(s - ens.entropy()) / std::max(1.0, std::abs(ens.internal_energy()) / t));
                ++c.cases;
            }
        out.push_back(c);
    }
    {
        CheckOutcome c{"gas_entropy_derivative", true, 0, 0.0, tol.at("gas_entropy_derivative")};
        for(std::uint64_t i = 0; i < 20; ++i) {
            auto                                   rng = root.split("selfcheck_gas", i).engine();
            std::uniform_real_distribution<double> u(0.1, 10.0);
            std::vector<double>                    w(10);
            for(auto &x : w) x = u(rng);
            std::sort(w.begin(), w.end());
            double mu_f = w[static_cast<std::size_t>(i % w.size())];
            double mu_b = w.front() - std::uniform_real_distribution<double>(1e-3, 0.5)(rng);
            for(auto [stats, mu] : {std::pair{Statistics::fermi, mu_f}, std::pair{Statistics::bose, mu_b}}) {
                ModeSpectrum s(w, stats, ChemicalPotential{mu});
                for(double t : parse_temps("0.01:100:9:log")) {
                    double d  = 1e-4 * t;
                    double fd = -(gas_free_energy(s, mu, t + d) - gas_free_energy(s, mu, t - d)) / (2 * d);
                    double sv = gas_state(s, t).entropy;
                    c.worst   = std::max(c.worst, std::abs(fd - sv) / sv);
                    ++c.cases;
                }
            }
        }
        out.push_back(c);
    }

    std::vector<SpinModelSpec> models;
    for(auto kind : {SpinModelKind::heisenberg, SpinModelKind::xy, SpinModelKind::transverse_ising})
        for(std::size_t n : {2u, 3u, 4u}) {
            SpinModelSpec m;
            m.kind     = kind;
            m.n_sites  = n;
            m.field    = kind == SpinModelKind::transverse_ising ? 0.7 : 0.0;
            m.boundary = n > 2 ? Boundary::periodic : Boundary::open;
            models.push_back(m);
        }
    {
        CheckOutcome  c{"witness_implication", true, 0, 0.0, tol.at("witness_implication")};
        SweepSettings settings;
        settings.compute_upper = false;
        for(const auto &m : models) {
            try {
                auto res = sweep(build_spin_hamiltonian(m), parse_temps("0.05:5:100"), settings);
                for(const auto &r : res.reports) {
                    if(r.entropy_fires && !r.ground_weight_fires) c.worst = std::numeric_limits<double>::infinity();
                    c.worst = std::max(c.worst, r.neg_log_ground_weight - r.entropy);
                    ++c.cases;
                }
            } catch(const NumericalError &) {
                c.worst = std::numeric_limits<double>::infinity();
            }
        }
        out.push_back(c);
    }
    {
        CheckOutcome c{"third_law", true, 0, 0.0, tol.at("third_law")};
        for(const auto &m : models) {
            auto sys = std::make_shared<const SpectralDecomposition>(eig_hermitian(build_spin_hamiltonian(m)));
            if(ground_degeneracy(sys->eigenvalues, default_degeneracy_tol) != 1) continue;
            double prev = 0.0;
            for(double t : parse_temps("1e-6:10:40:log")) {
                double s = ThermalEnsemble(sys, t).entropy();
                c.worst  = std::max(c.worst, prev - s);
                prev     = s;
            }
            c.worst = std::max(c.worst, ThermalEnsemble(sys, 1e-6).entropy());
            ++c.cases;
        }
        out.push_back(c);
    }
    for(auto &c : out) c.pass = c.worst <= c.tolerance;
    return out;
}

inline int run_selfcheck(const RunConfig &c, std::ostream &out) {
    auto tol = default_check_tolerances();
    for(const auto &o : c.tol_overrides) {
        auto eq = o.find('=');
        if(eq == std::string::npos || !tol.count(o.substr(0, eq))) throw ConfigError("--override-tol: unknown check in '" + o + "'");
        tol[o.substr(0, eq)] = parse_number(o.substr(eq + 1), "--override-tol");
    }
    auto results = selfcheck(c.seed, tol);
    int  passed  = 0;
    if(c.format == Format::json) {
        json j = json::array();
        for(const auto &r : results) {
            j.push_back({{"check", r.name}, {"pass", r.pass}, {"cases", r.cases}, {"worst", num(r.worst)}, {"tolerance", num(r.tolerance)}});
            passed += r.pass;
        }
        out << json{{"seed", c.seed}, {"checks", j}}.dump(2) << "\n";
    } else {
        for(const auto &r : results) {
            out << (r.pass ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases << " worst=" << fmt(r.worst) << " tol=" << fmt(r.tolerance) << '\n';
            passed += r.pass;
        }
        out << "selfcheck: " << passed << "/" << results.size() << " passed (seed " << c.seed << ")\n";
    }
    return passed == static_cast<int>(results.size()) ? ok : selfcheck_failed;
}

// ---------------------------------------------------------------------------

inline int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Thermal entanglement witnesses for spin models and ideal gases"};
    app.require_subcommand(1);
    RunConfig   c;
    std::string format = "csv";

    auto common = [&](CLI::App *sub) {
        sub->add_option("--seed", c.seed, "Root seed for all randomized searches")->capture_default_str();
        sub->add_option("--out", c.out_path, "Write output here instead of stdout");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    };
    auto search = [&](CLI::App *sub) {
        sub->add_option("--restarts", c.restarts, "Random restarts of the product-state search")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--tol", c.tol, "Duality-gap tolerance (product-search tolerance for energy-witness)")->check(CLI::PositiveNumber);
    };

    auto *spin = app.add_subcommand("spin-sweep", "Witness report over a temperature grid for a spin model");
    spin->add_option("--model", c.model_path, "Spin model JSON")->required();
    spin->add_option("--temps", c.temps, "lo:hi:count[:log]")->default_str("0.1:5:50");
    spin->add_option("--max-iter", c.max_iter, "Conditional-gradient iterations for the upper bound")->capture_default_str();
    spin->add_flag("--no-upper", c.no_upper, "Skip the relative-entropy upper bound");
    common(spin);
    search(spin);

    auto *gas = app.add_subcommand("gas-scan", "Ideal-gas entropy scan, low-temperature fit and classical check");
    gas->add_option("--spectrum", c.spectrum, "Spectrum JSON file or gen:kind:key=value,...")->required();
    gas->add_option("--temps", c.temps, "lo:hi:count[:log]")->default_str("0.01:10:60:log");
    gas->add_option("--window", c.window, "Fit window lo:hi (default [5 dw, 0.1 omega_max])");
    gas->add_option("--kappa", c.kappa, "Ground-state entanglement per particle, E = kappa N")->check(CLI::PositiveNumber)->capture_default_str();
    common(gas);

    auto *ree = app.add_subcommand("ree", "Relative entropy of entanglement bounds for a pure state");
    ree->add_option("--model", c.model_path, "Use the ground state of this spin model");
    ree->add_option("--state", c.state_path, "Pure state JSON {dims, amplitudes}");
    ree->add_option("--max-iter", c.max_iter, "Conditional-gradient iterations")->capture_default_str();
    common(ree);
    search(ree);

    auto *ew = app.add_subcommand("energy-witness", "Minimum energy over product states versus a given energy");
    ew->add_option("--model", c.model_path, "Spin model JSON")->required();
    ew->add_option("--energy", c.energy, "Energy to test (default: ground energy)");
    common(ew);
    search(ew);

    auto *check = app.add_subcommand("selfcheck", "Run the built-in identity and inequality checks");
    check->add_option("--override-tol", c.tol_overrides)->group("");
    common(check);

    try {
        app.parse(argc, argv);
    } catch(const CLI::Success &e) {
        return app.exit(e, out, err);
    } catch(const CLI::ParseError &e) {
        app.exit(e, out, err);
        return config_error;
    }
    c.format = format == "json" ? Format::json : Format::csv;

    try {
        std::ostringstream buffer;
        int                code = ok;
        if(spin->parsed()) {
            c.command = "spin-sweep";
            code      = run_spin_sweep(c, buffer);
        } else if(gas->parsed()) {
            c.command = "gas-scan";
            code      = run_gas_scan(c, buffer);
        } else if(ree->parsed()) {
            c.command = "ree";
            code      = run_ree(c, buffer);
        } else if(ew->parsed()) {
            c.command = "energy-witness";
            code      = run_energy_witness(c, buffer);
        } else {
            c.command = "selfcheck";
            code      = run_selfcheck(c, buffer);
        }
        if(c.out_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream f(c.out_path, std::ios::binary);
            if(!f) throw ConfigError("cannot write " + c.out_path);
            f << buffer.str();
        }
        if(code == selfcheck_failed) err << "error: selfcheck failed\n";
        return code;
    } catch(const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    } catch(const ResourceError &e) {
        err << "error: " << e.what() << '\n';
        return resource_error;
    } catch(const NumericalError &e) {
        err << "error: " << e.what() << '\n';
        return numerical_error;
    } catch(const json::exception &e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    }
}

} // namespace ewit::cli
