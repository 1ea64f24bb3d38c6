#pragma once

// Entanglement quantifiers over fully separable states.
//
//  * entanglement_entropy_pure : exact reduced-state entropy of a pure state
//  * ree_lower_bound           : max over bipartitions of the above, a lower
//                                bound on the relative entropy of entanglement
//  * ree_upper_bound           : conditional-gradient minimization of
//                                S(rho || sigma) over separable sigma
//  * closest_product_state     : extremal <H> over product pure states,
//                                shared by the linear oracle and the energy witness

#include "qops.hpp"
#include "random.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace ewit {

/// Bipartition A | complement(A).
class PartitionCut {
public:
    PartitionCut(SiteSet side_a, std::size_t n_sites) : n_sites_(n_sites) {
        side_a_ = detail::normalize_sites(std::move(side_a), n_sites, "PartitionCut");
        if(side_a_.empty() || side_a_.size() == n_sites) throw ConfigError("PartitionCut: both sides must be nonempty");
    }

    [[nodiscard]] const SiteSet &side_a() const { return side_a_; }
    [[nodiscard]] SiteSet        side_b() const { return detail::complement(side_a_, n_sites_); }
    [[nodiscard]] std::size_t    sites() const { return n_sites_; }

private:
    SiteSet     side_a_;
    std::size_t n_sites_;
};

enum class EstimateMethod { pure_bipartite_exact, max_cut_lower, frank_wolfe_upper };

struct EntanglementEstimate {
    double                lower = 0.0;
    std::optional<double> upper;
    EstimateMethod        method     = EstimateMethod::pure_bipartite_exact;
    std::size_t           iterations = 0;
    bool                  converged  = true;
    std::optional<double> duality_gap;     // conditional gradient only
    std::vector<double>   objective_trace; // best objective after each iteration
};

struct ProductStateAnsatz {
    std::vector<CVector> factors;
    double               weight = 1.0;

    [[nodiscard]] PureState state(const SiteDims &dims) const {
        CVector v = CVector::Ones(1);
        for(const auto &f : factors) {
            CVector next(v.size() * f.size());
            for(Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * f.size(), f.size()) = v(i) * f;
            v = std::move(next);
        }
        return PureState::normalized(std::move(v), dims);
    }
};

enum class Extremum { maximize, minimize };

struct ProductSearchConfig {
    std::size_t   restarts   = 32;
    std::uint64_t seed       = SeedTree::default_seed;
    double        tol        = 1e-10;
    std::size_t   max_sweeps = 1000;
};

struct FrankWolfeConfig {
    std::size_t         max_iter = 500;
    double              tol      = 1e-4;
    double              init_mix = 1e-3; // sigma0 = (1 - eps) I/D + eps diag(rho)
    ProductSearchConfig oracle{8}; // warm-started each iteration, so fewer restarts suffice
};

// ---------------------------------------------------------------------------

/// Von Neumann entropy of the reduced state on cut.side_a().
[[nodiscard]] inline double entanglement_entropy_pure(const PureState &psi, const PartitionCut &cut) {
    if(cut.sites() != psi.dims().sites()) throw ConfigError("entanglement_entropy_pure: cut does not match the state's site count");
    auto off_a = detail::subsystem_offsets(psi.dims(), cut.side_a());
    auto off_b = detail::subsystem_offsets(psi.dims(), cut.side_b());
    CMatrix m(static_cast<Eigen::Index>(off_a.size()), static_cast<Eigen::Index>(off_b.size()));
    for(std::size_t a = 0; a < off_a.size(); ++a)
        for(std::size_t b = 0; b < off_b.size(); ++b)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi.amplitudes()(static_cast<Eigen::Index>(off_a[a] + off_b[b]));
    // Both reduced states share their nonzero spectrum; use the smaller one.
    CMatrix reduced = m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
    return std::max(0.0, shannon_entropy(detail::eigenvalues_only(reduced)));
}

inline constexpr std::size_t max_cut_enumeration_sites = 12;

/// Largest bipartite entanglement entropy over all 2^(n-1) - 1 cuts. Fully
/// separable states are separable across every cut, so this bounds the
/// relative entropy of entanglement from below.
[[nodiscard]] inline EntanglementEstimate ree_lower_bound(const PureState &psi) {
    const std::size_t n = psi.dims().sites();
    EntanglementEstimate out;
    out.method = EstimateMethod::max_cut_lower;
    if(n < 2) return out;
    if(n > max_cut_enumeration_sites) throw ResourceError("ree_lower_bound: cut enumeration is capped at 12 sites");
    const std::size_t cuts = (std::size_t{1} << (n - 1)) - 1;
    for(std::size_t mask = 0; mask < cuts; ++mask) {
        SiteSet side{0};
        for(std::size_t s = 1; s < n; ++s)
            if(mask & (std::size_t{1} << (s - 1))) side.push_back(s);
        out.lower = std::max(out.lower, entanglement_entropy_pure(psi, PartitionCut(side, n)));
    }
    out.iterations = cuts;
    return out;
}

namespace detail {

/// Index layout for contracting an operator with a product state on every
/// site but one. Built once per search; each update is then O(d^2 R^2) with
/// R = D / d the dimension of the remaining sites.
class ProductContraction {
public:
    explicit ProductContraction(const SiteDims &dims) : dims_(dims) {
        const auto strides = dims.strides();
        for(std::size_t s = 0; s < dims.sites(); ++s) {
            SiteLayout l;
            l.rest        = complement(SiteSet{s}, dims.sites());
            l.rest_offset = subsystem_offsets(dims, l.rest);
            l.stride      = strides[s];
            layouts_.push_back(std::move(l));
        }
    }

    /// <phi_rest| H |phi_rest> as a d x d matrix on `site`.
    CMatrix effective_operator(const CMatrix &h, const std::vector<CVector> &factors, std::size_t site) {
        const auto &l = layouts_[site];
        amp_.assign(1, Complex(1.0));
        for(auto s : l.rest) {
            scratch_.clear();
            for(auto a : amp_)
                for(Eigen::Index v = 0; v < factors[s].size(); ++v) scratch_.push_back(a * factors[s](v));
            amp_.swap(scratch_);
        }
        const auto d = static_cast<Eigen::Index>(dims_[site]);
        const auto r = l.rest_offset.size();
        CMatrix    out(d, d);
        for(Eigen::Index a = 0; a < d; ++a)
            for(Eigen::Index b = a; b < d; ++b) {
                Complex acc = 0.0;
                for(std::size_t i = 0; i < r; ++i) {
                    auto    row = static_cast<Eigen::Index>(l.rest_offset[i] + static_cast<std::size_t>(a) * l.stride);
                    Complex inner = 0.0;
                    for(std::size_t j = 0; j < r; ++j)
                        inner += h(row, static_cast<Eigen::Index>(l.rest_offset[j] + static_cast<std::size_t>(b) * l.stride)) * amp_[j];
                    acc += std::conj(amp_[i]) * inner;
                }
                out(a, b) = acc;
                out(b, a) = std::conj(acc);
            }
        return out;
    }

private:
    struct SiteLayout {
        SiteSet                  rest;
        std::vector<std::size_t> rest_offset;
        std::size_t              stride = 1;
    };
    SiteDims                dims_;
    std::vector<SiteLayout> layouts_;
    std::vector<Complex>    amp_, scratch_;
};

inline CVector random_unit_vector(std::size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector                          v(static_cast<Eigen::Index>(d));
    for(Eigen::Index i = 0; i < v.size(); ++i) {
        double re = gauss(rng);
        double im = gauss(rng);
        v(i)      = Complex(re, im);
    }
    return v / v.norm();
}

/// One alternating-optimization run from a given starting product state:
/// each site in turn takes the extremal eigenvector of its effective operator.
inline std::pair<ProductStateAnsatz, double> alternate_sites(const HermitianOperator &target, Extremum mode, std::vector<CVector> factors,
                                                             const ProductSearchConfig &config, ProductContraction &contraction) {
    const auto &dims  = target.dims();
    double      value = std::numeric_limits<double>::quiet_NaN();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver;
    for(std::size_t sweep = 0; sweep < config.max_sweeps; ++sweep) {
        double previous = value;
        for(std::size_t s = 0; s < dims.sites(); ++s) {
            solver.compute(contraction.effective_operator(target.matrix(), factors, s));
            if(solver.info() != Eigen::Success) throw NumericalError("closest_product_state: site eigensolver failed");
            Eigen::Index k = mode == Extremum::maximize ? solver.eigenvalues().size() - 1 : 0;
            factors[s]     = solver.eigenvectors().col(k);
            value          = solver.eigenvalues()(k);
        }
        if(std::abs(value - previous) < config.tol) break;
    }
    return {ProductStateAnsatz{std::move(factors), 1.0}, value};
}

} // namespace detail

/// Extremal <phi|H|phi> over product pure states by alternating per-site
/// eigenproblems from `restarts` seeded random starts (plus an optional warm
/// start). Restarts are reduced in index order, so the result depends only on
/// the seed.
[[nodiscard]] inline std::pair<ProductStateAnsatz, double> closest_product_state(const HermitianOperator &target, Extremum mode,
                                                                                 const ProductSearchConfig &config = {},
                                                                                 const ProductStateAnsatz  *warm_start = nullptr) {
    const auto &dims = target.dims();
    std::optional<std::pair<ProductStateAnsatz, double>> best;
    auto better = [&](double v) {
        return !best || (mode == Extremum::maximize ? v > best->second : v < best->second);
    };
    detail::ProductContraction contraction(dims);
    if(warm_start && warm_start->factors.size() == dims.sites()) {
        auto run = detail::alternate_sites(target, mode, warm_start->factors, config, contraction);
        if(better(run.second)) best = std::move(run);
    }
    const SeedTree root(config.seed);
    const std::size_t restarts = std::max<std::size_t>(config.restarts, best ? 0 : 1);
    for(std::size_t r = 0; r < restarts; ++r) {
        auto                 rng = root.split("product_search", r).engine();
        std::vector<CVector> init;
        for(std::size_t s = 0; s < dims.sites(); ++s) init.push_back(detail::random_unit_vector(dims[s], rng));
        auto run = detail::alternate_sites(target, mode, std::move(init), config, contraction);
        if(better(run.second)) best = std::move(run);
    }
    return *best;
}

namespace detail {

/// Gradient of sigma -> tr(rho ln sigma): V (Gamma o V^dag rho V) V^dag with
/// Gamma_ij the divided difference of ln over the eigenvalues of sigma.
inline CMatrix log_trace_gradient(const DensityOperator &rho, const SpectralDecomposition &sigma) {
    const auto &lam = sigma.eigenvalues;
    const auto  n   = lam.size();
    CMatrix     rot = sigma.eigenvectors.adjoint() * rho.matrix() * sigma.eigenvectors;
    for(Eigen::Index i = 0; i < n; ++i)
        for(Eigen::Index j = 0; j < n; ++j) {
            double gap = lam(i) - lam(j);
            double dd  = std::abs(gap) < tol::log_derivative ? 2.0 / (lam(i) + lam(j)) : (std::log(lam(i)) - std::log(lam(j))) / gap;
            rot(i, j) *= dd;
        }
    return sigma.eigenvectors * rot * sigma.eigenvectors.adjoint();
}

/// tr(rho ln sigma); -infinity if sigma is singular on rho's support.
inline double log_trace(const DensityOperator &rho, const SpectralDecomposition &sigma) {
    CMatrix rot = sigma.eigenvectors.adjoint() * rho.matrix() * sigma.eigenvectors;
    double  acc = 0.0;
    for(Eigen::Index i = 0; i < sigma.eigenvalues.size(); ++i) {
        double w = rot(i, i).real();
        if(sigma.eigenvalues(i) <= 0.0) {
            if(w > tol::support) return -std::numeric_limits<double>::infinity();
            continue;
        }
        acc += w * std::log(sigma.eigenvalues(i));
    }
    return acc;
}

} // namespace detail

/// Upper bound on the relative entropy of entanglement: conditional-gradient
/// descent of f(sigma) = S(rho || sigma) over convex mixtures of product
/// states. The step size is 2/(t+2) with t counted from 1, so every iterate
/// keeps a share of the full-rank start and f stays finite.
[[nodiscard]] inline EntanglementEstimate ree_upper_bound(const DensityOperator &rho, const FrankWolfeConfig &config = {}) {
    const auto  &dims       = rho.dims();
    const auto   d          = static_cast<Eigen::Index>(dims.total());
    const double neg_s_rho  = -von_neumann_entropy(rho);
    const double eps        = config.init_mix;

    CMatrix sigma = (1.0 - eps) * CMatrix::Identity(d, d) / static_cast<double>(d);
    sigma.diagonal() += eps * rho.matrix().diagonal().real().cast<Complex>();

    EntanglementEstimate out;
    out.method    = EstimateMethod::frank_wolfe_upper;
    out.converged = false;

    auto   spec = detail::eigh(sigma, dims);
    double best = neg_s_rho - detail::log_trace(rho, spec);

    std::optional<ProductStateAnsatz> previous;
    const SeedTree                    root(config.oracle.seed);
    for(std::size_t t = 1; t <= config.max_iter; ++t) {
        HermitianOperator grad(detail::UncheckedTag{}, detail::log_trace_gradient(rho, spec), dims);
        ProductSearchConfig oracle = config.oracle;
        oracle.seed                = root.split("frank_wolfe", t).seed();
        auto [pi, value]           = closest_product_state(grad, Extremum::maximize, oracle, previous ? &*previous : nullptr);

        double gap      = value - (sigma * grad.matrix()).trace().real();
        out.duality_gap = gap;
        out.iterations  = t;
        if(gap < config.tol) {
            out.converged = true;
            break;
        }
        CVector phi   = pi.state(dims).amplitudes();
        double  gamma = 2.0 / (static_cast<double>(t) + 2.0);
        sigma         = (1.0 - gamma) * sigma + gamma * (phi * phi.adjoint());
        sigma         = (0.5 * (sigma + sigma.adjoint())).eval();
        spec          = detail::eigh(sigma, dims);
        best          = std::min(best, neg_s_rho - detail::log_trace(rho, spec));
        out.objective_trace.push_back(best);
        previous = std::move(pi);
    }
    out.upper = std::max(0.0, best);
    return out;
}

struct EnergyWitnessResult {
    double sep_min;
    bool   entangled;
};

/// A state whose energy lies below the minimum of <H> over product states is
/// entangled (mixtures of product states cannot go lower).
[[nodiscard]] inline EnergyWitnessResult energy_witness(const HermitianOperator &h, double energy, const ProductSearchConfig &config = {}) {
    auto [ansatz, sep_min] = closest_product_state(h, Extremum::minimize, config);
    return {sep_min, energy < sep_min - 1e-9};
}

struct PptResult {
    double min_eig;
    bool   npt;
};

[[nodiscard]] inline PptResult ppt_check(const DensityOperator &rho, const PartitionCut &cut) {
    if(cut.sites() != rho.dims().sites()) throw ConfigError("ppt_check: cut does not match the state's site count");
    double lo = detail::eigenvalues_only(partial_transpose(rho, cut.side_a()).matrix()).minCoeff();
    return {lo, lo < -1e-10};
}

} // namespace ewit
