#pragma once

// Dense complex linear algebra on multi-site Hilbert spaces.
//
// Conventions used throughout the library:
//   * natural logarithms, so every entropy is in nats;
//   * k_B = 1 and hbar = 1, temperatures are measured in energy units;
//   * site 0 is the most significant factor of a Kronecker product, so the
//     basis state |s0 s1 ... s(n-1)> has flat index sum_k s_k * stride_k.

#include "errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace ewit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using SiteSet = std::vector<std::size_t>;

inline constexpr std::size_t default_dimension_cap = 16384;

namespace tol {
inline constexpr double hermitian       = 1e-10;
inline constexpr double trace           = 1e-10;
inline constexpr double psd             = 1e-10;
inline constexpr double norm            = 1e-12;
inline constexpr double log_clamp       = 1e-12; // eigenvalues below this are treated as zero in log-domain functions
inline constexpr double support         = 1e-10; // weight outside support above this makes S(sigma||rho) infinite
inline constexpr double log_derivative  = 1e-10; // divided differences switch to the 1/lambda limit below this gap
} // namespace tol

/// Local dimension of every site. Site count >= 1, each entry >= 2 and the
/// product bounded by a dimension cap.
class SiteDims {
public:
    explicit SiteDims(std::vector<std::size_t> dims, std::size_t cap = default_dimension_cap) : dims_(std::move(dims)) {
        if(dims_.empty()) throw ConfigError("SiteDims: at least one site is required");
        total_ = 1;
        for(auto d : dims_) {
            if(d < 2) throw ConfigError("SiteDims: every local dimension must be >= 2, got " + std::to_string(d));
            if(total_ > cap / d)
                throw ResourceError("SiteDims: Hilbert-space dimension exceeds cap " + std::to_string(cap));
            total_ *= d;
        }
    }

    static SiteDims qubits(std::size_t n, std::size_t cap = default_dimension_cap) {
        return SiteDims(std::vector<std::size_t>(n, 2), cap);
    }

    [[nodiscard]] std::size_t sites() const { return dims_.size(); }
    [[nodiscard]] std::size_t total() const { return total_; }
    [[nodiscard]] std::size_t operator[](std::size_t site) const { return dims_.at(site); }
    [[nodiscard]] const std::vector<std::size_t> &dims() const { return dims_; }

    /// Row-major strides: stride[n-1] = 1.
    [[nodiscard]] std::vector<std::size_t> strides() const {
        std::vector<std::size_t> s(dims_.size(), 1);
        for(std::size_t k = dims_.size() - 1; k > 0; --k) s[k - 1] = s[k] * dims_[k];
        return s;
    }

    [[nodiscard]] SiteDims subset(const SiteSet &sites) const {
        std::vector<std::size_t> d;
        d.reserve(sites.size());
        for(auto s : sites) d.push_back(dims_.at(s));
        return SiteDims(std::move(d));
    }

    [[nodiscard]] SiteDims concat(const SiteDims &other, std::size_t cap = default_dimension_cap) const {
        std::vector<std::size_t> d = dims_;
        d.insert(d.end(), other.dims_.begin(), other.dims_.end());
        return SiteDims(std::move(d), cap);
    }

    bool operator==(const SiteDims &other) const { return dims_ == other.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::size_t              total_ = 1;
};

namespace detail {

inline double max_antihermitian_entry(const CMatrix &m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline void require_square(const CMatrix &m, const SiteDims &dims, const char *who) {
    auto n = static_cast<Eigen::Index>(dims.total());
    if(m.rows() != n || m.cols() != n)
        throw ConfigError(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                          " but site dimensions give " + std::to_string(n));
}

/// Sorted, duplicate-free, in-range site indices.
inline SiteSet normalize_sites(SiteSet sites, std::size_t n_sites, const char *who) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    for(auto s : sites)
        if(s >= n_sites) throw ConfigError(std::string(who) + ": site index " + std::to_string(s) + " out of range");
    return sites;
}

inline SiteSet complement(const SiteSet &sites, std::size_t n_sites) {
    SiteSet rest;
    for(std::size_t s = 0; s < n_sites; ++s)
        if(!std::binary_search(sites.begin(), sites.end(), s)) rest.push_back(s);
    return rest;
}

/// Flat offset contributed by each multi-index over `sites`, enumerated in
/// row-major order of the subsystem.
inline std::vector<std::size_t> subsystem_offsets(const SiteDims &dims, const SiteSet &sites) {
    const auto strides = dims.strides();
    std::vector<std::size_t> offsets{0};
    for(auto s : sites) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * dims[s]);
        for(auto base : offsets)
            for(std::size_t v = 0; v < dims[s]; ++v) next.push_back(base + v * strides[s]);
        offsets = std::move(next);
    }
    return offsets;
}

struct UncheckedTag {};

} // namespace detail

/// Dense Hermitian operator (Hamiltonians, observables, gradients).
class HermitianOperator {
public:
    HermitianOperator(CMatrix matrix, SiteDims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
        detail::require_square(matrix_, dims_, "HermitianOperator");
        double err = detail::max_antihermitian_entry(matrix_);
        if(!(err <= tol::hermitian))
            throw ConfigError("HermitianOperator: matrix is not Hermitian (max |A - A^dag| = " + std::to_string(err) + ")");
        symmetrize();
    }

    HermitianOperator(detail::UncheckedTag, CMatrix matrix, SiteDims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
        symmetrize();
    }

    static HermitianOperator diagonal(const std::vector<double> &values, SiteDims dims) {
        detail::require_square(CMatrix(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size())), dims,
                               "HermitianOperator::diagonal");
        RVector d = Eigen::Map<const RVector>(values.data(), static_cast<Eigen::Index>(values.size()));
        return {detail::UncheckedTag{}, d.cast<Complex>().asDiagonal().toDenseMatrix(), std::move(dims)};
    }

    [[nodiscard]] const CMatrix  &matrix() const { return matrix_; }
    [[nodiscard]] const SiteDims &dims() const { return dims_; }
    [[nodiscard]] std::size_t     dim() const { return dims_.total(); }

private:
    void symmetrize() { matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval(); }

    CMatrix  matrix_;
    SiteDims dims_;
};

/// Normalized state vector.
class PureState {
public:
    PureState(CVector amplitudes, SiteDims dims) : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
        if(amplitudes_.size() != static_cast<Eigen::Index>(dims_.total()))
            throw ConfigError("PureState: amplitude count does not match site dimensions");
        if(!(std::abs(amplitudes_.norm() - 1.0) <= tol::norm)) throw ConfigError("PureState: amplitudes are not normalized");
    }

    static PureState normalized(CVector amplitudes, SiteDims dims) {
        double n = amplitudes.norm();
        if(!(n > 0.0) || !std::isfinite(n)) throw ConfigError("PureState: cannot normalize a zero or non-finite vector");
        amplitudes /= n;
        return {std::move(amplitudes), std::move(dims)};
    }

    static PureState basis(SiteDims dims, std::size_t index) {
        if(index >= dims.total()) throw ConfigError("PureState::basis: index out of range");
        CVector v = CVector::Zero(static_cast<Eigen::Index>(dims.total()));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return {std::move(v), std::move(dims)};
    }

    [[nodiscard]] const CVector  &amplitudes() const { return amplitudes_; }
    [[nodiscard]] const SiteDims &dims() const { return dims_; }
    [[nodiscard]] std::size_t     dim() const { return dims_.total(); }

private:
    CVector  amplitudes_;
    SiteDims dims_;
};

/// Unit-trace positive-semidefinite operator.
class DensityOperator {
public:
    DensityOperator(CMatrix matrix, SiteDims dims) : op_(std::move(matrix), std::move(dims)) {
        double tr = op_.matrix().trace().real();
        if(!(std::abs(tr - 1.0) <= tol::trace)) throw ConfigError("DensityOperator: trace is " + std::to_string(tr) + ", expected 1");
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(op_.matrix(), Eigen::EigenvaluesOnly);
        if(solver.info() != Eigen::Success) throw NumericalError("DensityOperator: eigenvalue check did not converge");
        double lo = solver.eigenvalues().minCoeff();
        if(!(lo >= -tol::psd)) throw ConfigError("DensityOperator: negative eigenvalue " + std::to_string(lo));
    }

    /// For operators that are a density matrix by construction.
    DensityOperator(detail::UncheckedTag tag, CMatrix matrix, SiteDims dims) : op_(tag, std::move(matrix), std::move(dims)) {}

    static DensityOperator projector(const PureState &psi) {
        return {detail::UncheckedTag{}, psi.amplitudes() * psi.amplitudes().adjoint(), psi.dims()};
    }

    static DensityOperator maximally_mixed(const SiteDims &dims) {
        auto n = static_cast<Eigen::Index>(dims.total());
        return {detail::UncheckedTag{}, CMatrix::Identity(n, n) / static_cast<double>(n), dims};
    }

    /// sum_k w_k |v_k><v_k| with w_k >= 0 summing to one.
    static DensityOperator from_spectrum(const CMatrix &vectors, const RVector &weights, const SiteDims &dims) {
        return {detail::UncheckedTag{}, vectors * weights.cast<Complex>().asDiagonal() * vectors.adjoint(), dims};
    }

    [[nodiscard]] const CMatrix           &matrix() const { return op_.matrix(); }
    [[nodiscard]] const SiteDims          &dims() const { return op_.dims(); }
    [[nodiscard]] std::size_t              dim() const { return op_.dim(); }
    [[nodiscard]] const HermitianOperator &as_hermitian() const { return op_; }

private:
    HermitianOperator op_;
};

/// Ascending eigenvalues and orthonormal eigenvectors (columns).
struct SpectralDecomposition {
    RVector  eigenvalues;
    CMatrix  eigenvectors;
    SiteDims dims;

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }

    [[nodiscard]] CMatrix reconstruct() const {
        return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
    }

    /// f(A) = V f(Lambda) V^dag
    template<typename F>
    [[nodiscard]] CMatrix apply(F &&f) const {
        RVector fv = eigenvalues.unaryExpr(std::forward<F>(f));
        return eigenvectors * fv.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
    }
};

namespace detail {

/// Rotate each column so its largest-magnitude component is real and
/// positive. Ties resolve to the lowest index.
inline void fix_phases(CMatrix &vectors) {
    for(Eigen::Index j = 0; j < vectors.cols(); ++j) {
        auto   col  = vectors.col(j);
        double peak = col.cwiseAbs().maxCoeff();
        for(Eigen::Index i = 0; i < col.size(); ++i) {
            double mag = std::abs(col(i));
            if(mag >= peak - 1e-9) {
                col *= std::conj(col(i)) / mag;
                col(i) = mag;
                break;
            }
        }
    }
}

inline SpectralDecomposition eigh(const CMatrix &m, const SiteDims &dims) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if(solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: eigensolver did not converge");
    SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors(), dims};
    fix_phases(out.eigenvectors);
    return out;
}

inline RVector eigenvalues_only(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    if(solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
    return solver.eigenvalues();
}

} // namespace detail

[[nodiscard]] inline SpectralDecomposition eig_hermitian(const HermitianOperator &a) { return detail::eigh(a.matrix(), a.dims()); }

[[nodiscard]] inline HermitianOperator tensor_product(const HermitianOperator &a, const HermitianOperator &b) {
    auto dims = a.dims().concat(b.dims());
    return {detail::UncheckedTag{}, Eigen::kroneckerProduct(a.matrix(), b.matrix()), std::move(dims)};
}

[[nodiscard]] inline DensityOperator tensor_product(const DensityOperator &a, const DensityOperator &b) {
    auto dims = a.dims().concat(b.dims());
    return {detail::UncheckedTag{}, Eigen::kroneckerProduct(a.matrix(), b.matrix()), std::move(dims)};
}

[[nodiscard]] inline PureState tensor_product(const PureState &a, const PureState &b) {
    auto    dims = a.dims().concat(b.dims());
    CVector v(static_cast<Eigen::Index>(dims.total()));
    for(Eigen::Index i = 0; i < a.amplitudes().size(); ++i) v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
    return PureState::normalized(std::move(v), std::move(dims));
}

/// Reduced state on `keep`, with the kept sites in ascending order.
[[nodiscard]] inline DensityOperator partial_trace(const DensityOperator &rho, SiteSet keep) {
    if(keep.empty()) throw ConfigError("partial_trace: keep set is empty");
    keep              = detail::normalize_sites(std::move(keep), rho.dims().sites(), "partial_trace");
    auto traced       = detail::complement(keep, rho.dims().sites());
    auto keep_offset  = detail::subsystem_offsets(rho.dims(), keep);
    auto trace_offset = detail::subsystem_offsets(rho.dims(), traced);

    const auto  n   = static_cast<Eigen::Index>(keep_offset.size());
    const auto &m   = rho.matrix();
    CMatrix     out = CMatrix::Zero(n, n);
    for(Eigen::Index a = 0; a < n; ++a)
        for(Eigen::Index b = 0; b < n; ++b) {
            Complex acc = 0.0;
            for(auto t : trace_offset)
                acc += m(static_cast<Eigen::Index>(keep_offset[static_cast<std::size_t>(a)] + t),
                         static_cast<Eigen::Index>(keep_offset[static_cast<std::size_t>(b)] + t));
            out(a, b) = acc;
        }
    return {detail::UncheckedTag{}, std::move(out), rho.dims().subset(keep)};
}

/// Transpose of the factors on `subsystem`, other factors untouched.
[[nodiscard]] inline HermitianOperator partial_transpose(const DensityOperator &rho, SiteSet subsystem) {
    subsystem         = detail::normalize_sites(std::move(subsystem), rho.dims().sites(), "partial_transpose");
    const auto strides = rho.dims().strides();
    const auto n       = rho.dim();

    // digit(i, s) = (i / stride_s) % d_s ; swapping digits on `subsystem`
    // between row and column is a pure index permutation.
    auto sub_part = [&](std::size_t idx) {
        std::size_t part = 0;
        for(auto s : subsystem) part += (idx / strides[s]) % rho.dims()[s] * strides[s];
        return part;
    };
    std::vector<std::size_t> parts(n);
    for(std::size_t i = 0; i < n; ++i) parts[i] = sub_part(i);

    const auto &m = rho.matrix();
    CMatrix     out(m.rows(), m.cols());
    for(std::size_t i = 0; i < n; ++i)
        for(std::size_t j = 0; j < n; ++j) {
            std::size_t ii = i - parts[i] + parts[j];
            std::size_t jj = j - parts[j] + parts[i];
            out(static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj)) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    return {std::move(out), rho.dims()};
}

/// -sum p ln p over a probability vector, 0 ln 0 := 0.
[[nodiscard]] inline double shannon_entropy(const RVector &probabilities) {
    double s = 0.0;
    for(double p : probabilities)
        if(p > tol::log_clamp) s -= p * std::log(p);
    return s;
}

[[nodiscard]] inline double von_neumann_entropy(const DensityOperator &rho) {
    return std::max(0.0, shannon_entropy(detail::eigenvalues_only(rho.matrix())));
}

/// S(sigma || rho) = tr sigma (ln sigma - ln rho); +infinity when sigma has
/// weight outside the support of rho.
[[nodiscard]] inline double quantum_relative_entropy(const DensityOperator &sigma, const DensityOperator &rho) {
    if(!(sigma.dims() == rho.dims())) throw ConfigError("quantum_relative_entropy: dimension mismatch");
    const double neg_entropy = -shannon_entropy(detail::eigenvalues_only(sigma.matrix()));

    auto          r       = detail::eigh(rho.matrix(), rho.dims());
    const CMatrix rotated = r.eigenvectors.adjoint() * sigma.matrix() * r.eigenvectors;
    double        cross   = 0.0;
    for(Eigen::Index j = 0; j < r.eigenvalues.size(); ++j) {
        double weight = rotated(j, j).real();
        if(r.eigenvalues(j) < tol::log_clamp) {
            if(weight > tol::support) return std::numeric_limits<double>::infinity();
            continue;
        }
        cross += weight * std::log(r.eigenvalues(j));
    }
    return neg_entropy - cross;
}

[[nodiscard]] inline double expectation(const HermitianOperator &h, const PureState &psi) {
    if(!(h.dims() == psi.dims())) throw ConfigError("expectation: dimension mismatch");
    return psi.amplitudes().dot(h.matrix() * psi.amplitudes()).real();
}

} // namespace ewit
