#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sfas/common.hpp"
#include "sfas/manifold.hpp"
#include "sfas/synth.hpp"

namespace sfas {

/// (1/N) Y Y^H, symmetrized so that R == R^H exactly.
CMatrix sample_covariance(const CMatrix& observations);
CMatrix sample_covariance(const SnapshotSet& set);

/// A diag(P) A^H + sigma_n^2 I.
CMatrix theoretical_covariance(const CMatrix& manifold, std::span<const double> powers,
                               double noise_power);
CMatrix theoretical_covariance(const Manifold& manifold, std::span<const double> powers,
                               double noise_power);

/// Eigenpairs of a Hermitian matrix sorted by descending eigenvalue.
///
/// Equal eigenvalues keep the solver's index order. Negative values no lower
/// than -1e-10 * lambda_1 are rounding noise and are clamped to zero.
struct CovarianceSpectrum {
    RVector eigenvalues;
    CMatrix eigenvectors;

    Eigen::Index dimension() const noexcept { return eigenvalues.size(); }
    /// sigma_max^2.
    double max_eigenvalue() const noexcept {
        return eigenvalues.size() > 0 ? eigenvalues(0) : 0.0;
    }
    std::span<const double> values() const noexcept {
        return {eigenvalues.data(), static_cast<std::size_t>(eigenvalues.size())};
    }
};

inline constexpr double kHermitianTolerance = 1e-10;

/// Rejects inputs with ||R - R^H||_F > tolerance * ||R||_F.
CovarianceSpectrum eigendecompose(const CMatrix& covariance,
                                  double hermitian_tolerance = kHermitianTolerance);

struct SubspaceSplit {
    CMatrix signal;
    CMatrix noise;
    int sources = 0;

    Eigen::Index dimension() const noexcept { return signal.rows(); }
    Eigen::Index noise_dimension() const noexcept { return noise.cols(); }
};

/// Top-K eigenvectors form the signal basis; the rest the noise basis.
SubspaceSplit split_subspaces(const CovarianceSpectrum& spectrum, int sources);

/// Wax-Kailath MDL score for each candidate k in [0, M-1].
std::vector<double> mdl_scores(std::span<const double> eigenvalues, int snapshots);

/// argmin_k of mdl_scores; ties resolve to the smaller k.
int mdl_enumerate(std::span<const double> eigenvalues, int snapshots);

/// One CSV row: trial,lambda_1,...,lambda_M.
void write_eigenvalues_csv_row(std::ostream& out, std::size_t trial,
                               std::span<const double> eigenvalues);

}  // namespace sfas
