#include "sfas/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace sfas {

CMatrix sample_covariance(const CMatrix& observations) {
    const Eigen::Index m = observations.rows();
    const Eigen::Index n = observations.cols();
    if (n < 1) {
        throw InputError("sample_covariance: need at least one snapshot");
    }
    CMatrix r = CMatrix::Zero(m, m);
    r.selfadjointView<Eigen::Lower>().rankUpdate(observations, 1.0 / static_cast<double>(n));
    for (Eigen::Index j = 0; j < m; ++j) {
        r(j, j) = Complex(r(j, j).real(), 0.0);
        for (Eigen::Index i = j + 1; i < m; ++i) {
            r(j, i) = std::conj(r(i, j));
        }
    }
    return r;
}

CMatrix sample_covariance(const SnapshotSet& set) {
    return sample_covariance(set.observations);
}

CMatrix theoretical_covariance(const CMatrix& manifold, std::span<const double> powers,
                               double noise_power) {
    if (static_cast<Eigen::Index>(powers.size()) != manifold.cols()) {
        throw InputError("theoretical_covariance: power count does not match manifold columns");
    }
    const Eigen::Index m = manifold.rows();
    CMatrix scaled = manifold;
    for (Eigen::Index k = 0; k < manifold.cols(); ++k) {
        scaled.col(k) *= powers[static_cast<std::size_t>(k)];
    }
    CMatrix r = scaled * manifold.adjoint();
    r += noise_power * CMatrix::Identity(m, m);
    // Exact Hermitian symmetry.
    CMatrix sym = 0.5 * (r + r.adjoint());
    for (Eigen::Index j = 0; j < m; ++j) {
        sym(j, j) = Complex(sym(j, j).real(), 0.0);
    }
    return sym;
}

CMatrix theoretical_covariance(const Manifold& manifold, std::span<const double> powers,
                               double noise_power) {
    return theoretical_covariance(manifold.matrix, powers, noise_power);
}

CovarianceSpectrum eigendecompose(const CMatrix& covariance, double hermitian_tolerance) {
    if (covariance.rows() != covariance.cols()) {
        throw InputError("eigendecompose: matrix is not square");
    }
    const double scale = covariance.norm();
    const double asym = (covariance - covariance.adjoint()).norm();
    if (asym > hermitian_tolerance * std::max(scale, std::numeric_limits<double>::min())) {
        throw InputError("eigendecompose: matrix is not Hermitian (relative asymmetry " +
                         std::to_string(scale > 0 ? asym / scale : asym) + ")");
    }
    const Eigen::Index m = covariance.rows();
    CovarianceSpectrum out;
    if (m == 0) {
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(covariance, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecompose: Hermitian eigensolver did not converge");
    }
    const RVector& ascending = solver.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return ascending(a) > ascending(b);
    });
    out.eigenvalues.resize(m);
    out.eigenvectors.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index src = order[static_cast<std::size_t>(i)];
        out.eigenvalues(i) = ascending(src);
        out.eigenvectors.col(i) = solver.eigenvectors().col(src);
    }
    const double floor = -1e-10 * std::abs(out.eigenvalues(0));
    for (Eigen::Index i = 0; i < m; ++i) {
        if (out.eigenvalues(i) < 0.0 && out.eigenvalues(i) >= floor) {
            out.eigenvalues(i) = 0.0;
        }
    }
    return out;
}

SubspaceSplit split_subspaces(const CovarianceSpectrum& spectrum, int sources) {
    const Eigen::Index m = spectrum.dimension();
    if (sources < 0 || sources > m) {
        throw InputError("split_subspaces: K=" + std::to_string(sources) + " outside [0, " +
                         std::to_string(m) + "]");
    }
    SubspaceSplit out;
    out.sources = sources;
    out.signal = spectrum.eigenvectors.leftCols(sources);
    out.noise = spectrum.eigenvectors.rightCols(m - sources);
    return out;
}

std::vector<double> mdl_scores(std::span<const double> eigenvalues, int snapshots) {
    const auto m = static_cast<int>(eigenvalues.size());
    if (m < 1) {
        throw InputError("mdl_scores: empty eigenvalue list");
    }
    if (snapshots < 2) {
        throw InputError("mdl_scores: need at least two snapshots");
    }
    const double top = std::max(std::abs(eigenvalues[0]), std::numeric_limits<double>::min());
    const double floor = std::numeric_limits<double>::epsilon() * top;
    std::vector<double> clamped(eigenvalues.begin(), eigenvalues.end());
    for (double& v : clamped) {
        v = std::max(v, floor);
    }
    const double n = snapshots;
    const double log_n = std::log(n);
    std::vector<double> scores(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const int tail = m - k;
        double log_sum = 0.0;
        double sum = 0.0;
        for (int i = k; i < m; ++i) {
            log_sum += std::log(clamped[static_cast<std::size_t>(i)]);
            sum += clamped[static_cast<std::size_t>(i)];
        }
        const double log_geo = log_sum / tail;
        const double log_arith = std::log(sum / tail);
        const double data = -n * tail * (log_geo - log_arith);
        const double penalty = 0.5 * k * (2.0 * m - k) * log_n;
        scores[static_cast<std::size_t>(k)] = data + penalty;
    }
    return scores;
}

int mdl_enumerate(std::span<const double> eigenvalues, int snapshots) {
    const std::vector<double> scores = mdl_scores(eigenvalues, snapshots);
    return static_cast<int>(std::min_element(scores.begin(), scores.end()) - scores.begin());
}

void write_eigenvalues_csv_row(std::ostream& out, std::size_t trial,
                               std::span<const double> eigenvalues) {
    const auto precision = out.precision(17);
    out << trial;
    for (double v : eigenvalues) {
        out << ',' << v;
    }
    out << '\n';
    out.precision(precision);
}

}  // namespace sfas
