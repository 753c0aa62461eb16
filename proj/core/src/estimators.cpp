#include "sfas/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sfas {

namespace {

std::vector<double> inclusive_points(double start, double stop, double step, const char* what) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InputError(std::string(what) + ": step must be positive");
    }
    if (!(stop >= start)) {
        throw InputError(std::string(what) + ": stop must not precede start");
    }
    const auto n = static_cast<std::size_t>(std::llround(std::floor((stop - start) / step + 1e-9)));
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        // Snap to 1e-12 so on-grid angles compare exactly after formatting.
        out[i] = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
    }
    return out;
}

void check_capacity(int sources, Eigen::Index dimension, const char* what) {
    if (sources < 1) {
        throw InputError(std::string(what) + ": source count must be >= 1");
    }
    if (sources >= dimension) {
        throw CapacityError(std::string(what) + ": K=" + std::to_string(sources) +
                            " leaves no noise subspace (M_eff=" + std::to_string(dimension) +
                            ", K_max=" + std::to_string(dimension - 1) + ")");
    }
}

Spectrum finish_spectrum(const SteeringTable& table, const RVector& denominators) {
    Spectrum out;
    out.angles_deg = table.angles_deg();
    out.values.resize(out.angles_deg.size());
    const RVector& norms = table.squared_norms();
    for (Eigen::Index g = 0; g < norms.size(); ++g) {
        const double floor = kSpectrumFloor * norms(g);
        out.values[static_cast<std::size_t>(g)] = norms(g) / std::max(denominators(g), floor);
    }
    return out;
}

EstimateSet estimates_from_peaks(const Spectrum& spectrum, int sources) {
    const PeakSet peaks = find_peaks(spectrum.values, sources);
    EstimateSet out;
    out.degenerate = peaks.degenerate;
    for (std::size_t idx : peaks.indices) {
        out.angles_deg.push_back(spectrum.angles_deg[idx]);
    }
    std::sort(out.angles_deg.begin(), out.angles_deg.end());
    return out;
}

}  // namespace

std::vector<double> SearchGrid::points() const {
    return inclusive_points(start, stop, step, "SearchGrid");
}

std::size_t SearchGrid::size() const { return points().size(); }

std::vector<double> RangeGrid::points() const {
    if (!(start > 0.0)) {
        throw InputError("RangeGrid: ranges must be positive");
    }
    return inclusive_points(start, stop, step, "RangeGrid");
}

SteeringTable::SteeringTable(const SteeringModel& model, const SearchGrid& grid)
    : angles_(grid.points()) {
    table_ = model.matrix(angles_);
    norms_ = table_.colwise().squaredNorm().transpose();
}

Spectrum music_spectrum(const CMatrix& noise_basis, const SteeringTable& table) {
    if (noise_basis.cols() == 0) {
        throw CapacityError(
            "music_spectrum: empty noise subspace (K = M_eff leaves no orthogonality reference)");
    }
    if (noise_basis.rows() != table.dimension()) {
        throw InputError("music_spectrum: noise basis rows differ from steering dimension");
    }
    const CMatrix proj = noise_basis.adjoint() * table.matrix();
    return finish_spectrum(table, proj.colwise().squaredNorm().transpose());
}

Spectrum music_spectrum(const CMatrix& noise_basis, const SearchGrid& grid,
                        const SteeringModel& steering) {
    return music_spectrum(noise_basis, SteeringTable(steering, grid));
}

Spectrum music_spectrum(const SubspaceSplit& split, const SteeringTable& table) {
    if (split.noise_dimension() == 0) {
        throw CapacityError(
            "music_spectrum: empty noise subspace (K = M_eff leaves no orthogonality reference)");
    }
    if (split.noise_dimension() <= split.signal.cols()) {
        return music_spectrum(split.noise, table);
    }
    if (split.signal.rows() != table.dimension()) {
        throw InputError("music_spectrum: subspace rows differ from steering dimension");
    }
    const CMatrix proj = split.signal.adjoint() * table.matrix();
    RVector denom = table.squared_norms() - proj.colwise().squaredNorm().transpose();
    return finish_spectrum(table, denom);
}

PeakSet find_peaks(std::span<const double> values, int count) {
    PeakSet out;
    if (count < 1) {
        throw InputError("find_peaks: K must be >= 1");
    }
    const std::size_t n = values.size();
    std::vector<std::size_t> maxima;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (values[i] > values[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && values[j + 1] == values[i]) {
                ++j;
            }
            if (j + 1 < n && values[j + 1] < values[i]) {
                maxima.push_back(i);
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    std::stable_sort(maxima.begin(), maxima.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const auto want = static_cast<std::size_t>(count);
    if (maxima.size() >= want) {
        maxima.resize(want);
        out.indices = std::move(maxima);
        return out;
    }
    out.degenerate = true;
    out.indices = maxima;
    std::vector<std::size_t> rest(n);
    std::iota(rest.begin(), rest.end(), std::size_t{0});
    std::stable_sort(rest.begin(), rest.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    for (std::size_t idx : rest) {
        if (out.indices.size() >= want) {
            break;
        }
        if (std::find(out.indices.begin(), out.indices.end(), idx) == out.indices.end()) {
            out.indices.push_back(idx);
        }
    }
    return out;
}

EstimateSet music(const SnapshotSet& observations, int sources, const SteeringTable& table) {
    check_capacity(sources, observations.rows(), "music");
    const CovarianceSpectrum spectrum = eigendecompose(sample_covariance(observations));
    const SubspaceSplit split = split_subspaces(spectrum, sources);
    return estimates_from_peaks(music_spectrum(split, table), sources);
}

EstimateSet jmusic(const SnapshotSet& compressed, const SnapshotSet& extended, int sources,
                   const SteeringTable& joint_table) {
    const SnapshotSet joint = stack_joint(compressed, extended);
    check_capacity(sources, joint.rows(), "jmusic");
    if (joint_table.dimension() != joint.rows()) {
        throw InputError("jmusic: steering dimension " + std::to_string(joint_table.dimension()) +
                         " differs from stacked rows " + std::to_string(joint.rows()));
    }
    const CMatrix r_joint = sample_covariance(joint);
    const CovarianceSpectrum spectrum = eigendecompose(r_joint);
    const SubspaceSplit split = split_subspaces(spectrum, sources);
    return estimates_from_peaks(music_spectrum(split, joint_table), sources);
}

EstimateSet jmusic(const SnapshotSet& compressed, const SnapshotSet& extended, int sources,
                   const SearchGrid& grid, const SteeringModel& compressed_steering,
                   const SteeringModel& extended_steering) {
    const SteeringModel joint = SteeringModel::stacked(compressed_steering, extended_steering);
    return jmusic(compressed, extended, sources, SteeringTable(joint, grid));
}

Spectrum2D mixed_field_spectrum(const CMatrix& noise_basis, const SearchGrid& angles,
                                const RangeGrid& ranges, const ArrayConfig& config,
                                PhaseConvention convention) {
    if (noise_basis.cols() == 0) {
        throw CapacityError("mixed_field_spectrum: empty noise subspace");
    }
    if (noise_basis.rows() != config.total_elements()) {
        throw InputError("mixed_field_spectrum: noise basis rows differ from element count");
    }
    Spectrum2D out;
    out.angles_deg = angles.points();
    out.ranges = ranges.points();
    out.values.resize(out.angles_deg.size() * out.ranges.size());
    const auto r_count = static_cast<Eigen::Index>(out.ranges.size());
    CMatrix block(config.total_elements(), r_count);
    for (std::size_t a = 0; a < out.angles_deg.size(); ++a) {
        for (Eigen::Index r = 0; r < r_count; ++r) {
            block.col(r) = esg_steering_vector(config, out.angles_deg[a],
                                               out.ranges[static_cast<std::size_t>(r)], convention);
        }
        const RVector norms = block.colwise().squaredNorm().transpose();
        const RVector denom = (noise_basis.adjoint() * block).colwise().squaredNorm().transpose();
        for (Eigen::Index r = 0; r < r_count; ++r) {
            out.values[a * out.ranges.size() + static_cast<std::size_t>(r)] =
                norms(r) / std::max(denom(r), kSpectrumFloor * norms(r));
        }
    }
    return out;
}

EstimateSet mixed_field_music(const CMatrix& noise_basis, const SearchGrid& angles,
                              const RangeGrid& ranges, const ArrayConfig& config, int sources,
                              PhaseConvention convention) {
    if (sources < 1) {
        throw InputError("mixed_field_music: source count must be >= 1");
    }
    const Spectrum2D spec = mixed_field_spectrum(noise_basis, angles, ranges, config, convention);
    const std::size_t na = spec.angles_deg.size();
    const std::size_t nr = spec.ranges.size();
    std::vector<std::size_t> maxima;
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t r = 0; r < nr; ++r) {
            const double v = spec.at(a, r);
            bool peak = true;
            for (int da = -1; da <= 1 && peak; ++da) {
                for (int dr = -1; dr <= 1 && peak; ++dr) {
                    if (da == 0 && dr == 0) {
                        continue;
                    }
                    const auto ia = static_cast<long>(a) + da;
                    const auto ir = static_cast<long>(r) + dr;
                    if (ia < 0 || ir < 0 || ia >= static_cast<long>(na) ||
                        ir >= static_cast<long>(nr)) {
                        continue;
                    }
                    const double w = spec.at(static_cast<std::size_t>(ia), static_cast<std::size_t>(ir));
                    // Raster-earlier neighbours must be strictly lower so a plateau
                    // yields a single peak.
                    const bool earlier = da < 0 || (da == 0 && dr < 0);
                    peak = earlier ? v > w : v >= w;
                }
            }
            if (peak) {
                maxima.push_back(a * nr + r);
            }
        }
    }
    std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t x, std::size_t y) {
        return spec.values[x] > spec.values[y];
    });
    EstimateSet out;
    const auto want = static_cast<std::size_t>(sources);
    if (maxima.size() < want) {
        out.degenerate = true;
        std::vector<std::size_t> rest(spec.values.size());
        std::iota(rest.begin(), rest.end(), std::size_t{0});
        std::stable_sort(rest.begin(), rest.end(), [&](std::size_t x, std::size_t y) {
            return spec.values[x] > spec.values[y];
        });
        for (std::size_t idx : rest) {
            if (maxima.size() >= want) {
                break;
            }
            if (std::find(maxima.begin(), maxima.end(), idx) == maxima.end()) {
                maxima.push_back(idx);
            }
        }
    }
    maxima.resize(std::min(maxima.size(), want));
    for (std::size_t idx : maxima) {
        out.angles_deg.push_back(spec.angles_deg[idx / nr]);
        out.ranges.push_back(spec.ranges[idx % nr]);
    }
    return out;
}

Matching match_and_rmse(std::span<const double> estimates_deg,
                        std::span<const double> truth_deg) {
    if (estimates_deg.size() != truth_deg.size()) {
        throw InputError("match_and_rmse: " + std::to_string(estimates_deg.size()) +
                         " estimates for " + std::to_string(truth_deg.size()) + " sources");
    }
    Matching out;
    const std::size_t k = truth_deg.size();
    if (k == 0) {
        return out;
    }
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::abs(estimates_deg[j] - truth_deg[i]);
        }
    }
    out.assignment = solve_assignment(cost);
    double sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = std::abs(estimates_deg[out.assignment[i]] - truth_deg[i]);
        out.abs_errors_deg.push_back(e);
        out.max_error_deg = std::max(out.max_error_deg, e);
        sq += e * e;
    }
    out.rmse_deg = std::sqrt(sq / static_cast<double>(k));
    return out;
}

Matching match_and_rmse(const EstimateSet& estimates, const SourceScene& truth) {
    return match_and_rmse(estimates.angles_deg, truth.angles_deg());
}

}  // namespace sfas
