#pragma once

#include <span>
#include <vector>

#include "sfas/common.hpp"
#include "sfas/manifold.hpp"
#include "sfas/steering.hpp"
#include "sfas/subspace.hpp"
#include "sfas/synth.hpp"

namespace sfas {

/// Inclusive angle grid start, start + step, ..., stop (degrees).
/// The default grid is the open interval (-90, 90) at 0.05 deg.
struct SearchGrid {
    double start = -89.95;
    double stop = 89.95;
    double step = 0.05;

    std::vector<double> points() const;
    std::size_t size() const;
};

/// Inclusive range grid in wavelengths; 0.1 wavelength step by default.
struct RangeGrid {
    double start = 2.0;
    double stop = 50.0;
    double step = 0.1;

    std::vector<double> points() const;
};

struct Spectrum {
    std::vector<double> angles_deg;
    std::vector<double> values;
};

/// values is row-major: index = angle_index * ranges.size() + range_index.
struct Spectrum2D {
    std::vector<double> angles_deg;
    std::vector<double> ranges;
    std::vector<double> values;

    double at(std::size_t angle_index, std::size_t range_index) const {
        return values[angle_index * ranges.size() + range_index];
    }
};

struct PeakSet {
    std::vector<std::size_t> indices;
    /// Fewer than K strict local maxima existed; the rest was padded.
    bool degenerate = false;
};

struct EstimateSet {
    std::vector<double> angles_deg;
    /// Empty unless the estimator searched range.
    std::vector<double> ranges;
    bool degenerate = false;

    std::size_t count() const noexcept { return angles_deg.size(); }
};

/// Steering vectors for every grid angle, precomputed for repeated searches.
class SteeringTable {
public:
    SteeringTable(const SteeringModel& model, const SearchGrid& grid);

    const std::vector<double>& angles_deg() const noexcept { return angles_; }
    /// dimension x grid size; column g is a(theta_g).
    const CMatrix& matrix() const noexcept { return table_; }
    const RVector& squared_norms() const noexcept { return norms_; }
    Eigen::Index dimension() const noexcept { return table_.rows(); }

private:
    std::vector<double> angles_;
    CMatrix table_;
    RVector norms_;
};

/// Pseudospectrum denominators are floored at this fraction of ||a||^2.
inline constexpr double kSpectrumFloor = 1e-12;

/// P(theta) = ||a||^2 / (a^H U_n U_n^H a). Throws CapacityError for an empty basis.
Spectrum music_spectrum(const CMatrix& noise_basis, const SearchGrid& grid,
                        const SteeringModel& steering);
Spectrum music_spectrum(const CMatrix& noise_basis, const SteeringTable& table);

/// Same pseudospectrum, evaluated through whichever of U_s and U_n is
/// narrower (U_n U_n^H = I - U_s U_s^H).
Spectrum music_spectrum(const SubspaceSplit& split, const SteeringTable& table);

/// Strict local maxima ranked by value; a plateau counts once at its
/// leftmost index. Pads with the largest remaining samples when short.
PeakSet find_peaks(std::span<const double> values, int count);

/// MUSIC on one snapshot set with a known source count.
EstimateSet music(const SnapshotSet& observations, int sources, const SteeringTable& table);

/// Joint MUSIC over stacked compressed and extended snapshots. The steering
/// models must mirror the observation models (a_c includes coupling and
/// selection). An extended set with zero rows reduces to compressed MUSIC.
EstimateSet jmusic(const SnapshotSet& compressed, const SnapshotSet& extended, int sources,
                   const SearchGrid& grid, const SteeringModel& compressed_steering,
                   const SteeringModel& extended_steering);
/// Variant for repeated runs; table must be built from the stacked steering model.
EstimateSet jmusic(const SnapshotSet& compressed, const SnapshotSet& extended, int sources,
                   const SteeringTable& joint_table);

Spectrum2D mixed_field_spectrum(const CMatrix& noise_basis, const SearchGrid& angles,
                                const RangeGrid& ranges, const ArrayConfig& config,
                                PhaseConvention convention = PhaseConvention::verbatim);

/// 2-D local maxima over (theta, r); grid edges are eligible.
EstimateSet mixed_field_music(const CMatrix& noise_basis, const SearchGrid& angles,
                              const RangeGrid& ranges, const ArrayConfig& config, int sources,
                              PhaseConvention convention = PhaseConvention::verbatim);

struct Matching {
    /// assignment[k] is the estimate index paired with true source k.
    std::vector<std::size_t> assignment;
    std::vector<double> abs_errors_deg;
    double rmse_deg = 0.0;
    double max_error_deg = 0.0;
};

/// Minimum-cost bijection on |delta theta| followed by RMSE over pairs.
Matching match_and_rmse(const EstimateSet& estimates, const SourceScene& truth);
Matching match_and_rmse(std::span<const double> estimates_deg, std::span<const double> truth_deg);

/// Hungarian assignment on a square cost matrix; result[row] = column.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

/// Per-source standard-deviation bound (degrees) from the stochastic CRB
/// (sigma^2 / 2N) {Re[(D^H P_perp D) .* (R_s A^H R^-1 A R_s)^T]}^-1.
std::vector<double> crb_doa(const SourceScene& scene, const SteeringModel& steering,
                            double noise_power, int snapshots);

}  // namespace sfas
