#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sfas/common.hpp"
#include "sfas/geometry.hpp"

namespace sfas {

/// K narrowband sources: the ground truth of an experiment.
///
/// Angles are in degrees inside (-90, 90). An empty range list means the
/// sources are far-field. Powers default to 1.
class SourceScene {
public:
    SourceScene() = default;

    static SourceScene far_field(std::vector<double> angles_deg, std::vector<double> powers = {});
    static SourceScene mixed_field(std::vector<double> angles_deg, std::vector<double> ranges,
                                   std::vector<double> powers = {});

    std::size_t count() const noexcept { return angles_deg_.size(); }
    bool empty() const noexcept { return angles_deg_.empty(); }
    bool has_ranges() const noexcept { return !ranges_.empty(); }

    const std::vector<double>& angles_deg() const noexcept { return angles_deg_; }
    const std::vector<double>& ranges() const noexcept { return ranges_; }
    const std::vector<double>& powers() const noexcept { return powers_; }

private:
    SourceScene(std::vector<double> angles, std::vector<double> ranges, std::vector<double> powers);

    std::vector<double> angles_deg_;
    std::vector<double> ranges_;
    std::vector<double> powers_;
};

/// Sign convention for exact-geometry phases.
///
/// `verbatim` uses exp(+j k (r_m - r)). Its far-field limit is the complex
/// conjugate of the Vandermonde model; `far_field_matched` conjugates it so the
/// two models agree as r grows.
enum class PhaseConvention { verbatim, far_field_matched };

/// Banded Toeplitz mutual-coupling profile c_l = c0 exp(-beta l d) exp(j phase_slope l d).
struct CouplingModel {
    Complex self_coupling{1.0, 0.0};
    double decay_rate = 0.0;
    /// Radians per unit (l * d / lambda). 2 pi models propagation delay.
    double phase_slope = kTwoPi;
    /// Taps with lag above this are zero. 0 means no inter-element coupling.
    int band_limit = 0;

    static CouplingModel none() { return CouplingModel{}; }

    /// Solves beta so that |c_1| = adjacent_magnitude at the given spacing.
    static CouplingModel from_adjacent_magnitude(double adjacent_magnitude, double spacing,
                                                 int band_limit, double phase_slope = kTwoPi);

    Complex tap(int lag, double spacing) const;
};

/// M x M symmetric Toeplitz coupling matrix, C(i, j) = c_|i-j|.
/// Logs a warning when the matrix is numerically singular.
CMatrix coupling_matrix(const CouplingModel& model, int total_elements, double spacing);

/// 2-norm condition number (largest over smallest singular value).
double condition_number(const CMatrix& matrix);

enum class ManifoldModel { far_field, exact_geometry, coupled_selected, joint };

std::string_view to_string(ManifoldModel model) noexcept;

struct Manifold {
    CMatrix matrix;
    ManifoldModel model = ManifoldModel::far_field;
    std::vector<ArrayConfig> configs;

    Eigen::Index rows() const noexcept { return matrix.rows(); }
    Eigen::Index sources() const noexcept { return matrix.cols(); }
};

/// r_{m,k} = sqrt(r^2 + p_m^2 - 2 r p_m sin(theta)); m is 1-based.
double exact_distance(const ArrayConfig& config, int m, double theta_deg, double range);

/// Entry m = exp(j 2 pi (m-1) d sin(theta)); length M, not normalized.
CVector ff_steering_vector(const ArrayConfig& config, double theta_deg);

/// Entry m = (1/sqrt(M)) (r / r_m) exp(j 2 pi (r_m - r)) for the verbatim convention.
CVector esg_steering_vector(const ArrayConfig& config, double theta_deg, double range,
                            PhaseConvention convention = PhaseConvention::verbatim);

Manifold ff_manifold(const SourceScene& scene, const ArrayConfig& config);
Manifold esg_manifold(const SourceScene& scene, const ArrayConfig& config,
                      PhaseConvention convention = PhaseConvention::verbatim);

/// Selection after coupling after far-field steering: (M-2p) x K. Ranges are ignored.
Manifold compressed_manifold(const SourceScene& scene, const ArrayConfig& config,
                             const CouplingModel& coupling);

/// Vertical stack [A_c; A_e].
Manifold joint_manifold(const Manifold& compressed, const Manifold& extended);

/// Row-major dump, each cell written as "re,im".
void write_manifold_csv(std::ostream& out, const Manifold& manifold);

}  // namespace sfas
