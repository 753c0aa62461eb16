#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sfas/common.hpp"

namespace sfas {

/// Geometry of one uniform linear configuration of a scalable array.
///
/// Element m (1-based) sits at (m-1) * alpha * d0 wavelengths. The central
/// subarray keeps M - 2p elements after removing p from each end.
class ArrayConfig {
public:
    ArrayConfig(int total_elements, double scaling_factor, double baseline_spacing = 0.5,
                int edge_removal = 0);

    /// Builds a configuration from a target spacing with d0 = 0.5.
    static ArrayConfig with_spacing(int total_elements, double spacing, int edge_removal = 0);

    int total_elements() const noexcept { return total_elements_; }
    double scaling_factor() const noexcept { return scaling_factor_; }
    double baseline_spacing() const noexcept { return baseline_spacing_; }
    int edge_removal() const noexcept { return edge_removal_; }

    double spacing() const noexcept { return scaling_factor_ * baseline_spacing_; }
    int effective_elements() const noexcept { return total_elements_ - 2 * edge_removal_; }

    /// Position of element m, 1-based.
    double position(int m) const noexcept { return (m - 1) * spacing(); }

    friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;

private:
    int total_elements_;
    double scaling_factor_;
    double baseline_spacing_;
    int edge_removal_;
};

std::vector<double> element_positions(const ArrayConfig& config);

/// D = (M - 1) * alpha * d0.
double aperture(const ArrayConfig& config);

/// The [0 | I | 0] map that keeps the central M - 2p entries of a length-M vector.
class SelectionMap {
public:
    SelectionMap(int source_size, int edge_removal);

    int source_size() const noexcept { return source_size_; }
    int output_size() const noexcept { return source_size_ - 2 * edge_removal_; }
    /// 0-based index of the first kept entry (equals p).
    int first_kept() const noexcept { return edge_removal_; }

    Eigen::MatrixXd matrix() const;

    template <class T>
    std::vector<T> apply(std::span<const T> values) const {
        if (static_cast<int>(values.size()) != source_size_) {
            throw InputError("SelectionMap::apply: length mismatch");
        }
        auto first = values.begin() + edge_removal_;
        return std::vector<T>(first, first + output_size());
    }

    /// Row selection of a matrix with source_size rows.
    CMatrix apply(const CMatrix& rows) const;

private:
    int source_size_;
    int edge_removal_;
};

SelectionMap selection_map(int total_elements, int edge_removal);

enum class FieldRegime { near, fresnel, far };

std::string_view to_string(FieldRegime regime) noexcept;

struct FieldClassification {
    FieldRegime regime;
    double rayleigh_distance;
    double fresnel_lower;
};

inline constexpr double kDefaultFresnelCoefficient = 0.62;

/// 2 D^2 / lambda.
double rayleigh_distance(const ArrayConfig& config);

/// Ranges equal to a threshold fall into the farther regime.
FieldClassification classify_field_regime(double range, const ArrayConfig& config,
                                          double fresnel_coefficient = kDefaultFresnelCoefficient);

struct GratingLobeReport {
    double spacing = 0.0;
    std::vector<double> angles_deg;
    /// (2 pi / lambda) d |sin theta| per grid angle, radians.
    std::vector<double> products;
    double grid_max = 0.0;
    /// Analytic value at endfire, 2 pi d / lambda.
    double endfire_product = 0.0;
    double threshold = kTwoPi;
    /// threshold / endfire_product.
    double margin_ratio = 0.0;
    bool grating_free = false;
};

GratingLobeReport grating_lobe_margin(double spacing, std::span<const double> theta_grid_deg);
GratingLobeReport grating_lobe_margin(const ArrayConfig& config,
                                      std::span<const double> theta_grid_deg);

}  // namespace sfas
