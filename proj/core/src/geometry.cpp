#include "sfas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sfas {

ArrayConfig::ArrayConfig(int total_elements, double scaling_factor, double baseline_spacing,
                         int edge_removal)
    : total_elements_(total_elements),
      scaling_factor_(scaling_factor),
      baseline_spacing_(baseline_spacing),
      edge_removal_(edge_removal) {
    if (total_elements < 1) {
        throw InputError("ArrayConfig: total_elements must be positive");
    }
    if (!(scaling_factor > 0.0) || !std::isfinite(scaling_factor)) {
        throw InputError("ArrayConfig: scaling_factor must be > 0");
    }
    if (!(baseline_spacing > 0.0) || !std::isfinite(baseline_spacing)) {
        throw InputError("ArrayConfig: baseline_spacing must be > 0");
    }
    if (edge_removal < 0 || 2 * edge_removal >= total_elements) {
        throw InputError("ArrayConfig: edge removal p must satisfy 0 <= 2p < M (M=" +
                         std::to_string(total_elements) + ", p=" + std::to_string(edge_removal) +
                         ")");
    }
}

ArrayConfig ArrayConfig::with_spacing(int total_elements, double spacing, int edge_removal) {
    return ArrayConfig(total_elements, spacing / 0.5, 0.5, edge_removal);
}

std::vector<double> element_positions(const ArrayConfig& config) {
    std::vector<double> positions(static_cast<std::size_t>(config.total_elements()));
    for (int m = 1; m <= config.total_elements(); ++m) {
        positions[static_cast<std::size_t>(m - 1)] = config.position(m);
    }
    return positions;
}

double aperture(const ArrayConfig& config) {
    return (config.total_elements() - 1) * config.spacing();
}

SelectionMap::SelectionMap(int source_size, int edge_removal)
    : source_size_(source_size), edge_removal_(edge_removal) {
    if (source_size < 1 || edge_removal < 0) {
        throw InputError("SelectionMap: invalid sizes");
    }
    if (2 * edge_removal >= source_size) {
        throw InputError("SelectionMap: 2p >= M leaves no elements (M=" +
                         std::to_string(source_size) + ", p=" + std::to_string(edge_removal) + ")");
    }
}

Eigen::MatrixXd SelectionMap::matrix() const {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(output_size(), source_size_);
    for (int i = 0; i < output_size(); ++i) {
        f(i, i + edge_removal_) = 1.0;
    }
    return f;
}

CMatrix SelectionMap::apply(const CMatrix& rows) const {
    if (rows.rows() != source_size_) {
        throw InputError("SelectionMap::apply: row count mismatch");
    }
    return rows.middleRows(edge_removal_, output_size());
}

SelectionMap selection_map(int total_elements, int edge_removal) {
    return SelectionMap(total_elements, edge_removal);
}

std::string_view to_string(FieldRegime regime) noexcept {
    switch (regime) {
        case FieldRegime::near: return "near";
        case FieldRegime::fresnel: return "fresnel";
        case FieldRegime::far: return "far";
    }
    return "unknown";
}

double rayleigh_distance(const ArrayConfig& config) {
    const double d = aperture(config);
    return 2.0 * d * d;
}

FieldClassification classify_field_regime(double range, const ArrayConfig& config,
                                          double fresnel_coefficient) {
    if (!(range > 0.0)) {
        throw InputError("classify_field_regime: range must be positive");
    }
    const double d = aperture(config);
    FieldClassification out{FieldRegime::far, rayleigh_distance(config),
                            fresnel_coefficient * std::sqrt(d * d * d)};
    if (range >= out.rayleigh_distance) {
        out.regime = FieldRegime::far;
    } else if (range >= out.fresnel_lower) {
        out.regime = FieldRegime::fresnel;
    } else {
        out.regime = FieldRegime::near;
    }
    return out;
}

GratingLobeReport grating_lobe_margin(double spacing, std::span<const double> theta_grid_deg) {
    if (!(spacing > 0.0)) {
        throw InputError("grating_lobe_margin: spacing must be positive");
    }
    GratingLobeReport report;
    report.spacing = spacing;
    report.angles_deg.assign(theta_grid_deg.begin(), theta_grid_deg.end());
    report.products.reserve(theta_grid_deg.size());
    for (double theta : theta_grid_deg) {
        const double product = kTwoPi * spacing * std::abs(std::sin(deg_to_rad(theta)));
        report.products.push_back(product);
        report.grid_max = std::max(report.grid_max, product);
    }
    // |sin| attains 1 at +-90 deg, so the verdict does not depend on the grid.
    report.endfire_product = kTwoPi * spacing;
    report.margin_ratio = report.threshold / report.endfire_product;
    report.grating_free = report.endfire_product < report.threshold;
    return report;
}

GratingLobeReport grating_lobe_margin(const ArrayConfig& config,
                                      std::span<const double> theta_grid_deg) {
    return grating_lobe_margin(config.spacing(), theta_grid_deg);
}

}  // namespace sfas
