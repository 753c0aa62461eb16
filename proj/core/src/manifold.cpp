#include "sfas/manifold.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <ostream>
#include <string>

namespace sfas {

namespace {

void validate_angles(const std::vector<double>& angles) {
    for (double a : angles) {
        if (!std::isfinite(a) || !(a > -90.0 && a < 90.0)) {
            throw InputError("SourceScene: angle " + std::to_string(a) +
                             " deg outside (-90, 90)");
        }
    }
}

// Excess path r_m - r in a form that stays accurate when r >> p_m.
double path_excess(double position, double theta_rad, double range, double distance) {
    return (position * position - 2.0 * range * position * std::sin(theta_rad)) /
           (distance + range);
}

}  // namespace

SourceScene::SourceScene(std::vector<double> angles, std::vector<double> ranges,
                         std::vector<double> powers)
    : angles_deg_(std::move(angles)), ranges_(std::move(ranges)), powers_(std::move(powers)) {
    validate_angles(angles_deg_);
    if (powers_.empty()) {
        powers_.assign(angles_deg_.size(), 1.0);
    }
    if (powers_.size() != angles_deg_.size()) {
        throw InputError("SourceScene: power count does not match source count");
    }
    for (double p : powers_) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw InputError("SourceScene: source powers must be positive");
        }
    }
    if (!ranges_.empty()) {
        if (ranges_.size() != angles_deg_.size()) {
            throw InputError("SourceScene: range count does not match source count");
        }
        for (double r : ranges_) {
            if (!(r > 0.0) || !std::isfinite(r)) {
                throw InputError("SourceScene: ranges must be positive");
            }
        }
    }
}

SourceScene SourceScene::far_field(std::vector<double> angles_deg, std::vector<double> powers) {
    return SourceScene(std::move(angles_deg), {}, std::move(powers));
}

SourceScene SourceScene::mixed_field(std::vector<double> angles_deg, std::vector<double> ranges,
                                     std::vector<double> powers) {
    if (ranges.size() != angles_deg.size()) {
        throw InputError("SourceScene: range count does not match source count");
    }
    return SourceScene(std::move(angles_deg), std::move(ranges), std::move(powers));
}

CouplingModel CouplingModel::from_adjacent_magnitude(double adjacent_magnitude, double spacing,
                                                     int band_limit, double phase_slope) {
    if (!(adjacent_magnitude > 0.0 && adjacent_magnitude < 1.0)) {
        throw InputError("CouplingModel: |c_1| must lie in (0, 1)");
    }
    if (!(spacing > 0.0)) {
        throw InputError("CouplingModel: spacing must be positive");
    }
    if (band_limit < 0) {
        throw InputError("CouplingModel: band limit must be non-negative");
    }
    CouplingModel model;
    model.decay_rate = -std::log(adjacent_magnitude) / spacing;
    model.phase_slope = phase_slope;
    model.band_limit = band_limit;
    return model;
}

Complex CouplingModel::tap(int lag, double spacing) const {
    lag = std::abs(lag);
    if (lag > band_limit) {
        return {0.0, 0.0};
    }
    const double x = lag * spacing;
    return self_coupling * std::exp(-decay_rate * x) * std::polar(1.0, phase_slope * x);
}

CMatrix coupling_matrix(const CouplingModel& model, int total_elements, double spacing) {
    if (total_elements < 1) {
        throw InputError("coupling_matrix: element count must be positive");
    }
    if (model.band_limit < 0) {
        throw InputError("coupling_matrix: band limit must be non-negative");
    }
    CMatrix c = CMatrix::Zero(total_elements, total_elements);
    for (int i = 0; i < total_elements; ++i) {
        for (int j = 0; j < total_elements; ++j) {
            c(i, j) = model.tap(i - j, spacing);
        }
    }
    if (model.band_limit > 0) {
        const double cond = condition_number(c);
        if (!std::isfinite(cond) || cond > 1e12) {
            std::clog << "sfas: warning: coupling matrix is numerically singular (cond=" << cond
                      << ")\n";
        }
    }
    return c;
}

double condition_number(const CMatrix& matrix) {
    Eigen::JacobiSVD<CMatrix> svd(matrix);
    const auto& s = svd.singularValues();
    if (s.size() == 0) {
        return 1.0;
    }
    const double smallest = s(s.size() - 1);
    return smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
}

std::string_view to_string(ManifoldModel model) noexcept {
    switch (model) {
        case ManifoldModel::far_field: return "far_field";
        case ManifoldModel::exact_geometry: return "exact_geometry";
        case ManifoldModel::coupled_selected: return "coupled_selected";
        case ManifoldModel::joint: return "joint";
    }
    return "unknown";
}

double exact_distance(const ArrayConfig& config, int m, double theta_deg, double range) {
    if (!(range > 0.0)) {
        throw InputError("exact_distance: range must be positive");
    }
    if (m < 1 || m > config.total_elements()) {
        throw InputError("exact_distance: element index out of range");
    }
    const double p = config.position(m);
    const double disc = range * range + p * p - 2.0 * range * p * std::sin(deg_to_rad(theta_deg));
    if (!(disc > 0.0)) {
        throw InputError("exact_distance: source coincides with element " + std::to_string(m));
    }
    return std::sqrt(disc);
}

CVector ff_steering_vector(const ArrayConfig& config, double theta_deg) {
    const int m_count = config.total_elements();
    const double phase_step = kTwoPi * config.spacing() * std::sin(deg_to_rad(theta_deg));
    CVector a(m_count);
    for (int m = 0; m < m_count; ++m) {
        a(m) = std::polar(1.0, m * phase_step);
    }
    return a;
}

CVector esg_steering_vector(const ArrayConfig& config, double theta_deg, double range,
                            PhaseConvention convention) {
    const int m_count = config.total_elements();
    const double theta = deg_to_rad(theta_deg);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m_count));
    const double sign = convention == PhaseConvention::verbatim ? 1.0 : -1.0;
    CVector a(m_count);
    for (int m = 1; m <= m_count; ++m) {
        const double dist = exact_distance(config, m, theta_deg, range);
        const double excess = path_excess(config.position(m), theta, range, dist);
        a(m - 1) = std::polar(scale * range / dist, sign * kTwoPi * excess);
    }
    return a;
}

Manifold ff_manifold(const SourceScene& scene, const ArrayConfig& config) {
    Manifold out;
    out.model = ManifoldModel::far_field;
    out.configs = {config};
    out.matrix.resize(config.total_elements(), static_cast<Eigen::Index>(scene.count()));
    for (std::size_t k = 0; k < scene.count(); ++k) {
        out.matrix.col(static_cast<Eigen::Index>(k)) =
            ff_steering_vector(config, scene.angles_deg()[k]);
    }
    return out;
}

Manifold esg_manifold(const SourceScene& scene, const ArrayConfig& config,
                      PhaseConvention convention) {
    if (!scene.has_ranges() && !scene.empty()) {
        throw InputError("esg_manifold: scene has no ranges");
    }
    Manifold out;
    out.model = ManifoldModel::exact_geometry;
    out.configs = {config};
    out.matrix.resize(config.total_elements(), static_cast<Eigen::Index>(scene.count()));
    for (std::size_t k = 0; k < scene.count(); ++k) {
        out.matrix.col(static_cast<Eigen::Index>(k)) =
            esg_steering_vector(config, scene.angles_deg()[k], scene.ranges()[k], convention);
    }
    return out;
}

Manifold compressed_manifold(const SourceScene& scene, const ArrayConfig& config,
                             const CouplingModel& coupling) {
    const int m = config.total_elements();
    const int p = config.edge_removal();
    const CMatrix c = coupling_matrix(coupling, m, config.spacing());
    const Manifold ff = ff_manifold(scene, config);
    Manifold out;
    out.model = ManifoldModel::coupled_selected;
    out.configs = {config};
    // Only the kept rows of C contribute after selection.
    out.matrix = c.middleRows(p, m - 2 * p) * ff.matrix;
    return out;
}

Manifold joint_manifold(const Manifold& compressed, const Manifold& extended) {
    if (compressed.sources() == 0 || extended.sources() == 0) {
        throw InputError("joint_manifold: empty scene");
    }
    if (compressed.sources() != extended.sources()) {
        throw InputError("joint_manifold: column counts differ (" +
                         std::to_string(compressed.sources()) + " vs " +
                         std::to_string(extended.sources()) + ")");
    }
    Manifold out;
    out.model = ManifoldModel::joint;
    out.configs = compressed.configs;
    out.configs.insert(out.configs.end(), extended.configs.begin(), extended.configs.end());
    out.matrix.resize(compressed.rows() + extended.rows(), compressed.sources());
    out.matrix.topRows(compressed.rows()) = compressed.matrix;
    out.matrix.bottomRows(extended.rows()) = extended.matrix;
    return out;
}

void write_manifold_csv(std::ostream& out, const Manifold& manifold) {
    const auto precision = out.precision(17);
    for (Eigen::Index i = 0; i < manifold.rows(); ++i) {
        for (Eigen::Index k = 0; k < manifold.sources(); ++k) {
            if (k > 0) {
                out << ',';
            }
            out << manifold.matrix(i, k).real() << ',' << manifold.matrix(i, k).imag();
        }
        out << '\n';
    }
    out.precision(precision);
}

}  // namespace sfas
