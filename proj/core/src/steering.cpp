#include "sfas/steering.hpp"

#include <cmath>

namespace sfas {

namespace {
constexpr double kDerivativeStepDeg = 1e-4;
}

Eigen::Index SteeringModel::Block::rows() const {
    return mixing.size() > 0 ? mixing.rows() : config.total_elements();
}

CVector SteeringModel::Block::response(double theta_deg) const {
    CVector a = kind == Kind::far_field ? ff_steering_vector(config, theta_deg)
                                        : esg_steering_vector(config, theta_deg, range, convention);
    if (mixing.size() > 0) {
        a = mixing * a;
    }
    return conjugate ? CVector(a.conjugate()) : a;
}

CVector SteeringModel::Block::derivative(double theta_deg) const {
    if (kind == Kind::exact_geometry) {
        const CVector hi = response(theta_deg + kDerivativeStepDeg);
        const CVector lo = response(theta_deg - kDerivativeStepDeg);
        return (hi - lo) / (2.0 * deg_to_rad(kDerivativeStepDeg));
    }
    const double theta = deg_to_rad(theta_deg);
    const double rate = kTwoPi * config.spacing() * std::cos(theta);
    CVector a = ff_steering_vector(config, theta_deg);
    for (Eigen::Index m = 0; m < a.size(); ++m) {
        a(m) *= Complex(0.0, rate * static_cast<double>(m));
    }
    if (mixing.size() > 0) {
        a = mixing * a;
    }
    return conjugate ? CVector(a.conjugate()) : a;
}

SteeringModel SteeringModel::far_field(const ArrayConfig& config) {
    SteeringModel out;
    out.blocks_.push_back(Block{Kind::far_field, config, CMatrix(), 0.0,
                                PhaseConvention::verbatim, false});
    out.dimension_ = config.total_elements();
    return out;
}

SteeringModel SteeringModel::coupled_selected(const ArrayConfig& config,
                                              const CouplingModel& coupling) {
    const int m = config.total_elements();
    const int p = config.edge_removal();
    const CMatrix c = coupling_matrix(coupling, m, config.spacing());
    SteeringModel out;
    out.blocks_.push_back(Block{Kind::far_field, config, c.middleRows(p, m - 2 * p), 0.0,
                                PhaseConvention::verbatim, false});
    out.dimension_ = m - 2 * p;
    return out;
}

SteeringModel SteeringModel::exact_geometry(const ArrayConfig& config, double range,
                                            PhaseConvention convention) {
    if (!(range > 0.0)) {
        throw InputError("SteeringModel::exact_geometry: range must be positive");
    }
    SteeringModel out;
    out.blocks_.push_back(Block{Kind::exact_geometry, config, CMatrix(), range, convention, false});
    out.dimension_ = config.total_elements();
    return out;
}

SteeringModel SteeringModel::stacked(const SteeringModel& upper, const SteeringModel& lower) {
    SteeringModel out = upper;
    out.blocks_.insert(out.blocks_.end(), lower.blocks_.begin(), lower.blocks_.end());
    out.dimension_ = upper.dimension_ + lower.dimension_;
    return out;
}

ManifoldModel SteeringModel::model() const noexcept {
    if (blocks_.size() > 1) {
        return ManifoldModel::joint;
    }
    if (blocks_.empty()) {
        return ManifoldModel::far_field;
    }
    const Block& b = blocks_.front();
    if (b.kind == Kind::exact_geometry) {
        return ManifoldModel::exact_geometry;
    }
    return b.mixing.size() > 0 ? ManifoldModel::coupled_selected : ManifoldModel::far_field;
}

CVector SteeringModel::steering(double theta_deg) const {
    CVector out(dimension_);
    Eigen::Index row = 0;
    for (const Block& b : blocks_) {
        const Eigen::Index n = b.rows();
        out.segment(row, n) = b.response(theta_deg);
        row += n;
    }
    return out;
}

CVector SteeringModel::derivative(double theta_deg) const {
    CVector out(dimension_);
    Eigen::Index row = 0;
    for (const Block& b : blocks_) {
        const Eigen::Index n = b.rows();
        out.segment(row, n) = b.derivative(theta_deg);
        row += n;
    }
    return out;
}

CMatrix SteeringModel::matrix(std::span<const double> angles_deg) const {
    CMatrix out(dimension_, static_cast<Eigen::Index>(angles_deg.size()));
    for (std::size_t k = 0; k < angles_deg.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = steering(angles_deg[k]);
    }
    return out;
}

CMatrix SteeringModel::derivative_matrix(std::span<const double> angles_deg) const {
    CMatrix out(dimension_, static_cast<Eigen::Index>(angles_deg.size()));
    for (std::size_t k = 0; k < angles_deg.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = derivative(angles_deg[k]);
    }
    return out;
}

SteeringModel SteeringModel::conjugated() const {
    SteeringModel out = *this;
    for (Block& b : out.blocks_) {
        b.conjugate = !b.conjugate;
    }
    return out;
}

}  // namespace sfas
