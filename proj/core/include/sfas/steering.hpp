#pragma once

#include <span>
#include <vector>

#include "sfas/common.hpp"
#include "sfas/geometry.hpp"
#include "sfas/manifold.hpp"

namespace sfas {

/// Angle-to-steering-vector map used by the estimators and the CRB.
///
/// A model is a vertical stack of one or more blocks. Each block is a
/// far-field (optionally coupled and selected) or exact-geometry response of
/// one array configuration. Joint J-MUSIC steering is the stack of the
/// compressed and extended blocks; a model may also be empty (zero rows).
class SteeringModel {
public:
    SteeringModel() = default;

    static SteeringModel far_field(const ArrayConfig& config);
    /// F C a_FF(theta): matches the observation model of compressed_manifold.
    static SteeringModel coupled_selected(const ArrayConfig& config, const CouplingModel& coupling);
    /// Exact-geometry response at a fixed range.
    static SteeringModel exact_geometry(const ArrayConfig& config, double range,
                                        PhaseConvention convention = PhaseConvention::verbatim);
    static SteeringModel stacked(const SteeringModel& upper, const SteeringModel& lower);

    Eigen::Index dimension() const noexcept { return dimension_; }
    bool empty() const noexcept { return dimension_ == 0; }
    ManifoldModel model() const noexcept;

    CVector steering(double theta_deg) const;
    /// d a / d theta with theta in radians. Analytic except for
    /// exact-geometry blocks, which use a central difference of 1e-4 deg.
    CVector derivative(double theta_deg) const;

    /// Columns are steering vectors for each angle.
    CMatrix matrix(std::span<const double> angles_deg) const;
    CMatrix derivative_matrix(std::span<const double> angles_deg) const;

    /// Conjugates every block (global convention flip).
    SteeringModel conjugated() const;

private:
    enum class Kind { far_field, exact_geometry };

    struct Block {
        Kind kind;
        ArrayConfig config;
        /// Kept rows of the coupling matrix; empty for uncoupled blocks.
        CMatrix mixing;
        double range = 0.0;
        PhaseConvention convention = PhaseConvention::verbatim;
        bool conjugate = false;

        Eigen::Index rows() const;
        CVector response(double theta_deg) const;
        CVector derivative(double theta_deg) const;
    };

    std::vector<Block> blocks_;
    Eigen::Index dimension_ = 0;
};

}  // namespace sfas
