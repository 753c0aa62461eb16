#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

/// Shared numeric types and error categories.
///
/// All lengths in the library are expressed in wavelengths (the carrier
/// wavelength is normalized to 1), and all angles crossing a public API are
/// in degrees unless the name says otherwise.
namespace sfas {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// A caller supplied an argument outside the operation's domain.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested source count leaves no noise subspace (K >= M_eff).
class CapacityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sfas
