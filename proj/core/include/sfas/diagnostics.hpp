#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sfas/common.hpp"
#include "sfas/subspace.hpp"

namespace sfas {

/// Where the noise-floor estimate in H_noise comes from.
enum class NoiseFloor {
    /// The true sigma_n^2.
    theoretical,
    /// Mean of the smallest M_eff - K eigenvalues (true sigma_n^2 at K = M_eff).
    empirical,
};

/// Eigenvalue-log entropy split of one covariance spectrum, in nats.
///
/// hbar_n always divides by M_eff ln(reference sigma_n^2), so in theoretical
/// mode it is exactly (M_eff - K) / M_eff.
struct EntropyDecomposition {
    int sources = 0;
    int dimension = 0;
    NoiseFloor mode = NoiseFloor::theoretical;
    double noise_floor = 0.0;
    double h_signal = 0.0;
    double h_noise = 0.0;
    double rho_n = 0.0;
    double hbar_n = 0.0;
    double observation_variance = 0.0;
    /// The noise floor is >= 1 (SNR <= 0 dB), so ln sigma_n^2 >= 0 and the
    /// |H| ratio is outside the regime where it has a clear reading.
    bool nonnegative_noise_log = false;

    int noise_dimension() const noexcept { return dimension - sources; }
};

/// eigenvalues sorted descending; 0 <= K <= M_eff.
EntropyDecomposition entropy_decomposition(std::span<const double> eigenvalues, int sources,
                                           double noise_power,
                                           NoiseFloor mode = NoiseFloor::theoretical);
EntropyDecomposition entropy_decomposition(const CovarianceSpectrum& spectrum, int sources,
                                           double noise_power,
                                           NoiseFloor mode = NoiseFloor::theoretical);

/// M_eff ln(1 + SNR), nats per snapshot.
double mutual_information_bound(int effective_elements, double snr_linear);

struct BoundsReport {
    int total_elements = 0;
    int edge_removal = 0;
    int k_max_fundamental = 0;
    int k_max_compressed = 0;
    int k_max_extended_ff = 0;
    int k_max_extended_mf = 0;
    int k_seq = 0;
    int k_max_joint = 0;
    double capacity_gain = 0.0;
};

BoundsReport identifiability_bounds(int total_elements, int edge_removal);

void write_bounds_text(std::ostream& out, const BoundsReport& report);
void write_bounds_csv(std::ostream& out, std::span<const BoundsReport> reports);

struct TrueK {
    int value = 0;
};
struct MdlK {
    int snapshots = 0;
};
using NoiseDimMode = std::variant<TrueK, MdlK>;

/// M_eff - K, with K from the truth or from MDL; clamped at 0.
int measured_noise_dim(const CovarianceSpectrum& spectrum, const NoiseDimMode& mode);

/// Header plus one row per decomposition: K,rho_n,hbar_n,h_signal,h_noise.
void write_entropy_csv(std::ostream& out, std::span<const EntropyDecomposition> curve);

}  // namespace sfas
