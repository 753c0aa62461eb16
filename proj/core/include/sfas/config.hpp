#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sfas/common.hpp"

namespace sfas {

/// Malformed config text, unknown key or unknown experiment name.
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

/// Flat experiment description. The primary array (m, p, alpha, d0) is the
/// compressed or single array; m_e and alpha_e describe the extended array of
/// dual-configuration experiments.
struct ExperimentConfig {
    std::string experiment;

    int m = 32;
    int p = 0;
    double alpha = 1.0;
    double d0_wavelengths = 0.5;
    int m_e = 32;
    double alpha_e = 1.0;

    /// |c_1|; 0 disables coupling.
    double c1 = 0.0;
    double coupling_phase = kTwoPi;
    /// Negative means "use p".
    int band_limit = -1;

    std::vector<double> snr_db{10.0};
    std::vector<int> snapshots{500};
    std::vector<int> k{2};
    std::vector<int> p_list;
    std::vector<double> spacing_list;
    std::vector<std::string> scenes{"far_field"};

    double angle_min = -60.0;
    double angle_max = 60.0;
    double range_min = 2.0;
    double range_max = 50.0;
    double grid_step = 0.05;
    double separation_deg = 4.5;
    double center_jitter_deg = 2.0;
    double failure_threshold_deg = 5.0;

    int trials = 200;
    std::uint64_t seed = 20240611;

    // Runtime knobs, not part of the file format.
    std::string out_dir;
    int threads = 0;
    bool plot = false;

    double spacing() const noexcept { return alpha * d0_wavelengths; }
    double spacing_e() const noexcept { return alpha_e * d0_wavelengths; }
    int effective_band_limit() const noexcept { return band_limit < 0 ? p : band_limit; }
};

/// Applies key = value lines; '#' starts a comment. Lists are comma
/// separated and each item may be a range "a:b" or "a:step:b" (inclusive).
void apply_config_text(ExperimentConfig& config, std::istream& in,
                       const std::string& source = "<config>");
void apply_config_file(ExperimentConfig& config, const std::string& path);

/// Resolved config in the same key = value format (round-trips through
/// apply_config_text).
std::string config_to_text(const ExperimentConfig& config);

/// Throws ConfigError for inconsistent values.
void validate_config(const ExperimentConfig& config);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace sfas
