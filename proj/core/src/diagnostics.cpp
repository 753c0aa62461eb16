#include "sfas/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace sfas {

EntropyDecomposition entropy_decomposition(std::span<const double> eigenvalues, int sources,
                                           double noise_power, NoiseFloor mode) {
    const auto m = static_cast<int>(eigenvalues.size());
    if (m < 1) {
        throw InputError("entropy_decomposition: empty eigenvalue list");
    }
    if (sources < 0 || sources > m) {
        throw InputError("entropy_decomposition: K=" + std::to_string(sources) +
                         " outside [0, " + std::to_string(m) + "]");
    }
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
        throw InputError("entropy_decomposition: noise power must be positive and finite");
    }
    const double top = std::max(std::abs(eigenvalues[0]), std::numeric_limits<double>::min());
    const double floor = std::numeric_limits<double>::epsilon() * top;

    EntropyDecomposition out;
    out.sources = sources;
    out.dimension = m;
    out.mode = mode;
    double trace = 0.0;
    for (double v : eigenvalues) {
        trace += v;
    }
    out.observation_variance = trace / m;

    for (int i = 0; i < sources; ++i) {
        const double lambda = std::max(eigenvalues[static_cast<std::size_t>(i)], floor);
        out.h_signal += std::log(lambda);
    }
    const int tail = m - sources;
    out.noise_floor = noise_power;
    if (mode == NoiseFloor::empirical && tail > 0) {
        double sum = 0.0;
        for (int i = sources; i < m; ++i) {
            sum += eigenvalues[static_cast<std::size_t>(i)];
        }
        out.noise_floor = std::max(sum / tail, floor);
    }
    out.h_noise = tail * std::log(out.noise_floor);
    out.nonnegative_noise_log = out.noise_floor >= 1.0;

    const double denom = std::abs(out.h_signal) + std::abs(out.h_noise);
    if (sources == 0) {
        out.rho_n = 1.0;
    } else if (tail == 0) {
        out.rho_n = 0.0;
    } else {
        out.rho_n = denom > 0.0 ? std::abs(out.h_noise) / denom
                                : static_cast<double>(tail) / m;
    }
    const double ref = m * std::log(noise_power);
    out.hbar_n = ref != 0.0 ? out.h_noise / ref : static_cast<double>(tail) / m;
    if (mode == NoiseFloor::theoretical) {
        out.hbar_n = static_cast<double>(tail) / m;
    }
    return out;
}

EntropyDecomposition entropy_decomposition(const CovarianceSpectrum& spectrum, int sources,
                                           double noise_power, NoiseFloor mode) {
    return entropy_decomposition(spectrum.values(), sources, noise_power, mode);
}

double mutual_information_bound(int effective_elements, double snr_linear) {
    if (effective_elements < 0) {
        throw InputError("mutual_information_bound: negative element count");
    }
    if (!(snr_linear >= 0.0)) {
        throw InputError("mutual_information_bound: SNR must be non-negative");
    }
    return effective_elements * std::log1p(snr_linear);
}

BoundsReport identifiability_bounds(int total_elements, int edge_removal) {
    if (total_elements < 1 || edge_removal < 0 || 2 * edge_removal >= total_elements) {
        throw InputError("identifiability_bounds: need M >= 1, p >= 0 and 2p < M (got M=" +
                         std::to_string(total_elements) + ", p=" + std::to_string(edge_removal) +
                         ")");
    }
    BoundsReport r;
    r.total_elements = total_elements;
    r.edge_removal = edge_removal;
    r.k_max_compressed = total_elements - 2 * edge_removal - 1;
    r.k_max_extended_ff = total_elements - 1;
    r.k_max_extended_mf = total_elements - 1;
    r.k_max_fundamental = r.k_max_extended_ff;
    r.k_seq = std::min(r.k_max_compressed, r.k_max_extended_mf);
    r.k_max_joint = 2 * total_elements - 2 * edge_removal - 1;
    r.capacity_gain = r.k_max_extended_ff > 0
                          ? static_cast<double>(r.k_max_joint) / r.k_max_extended_ff
                          : std::numeric_limits<double>::infinity();
    return r;
}

void write_bounds_text(std::ostream& out, const BoundsReport& r) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << "Identifiability bounds for M=" << r.total_elements << ", p=" << r.edge_removal
        << " (M_c=" << r.total_elements - 2 * r.edge_removal << ")\n";
    const auto row = [&](const char* label, int value) {
        out << "  " << std::left << std::setw(30) << label << std::right << std::setw(6) << value
            << '\n';
    };
    row("K_max fundamental (M_eff-1)", r.k_max_fundamental);
    row("K_max compressed (M-2p-1)", r.k_max_compressed);
    row("K_max extended far-field", r.k_max_extended_ff);
    row("K_max extended mixed-field", r.k_max_extended_mf);
    row("K_seq (sequential)", r.k_seq);
    row("K_max joint (2M-2p-1)", r.k_max_joint);
    out << "  " << std::left << std::setw(30) << "capacity gain (joint/ext)" << std::right
        << std::setw(6) << std::fixed << std::setprecision(4) << r.capacity_gain << '\n';
    out.flags(flags);
    out.precision(precision);
}

void write_bounds_csv(std::ostream& out, std::span<const BoundsReport> reports) {
    const auto precision = out.precision(17);
    out << "m,p,k_max_fundamental,k_max_compressed,k_max_extended_ff,k_max_extended_mf,"
           "k_seq,k_max_joint,capacity_gain\n";
    for (const BoundsReport& r : reports) {
        out << r.total_elements << ',' << r.edge_removal << ',' << r.k_max_fundamental << ','
            << r.k_max_compressed << ',' << r.k_max_extended_ff << ',' << r.k_max_extended_mf
            << ',' << r.k_seq << ',' << r.k_max_joint << ',' << r.capacity_gain << '\n';
    }
    out.precision(precision);
}

int measured_noise_dim(const CovarianceSpectrum& spectrum, const NoiseDimMode& mode) {
    const auto m = static_cast<int>(spectrum.dimension());
    int k = 0;
    if (const auto* truth = std::get_if<TrueK>(&mode)) {
        k = truth->value;
    } else {
        k = mdl_enumerate(spectrum.values(), std::get<MdlK>(mode).snapshots);
    }
    return std::max(0, m - k);
}

void write_entropy_csv(std::ostream& out, std::span<const EntropyDecomposition> curve) {
    const auto precision = out.precision(17);
    out << "K,rho_n,hbar_n,h_signal,h_noise\n";
    for (const EntropyDecomposition& e : curve) {
        out << e.sources << ',' << e.rho_n << ',' << e.hbar_n << ',' << e.h_signal << ','
            << e.h_noise << '\n';
    }
    out.precision(precision);
}

}  // namespace sfas
