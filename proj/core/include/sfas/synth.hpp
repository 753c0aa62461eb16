#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <random>

#include "sfas/common.hpp"
#include "sfas/manifold.hpp"

namespace sfas {

/// Snapshot count, SNR and seed for one realization.
///
/// SNR is per element and per source relative to unit-magnitude far-field
/// entries: sigma_n^2 = 10^(-snr_db / 10) for unit source power. An SNR of
/// +infinity gives noiseless observations.
struct SimulationParams {
    int snapshots = 1;
    double snr_db = 0.0;
    std::uint64_t seed = 0;

    double noise_power() const;
};

struct SnapshotSet {
    CMatrix observations;
    ManifoldModel model = ManifoldModel::far_field;
    SimulationParams params;

    Eigen::Index rows() const noexcept { return observations.rows(); }
    Eigen::Index snapshots() const noexcept { return observations.cols(); }
};

/// Random stream identifiers for hierarchical seed splitting.
enum class Stream : std::uint64_t {
    sources = 1,
    compressed_noise = 2,
    extended_noise = 3,
    scene = 4,
};

/// Mixes a base seed with a path of identifiers (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream) {
    return derive_seed(base, {static_cast<std::uint64_t>(stream)});
}

using Rng = std::mt19937_64;

/// rows x cols of i.i.d. CN(0, variance).
CMatrix complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance);

/// K x N uncorrelated circular Gaussian waveforms; row k has power P_k.
/// Seeded from derive_seed(params.seed, Stream::sources).
CMatrix generate_sources(const SourceScene& scene, const SimulationParams& params);

/// Y = A S + n with n ~ CN(0, sigma_n^2 I), noise seeded from
/// derive_seed(params.seed, noise_stream).
SnapshotSet generate_snapshots(const Manifold& manifold, const CMatrix& sources,
                               const SimulationParams& params,
                               Stream noise_stream = Stream::extended_noise);

/// Column-wise vertical concatenation of two snapshot sets observing the
/// same source realization.
SnapshotSet stack_joint(const SnapshotSet& compressed, const SnapshotSet& extended);

/// Little-endian binary dump: "SFASSNAP" magic, u32 version, u32 model tag,
/// u64 rows, u64 snapshots, u64 seed, f64 snr_db, then interleaved re/im
/// doubles, one snapshot (column) after another.
void write_snapshots(std::ostream& out, const SnapshotSet& set);
SnapshotSet read_snapshots(std::istream& in);

}  // namespace sfas
