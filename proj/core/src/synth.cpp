#include "sfas/synth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace sfas {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr char kMagic[8] = {'S', 'F', 'A', 'S', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
        throw InputError("read_snapshots: truncated stream");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

double SimulationParams::noise_power() const {
    return std::pow(10.0, -snr_db / 10.0);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t id : path) {
        h = splitmix64(h ^ splitmix64(id + 0x632be59bd9b4e019ULL));
    }
    return h;
}

CMatrix complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance) {
    CMatrix out(rows, cols);
    if (variance <= 0.0) {
        out.setZero();
        return out;
    }
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    Complex* data = out.data();
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        data[i] = Complex(re, im);
    }
    return out;
}

CMatrix generate_sources(const SourceScene& scene, const SimulationParams& params) {
    if (params.snapshots < 1) {
        throw InputError("generate_sources: snapshot count must be >= 1");
    }
    Rng rng(derive_seed(params.seed, Stream::sources));
    const auto k_count = static_cast<Eigen::Index>(scene.count());
    CMatrix s = complex_gaussian(rng, k_count, params.snapshots, 1.0);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        s.row(k) *= std::sqrt(scene.powers()[static_cast<std::size_t>(k)]);
    }
    return s;
}

SnapshotSet generate_snapshots(const Manifold& manifold, const CMatrix& sources,
                               const SimulationParams& params, Stream noise_stream) {
    if (sources.rows() != manifold.sources()) {
        throw InputError("generate_snapshots: source rows (" + std::to_string(sources.rows()) +
                         ") != manifold columns (" + std::to_string(manifold.sources()) + ")");
    }
    if (sources.cols() != params.snapshots) {
        throw InputError("generate_snapshots: source columns differ from snapshot count");
    }
    Rng rng(derive_seed(params.seed, noise_stream));
    SnapshotSet out;
    out.model = manifold.model;
    out.params = params;
    out.observations = complex_gaussian(rng, manifold.rows(), params.snapshots,
                                        params.noise_power());
    if (manifold.sources() > 0) {
        out.observations.noalias() += manifold.matrix * sources;
    }
    return out;
}

SnapshotSet stack_joint(const SnapshotSet& compressed, const SnapshotSet& extended) {
    if (compressed.snapshots() != extended.snapshots()) {
        throw InputError("stack_joint: snapshot counts differ (" +
                         std::to_string(compressed.snapshots()) + " vs " +
                         std::to_string(extended.snapshots()) + ")");
    }
    SnapshotSet out;
    out.model = ManifoldModel::joint;
    out.params = compressed.params;
    out.observations.resize(compressed.rows() + extended.rows(), compressed.snapshots());
    out.observations.topRows(compressed.rows()) = compressed.observations;
    out.observations.bottomRows(extended.rows()) = extended.observations;
    return out;
}

void write_snapshots(std::ostream& out, const SnapshotSet& set) {
    out.write(kMagic, sizeof(kMagic));
    put_le<std::uint32_t>(out, kFormatVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.model));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(set.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(set.snapshots()));
    put_le<std::uint64_t>(out, set.params.seed);
    put_le<double>(out, set.params.snr_db);
    for (Eigen::Index t = 0; t < set.snapshots(); ++t) {
        for (Eigen::Index m = 0; m < set.rows(); ++m) {
            put_le<double>(out, set.observations(m, t).real());
            put_le<double>(out, set.observations(m, t).imag());
        }
    }
    if (!out) {
        throw NumericalError("write_snapshots: stream write failed");
    }
}

SnapshotSet read_snapshots(std::istream& in) {
    char magic[sizeof(kMagic)];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw InputError("read_snapshots: bad magic");
    }
    const auto version = get_le<std::uint32_t>(in);
    if (version != kFormatVersion) {
        throw InputError("read_snapshots: unsupported version " + std::to_string(version));
    }
    const auto model = get_le<std::uint32_t>(in);
    if (model > static_cast<std::uint32_t>(ManifoldModel::joint)) {
        throw InputError("read_snapshots: unknown model tag");
    }
    const auto rows = get_le<std::uint64_t>(in);
    const auto cols = get_le<std::uint64_t>(in);
    SnapshotSet set;
    set.model = static_cast<ManifoldModel>(model);
    set.params.seed = get_le<std::uint64_t>(in);
    set.params.snr_db = get_le<double>(in);
    set.params.snapshots = static_cast<int>(cols);
    set.observations.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index t = 0; t < set.snapshots(); ++t) {
        for (Eigen::Index m = 0; m < set.rows(); ++m) {
            const double re = get_le<double>(in);
            const double im = get_le<double>(in);
            set.observations(m, t) = Complex(re, im);
        }
    }
    return set;
}

}  // namespace sfas
