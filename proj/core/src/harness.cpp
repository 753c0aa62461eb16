#include "sfas/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "experiments.hpp"

namespace sfas {

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isnan(*d)) {
            return "nan";
        }
        if (std::isinf(*d)) {
            return *d > 0 ? "inf" : "-inf";
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", *d);
        return buf;
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(cell);
}

}  // namespace

Table::Table(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw InputError("Table " + name_ + ": row has " + std::to_string(row.size()) +
                         " cells for " + std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
}

std::size_t Table::index_of(std::string_view name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) {
        throw InputError("Table " + name_ + ": no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> Table::column(std::string_view name) const {
    const std::size_t idx = index_of(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        const Cell& c = row[idx];
        if (const auto* d = std::get_if<double>(&c)) {
            out.push_back(*d);
        } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
            out.push_back(static_cast<double>(*i));
        } else {
            throw InputError("Table " + name_ + ": column '" + std::string(name) + "' is text");
        }
    }
    return out;
}

std::vector<std::string> Table::text_column(std::string_view name) const {
    const std::size_t idx = index_of(name);
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        out.push_back(format_cell(row[idx]));
    }
    return out;
}

void Table::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << (i ? "," : "") << columns_[i];
    }
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_cell(row[i]);
        }
        out << '\n';
    }
}

const Table& ExperimentResult::table(std::string_view name) const {
    for (const Table& t : tables) {
        if (t.name() == name) {
            return t;
        }
    }
    throw InputError("experiment " + experiment + " has no table '" + std::string(name) + "'");
}

const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> catalog = [] {
        std::vector<ExperimentInfo> out;
        for (const auto& e : detail::experiment_entries()) {
            out.push_back(e.info);
        }
        return out;
    }();
    return catalog;
}

ExperimentConfig default_config(const std::string& experiment) {
    const detail::ExperimentEntry& entry = detail::find_entry(experiment);
    ExperimentConfig config;
    config.experiment = experiment;
    entry.defaults(config);
    return config;
}

int default_thread_count() {
    if (const char* env = std::getenv("SFAS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 4096) {
            return static_cast<int>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& work) {
    if (threads <= 0) {
        threads = default_thread_count();
    }
    const auto workers = static_cast<std::size_t>(
        std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            work(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto loop = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(loop);
    }
    loop();
    for (std::thread& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::uint64_t trial_seed(std::uint64_t base, std::string_view experiment, std::uint64_t sweep,
                         std::uint64_t trial) {
    return derive_seed(base, {fnv1a(experiment), sweep, trial});
}

SequentialOutcome sequential_pipeline(const SnapshotSet& compressed, const SnapshotSet& extended,
                                      const SteeringTable& extended_table) {
    const CovarianceSpectrum rc = eigendecompose(sample_covariance(compressed));
    SequentialOutcome out;
    out.k_stage1 = mdl_enumerate(rc.values(), static_cast<int>(compressed.snapshots()));
    const auto m_e = static_cast<int>(extended.rows());
    const auto m_c = static_cast<int>(compressed.rows());
    // Stage 2 cannot search for more peaks than the extended noise subspace allows.
    const int k = std::min(out.k_stage1, m_e - 1);
    out.noise_dimension = std::max(0, m_e - k);
    out.compressed_noise_dimension = std::max(0, m_c - out.k_stage1);
    if (k > 0) {
        out.estimates = music(extended, k, extended_table);
    }
    return out;
}

SequentialOutcome sequential_pipeline(const SnapshotSet& compressed, const SnapshotSet& extended,
                                      const SearchGrid& grid,
                                      const SteeringModel& extended_steering) {
    return sequential_pipeline(compressed, extended, SteeringTable(extended_steering, grid));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const detail::ExperimentEntry& entry = detail::find_entry(config.experiment);
    validate_config(config);
    ExperimentResult result;
    result.experiment = config.experiment;
    result.config = config;
    result.config_hash = fnv1a(config.experiment + "\n" + config_to_text(config));
    const auto start = std::chrono::steady_clock::now();
    entry.run(config, result);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!config.out_dir.empty()) {
        write_result(result, config.out_dir);
        if (config.plot) {
            write_plot_scripts(config.experiment, config.out_dir);
        }
    }
    return result;
}

void write_result(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw InputError("cannot create output directory '" + out_dir + "': " + ec.message());
    }
    const auto open = [&](const std::string& file) {
        const std::string path = (fs::path(out_dir) / file).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw InputError("cannot write '" + path + "'");
        }
        return out;
    };
    for (const Table& t : result.tables) {
        std::ofstream out = open(t.name() + ".csv");
        t.write_csv(out);
        if (!out) {
            throw InputError("write failed for table " + t.name());
        }
    }
    std::ofstream meta = open(result.experiment + ".meta.txt");
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(result.config_hash));
    meta << "experiment = " << result.experiment << '\n'
         << "config_hash = " << hash << '\n'
         << "wall_seconds = " << result.wall_seconds << '\n'
         << "threads = "
         << (result.config.threads > 0 ? result.config.threads : default_thread_count()) << '\n';
    for (const auto& [key, value] : result.notes) {
        meta << key << " = " << value << '\n';
    }
    meta << "# resolved config\n" << config_to_text(result.config);
}

std::vector<std::string> write_plot_scripts(const std::string& experiment,
                                            const std::string& out_dir) {
    namespace fs = std::filesystem;
    const detail::ExperimentEntry& entry = detail::find_entry(experiment);
    std::vector<std::string> written;
    for (const detail::PlotSpec& spec : entry.plots) {
        const fs::path csv = fs::path(out_dir) / (spec.table + ".csv");
        if (!fs::exists(csv)) {
            throw InputError("no CSV for plot: '" + csv.string() + "' (run the experiment first)");
        }
        const fs::path script = fs::path(out_dir) / (spec.table + ".gp");
        std::ofstream out(script);
        if (!out) {
            throw InputError("cannot write '" + script.string() + "'");
        }
        out << "# gnuplot " << script.filename().string() << "\n"
            << "set datafile separator ','\n"
            << "set term pngcairo size 900,600\n"
            << "set output '" << spec.table << ".png'\n"
            << "set key autotitle columnhead\n"
            << "set grid\n"
            << "set xlabel '" << spec.x << "'\n"
            << "set ylabel '" << spec.ylabel << "'\n"
            << "plot ";
        for (std::size_t i = 0; i < spec.ys.size(); ++i) {
            out << (i ? ", \\\n     " : "") << "'" << csv.filename().string() << "' using '"
                << spec.x << "':'" << spec.ys[i] << "' with linespoints title '" << spec.ys[i]
                << "'";
        }
        out << '\n';
        written.push_back(script.string());
    }
    return written;
}

}  // namespace sfas
