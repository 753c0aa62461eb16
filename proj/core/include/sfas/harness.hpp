#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sfas/config.hpp"
#include "sfas/estimators.hpp"
#include "sfas/synth.hpp"

namespace sfas {

struct ExperimentInfo {
    std::string name;
    /// Figure reproduced, e.g. "Fig. 4".
    std::string figure;
    std::string summary;
};

const std::vector<ExperimentInfo>& experiment_catalog();

/// Shipped defaults for a catalog entry; throws ConfigError for unknown names.
ExperimentConfig default_config(const std::string& experiment);

using Cell = std::variant<double, std::int64_t, std::string>;

/// One CSV worth of rows; the first table of a result is the main CSV.
class Table {
public:
    Table() = default;
    Table(std::string name, std::vector<std::string> columns);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    void add_row(std::vector<Cell> row);
    /// Numeric view of a column; throws InputError for unknown or string columns.
    std::vector<double> column(std::string_view name) const;
    std::vector<std::string> text_column(std::string_view name) const;

    void write_csv(std::ostream& out) const;

private:
    std::size_t index_of(std::string_view name) const;

    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

struct ExperimentResult {
    std::string experiment;
    ExperimentConfig config;
    std::vector<Table> tables;
    std::uint64_t config_hash = 0;
    double wall_seconds = 0.0;
    /// Free-form key/value lines for the sidecar metadata file.
    std::vector<std::pair<std::string, std::string>> notes;

    const Table& table(std::string_view name) const;
    const Table& main() const { return tables.front(); }
};

/// Validates, runs, and writes CSV plus a metadata sidecar into
/// config.out_dir when that is non-empty.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Files: <out>/<table>.csv for each table and <out>/<experiment>.meta.txt.
void write_result(const ExperimentResult& result, const std::string& out_dir);

/// Gnuplot scripts next to the CSVs previously written for an experiment.
std::vector<std::string> write_plot_scripts(const std::string& experiment,
                                            const std::string& out_dir);

/// Worker count: SFAS_THREADS if set, else hardware concurrency.
int default_thread_count();

/// Calls work(i) for i in [0, count) over a pool of threads; results come
/// back in index order so reductions never depend on scheduling.
template <typename T>
std::vector<T> parallel_trials(std::size_t count, int threads,
                               const std::function<T(std::size_t)>& work);

/// Seed of one Monte Carlo work unit.
std::uint64_t trial_seed(std::uint64_t base, std::string_view experiment, std::uint64_t sweep,
                         std::uint64_t trial);

struct SequentialOutcome {
    int k_stage1 = 0;
    EstimateSet estimates;
    /// M_e - K stage 1.
    int noise_dimension = 0;
    /// M_c - K stage 1.
    int compressed_noise_dimension = 0;
};

/// Stage 1 MDL on the compressed covariance, Stage 2 MUSIC on the extended
/// covariance with the stage-1 count.
SequentialOutcome sequential_pipeline(const SnapshotSet& compressed, const SnapshotSet& extended,
                                      const SteeringTable& extended_table);
SequentialOutcome sequential_pipeline(const SnapshotSet& compressed, const SnapshotSet& extended,
                                      const SearchGrid& grid, const SteeringModel& extended_steering);

void run_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& work);

template <typename T>
std::vector<T> parallel_trials(std::size_t count, int threads,
                               const std::function<T(std::size_t)>& work) {
    std::vector<T> out(count);
    run_parallel(count, threads, [&](std::size_t i) { out[i] = work(i); });
    return out;
}

}  // namespace sfas
