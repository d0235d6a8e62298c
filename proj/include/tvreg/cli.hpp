#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tvreg/experiment.hpp"
#include "tvreg/pipeline.hpp"
#include "tvreg/time_series.hpp"

namespace tvreg::cli {

/// Settings of every subcommand, read from a JSON file (schema in
/// docs/config.md). Simulation fields may list several values; replicate
/// runs the product in model x sigma x T order.
struct RunConfig {
    std::vector<std::string> models{"a"};
    std::vector<double> sigmas{0.5};
    std::vector<std::size_t> lengths{200};
    std::uint64_t seed = 1;
    std::size_t replications = 1;
    std::size_t burn_in = 200;

    PipelineOptions pipeline;
    /// Size of the default lambda/gamma ladder when no explicit grid is given.
    std::optional<std::size_t> grid_count;

    /// Evaluation grid of the fit report; empty means the default grid.
    std::vector<double> u_grid;
    std::vector<double> x_grid;

    Routes routes;
    std::string dataset;
    std::filesystem::path out_dir = "out";
    std::size_t threads = 1;
};

/// Throws InvalidConfig on unknown keys, wrong types or out-of-range values.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Pipeline options for a series of length T (fills the tuning ladder).
PipelineOptions pipeline_options(const RunConfig& config, std::size_t T);

/// Dataset CSV with header `t,x,y`, t = 1..T. Throws DataError / IoError.
TimeSeries read_dataset(std::istream& in);
TimeSeries read_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const TimeSeries& data);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Writes one dataset per (model, sigma, T, replication) plus manifest.txt.
void cmd_simulate(const RunConfig& config, std::ostream& log);

/// Full procedure on `config.dataset`; writes report.json, phi_path.csv and
/// surface_grid.csv to out_dir.
void cmd_fit(const RunConfig& config, std::ostream& log);

/// Monte Carlo study; writes records.csv and table{1,2,3}.{md,csv}. Throws
/// NumericalFailure when more than 5% of the replications of any cell fail.
void cmd_replicate(const RunConfig& config, std::ostream& log);

/// Leave-one-out scores of the h* and h_e candidates for `config.dataset`.
void cmd_bandwidth(const RunConfig& config, std::ostream& log);

/// Kernel moments as JSON.
void cmd_moments(std::ostream& out);

/// Too many replications of a cell failed.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// 0 success, 1 invalid config, 2 data error, 3 numerical failure.
int exit_code(const std::exception& e) noexcept;

}  // namespace tvreg::cli
