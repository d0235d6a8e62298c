#pragma once

#include <cstddef>

#include "tvreg/metrics.hpp"
#include "tvreg/pipeline.hpp"
#include "tvreg/simulate.hpp"

namespace tvreg {

/// Estimation routes run per replication.
struct Routes {
    /// Unpenalized tvAR with the model's true order, plus the oracle.
    bool known = true;
    /// ULASSO selection over options.max_order lags.
    bool selection = true;
};

/// Simulates replication `index` and runs the requested routes on it.
/// `options.known_order` is ignored here. Failures are captured in the
/// record, never thrown.
ReplicationRecord run_replication(const SimulationConfig& config, std::size_t index,
                                  const PipelineOptions& options, Routes routes = {});

/// Runs all replications on `threads` workers (0 = hardware concurrency).
/// Every number in the result is independent of the worker count.
ExperimentReport run_experiment(const SimulationConfig& config, const PipelineOptions& options,
                                std::size_t threads = 1, Routes routes = {});

}  // namespace tvreg
