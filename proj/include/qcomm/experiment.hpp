#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qcomm {

/// Protocol ids: "sk-det", "sk-wrong", "pj-det", "pj-nw".
const std::vector<std::string> &protocol_ids();

struct ExperimentConfig {
    std::string protocol;
    std::size_t n = 4;
    int k = 2;
    double eps = 0.2;  // pj-nw only
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    /// Enumerate every instance instead of sampling; `trials` is ignored.
    bool exhaustive = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::size_t runs = 0;
    std::size_t errors = 0;
    std::size_t aborts = 0;
    /// Errors among runs that did not abort.
    std::size_t errors_without_abort = 0;
    double error_rate = 0.0;
    double abort_rate = 0.0;
    double mean_bits = 0.0;
    std::size_t max_bits = 0;
    std::size_t min_bits = 0;
    /// Mean bits per round over all runs.
    std::vector<double> per_round_bits;
    /// Closed-form cost for deterministic protocols, the asymptotic budget
    /// expression for pj-nw.
    double budget_formula_bits = 0.0;
    /// max_bits / budget_formula_bits.
    double measured_constant = 0.0;
    /// pj-nw only: (n/k + k) log2 k, for k >= 2 log* n.
    double corollary_bits = 0.0;
    bool degenerate = false;
    std::vector<std::string> warnings;
};

/// Deterministic in the config; trial i uses instance seed
/// derive_seed(seed, 2i) and coin seed derive_seed(seed, 2i+1). Throws
/// std::invalid_argument for an unknown protocol or bad parameters.
ExperimentReport run_experiment(const ExperimentConfig &cfg);

/// Worker count: QCOMM_THREADS if set and positive, else the hardware count.
unsigned worker_threads();

// ---------------------------------------------------------------------------
// Classical one-round reduction

struct ReductionDemoConfig {
    std::size_t n = 4;        // coordinates of Bob's input
    int k = 2;                // level of the outer instance (recorded only)
    std::size_t ell1 = 1;     // first-message bits
    std::size_t alphabet = 2; // values per coordinate
    std::size_t channels = 50;
    std::uint64_t seed = 0;
};

struct ReductionDemoReport {
    ReductionDemoConfig config;
    /// Per channel: E_j sum_{m,a} |P(m, y_j = a) - P(m) / s|.
    std::vector<double> distances;
    double avg_stat_distance = 0.0;
    double max_stat_distance = 0.0;
    double bound = 0.0;  // (2 ell1 / n)^(1/2)
    double max_ratio = 0.0;
    bool holds = true;
};

/// Exact enumeration over all s^n inputs. Channels from Bob's input to
/// ell1-bit messages mix a random deterministic map with a random noisy
/// row. Throws std::invalid_argument when s^n 2^ell1 exceeds 2^22.
ReductionDemoReport classical_round_reduction_demo(const ReductionDemoConfig &cfg);

}  // namespace qcomm
