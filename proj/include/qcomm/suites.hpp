#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcomm/quantum.hpp"

namespace qcomm {

/// Aggregate of one checked property over a suite's trials. slack >= -tolerance
/// means the property held; equalities report slack = -|difference|.
struct PropertyStats {
    std::string inequality;
    std::size_t trials = 0;
    std::size_t violations = 0;
    double tolerance = 0.0;
    double min_slack = 0.0;
    double max_violation = 0.0;  // max(0, -slack) over trials
    std::uint64_t worst_case_seed = 0;
    /// Inputs of the first violating trial, empty if none.
    std::vector<Matrix> failing_inputs;
};

struct SuiteReport {
    std::string suite;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<PropertyStats> results;
    /// Logged quantities that are not asserted (ratios, limits, trends).
    std::map<std::string, double> observations;
    bool passed() const;
    const PropertyStats &stats(const std::string &name) const;
};

/// Suite ids accepted by run_suite, plus "all".
const std::vector<std::string> &suite_ids();
std::size_t default_trials(const std::string &suite);

/// Trial i draws from Rng(derive_seed(seed, i)). Throws
/// std::invalid_argument for an unknown suite id.
SuiteReport run_suite(const std::string &suite, std::size_t trials, std::uint64_t seed);

/// Random pair used by the two-state suites: dims 2..8, ranks 1..dim.
std::pair<DensityMatrix, DensityMatrix> random_state_pair(Rng &rng, std::size_t min_dim = 2,
                                                          std::size_t max_dim = 8);

}  // namespace qcomm
