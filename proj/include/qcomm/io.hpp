#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "qcomm/experiment.hpp"
#include "qcomm/problems.hpp"
#include "qcomm/qprotosim.hpp"
#include "qcomm/suites.hpp"

namespace qcomm {

using nlohmann::json;

inline constexpr const char *kVersion = "0.1.0";

// Instance files ------------------------------------------------------------

using AnyInstance = std::variant<SkInstance, PjInstance, DisjInstance>;

json to_json(const SkInstance &inst);
json to_json(const PjInstance &inst);
json to_json(const DisjInstance &inst);

/// Dispatches on "type". Throws std::invalid_argument with the offending
/// field on malformed input.
AnyInstance instance_from_json(const json &j);
SkInstance sk_from_json(const json &j);

/// DISJ instance plus {sk_value, disj_value, intersection_size, padded,
/// depth, consistent}.
json reduction_certificate(const SkInstance &sk, const DisjReduction &red);

// Schedules -----------------------------------------------------------------

json to_json(const QSchedule &s);
QSchedule schedule_from_json(const json &j);
json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const json &j);

// Reports -------------------------------------------------------------------

json to_json(const SuiteReport &r);
json to_json(const ExperimentReport &r);
json to_json(const ReductionDemoReport &r);
json to_json(const RandomAccessReport &r);
json to_json(const SafeStorageResult &r);
json to_json(const std::vector<PrefixAccount> &accounts);

/// 12 significant digits, '.' decimal separator.
std::string format_number(double v);
std::string experiment_csv_header();
std::string experiment_csv_row(const ExperimentReport &r);

/// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

}  // namespace qcomm
