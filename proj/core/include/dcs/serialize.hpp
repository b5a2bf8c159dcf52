#pragma once

#include "dcs/metrics.hpp"
#include "dcs/netsim.hpp"
#include "dcs/schedule.hpp"
#include "dcs/solver.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace dcs {

using json = nlohmann::json;

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);
/// {"rows", "cols", "data"} with data in row-major order.
json matrix_to_json(const Matrix& A);
Matrix matrix_from_json(const json& j);
json stacked_to_json(const Stacked& x);
Stacked stacked_from_json(const json& j);

json schedule_to_json(const OuterSchedule& s);
OuterSchedule outer_from_json(const json& j);
json inner_to_json(const InnerSchedule& s);
InnerSchedule inner_from_json(const json& j);

json report_to_json(const ValidationReport& r);
json ledger_to_json(const RoundLedger& l);
json bounds_to_json(const BoundPair& b);

json set_to_json(const ConstraintSet& s);
ConstraintSet set_from_json(const json& j);

/// Per-agent LAD data, sets and constants. Only LAD objectives serialize.
json problem_to_json(const Problem& p);
Problem problem_from_json(const json& j);

/// "%.17g".
std::string format_double(double v);

inline constexpr const char* kTraceHeader = "# dcs-trace v1";

/// Versioned CSV: k, F_ergodic, feas_residual_ergodic, comm_rounds, cumulative_evals.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

json read_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);

}  // namespace dcs
