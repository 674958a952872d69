#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pidkit/prob.hpp"

namespace pidkit {

using ReportJson = nlohmann::ordered_json;

struct DecomposeOptions {
  double tol = 1e-7;
  std::size_t max_iter = 100'000;
  std::optional<std::size_t> q_cardinality;
  std::size_t vertex_cap = 0;  // 0 picks the library default
  std::string vertex_cap_source = "default";
  /// Measure groups to compute; empty selects every group except gh.
  std::vector<std::string> measures;
  std::uint64_t seed = 0;
};

/// Groups accepted by DecomposeOptions::measures.
const std::vector<std::string>& measure_groups();

struct MeasureError {
  std::string kind;  // input, resource, non_convergence, internal
  std::string message;
  ReportJson detail = ReportJson::object();
};

struct MeasureEntry {
  std::string name;
  std::optional<double> value_bits;
  ReportJson certificate = ReportJson::object();
  std::vector<std::string> caveats;
  std::optional<MeasureError> error;
};

struct DecompositionReport {
  std::string input_digest;
  std::vector<std::string> variables;
  std::vector<PrunedOutcome> pruned;
  ReportJson config = ReportJson::object();
  std::vector<MeasureEntry> measures;  // sorted by name

  /// 0 when every measure succeeded, else the largest error code
  /// (1 input, 2 resource, 3 non-convergence).
  int exit_code() const;
};

/// FNV-1a 64 of the canonical JSON rendering of the joint.
std::string distribution_digest(const JointDistribution& joint);

/// Runs the selected measures on a canonical joint. Failures of a single
/// measure are recorded in its entry; bad options throw InputError.
DecompositionReport decompose(const JointDistribution& joint, const std::vector<PrunedOutcome>& pruned,
                              const DecomposeOptions& options);

ReportJson report_to_json(const DecompositionReport& report);
DecompositionReport report_from_json(const ReportJson& json);

/// Two-space indented JSON with a trailing newline.
std::string dump_report(const DecompositionReport& report);
DecompositionReport parse_report(std::string_view text);

/// Aligned plain-text table.
std::string format_report_table(const DecompositionReport& report);

/// Channel as {input, output, input_labels, output_labels, matrix}; the
/// matrix is output-major with exact fraction strings.
ReportJson channel_to_json(const Channel& channel);

}  // namespace pidkit
