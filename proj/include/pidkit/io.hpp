#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pidkit/prob.hpp"

namespace pidkit {

struct DistributionRecord {
  std::vector<std::string> outcomes;  // one label per variable
  std::string p;                      // decimal or fraction string
};

/// On-disk form of a joint distribution or channel. The first variable is
/// the target (or, for a channel, the input).
struct DistributionFile {
  std::string kind = "joint";  // "joint" or "channel"
  std::vector<std::pair<std::string, std::vector<std::string>>> variables;
  std::vector<DistributionRecord> pmf;
};

/// Parses the JSON document. Errors name the offending field.
DistributionFile parse_distribution(std::string_view json_text);
/// Stable, byte-deterministic JSON rendering.
std::string dump_distribution(const DistributionFile& file);

/// Exact conversion; rejects duplicate tuples and sums other than one
/// (the message states the exact deficit).
JointDistribution to_joint(const DistributionFile& file);
/// Positive-probability records only, probabilities as fraction strings.
DistributionFile from_joint(const JointDistribution& joint);

/// Channel files carry k(out | in) for variables [input, output]; every
/// input's column must sum to one exactly. Missing records are zero.
Channel to_channel(const DistributionFile& file);
DistributionFile from_channel(const Channel& channel);

struct LoadedJoint {
  JointDistribution joint;             // canonicalised
  std::vector<PrunedOutcome> pruned;   // outcomes removed by canonicalisation
};

LoadedJoint load_joint(const std::filesystem::path& path);
Channel load_channel(const std::filesystem::path& path);

}  // namespace pidkit
