#include "pidkit/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pidkit/errors.hpp"

namespace pidkit {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw InputError(field + ": " + what);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string probability_text(const Json& value, const std::string& field) {
  if (value.is_string()) return value.get<std::string>();
  // Bare JSON numbers are accepted but only integers are exact; decimals
  // should be quoted to avoid binary rounding.
  if (value.is_number_integer()) return value.dump();
  if (value.is_number_float()) field_error(field, "decimal probabilities must be quoted strings");
  field_error(field, "expected a probability string");
}

/// Index of the pmf entry for a tuple of labels.
std::size_t tuple_index(const std::vector<Alphabet>& vars, const std::vector<std::string>& outcomes,
                        const std::string& field) {
  if (outcomes.size() != vars.size()) {
    field_error(field, "expected " + std::to_string(vars.size()) + " outcomes, got " +
                           std::to_string(outcomes.size()));
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    try {
      flat = flat * vars[k].size() + vars[k].index_of(outcomes[k]);
    } catch (const InputError& e) {
      field_error(field, e.what());
    }
  }
  return flat;
}

std::vector<Alphabet> alphabets(const DistributionFile& file) {
  if (file.variables.empty()) throw InputError("variables: at least one variable is required");
  std::vector<Alphabet> vars;
  for (const auto& [name, labels] : file.variables) {
    try {
      vars.emplace_back(name, labels);
    } catch (const InputError& e) {
      field_error("variables." + name, e.what());
    }
  }
  return vars;
}

/// Dense exact table from records; rejects duplicates and bad numbers.
RationalVector dense_table(const DistributionFile& file, const std::vector<Alphabet>& vars) {
  std::size_t total = 1;
  for (const auto& v : vars) total *= v.size();
  RationalVector table(total, Rational(0));
  std::vector<bool> seen(total, false);
  for (std::size_t r = 0; r < file.pmf.size(); ++r) {
    const std::string field = "pmf[" + std::to_string(r) + "]";
    const std::size_t flat = tuple_index(vars, file.pmf[r].outcomes, field + ".outcomes");
    if (seen[flat]) field_error(field, "duplicate outcome tuple");
    seen[flat] = true;
    try {
      table[flat] = parse_rational(file.pmf[r].p);
    } catch (const InputError& e) {
      field_error(field + ".p", e.what());
    }
    if (sgn(table[flat]) < 0) field_error(field + ".p", "negative probability");
  }
  return table;
}

}  // namespace

DistributionFile parse_distribution(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("top level: expected a JSON object");
  DistributionFile file;
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) field_error("kind", "expected a string");
    file.kind = doc["kind"].get<std::string>();
    if (file.kind != "joint" && file.kind != "channel") {
      field_error("kind", "expected \"joint\" or \"channel\"");
    }
  }
  if (!doc.contains("variables") || !doc["variables"].is_object()) {
    field_error("variables", "expected an object mapping names to outcome lists");
  }
  for (const auto& [name, labels] : doc["variables"].items()) {
    if (!labels.is_array()) field_error("variables." + name, "expected a list of outcome labels");
    std::vector<std::string> out;
    for (const auto& l : labels) {
      if (l.is_string()) {
        out.push_back(l.get<std::string>());
      } else if (l.is_number_integer()) {
        out.push_back(l.dump());
      } else {
        field_error("variables." + name, "outcome labels must be strings or integers");
      }
    }
    file.variables.emplace_back(name, std::move(out));
  }
  if (!doc.contains("pmf") || !doc["pmf"].is_array()) field_error("pmf", "expected a list of records");
  std::size_t r = 0;
  for (const auto& rec : doc["pmf"]) {
    const std::string field = "pmf[" + std::to_string(r++) + "]";
    if (!rec.is_object() || !rec.contains("outcomes") || !rec.contains("p")) {
      field_error(field, "expected {\"outcomes\": [...], \"p\": \"...\"}");
    }
    if (!rec["outcomes"].is_array()) field_error(field + ".outcomes", "expected a list");
    DistributionRecord out;
    for (const auto& l : rec["outcomes"]) {
      if (l.is_string()) {
        out.outcomes.push_back(l.get<std::string>());
      } else if (l.is_number_integer()) {
        out.outcomes.push_back(l.dump());
      } else {
        field_error(field + ".outcomes", "outcome labels must be strings or integers");
      }
    }
    out.p = probability_text(rec["p"], field + ".p");
    file.pmf.push_back(std::move(out));
  }
  return file;
}

std::string dump_distribution(const DistributionFile& file) {
  Json doc;
  doc["kind"] = file.kind;
  Json vars = Json::object();
  for (const auto& [name, labels] : file.variables) vars[name] = labels;
  doc["variables"] = std::move(vars);
  Json pmf = Json::array();
  for (const auto& rec : file.pmf) {
    Json r;
    r["outcomes"] = rec.outcomes;
    r["p"] = rec.p;
    pmf.push_back(std::move(r));
  }
  doc["pmf"] = std::move(pmf);
  return doc.dump(2) + "\n";
}

JointDistribution to_joint(const DistributionFile& file) {
  if (file.kind != "joint") throw InputError("kind: expected a joint distribution file");
  auto vars = alphabets(file);
  RationalVector table = dense_table(file, vars);
  Rational total = 0;
  for (const auto& p : table) total += p;
  if (total != 1) {
    throw InputError("pmf: probabilities sum to " + to_string(total) + ", deficit " +
                     to_string(Rational(1 - total)));
  }
  return JointDistribution(std::move(vars), std::move(table));
}

DistributionFile from_joint(const JointDistribution& joint) {
  DistributionFile file;
  for (const auto& v : joint.variables()) file.variables.emplace_back(v.name(), v.labels());
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto& p = joint.pmf()[flat];
    if (sgn(p) == 0) continue;
    DistributionRecord rec;
    const auto o = joint.outcome(flat);
    for (std::size_t k = 0; k < o.size(); ++k) rec.outcomes.push_back(joint.variable(k).label(o[k]));
    rec.p = to_string(p);
    file.pmf.push_back(std::move(rec));
  }
  return file;
}

Channel to_channel(const DistributionFile& file) {
  if (file.kind != "channel") throw InputError("kind: expected a channel file");
  auto vars = alphabets(file);
  if (vars.size() != 2) throw InputError("variables: a channel file has exactly two variables");
  RationalVector table = dense_table(file, vars);  // indexed [in][out]
  const std::size_t nin = vars[0].size(), nout = vars[1].size();
  RationalVector matrix(nin * nout);
  for (std::size_t in = 0; in < nin; ++in) {
    Rational column = 0;
    for (std::size_t out = 0; out < nout; ++out) {
      matrix[out * nin + in] = table[in * nout + out];
      column += table[in * nout + out];
    }
    if (column != 1) {
      throw InputError("pmf: column for input '" + vars[0].label(in) + "' sums to " +
                       to_string(column) + ", deficit " + to_string(Rational(1 - column)));
    }
  }
  return Channel(std::move(vars[0]), std::move(vars[1]), std::move(matrix));
}

DistributionFile from_channel(const Channel& channel) {
  DistributionFile file;
  file.kind = "channel";
  file.variables.emplace_back(channel.input().name(), channel.input().labels());
  file.variables.emplace_back(channel.output().name(), channel.output().labels());
  for (std::size_t in = 0; in < channel.num_inputs(); ++in) {
    for (std::size_t out = 0; out < channel.num_outputs(); ++out) {
      const auto& p = channel(out, in);
      if (sgn(p) == 0) continue;
      file.pmf.push_back({{channel.input().label(in), channel.output().label(out)}, to_string(p)});
    }
  }
  return file;
}

LoadedJoint load_joint(const std::filesystem::path& path) {
  auto canon = canonicalize(to_joint(parse_distribution(read_file(path))));
  return {std::move(canon.joint), std::move(canon.pruned)};
}

Channel load_channel(const std::filesystem::path& path) {
  return to_channel(parse_distribution(read_file(path)));
}

}  // namespace pidkit
