#include "pidkit/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "pidkit/errors.hpp"
#include "pidkit/geometry.hpp"
#include "pidkit/info.hpp"
#include "pidkit/io.hpp"
#include "pidkit/redundancy.hpp"
#include "pidkit/union_info.hpp"

namespace pidkit {
namespace {

constexpr const char* kTool = "pidkit";
constexpr const char* kVersion = "0.1.0";

MeasureError classify(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const InputError& e) {
    return {"input", e.what(), ReportJson::object()};
  } catch (const ResourceError& e) {
    ReportJson detail = ReportJson::object();
    detail["cap"] = e.cap();
    if (e.best_so_far()) detail["best_so_far"] = *e.best_so_far();
    return {"resource", e.what(), std::move(detail)};
  } catch (const NonConvergenceError& e) {
    ReportJson detail = ReportJson::object();
    detail["best_value"] = e.best_value();
    detail["gap"] = e.gap();
    return {"non_convergence", e.what(), std::move(detail)};
  } catch (const std::exception& e) {
    return {"internal", e.what(), ReportJson::object()};
  }
}

int error_code(const std::string& kind) {
  if (kind == "input") return 1;
  if (kind == "resource") return 2;
  if (kind == "non_convergence") return 3;
  return 4;
}

/// Computes a shared result once; later users see the same value or error.
template <class T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> compute) : compute_(std::move(compute)) {}

  const T* get() {
    if (!done_) {
      done_ = true;
      try {
        value_ = compute_();
      } catch (...) {
        error_ = classify(std::current_exception());
      }
    }
    return value_ ? &*value_ : nullptr;
  }
  const std::optional<MeasureError>& error() const { return error_; }

 private:
  std::function<T()> compute_;
  bool done_ = false;
  std::optional<T> value_;
  std::optional<MeasureError> error_;
};

MeasureEntry failed(std::string name, const MeasureError& error, const std::string& dependency) {
  MeasureEntry e;
  e.name = std::move(name);
  e.error = error;
  if (!dependency.empty()) e.error->message = dependency + ": " + e.error->message;
  return e;
}

ReportJson coupling_to_json(const JointDistribution& coupling) {
  ReportJson records = ReportJson::array();
  for (const auto& r : from_joint(coupling).pmf) records.push_back({{"outcomes", r.outcomes}, {"p", r.p}});
  return records;
}

std::string source_name(const JointDistribution& joint, std::size_t i) {
  return joint.source(i).name();
}

std::vector<std::string> selected_groups(const DecomposeOptions& options) {
  if (options.measures.empty()) {
    std::vector<std::string> all = measure_groups();
    all.erase(std::remove(all.begin(), all.end(), "gh"), all.end());
    return all;
  }
  std::vector<std::string> out;
  for (const auto& m : options.measures) {
    if (m == "all") return measure_groups();
    if (std::find(measure_groups().begin(), measure_groups().end(), m) == measure_groups().end()) {
      throw InputError("unknown measure '" + m + "'");
    }
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

std::string format_number(double v, int precision) {
  char buf[64];
  if (std::abs(v) < 0.5 * std::pow(10.0, -precision)) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string format_gap(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& measure_groups() {
  static const std::vector<std::string> groups{"redundancy", "union", "synergy", "unique", "excluded",
                                               "gk",         "wedge", "gh",      "broja"};
  return groups;
}

int DecompositionReport::exit_code() const {
  int code = 0;
  for (const auto& m : measures) {
    if (m.error) code = std::max(code, error_code(m.error->kind));
  }
  return code;
}

std::string distribution_digest(const JointDistribution& joint) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump_distribution(from_joint(joint))) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

ReportJson channel_to_json(const Channel& channel) {
  ReportJson matrix = ReportJson::array();
  for (std::size_t o = 0; o < channel.num_outputs(); ++o) {
    ReportJson row = ReportJson::array();
    for (std::size_t i = 0; i < channel.num_inputs(); ++i) row.push_back(to_string(channel(o, i)));
    matrix.push_back(std::move(row));
  }
  return {{"input", channel.input().name()},
          {"output", channel.output().name()},
          {"input_labels", channel.input().labels()},
          {"output_labels", channel.output().labels()},
          {"matrix", std::move(matrix)}};
}

DecompositionReport decompose(const JointDistribution& joint, const std::vector<PrunedOutcome>& pruned,
                              const DecomposeOptions& options) {
  if (!(options.tol > 0) || !std::isfinite(options.tol)) throw InputError("--tol must be a positive number");
  if (options.max_iter == 0) throw InputError("--max-iter must be positive");
  if (options.q_cardinality && *options.q_cardinality == 0) throw InputError("--q-card must be positive");
  const auto groups = selected_groups(options);
  const auto wants = [&](const char* g) { return std::find(groups.begin(), groups.end(), g) != groups.end(); };
  const std::size_t n = joint.num_sources();

  RedundancyOptions red_opts;
  red_opts.q_cardinality = options.q_cardinality;
  if (options.vertex_cap > 0) red_opts.vertex_cap = options.vertex_cap;
  const UnionOptions union_opts{options.tol, options.max_iter};

  DecompositionReport report;
  report.input_digest = distribution_digest(joint);
  for (const auto& v : joint.variables()) report.variables.push_back(v.name());
  report.pruned = pruned;
  auto& config = report.config;
  config["tol"] = options.tol;
  config["max_iter"] = options.max_iter;
  if (options.q_cardinality) {
    config["q_cardinality"] = *options.q_cardinality;
  } else {
    config["q_cardinality"] = "auto";
  }
  config["q_cardinality_bound"] = redundancy_cardinality_bound(joint);
  config["vertex_cap"] = red_opts.vertex_cap;
  config["vertex_cap_source"] = options.vertex_cap_source;
  config["measures"] = groups;
  config["seed"] = options.seed;
  config["gh_cardinality_heuristic"] = false;

  Lazy<RedundancyResult> red([&] { return redundancy_star(joint, red_opts); });
  Lazy<UnionResult> uni([&] { return union_star(joint, union_opts); });
  std::vector<double> source_mi(n);
  for (std::size_t i = 0; i < n; ++i) source_mi[i] = source_information(joint, i);
  const double total = total_information(joint);
  auto& out = report.measures;

  if (wants("redundancy")) {
    if (const auto* r = red.get()) {
      MeasureEntry e{"redundancy", r->value, ReportJson::object(), r->caveats, std::nullopt};
      e.certificate["q_cardinality"] = r->q_cardinality;
      e.certificate["vertices_examined"] = r->vertices_examined;
      if (r->optimal_vertex_count) e.certificate["optimal_vertex_count"] = *r->optimal_vertex_count;
      e.certificate["channel_q_given_y"] = channel_to_json(r->channel_q_given_y);
      out.push_back(std::move(e));
    } else {
      out.push_back(failed("redundancy", *red.error(), ""));
    }
  }
  if (wants("unique")) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string name = "unique[" + source_name(joint, i) + "]";
      if (const auto* r = red.get()) {
        MeasureEntry e{name, source_mi[i] - r->value, ReportJson::object(), {}, std::nullopt};
        e.certificate["source_information"] = source_mi[i];
        e.certificate["redundancy"] = r->value;
        out.push_back(std::move(e));
      } else {
        out.push_back(failed(name, *red.error(), "redundancy"));
      }
    }
  }
  if (wants("union")) {
    if (const auto* u = uni.get()) {
      MeasureEntry e{"union", u->value, ReportJson::object(), {}, std::nullopt};
      e.certificate["fw_gap"] = u->fw_gap;
      e.certificate["iterations"] = u->iterations;
      e.certificate["optimal_coupling"] = coupling_to_json(u->optimal_coupling);
      out.push_back(std::move(e));
    } else {
      out.push_back(failed("union", *uni.error(), ""));
    }
  }
  if (wants("synergy")) {
    if (const auto* u = uni.get()) {
      MeasureEntry e{"synergy", total - u->value, ReportJson::object(), {}, std::nullopt};
      e.certificate["total_information"] = total;
      e.certificate["union"] = u->value;
      out.push_back(std::move(e));
    } else {
      out.push_back(failed("synergy", *uni.error(), "union"));
    }
  }
  if (wants("excluded")) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string name = "excluded[" + source_name(joint, i) + "]";
      if (const auto* u = uni.get()) {
        MeasureEntry e{name, u->value - source_mi[i], ReportJson::object(), {}, std::nullopt};
        e.certificate["source_information"] = source_mi[i];
        e.certificate["union"] = u->value;
        out.push_back(std::move(e));
      } else {
        out.push_back(failed(name, *uni.error(), "union"));
      }
    }
  }
  const bool explicit_groups = !options.measures.empty();
  if (wants("broja") && (n == 2 || explicit_groups)) {
    if (n != 2) {
      out.push_back(failed("broja", {"input", "BROJA redundancy needs exactly two sources", {}}, ""));
    } else if (const auto* u = uni.get()) {
      MeasureEntry e{"broja", source_mi[0] + source_mi[1] - u->value, ReportJson::object(), {}, std::nullopt};
      e.certificate["source_information"] = source_mi;
      e.certificate["union"] = u->value;
      out.push_back(std::move(e));
    } else {
      out.push_back(failed("broja", *uni.error(), "union"));
    }
  }
  if (wants("gk") && (n == 2 || explicit_groups)) {
    try {
      if (n != 2) throw InputError("Gacs-Korner common information needs exactly two sources");
      const std::vector<std::size_t> sources{1, 2};
      const auto ci = gk_common_information(marginalize_indices(joint, sources));
      MeasureEntry e{"gk", ci.value, ReportJson::object(), {}, std::nullopt};
      e.certificate["num_components"] = ci.partition.num_components;
      e.certificate["component_labels"] = ci.partition.labels;
      out.push_back(std::move(e));
    } catch (...) {
      out.push_back(failed("gk", classify(std::current_exception()), ""));
    }
  }
  if (wants("wedge")) {
    try {
      std::vector<std::size_t> sources(n);
      for (std::size_t i = 0; i < n; ++i) sources[i] = i + 1;
      MeasureEntry e{"wedge", redundancy_wedge(joint), ReportJson::object(), {}, std::nullopt};
      const auto partition = common_partition(joint, sources);
      e.certificate["num_components"] = partition.num_components;
      e.certificate["component_labels"] = partition.labels;
      out.push_back(std::move(e));
    } catch (...) {
      out.push_back(failed("wedge", classify(std::current_exception()), ""));
    }
  }
  if (wants("gh")) {
    try {
      const auto gh = redundancy_gh(joint, red_opts);
      MeasureEntry e{"gh", gh.value, ReportJson::object(), gh.caveats, std::nullopt};
      e.certificate["q_cardinality"] = gh.q_cardinality;
      e.certificate["vertices_examined"] = gh.vertices_examined;
      e.certificate["cardinality_limited"] = gh.cardinality_limited;
      out.push_back(std::move(e));
    } catch (...) {
      out.push_back(failed("gh", classify(std::current_exception()), ""));
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return report;
}

ReportJson report_to_json(const DecompositionReport& report) {
  ReportJson pruned = ReportJson::array();
  for (const auto& p : report.pruned) pruned.push_back({{"variable", p.variable}, {"label", p.label}});
  ReportJson measures = ReportJson::array();
  for (const auto& m : report.measures) {
    ReportJson e;
    e["name"] = m.name;
    e["value_bits"] = m.value_bits ? ReportJson(*m.value_bits) : ReportJson(nullptr);
    e["certificate"] = m.certificate;
    e["caveats"] = m.caveats;
    if (m.error) {
      e["error"] = {{"kind", m.error->kind}, {"message", m.error->message}, {"detail", m.error->detail}};
    } else {
      e["error"] = nullptr;
    }
    measures.push_back(std::move(e));
  }
  ReportJson j;
  j["tool"] = kTool;
  j["version"] = kVersion;
  j["input"] = {{"digest", report.input_digest}, {"variables", report.variables}, {"pruned", std::move(pruned)}};
  j["config"] = report.config;
  j["measures"] = std::move(measures);
  return j;
}

DecompositionReport report_from_json(const ReportJson& j) {
  try {
    DecompositionReport report;
    const auto& input = j.at("input");
    report.input_digest = input.at("digest").get<std::string>();
    report.variables = input.at("variables").get<std::vector<std::string>>();
    for (const auto& p : input.at("pruned")) {
      report.pruned.push_back({p.at("variable").get<std::string>(), p.at("label").get<std::string>()});
    }
    report.config = j.at("config");
    for (const auto& e : j.at("measures")) {
      MeasureEntry m;
      m.name = e.at("name").get<std::string>();
      if (!e.at("value_bits").is_null()) m.value_bits = e.at("value_bits").get<double>();
      m.certificate = e.at("certificate");
      m.caveats = e.at("caveats").get<std::vector<std::string>>();
      if (!e.at("error").is_null()) {
        const auto& err = e.at("error");
        m.error = MeasureError{err.at("kind").get<std::string>(), err.at("message").get<std::string>(),
                               err.at("detail")};
      }
      report.measures.push_back(std::move(m));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string dump_report(const DecompositionReport& report) { return report_to_json(report).dump(2) + "\n"; }

DecompositionReport parse_report(std::string_view text) {
  try {
    return report_from_json(ReportJson::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
}

std::string format_report_table(const DecompositionReport& report) {
  std::vector<std::array<std::string, 3>> rows{{"measure", "bits", "notes"}};
  for (const auto& m : report.measures) {
    std::string notes;
    if (m.error) {
      notes = m.error->kind + " error: " + m.error->message;
    } else {
      const auto& c = m.certificate;
      if (c.contains("fw_gap")) notes = "gap " + format_gap(c["fw_gap"].get<double>());
      if (c.contains("q_cardinality")) notes = "|Q| " + std::to_string(c["q_cardinality"].get<std::size_t>());
      if (c.contains("num_components")) {
        notes = "components " + std::to_string(c["num_components"].get<std::size_t>());
      }
      for (const auto& caveat : m.caveats) notes += (notes.empty() ? "" : "; ") + caveat;
    }
    rows.push_back({m.name, m.value_bits ? format_number(*m.value_bits, 6) : "-", notes});
  }
  std::size_t w0 = 0, w1 = 0;
  for (const auto& r : rows) {
    w0 = std::max(w0, r[0].size());
    w1 = std::max(w1, r[1].size());
  }
  std::ostringstream os;
  os << "input " << report.input_digest << "  variables";
  for (const auto& v : report.variables) os << ' ' << v;
  os << '\n';
  for (const auto& p : report.pruned) os << "pruned " << p.variable << '=' << p.label << '\n';
  for (const auto& r : rows) {
    os << r[0] << std::string(w0 - r[0].size() + 2, ' ') << std::string(w1 - r[1].size(), ' ') << r[1];
    if (!r[2].empty()) os << "  " << r[2];
    os << '\n';
  }
  return os.str();
}

}  // namespace pidkit
