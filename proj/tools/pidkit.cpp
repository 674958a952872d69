#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pidkit/blackwell.hpp"
#include "pidkit/errors.hpp"
#include "pidkit/fixtures.hpp"
#include "pidkit/io.hpp"
#include "pidkit/report.hpp"

using namespace pidkit;

namespace {

enum ExitCode { kOk = 0, kInput = 1, kResource = 2, kNonConvergence = 3, kInternal = 4 };

struct DecomposeArgs {
  std::string path;
  DecomposeOptions options;
  std::optional<std::size_t> q_card;
  std::optional<std::size_t> vertex_cap;
  std::string format = "json";
};

struct BlackwellArgs {
  std::string path_a, path_b;
  std::string format = "table";
};

struct GenerateArgs {
  std::string name;
  std::string flip = "1/10";
};

std::size_t env_vertex_cap(const char* text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || text[used] != '\0' || v == 0) {
    throw InputError(std::string("PID_VERTEX_CAP must be a positive integer, got '") + text + "'");
  }
  return static_cast<std::size_t>(v);
}

int run_decompose(DecomposeArgs& args) {
  auto& opts = args.options;
  opts.q_cardinality = args.q_card;
  if (args.vertex_cap) {
    opts.vertex_cap = *args.vertex_cap;
    opts.vertex_cap_source = "flag";
  } else if (const char* env = std::getenv("PID_VERTEX_CAP")) {
    opts.vertex_cap = env_vertex_cap(env);
    opts.vertex_cap_source = "env";
  }
  const auto loaded = load_joint(args.path);
  for (const auto& p : loaded.pruned) {
    std::cerr << "pruned zero-probability outcome " << p.variable << "=" << p.label << "\n";
  }
  const auto report = decompose(loaded.joint, loaded.pruned, opts);
  for (const auto& m : report.measures) {
    if (m.error) std::cerr << m.name << ": " << m.error->kind << " error: " << m.error->message << "\n";
  }
  std::cout << (args.format == "table" ? format_report_table(report) : dump_report(report));
  return report.exit_code();
}

int run_blackwell(const BlackwellArgs& args) {
  const Channel a = load_channel(args.path_a);
  const Channel b = load_channel(args.path_b);
  const auto result = is_garbling(a, b);
  if (args.format == "json") {
    ReportJson j;
    j["garbling"] = result.holds;
    j["channel_a"] = args.path_a;
    j["channel_b"] = args.path_b;
    j["witness"] = result.witness ? channel_to_json(*result.witness) : ReportJson(nullptr);
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << a.output().name() << " is " << (result.holds ? "" : "not ") << "a garbling of "
            << b.output().name() << "\n";
  if (result.witness) {
    const Channel& w = *result.witness;
    std::cout << "witness k(" << w.output().name() << " | " << w.input().name() << "), rows = outputs:\n";
    for (std::size_t o = 0; o < w.num_outputs(); ++o) {
      std::cout << "  " << w.output().label(o) << ":";
      for (std::size_t i = 0; i < w.num_inputs(); ++i) std::cout << ' ' << to_string(w(o, i));
      std::cout << "\n";
    }
  }
  return kOk;
}

int run_generate(const GenerateArgs& args) {
  std::cout << dump_distribution(generate_fixture(args.name, parse_rational(args.flip)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial information decomposition with exact redundancy and union information"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* cmd_dec = app.add_subcommand("decompose", "Compute all measures for a joint distribution file");
  cmd_dec->add_option("path", dec.path, "Joint distribution JSON file")->required();
  cmd_dec->add_option("--tol", dec.options.tol, "Union solver gap tolerance in bits")->capture_default_str();
  cmd_dec->add_option("--max-iter", dec.options.max_iter, "Union solver iteration limit")->capture_default_str();
  cmd_dec->add_option("--q-card", dec.q_card, "Number of Q labels for redundancy (default: automatic)");
  cmd_dec->add_option("--vertex-cap", dec.vertex_cap, "Vertex enumeration cap (overrides PID_VERTEX_CAP)");
  cmd_dec->add_option("--measures", dec.options.measures, "Comma-separated measure groups, or 'all'")
      ->delimiter(',');
  cmd_dec->add_option("--format", dec.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  cmd_dec->add_option("--seed", dec.options.seed, "Seed echoed in the report")->capture_default_str();

  BlackwellArgs bw;
  auto* cmd_bw = app.add_subcommand("blackwell", "Test whether channel A is a garbling of channel B");
  cmd_bw->add_option("channel_a", bw.path_a, "Channel JSON file A")->required();
  cmd_bw->add_option("channel_b", bw.path_b, "Channel JSON file B")->required();
  cmd_bw->add_option("--format", bw.format, "Output format")->check(CLI::IsMember({"json", "table"}));

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "Print a built-in example distribution");
  cmd_gen->add_option("fixture", gen.name, "Fixture name")->required()->check(CLI::IsMember(fixture_names()));
  cmd_gen->add_option("--flip", gen.flip, "Flip probability for unq (decimal or fraction)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*cmd_dec) return run_decompose(dec);
    if (*cmd_bw) return run_blackwell(bw);
    return run_generate(gen);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResource;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
