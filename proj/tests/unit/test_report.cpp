#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "pidkit/errors.hpp"
#include "pidkit/fixtures.hpp"
#include "pidkit/info.hpp"
#include "pidkit/report.hpp"
#include "support/random_models.hpp"

using namespace pidkit;

namespace {

std::map<std::string, const MeasureEntry*> by_name(const DecompositionReport& r) {
  std::map<std::string, const MeasureEntry*> out;
  for (const auto& m : r.measures) out[m.name] = &m;
  return out;
}

DecompositionReport run(const char* fixture, DecomposeOptions options = {}) {
  return decompose(fixture_joint(fixture), {}, options);
}

}  // namespace

TEST_CASE("decompose fixtures") {
  SUBCASE("and") {
    const auto r = run("and");
    const auto m = by_name(r);
    CHECK(std::abs(*m.at("redundancy")->value_bits - 0.311) <= 1e-3);
    CHECK(std::abs(*m.at("synergy")->value_bits - 0.5) <= 1e-3);
    CHECK(std::abs(*m.at("unique[X1]")->value_bits) <= 1e-3);
    CHECK(std::abs(*m.at("broja")->value_bits - 0.311) <= 1e-3);
    CHECK(m.count("gh") == 0);
    CHECK(r.exit_code() == 0);
  }
  SUBCASE("xor") {
    const auto r = run("xor");
    const auto m = by_name(r);
    CHECK(std::abs(*m.at("redundancy")->value_bits) <= 1e-9);
    CHECK(std::abs(*m.at("union")->value_bits) <= 1e-6);
    CHECK(*m.at("synergy")->value_bits == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("overlap redundancy only") {
    DecomposeOptions opts;
    opts.measures = {"redundancy"};
    const auto r = run("overlap", opts);
    REQUIRE(r.measures.size() == 1);
    CHECK(*r.measures[0].value_bits == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("all groups include gh") {
    DecomposeOptions opts;
    opts.measures = {"all"};
    const auto r = run("and", opts);
    const auto m = by_name(r);
    REQUIRE(m.count("gh") == 1);
    CHECK(std::abs(*m.at("gh")->value_bits - 0.123) <= 1e-3);
  }
}

TEST_CASE("report structure") {
  DecomposeOptions opts;
  opts.q_cardinality = 4;
  opts.seed = 7;
  const auto r = run("and3", opts);
  CHECK(std::is_sorted(r.measures.begin(), r.measures.end(),
                       [](const auto& a, const auto& b) { return a.name < b.name; }));
  CHECK(by_name(r).count("broja") == 0);
  CHECK(by_name(r).count("gk") == 0);
  CHECK(r.config["q_cardinality"] == 4);
  CHECK(r.config["q_cardinality_bound"] == 4);
  CHECK(r.config["seed"] == 7);
  CHECK(r.config["gh_cardinality_heuristic"] == false);
  CHECK(r.input_digest.rfind("fnv1a64:", 0) == 0);
  CHECK(r.input_digest == distribution_digest(fixture_joint("and3")));
  CHECK(r.input_digest != distribution_digest(fixture_joint("sum3")));
  for (const auto& m : r.measures) {
    REQUIRE(m.value_bits);
    CHECK(std::isfinite(*m.value_bits));
  }
}

TEST_CASE("report round trip is byte identical") {
  pidkit::testing::Rng rng(3);
  std::vector<DecompositionReport> reports{run("and"), run("copy"), run("lemma1")};
  DecomposeOptions capped;
  capped.vertex_cap = 1;
  reports.push_back(run("overlap", capped));
  for (int k = 0; k < 3; ++k) reports.push_back(decompose(pidkit::testing::random_pid_joint(rng, 2, 3), {}, {}));
  for (const auto& r : reports) {
    const std::string text = dump_report(r);
    CHECK(dump_report(parse_report(text)) == text);
  }
  CHECK_THROWS_AS(parse_report("{\"tool\": 1}"), InputError);
}

TEST_CASE("per-measure errors are inline") {
  SUBCASE("vertex cap") {
    DecomposeOptions opts;
    opts.vertex_cap = 1;
    const auto r = run("overlap", opts);
    const auto m = by_name(r);
    REQUIRE(m.at("redundancy")->error);
    CHECK(m.at("redundancy")->error->kind == "resource");
    CHECK(m.at("redundancy")->error->detail["best_so_far"] == 1.0);
    CHECK(m.at("unique[X2]")->error);
    CHECK_FALSE(m.at("union")->error);
    CHECK(m.at("union")->value_bits);
    CHECK(r.exit_code() == 2);
  }
  SUBCASE("iteration limit") {
    pidkit::testing::Rng rng(4);
    bool seen = false;
    for (int k = 0; k < 20 && !seen; ++k) {
      DecomposeOptions opts;
      opts.tol = 1e-12;
      opts.max_iter = 1;
      const auto r = decompose(pidkit::testing::random_pid_joint(rng, 3, 3), {}, opts);
      const auto m = by_name(r);
      if (!m.at("union")->error) continue;
      seen = true;
      CHECK(m.at("union")->error->kind == "non_convergence");
      CHECK(m.at("synergy")->error);
      CHECK_FALSE(m.at("redundancy")->error);
      CHECK(r.exit_code() == 3);
    }
    CHECK(seen);
  }
  SUBCASE("explicit bivariate measure on three sources") {
    DecomposeOptions opts;
    opts.measures = {"gk", "wedge"};
    const auto r = run("and3", opts);
    const auto m = by_name(r);
    REQUIRE(m.at("gk")->error);
    CHECK(m.at("gk")->error->kind == "input");
    CHECK_FALSE(m.at("wedge")->error);
  }
}

TEST_CASE("bad options") {
  DecomposeOptions opts;
  opts.measures = {"nonsense"};
  CHECK_THROWS_AS(run("and", opts), InputError);
  opts = {};
  opts.tol = -1;
  CHECK_THROWS_AS(run("and", opts), InputError);
  opts = {};
  opts.q_cardinality = 0;
  CHECK_THROWS_AS(run("and", opts), InputError);
}

TEST_CASE("table output") {
  const std::string table = format_report_table(run("xor"));
  CHECK(table.find("synergy") != std::string::npos);
  CHECK(table.find("1.000000") != std::string::npos);
}
