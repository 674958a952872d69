#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "pidkit/blackwell.hpp"
#include "pidkit/errors.hpp"
#include "pidkit/fixtures.hpp"
#include "pidkit/info.hpp"
#include "pidkit/redundancy.hpp"
#include "support/oracles.hpp"

using namespace pidkit;
using namespace pidkit::testing;

namespace {

double h(double p) { return binary_entropy(p); }

void check_result_invariants(const JointDistribution& joint, const RedundancyResult& r) {
  const std::size_t n = joint.num_sources();
  double min_mi = INFINITY;
  for (std::size_t i = 0; i < n; ++i) min_mi = std::min(min_mi, source_information(joint, i));
  CHECK(r.value >= 0.0);
  CHECK(r.value <= min_mi + 1e-9);
  const std::size_t bound = redundancy_cardinality_bound(joint);
  CHECK(r.q_cardinality <= bound);
  REQUIRE(r.channels_q_given_x.size() == n);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(compose(r.channels_q_given_x[i], source_channel(joint, i)) == r.channel_q_given_y);
  }
  std::size_t used = 0;
  for (std::size_t q = 0; q < r.channel_q_given_y.num_outputs(); ++q) {
    bool nonzero = false;
    for (std::size_t y = 0; y < joint.target().size(); ++y) nonzero |= sgn(r.channel_q_given_y(q, y)) != 0;
    used += nonzero;
  }
  CHECK(used <= bound);
  CHECK(channel_information(std::span<const Rational>(marginal_pmf(joint, 0)), r.channel_q_given_y) ==
        doctest::Approx(r.value).epsilon(1e-12));
}

JointDistribution drop_to_source(const JointDistribution& joint, std::size_t i) {
  const std::vector<std::size_t> order{0, i + 1};
  return select_variables(joint, order);
}

}  // namespace

TEST_CASE("lambda system") {
  SUBCASE("single source: deterministic channels") {
    const auto joint = fixture_joint("and");
    const std::vector<Channel> one{source_channel(joint, 0)};
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto poly = build_lambda_system(marginal_pmf(joint, 0), one, k);
      CHECK(poly.dimension() == 2 * k);
      const auto vs = enumerate_vertices(poly);
      CHECK(vs.size() == k * k);
      for (const auto& v : vs.points) {
        for (const auto& x : v) CHECK((x == 0 || x == 1));
      }
    }
  }
  SUBCASE("AND gate with three labels") {
    const auto joint = fixture_joint("and");
    const std::vector<Channel> chans{source_channel(joint, 0), source_channel(joint, 1)};
    const auto poly = build_lambda_system(marginal_pmf(joint, 0), chans, 3);
    CHECK(poly.dimension() == 12);
    const RationalVector uniform(12, Rational(1, 3));
    CHECK(poly.contains(uniform));
  }
  SUBCASE("identical sources") {
    const auto joint = fixture_joint("unq", Rational(0));
    const std::vector<Channel> chans{source_channel(joint, 0), source_channel(joint, 1)};
    const auto poly = build_lambda_system(marginal_pmf(joint, 0), chans, 2);
    // Any point must assign the same channel to both sources.
    for (const auto& v : enumerate_vertices(poly).points) {
      CHECK(v[0] == v[2]);
      CHECK(v[1] == v[3]);
    }
    RationalVector identity{1, 0, 1, 0, 0, 1, 0, 1};
    CHECK(poly.contains(identity));
  }
  SUBCASE("errors") {
    const auto joint = fixture_joint("and");
    const std::vector<Channel> chans{source_channel(joint, 0)};
    CHECK_THROWS_AS(build_lambda_system(marginal_pmf(joint, 0), chans, 0), InputError);
    CHECK_THROWS_AS(build_lambda_system(marginal_pmf(joint, 0), {}, 2), InputError);
    CHECK_THROWS_AS(build_lambda_system(marginal_pmf(joint, 0), {chans[0], Channel::identity(Alphabet::range("Y", 3))}, 2),
                    InputError);
  }
}

TEST_CASE("redundancy on gate fixtures") {
  const double and_mi = h(0.25) - 0.5;
  const auto and_r = redundancy_star(fixture_joint("and"));
  CHECK(and_r.value == doctest::Approx(and_mi).epsilon(1e-9));
  CHECK(and_r.value == doctest::Approx(0.311).epsilon(1e-3));
  CHECK(and_r.q_cardinality == 3);
  check_result_invariants(fixture_joint("and"), and_r);

  CHECK(redundancy_star(fixture_joint("sum")).value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(redundancy_star(fixture_joint("copy")).value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(redundancy_star(fixture_joint("copy")).value) < 1e-9);
  CHECK(std::abs(redundancy_star(fixture_joint("unq")).value - (1 - h(0.1))) < 1e-6);
  CHECK(std::abs(redundancy_star(fixture_joint("and3")).value - 0.138) < 1e-3);
  CHECK(std::abs(redundancy_star(fixture_joint("sum3")).value - 0.311) < 1e-3);
  CHECK(std::abs(redundancy_star(fixture_joint("overlap")).value - 1.0) < 1e-9);

  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto joint = fixture_joint(name);
    check_result_invariants(joint, redundancy_star(joint));
  }
}

TEST_CASE("label count options") {
  const auto joint = fixture_joint("and");
  RedundancyOptions one;
  one.q_cardinality = 1;
  const auto r1 = redundancy_star(joint, one);
  CHECK(r1.value == doctest::Approx(0.0));
  CHECK(r1.q_cardinality == 1);
  REQUIRE(r1.optimal_vertex_count.has_value());
  CHECK_FALSE(r1.caveats.empty());

  RedundancyOptions wide;
  wide.q_cardinality = 6;
  const auto r6 = redundancy_star(joint, wide);
  CHECK(r6.value == doctest::Approx(h(0.25) - 0.5).epsilon(1e-12));
  CHECK(r6.channel_q_given_y.num_outputs() == 6);
  CHECK_FALSE(r6.caveats.empty());

  RedundancyOptions zero;
  zero.q_cardinality = 0;
  CHECK_THROWS_AS(redundancy_star(joint, zero), InputError);
}

TEST_CASE("restricted search agrees with an independent vertex scan") {
  Rng rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const auto joint = random_joint(rng, {2, 2, 2}, trial % 2 == 0);
    if (joint.num_variables() != 3 || joint.source(0).size() < 2 || joint.source(1).size() < 2) continue;
    const std::vector<Channel> chans{source_channel(joint, 0), source_channel(joint, 1)};
    const RationalVector prior = marginal_pmf(joint, 0);
    const std::size_t q_card = 3;
    const auto poly = build_lambda_system(prior, chans, q_card);
    // Scan every vertex and evaluate I(Y;Q) with a naive formula.
    double best = 0.0;
    for (const auto& v : enumerate_vertices(poly).points) {
      std::vector<std::vector<double>> rows;
      for (std::size_t q = 0; q < q_card; ++q) {
        std::vector<double> t(joint.target().size(), 0.0);
        for (std::size_t y = 0; y < t.size(); ++y) {
          for (std::size_t x = 0; x < 2; ++x) t[y] += to_double(v[q * 4 + x] * chans[0](x, y));
        }
        rows.push_back(t);
      }
      best = std::max(best, naive_channel_mi(to_doubles(prior), rows));
    }
    const auto r = redundancy_star(joint);
    CHECK(r.value == doctest::Approx(best).epsilon(1e-9));
    RedundancyOptions two;
    two.q_cardinality = 2;
    CHECK(redundancy_star(joint, two).value <= r.value + 1e-12);
  }
}

TEST_CASE("vertex cap") {
  RedundancyOptions tight;
  tight.vertex_cap = 1;
  try {
    redundancy_star(fixture_joint("overlap"), tight);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.cap() == 1);
    REQUIRE(e.best_so_far().has_value());
    CHECK(*e.best_so_far() == doctest::Approx(1.0));
  }
}

TEST_CASE("common information") {
  const JointDistribution same({Alphabet::range("X1", 2), Alphabet::range("X2", 2)},
                               {Rational(1, 2), Rational(0), Rational(0), Rational(1, 2)});
  const auto c = gk_common_information(same);
  CHECK(c.value == doctest::Approx(1.0));
  CHECK(c.partition.num_components == 2);
  CHECK(c.partition.labels[0] == std::vector<std::size_t>{0, 1});
  CHECK(c.partition.labels[1] == std::vector<std::size_t>{0, 1});

  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const auto full = random_joint(rng, {3, 2}, false);
    CHECK(gk_common_information(full).value == doctest::Approx(0.0));
    CHECK(gk_common_information(full).partition.num_components == 1);
  }

  RationalVector block(16, Rational(0));
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      if (a / 2 == b / 2) block[a * 4 + b] = Rational(1, 8);
    }
  }
  const JointDistribution blocks({Alphabet::range("X1", 4), Alphabet::range("X2", 4)}, block);
  CHECK(gk_common_information(blocks).value == doctest::Approx(1.0));

  CHECK_THROWS_AS(gk_common_information(fixture_joint("and")), InputError);
}

TEST_CASE("wedge and GH redundancy") {
  CHECK(redundancy_wedge(fixture_joint("and")) == doctest::Approx(0.0));
  CHECK(redundancy_wedge(fixture_joint("overlap")) == doctest::Approx(1.0));
  const auto copy = fixture_joint("copy");
  const std::vector<std::size_t> pair{1, 2};
  CHECK(redundancy_wedge(copy) ==
        doctest::Approx(gk_common_information(marginalize_indices(copy, pair)).value));
  const auto unq0 = fixture_joint("unq", Rational(0));
  CHECK(redundancy_wedge(unq0) == doctest::Approx(1.0));

  // AND: the optimal Q is X1 OR X2, with I(Y;Q) = h(1/4) - 3/4 h(1/3).
  const double or_info = h(0.25) - 0.75 * h(1.0 / 3.0);
  CHECK(redundancy_gh(fixture_joint("and")).value == doctest::Approx(or_info).epsilon(1e-9));
  CHECK(std::abs(redundancy_gh(fixture_joint("and")).value - 0.123) < 1e-3);
  CHECK(std::abs(redundancy_gh(fixture_joint("sum")).value) < 1e-9);
  const auto unq = fixture_joint("unq");
  const std::size_t a = 1, b = 2;
  CHECK(redundancy_gh(unq).value ==
        doctest::Approx(mutual_information_indices(unq, std::span(&a, 1), std::span(&b, 1))).epsilon(1e-9));

  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto joint = fixture_joint(name);
    const double w = redundancy_wedge(joint);
    const auto gh = redundancy_gh(joint);
    const double star = redundancy_star(joint).value;
    CHECK(w <= gh.value + 1e-9);
    CHECK(gh.value <= star + 1e-9);
    CHECK(gh.q_cardinality >= 1);
  }

  RedundancyOptions one;
  one.q_cardinality = 1;
  const auto limited = redundancy_gh(fixture_joint("and"), one);
  CHECK(limited.cardinality_limited);
  CHECK(limited.value == doctest::Approx(0.0));
  CHECK_FALSE(limited.caveats.empty());
}

TEST_CASE("unique information") {
  const auto and_joint = fixture_joint("and");
  CHECK(std::abs(unique_information(and_joint, 0)) < 1e-9);
  CHECK(std::abs(unique_information(and_joint, 1)) < 1e-9);
  const auto unq = fixture_joint("unq");
  const std::size_t a = 1, b = 2;
  const double mi12 = mutual_information_indices(unq, std::span(&a, 1), std::span(&b, 1));
  CHECK(unique_information(unq, 0) == doctest::Approx(1 - mi12).epsilon(1e-9));
  CHECK(std::abs(unique_information(drop_to_source(and_joint, 0), 0)) < 1e-9);
  CHECK_THROWS_AS(unique_information(and_joint, 2), InputError);

  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto joint = random_pid_joint(rng, 2, 3);
    for (std::size_t i = 0; i < 2; ++i) {
      const double u = unique_information(joint, i);
      CHECK(u >= -1e-9);
      CHECK(u <= source_information(joint, i) + 1e-9);
    }
  }
}

TEST_CASE("multivariate Blackwell property") {
  Rng rng(101);
  int equal_cases = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto joint = random_pid_joint(rng, 2 + trial % 2, 3);
    const double r = redundancy_star(joint).value;
    for (std::size_t i = 0; i < joint.num_sources(); ++i) {
      bool all = true;
      for (std::size_t j = 0; j < joint.num_sources(); ++j) {
        if (j != i) all = all && is_garbling(source_channel(joint, i), source_channel(joint, j)).holds;
      }
      const bool no_unique = std::abs(source_information(joint, i) - r) <= 1e-9;
      CHECK(no_unique == all);
      equal_cases += all;
    }
  }
  CHECK(equal_cases > 0);
}

TEST_CASE("redundancy axioms") {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const auto joint = random_pid_joint(rng, n, 3);
    const double base = redundancy_star(joint).value;

    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin() + 1, order.end(), rng);
    CHECK(redundancy_star(select_variables(joint, order)).value == doctest::Approx(base).epsilon(1e-9));

    for (std::size_t i = 0; i < n; ++i) {
      CHECK(redundancy_star(drop_to_source(joint, i)).value ==
            doctest::Approx(source_information(joint, i)).epsilon(1e-9));
    }

    const Channel extra = random_channel(rng, joint.target(), Alphabet::range("Z", 2), true);
    CHECK(redundancy_star(append_source(joint, 0, extra)).value <= base + 1e-9);

    // X_i is a garbling of the appended tuple (X_i, X_j).
    const std::size_t i = trial % n;
    const auto refined = append_tuple(joint, {i + 1, (i + 1) % n + 1});
    CHECK(std::abs(redundancy_star(canonicalize(refined).joint).value - base) <= 1e-9);

    std::vector<std::size_t> with_target(n + 2);
    std::iota(with_target.begin(), with_target.end() - 1, 0);
    with_target.back() = 0;
    CHECK(std::abs(redundancy_star(select_variables(joint, with_target)).value - base) <= 1e-9);
  }
}

TEST_CASE("pair identities") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pair = trial % 2 == 0 ? random_joint(rng, {2 + std::size_t(trial % 2), 3}, true)
                                     : block_pair_joint(rng, 3, 3);
    if (pair.num_variables() != 2 || pair.variable(0).size() < 1) continue;
    const std::size_t a = 0, b = 1;
    const double mi = mutual_information_indices(pair, std::span(&a, 1), std::span(&b, 1));
    const std::vector<std::size_t> self{0, 0, 1};
    CHECK(std::abs(redundancy_star(select_variables(pair, self)).value - mi) <= 1e-9);
    CHECK(std::abs(redundancy_star(tuple_target(pair)).value - gk_common_information(pair).value) <= 1e-9);
  }
  for (int trial = 0; trial < 5; ++trial) {
    const auto p1 = random_pmf(rng, 2 + trial % 2), p2 = random_pmf(rng, 3);
    RationalVector product;
    for (const auto& u : p1) {
      for (const auto& v : p2) product.push_back(u * v);
    }
    const JointDistribution independent({Alphabet::range("X1", p1.size()), Alphabet::range("X2", 3)}, product);
    CHECK(redundancy_star(tuple_target(independent)).value <= 1e-9);
  }
}

TEST_CASE("random search never beats the exact optimum") {
  Rng rng(8);
  int checked = 0;
  while (checked < 5) {
    const auto joint = random_joint(rng, {2, 2, 2}, false);
    const double exact = redundancy_star(joint).value;
    const double found = brute_force_redundancy(joint, 20000, rng);
    CHECK(found <= exact + 1e-6);
    CHECK(found >= exact - 0.05);
    ++checked;
  }
}
