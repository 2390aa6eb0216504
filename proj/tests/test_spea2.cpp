#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "bmdp/bmdp.hpp"
#include "helpers.hpp"

using namespace bmdp;

TEST_CASE("crossover mixes parents statewise", "[spea2]") {
  rng_t rng(101);
  SECTION("identical parents reproduce themselves") {
    const PurePolicy pi{2, 0, 1, 2};
    for (int trial = 0; trial < 20; ++trial) CHECK(crossover(pi, pi, rng) == pi);
  }
  SECTION("every state comes from one of the parents") {
    const PurePolicy a{0, 1, 2, 0, 1}, b{2, 0, 1, 1, 0};
    for (int trial = 0; trial < 200; ++trial) {
      const PurePolicy child = crossover(a, b, rng);
      for (std::size_t s = 0; s < a.size(); ++s)
        CHECK((child[s] == a[s] || child[s] == b[s]));
    }
  }
  SECTION("opposite parents mix evenly") {
    const PurePolicy zeros(4, 0), ones(4, 1);
    double total_ones = 0.0;
    const int trials = 10000;
    for (int trial = 0; trial < trials; ++trial) {
      const PurePolicy child = crossover(zeros, ones, rng);
      for (int bit : child) total_ones += bit;
    }
    CHECK(total_ones / trials == Catch::Approx(2.0).margin(0.1));
  }
  SECTION("length mismatch throws") {
    CHECK_THROWS_AS(crossover(PurePolicy{0, 1}, PurePolicy{0}, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("mutate hits the expected flip rate", "[spea2]") {
  rng_t rng(103);
  const int n = 20;
  for (const int m : {2, 4}) {
    const PurePolicy pi(n, 0);
    double total = 0.0;
    const int trials = 10000;
    for (int trial = 0; trial < trials; ++trial)
      total += hamming(pi, mutate(pi, m, rng));
    const double expected = 1.0 - 1.0 / m;  // one resample per policy on average
    const double mean = total / trials;
    CHECK(mean >= 0.85 * expected);
    CHECK(mean <= 1.15 * expected);
  }
}

TEST_CASE("mutate with one action is the identity", "[spea2]") {
  rng_t rng(107);
  const PurePolicy pi(6, 0);
  for (int trial = 0; trial < 100; ++trial) CHECK(mutate(pi, 1, rng) == pi);
}

TEST_CASE("mutate accepts a model argument", "[spea2]") {
  rng_t rng(109);
  const IntervalModel model = testutil::random_model(rng, 4, 3);
  const PurePolicy pi{0, 1, 2, 0};
  const PurePolicy out = mutate(pi, model, rng);
  for (int a : out) {
    CHECK(a >= 0);
    CHECK(a < 3);
  }
}

TEST_CASE("fitness is below one exactly for non-dominated points", "[spea2]") {
  rng_t rng(113);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t count = 2 + uniform_below(rng, 30);
    std::vector<ValueTriple> triples;
    triples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      ValueTriple t;
      t.lower = {uniform01(rng)};
      t.avg = {uniform01(rng)};
      t.upper = {uniform01(rng)};
      triples.push_back(std::move(t));
    }
    std::vector<const ValueTriple*> ptrs;
    for (const ValueTriple& t : triples) ptrs.push_back(&t);
    const std::vector<double> fitness = detail::spea2_fitness(ptrs, 3, kDominanceTol);
    for (std::size_t i = 0; i < count; ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < count; ++j)
        dominated = dominated ||
                    (j != i && dominates(triples[j], triples[i]) ==
                                   Dominance::strictly_dominates);
      CHECK((fitness[i] < 1.0) == !dominated);
    }
  }
}

TEST_CASE("fitness density decreases with crowding", "[spea2]") {
  // a tight pair plus one isolated point: the isolated point gets the
  // smaller density term, hence the smaller fitness among non-dominated
  ValueTriple a, b, c;
  a.lower = {0.0}; a.avg = {1.0}; a.upper = {0.50};
  b.lower = {1.0}; b.avg = {0.0}; b.upper = {0.51};
  c.lower = {0.5}; c.avg = {0.5}; c.upper = {10.0};
  const std::vector<const ValueTriple*> ptrs{&a, &b, &c};
  const std::vector<double> fitness = detail::spea2_fitness(ptrs, 1, kDominanceTol);
  CHECK(fitness[0] < 1.0);
  CHECK(fitness[1] < 1.0);
  CHECK(fitness[2] < 1.0);
  CHECK(fitness[2] < fitness[0]);
  CHECK(fitness[2] < fitness[1]);
}

TEST_CASE("evolutionary search finds the reference frontier", "[spea2]") {
  const IntervalModel model = testutil::appendix_model();
  EvoConfig evo;
  evo.population_size = 20;
  evo.max_generations = 10;
  const FrontierSet f = spea2_run(model, evo);
  CHECK(testutil::distinct_values(f.entries, 1e-6) == 2);
  const FrontierSet exact = pareto_exact(model);
  for (const FrontierEntry& e : f.entries)
    for (const FrontierEntry& x : exact.entries)
      CHECK(dominates(x.value, e.value) != Dominance::strictly_dominates);
}

TEST_CASE("evolutionary search is reproducible", "[spea2]") {
  rng_t rng(127);
  const IntervalModel model = testutil::random_model(rng, 4, 3);
  EvoConfig evo;
  evo.population_size = 16;
  evo.max_generations = 5;
  evo.rng_seed = 42;
  const FrontierSet a = spea2_run(model, evo);
  const FrontierSet b = spea2_run(model, evo);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries[i].policy == b.entries[i].policy);
    CHECK(testutil::triple_close(a.entries[i].value, b.entries[i].value, 0.0));
  }
  CHECK(a.eval_count == b.eval_count);
}

TEST_CASE("seed changes move the search", "[spea2]") {
  rng_t rng(131);
  const IntervalModel model = testutil::random_model(rng, 5, 3);
  EvoConfig evo;
  evo.population_size = 8;
  evo.max_generations = 2;
  evo.warm_start = false;
  evo.rng_seed = 1;
  const FrontierSet a = spea2_run(model, evo);
  evo.rng_seed = 2;
  const FrontierSet b = spea2_run(model, evo);
  // different random populations: identical outcomes would be a frozen rng
  bool same = a.size() == b.size();
  if (same)
    for (std::size_t i = 0; i < a.size(); ++i)
      same = same && a.entries[i].policy == b.entries[i].policy;
  CHECK_FALSE(same);
}

TEST_CASE("archive truncation keeps the frontier bounded", "[spea2]") {
  rng_t rng(137);
  const IntervalModel model = testutil::random_model(rng, 5, 3);
  EvoConfig evo;
  evo.population_size = 12;
  evo.archive_size = 3;
  evo.max_generations = 6;
  const FrontierSet f = spea2_run(model, evo);
  CHECK(f.size() >= 1);
  CHECK(f.size() <= 3);
  for (const FrontierEntry& a : f.entries)
    for (const FrontierEntry& b : f.entries)
      CHECK(dominates(a.value, b.value) != Dominance::strictly_dominates);
}

TEST_CASE("warm start plants the single-objective optima", "[spea2]") {
  rng_t rng(139);
  const IntervalModel model = testutil::random_model(rng, 4, 2);
  EvoConfig evo;
  evo.population_size = 6;
  evo.max_generations = 0;
  evo.time_limit_seconds = 0.0;  // stop after the first generation
  const FrontierSet f = spea2_run(model, evo);
  const OptimalResult lo = optimal_lower(model);
  bool found = false;
  for (const FrontierEntry& e : f.entries) {
    bool close = true;
    for (int s = 0; s < 4; ++s)
      close = close && std::abs(e.value.lower[s] - lo.value[s]) <= 1e-6;
    found = found || close;
  }
  CHECK(found);
}

TEST_CASE("evolutionary search output is mutually non-dominated", "[spea2]") {
  rng_t rng(149);
  const IntervalModel model = testutil::random_model(rng, 4, 3);
  EvoConfig evo;
  evo.population_size = 10;
  evo.max_generations = 4;
  const FrontierSet f = spea2_run(model, evo);
  REQUIRE(f.size() >= 1);
  std::set<PurePolicy> seen;
  for (const FrontierEntry& a : f.entries) {
    CHECK(seen.insert(a.policy).second);  // no duplicate policies
    for (const FrontierEntry& b : f.entries)
      CHECK(dominates(a.value, b.value) != Dominance::strictly_dominates);
  }
}

TEST_CASE("degenerate configurations throw", "[spea2]") {
  rng_t rng(151);
  const IntervalModel model = testutil::random_model(rng, 3, 2);
  EvoConfig evo;
  evo.population_size = 1;
  CHECK_THROWS_AS(spea2_run(model, evo), std::invalid_argument);
  evo.population_size = 4;
  evo.archive_size = 0;
  CHECK_THROWS_AS(spea2_run(model, evo), std::invalid_argument);
}
