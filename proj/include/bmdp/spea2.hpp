#pragma once

// strength-pareto evolutionary baseline over pure policies: strength/raw
// fitness with k-th nearest neighbor density, environmental selection into
// an archive, binary tournaments, uniform crossover and per-state mutation.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bmdp/model.hpp"
#include "bmdp/pareto.hpp"
#include "bmdp/policy.hpp"
#include "bmdp/random.hpp"
#include "bmdp/solve.hpp"
#include "bmdp/util.hpp"

namespace bmdp {

struct EvoConfig {
  int population_size = 100;
  int archive_size = 50000;       // large default: the archive accumulates
  double time_limit_seconds = 1000.0;
  std::uint64_t rng_seed = 0;
  int k_density = 0;              // 0 = sqrt(population_size + archive_size)
  int max_generations = 0;        // 0 = no generation cap
  bool warm_start = true;         // seed the three single-objective optima
};

// uniform crossover: each state keeps a's or b's action with probability 1/2
inline PurePolicy crossover(const PurePolicy& a, const PurePolicy& b, rng_t& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: length mismatch");
  PurePolicy child(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) child[s] = (rng() & 1) != 0 ? b[s] : a[s];
  return child;
}

// each state is resampled uniformly over all actions with probability 1/n
inline PurePolicy mutate(const PurePolicy& pi, int n_actions, rng_t& rng) {
  if (pi.empty()) throw std::invalid_argument("mutate: empty policy");
  PurePolicy out = pi;
  const double rate = 1.0 / static_cast<double>(pi.size());
  for (std::size_t s = 0; s < pi.size(); ++s) {
    if (uniform01(rng) < rate)
      out[s] = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n_actions)));
  }
  return out;
}

inline PurePolicy mutate(const PurePolicy& pi, const IntervalModel& model, rng_t& rng) {
  return mutate(pi, model.n_actions, rng);
}

namespace detail {

// spea2 fitness F = R + D: R(i) sums the strengths of i's dominators (zero
// iff non-dominated, hence F < 1 iff non-dominated), D(i) = 1/(sigma_k + 2)
// with sigma_k the k-th nearest neighbor distance in objective space
inline std::vector<double> spea2_fitness(const std::vector<const ValueTriple*>& values,
                                         int k, double tol) {
  const std::size_t u = values.size();
  std::vector<double> fitness(u, 0.0);
  if (u == 0) return fitness;
  std::vector<double> strength(u, 0.0);
  for (std::size_t i = 0; i < u; ++i) {
    for (std::size_t j = i + 1; j < u; ++j) {
      const Dominance d = dominates(*values[i], *values[j], tol);
      if (d == Dominance::strictly_dominates) strength[i] += 1.0;
      else if (d == Dominance::dominated) strength[j] += 1.0;
    }
  }
  for (std::size_t i = 0; i < u; ++i) {
    for (std::size_t j = i + 1; j < u; ++j) {
      const Dominance d = dominates(*values[i], *values[j], tol);
      if (d == Dominance::strictly_dominates) fitness[j] += strength[i];
      else if (d == Dominance::dominated) fitness[i] += strength[j];
    }
  }

  const std::size_t dim = 3 * values[0]->n_states();
  Eigen::MatrixXd pts(dim, u);
  for (std::size_t i = 0; i < u; ++i) {
    const ValueTriple& v = *values[i];
    for (std::size_t s = 0; s < v.n_states(); ++s) {
      pts(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = v.lower[s];
      pts(static_cast<Eigen::Index>(v.n_states() + s), static_cast<Eigen::Index>(i)) = v.avg[s];
      pts(static_cast<Eigen::Index>(2 * v.n_states() + s), static_cast<Eigen::Index>(i)) =
          v.upper[s];
    }
  }
  const int kk = std::clamp(k, 1, static_cast<int>(u) - 1);
  std::vector<double> dist(u);
  for (std::size_t i = 0; i < u; ++i) {
    if (u == 1) {
      fitness[i] += 1.0 / 2.0;
      continue;
    }
    Eigen::VectorXd sq =
        (pts.colwise() - pts.col(static_cast<Eigen::Index>(i))).colwise().squaredNorm();
    dist.assign(sq.data(), sq.data() + u);
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(i));  // drop self
    std::nth_element(dist.begin(), dist.begin() + (kk - 1), dist.end());
    fitness[i] += 1.0 / (std::sqrt(dist[kk - 1]) + 2.0);
  }
  return fitness;
}

}  // namespace detail

// runs the evolutionary search until the time limit or generation cap and
// returns the non-dominated subset of the final archive.  fixed seeds give
// bit-identical runs.
inline FrontierSet spea2_run(const IntervalModel& model, const EvoConfig& evo = {},
                             const SolveConfig& cfg = {}, double tol = kDominanceTol,
                             int jobs = 1) {
  if (evo.population_size < 2) throw std::invalid_argument("spea2: population_size < 2");
  if (evo.archive_size < 1) throw std::invalid_argument("spea2: archive_size < 1");
  const int n = model.n_states;
  const int m = model.n_actions;
  const Stopwatch clock;
  rng_t rng(evo.rng_seed);
  detail::EvalMemo memo;

  const auto eval = [&](const PurePolicy& pi) -> const ValueTriple* {
    return &detail::memo_eval(memo, model, pi, cfg);
  };
  const int k = evo.k_density > 0
                    ? evo.k_density
                    : static_cast<int>(std::sqrt(
                          static_cast<double>(evo.population_size + evo.archive_size)));

  struct Individual {
    PurePolicy pi;
    const ValueTriple* v = nullptr;
  };
  std::vector<Individual> population;
  population.reserve(evo.population_size);
  for (int i = 0; i < evo.population_size; ++i) {
    PurePolicy pi(n);
    for (int s = 0; s < n; ++s)
      pi[s] = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m)));
    population.push_back({std::move(pi), nullptr});
  }
  if (evo.warm_start && evo.population_size >= 3) {
    population[0].pi = optimal_lower(model, cfg).policy;
    population[1].pi = optimal_avg(model, cfg).policy;
    population[2].pi = optimal_upper(model, cfg).policy;
  }

  std::vector<Individual> archive;
  std::vector<double> archive_fitness;
  int generation = 0;
  for (;;) {
    ++generation;
    // evaluate the population in batch, then fitness over pop + archive
    {
      std::vector<const PurePolicy*> fresh;
      for (const Individual& ind : population)
        if (memo.count(ind.pi) == 0) fresh.push_back(&ind.pi);
      std::sort(fresh.begin(), fresh.end());
      fresh.erase(std::unique(fresh.begin(), fresh.end(),
                              [](const PurePolicy* a, const PurePolicy* b) { return *a == *b; }),
                  fresh.end());
      std::vector<ValueTriple> vals(fresh.size());
      parallel_for(jobs, fresh.size(),
                   [&](std::size_t i) { vals[i] = eval_policy(model, *fresh[i], cfg); });
      for (std::size_t i = 0; i < fresh.size(); ++i) memo.emplace(*fresh[i], std::move(vals[i]));
      for (Individual& ind : population) ind.v = eval(ind.pi);
    }

    std::vector<const ValueTriple*> values;
    values.reserve(population.size() + archive.size());
    for (const Individual& ind : population) values.push_back(ind.v);
    for (const Individual& ind : archive) values.push_back(ind.v);
    const std::vector<double> fitness = detail::spea2_fitness(values, k, tol);

    // environmental selection: all non-dominated, truncated to the archive
    // capacity by repeated nearest-neighbor removal; filled up with the
    // best dominated individuals when short
    const auto individual = [&](std::size_t i) -> const Individual& {
      return i < population.size() ? population[i] : archive[i - population.size()];
    };
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (fitness[i] < 1.0) chosen.push_back(i);
    if (chosen.size() > static_cast<std::size_t>(evo.archive_size)) {
      while (chosen.size() > static_cast<std::size_t>(evo.archive_size)) {
        // remove the member with lexicographically smallest distance vector
        const std::size_t c = chosen.size();
        std::vector<std::vector<double>> dists(c);
        for (std::size_t i = 0; i < c; ++i) {
          dists[i].reserve(c - 1);
          const ValueTriple& vi = *values[chosen[i]];
          for (std::size_t j = 0; j < c; ++j) {
            if (i == j) continue;
            const ValueTriple& vj = *values[chosen[j]];
            double sq = 0.0;
            for (std::size_t s = 0; s < vi.n_states(); ++s) {
              const double dl = vi.lower[s] - vj.lower[s];
              const double da = vi.avg[s] - vj.avg[s];
              const double du = vi.upper[s] - vj.upper[s];
              sq += dl * dl + da * da + du * du;
            }
            dists[i].push_back(sq);
          }
          std::sort(dists[i].begin(), dists[i].end());
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < c; ++i)
          if (dists[i] < dists[worst]) worst = i;
        chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(worst));
      }
    } else if (chosen.size() < static_cast<std::size_t>(evo.archive_size)) {
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < values.size(); ++i)
        if (fitness[i] >= 1.0) rest.push_back(i);
      std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
        return fitness[a] < fitness[b];
      });
      for (std::size_t i : rest) {
        if (chosen.size() >= static_cast<std::size_t>(evo.archive_size)) break;
        chosen.push_back(i);
      }
    }
    std::vector<Individual> next_archive;
    std::vector<double> next_fitness;
    next_archive.reserve(chosen.size());
    next_fitness.reserve(chosen.size());
    for (std::size_t i : chosen) {
      next_archive.push_back(individual(i));
      next_fitness.push_back(fitness[i]);
    }
    archive = std::move(next_archive);
    archive_fitness = std::move(next_fitness);

    log_line(2, "spea2 generation " + std::to_string(generation) + ": archive " +
                    std::to_string(archive.size()) + ", evals " + std::to_string(memo.size()));
    if (evo.max_generations > 0 && generation >= evo.max_generations) break;
    if (clock.seconds() >= evo.time_limit_seconds) break;

    // mating: binary tournaments on the archive (lower fitness wins, ties
    // to the lower index), uniform crossover, then mutation
    const auto tournament = [&]() -> const PurePolicy& {
      const std::size_t i = uniform_below(rng, archive.size());
      const std::size_t j = uniform_below(rng, archive.size());
      std::size_t w = std::min(i, j);
      if (archive_fitness[i] < archive_fitness[j]) w = i;
      else if (archive_fitness[j] < archive_fitness[i]) w = j;
      return archive[w].pi;
    };
    std::vector<Individual> offspring;
    offspring.reserve(evo.population_size);
    for (int i = 0; i < evo.population_size; ++i) {
      PurePolicy child = crossover(tournament(), tournament(), rng);
      offspring.push_back({mutate(child, m, rng), nullptr});
    }
    population = std::move(offspring);
  }

  std::vector<FrontierEntry> entries;
  entries.reserve(archive.size());
  for (Individual& ind : archive) entries.push_back({std::move(ind.pi), *ind.v});
  FrontierSet out = po_filter(entries, tol);
  out.eval_count = memo.size();
  return out;
}

}  // namespace bmdp
