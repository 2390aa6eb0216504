#pragma once

// shared test fixtures and independent oracles: the two-state reference
// model, random valid model generation, exhaustive policy enumeration, and
// polytope vertex enumeration for the inner extremization.

#include <cmath>
#include <cstdint>
#include <vector>

#include "bmdp/bmdp.hpp"

namespace testutil {

// two-state model:
// state 0, action 0: stay/move boxes [0,1]/[0,1], averages 0.5/0.5
// state 0, action 1: stay [0.3,0.5], move [0.5,0.7], averages 0.4/0.6
// state 1: both actions return to state 0 with certainty, reward 0
// rewards: state 0 pays 1 under both actions; gamma 0.9
inline bmdp::IntervalModel appendix_model() {
  bmdp::IntervalModel model;
  model.n_states = 2;
  model.n_actions = 2;
  model.gamma = 0.9;
  model.actions.assign(2, bmdp::ActionModel{});
  for (bmdp::ActionModel& am : model.actions) {
    am.rows.resize(2);
    am.r_lower = {1.0, 0.0};
    am.r_avg = {1.0, 0.0};
    am.r_upper = {1.0, 0.0};
    am.rows[1] = {{0}, {1.0}, {1.0}, {1.0}};
  }
  model.actions[0].rows[0] = {{0, 1}, {0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}};
  model.actions[1].rows[0] = {{0, 1}, {0.3, 0.5}, {0.4, 0.6}, {0.5, 0.7}};
  return model;
}

// random valid model with full-support rows; intervals contain the sampled
// stochastic average row by construction
inline bmdp::IntervalModel random_model(bmdp::rng_t& rng, int n, int m,
                                        double gamma = 0.9) {
  bmdp::IntervalModel model;
  model.n_states = n;
  model.n_actions = m;
  model.gamma = gamma;
  model.actions.assign(m, bmdp::ActionModel{});
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  for (bmdp::ActionModel& am : model.actions) {
    am.rows.resize(n);
    am.r_lower.resize(n);
    am.r_avg.resize(n);
    am.r_upper.resize(n);
    for (int s = 0; s < n; ++s) {
      const std::vector<double> avg = bmdp::sample_dirichlet(rng, ones);
      bmdp::SparseRow& row = am.rows[s];
      for (int c = 0; c < n; ++c) {
        row.cols.push_back(c);
        row.avg.push_back(avg[c]);
        row.lower.push_back(avg[c] * bmdp::uniform01(rng));
        row.upper.push_back(avg[c] + bmdp::uniform01(rng) * (1.0 - avg[c]));
      }
      const double r = 10.0 * bmdp::uniform01(rng);
      am.r_avg[s] = r;
      am.r_lower[s] = r * bmdp::uniform01(rng);
      am.r_upper[s] = r + 5.0 * bmdp::uniform01(rng);
    }
  }
  return model;
}

// odometer enumeration of all m^n pure policies
inline bool next_policy(bmdp::PurePolicy& pi, int m) {
  for (std::size_t s = 0; s < pi.size(); ++s) {
    if (++pi[s] < m) return true;
    pi[s] = 0;
  }
  return false;
}

// evaluates every pure policy; optionally records each triple
inline std::vector<bmdp::FrontierEntry> enumerate_all(
    const bmdp::IntervalModel& model, const bmdp::SolveConfig& cfg = {},
    std::vector<bmdp::ValueTriple>* record = nullptr) {
  std::vector<bmdp::FrontierEntry> all;
  bmdp::PurePolicy pi(model.n_states, 0);
  do {
    bmdp::FrontierEntry e;
    e.policy = pi;
    e.value = bmdp::eval_policy(model, pi, cfg);
    if (record != nullptr) record->push_back(e.value);
    all.push_back(std::move(e));
  } while (next_policy(pi, model.n_actions));
  return all;
}

inline std::vector<bmdp::FrontierEntry> brute_frontier(
    const bmdp::IntervalModel& model, const bmdp::SolveConfig& cfg = {},
    std::vector<bmdp::ValueTriple>* record = nullptr) {
  return bmdp::po_filter(enumerate_all(model, cfg, record)).entries;
}

inline bool triple_close(const bmdp::ValueTriple& a, const bmdp::ValueTriple& b,
                         double tol) {
  if (a.n_states() != b.n_states()) return false;
  for (std::size_t s = 0; s < a.n_states(); ++s) {
    if (std::abs(a.lower[s] - b.lower[s]) > tol) return false;
    if (std::abs(a.avg[s] - b.avg[s]) > tol) return false;
    if (std::abs(a.upper[s] - b.upper[s]) > tol) return false;
  }
  return true;
}

// set equivalence of the value triples behind two frontiers
inline bool same_value_sets(const std::vector<bmdp::FrontierEntry>& a,
                            const std::vector<bmdp::FrontierEntry>& b, double tol) {
  const auto contained = [&](const std::vector<bmdp::FrontierEntry>& xs,
                             const std::vector<bmdp::FrontierEntry>& ys) {
    for (const bmdp::FrontierEntry& x : xs) {
      bool found = false;
      for (const bmdp::FrontierEntry& y : ys) {
        if (triple_close(x.value, y.value, tol)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  return contained(a, b) && contained(b, a);
}

// number of distinct value triples in a frontier
inline std::size_t distinct_values(const std::vector<bmdp::FrontierEntry>& entries,
                                   double tol) {
  std::vector<bmdp::ValueTriple> seen;
  for (const bmdp::FrontierEntry& e : entries) {
    bool found = false;
    for (const bmdp::ValueTriple& v : seen) {
      if (triple_close(e.value, v, tol)) {
        found = true;
        break;
      }
    }
    if (!found) seen.push_back(e.value);
  }
  return seen.size();
}

// exhaustive vertex enumeration over {p : l <= p <= u, sum p = 1}: at any
// vertex at most one coordinate sits strictly between its bounds
inline double vertex_extremum(const std::vector<double>& lower,
                              const std::vector<double>& upper,
                              const std::vector<double>& v, bmdp::Sense sense) {
  const std::size_t n = lower.size();
  double best = 0.0;
  bool found = false;
  const auto consider = [&](double value) {
    if (!found || (sense == bmdp::Sense::minimize ? value < best : value > best)) {
      best = value;
      found = true;
    }
  };
  for (std::size_t free = 0; free <= n; ++free) {  // free == n: no free coord
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      if (free < n && ((mask >> free) & 1ULL) != 0) continue;  // canonical: free bit low
      double sum = 0.0, value = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == free) continue;
        const double p = ((mask >> i) & 1ULL) != 0 ? upper[i] : lower[i];
        sum += p;
        value += p * v[i];
      }
      if (free == n) {
        if (std::abs(sum - 1.0) <= 1e-12) consider(value);
      } else {
        const double p = 1.0 - sum;
        if (p >= lower[free] - 1e-12 && p <= upper[free] + 1e-12)
          consider(value + p * v[free]);
      }
    }
  }
  return best;
}

// random feasible row box (sum lower <= 1 <= sum upper) around a simplex point
struct RandomBox {
  std::vector<double> lower, upper;
};

inline RandomBox random_box(bmdp::rng_t& rng, int n, bool allow_point = true) {
  RandomBox box;
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  const std::vector<double> centre = bmdp::sample_dirichlet(rng, ones);
  const bool point = allow_point && bmdp::uniform01(rng) < 0.1;
  for (int i = 0; i < n; ++i) {
    if (point) {
      box.lower.push_back(centre[i]);
      box.upper.push_back(centre[i]);
    } else {
      box.lower.push_back(centre[i] * bmdp::uniform01(rng));
      box.upper.push_back(centre[i] + bmdp::uniform01(rng) * (1.0 - centre[i]));
    }
  }
  return box;
}

}  // namespace testutil
