#pragma once

// pareto frontier computation over pure policies: the gradient of a policy
// switch, the simultaneous local improvement operator popt, the exact
// breadth-expansion algorithm over the policy hypercube, and the
// gradient-guided heuristic search.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bmdp/model.hpp"
#include "bmdp/policy.hpp"
#include "bmdp/random.hpp"
#include "bmdp/solve.hpp"
#include "bmdp/util.hpp"

namespace bmdp {

// three-component one-step improvement of switching state s to action a,
// measured against the fixed-point values of the current policy
struct Gradient {
  double g_lower = 0.0;
  double g_avg = 0.0;
  double g_upper = 0.0;
};

struct SearchBudget {
  std::size_t max_policies = 50000;  // cap on evaluated policies
  double wall_clock_seconds = 0.0;   // 0 = no time limit
};

// v must be eval_policy(model, pi); the gradient of the kept action is the
// Bellman residual and therefore zero
inline Gradient gradient(const IntervalModel& model, const PurePolicy& pi,
                         const ValueTriple& v, int s, int a) {
  if (pi.size() != v.n_states())
    throw std::invalid_argument("gradient: policy/value size mismatch");
  const SparseRow& row = model.row(s, a);
  Gradient g;
  g.g_lower = model.actions[a].r_lower[s] +
              model.gamma * detail::extremize_value(row, v.lower, Sense::minimize) -
              v.lower[s];
  double dot = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) dot += row.avg[i] * v.avg[row.cols[i]];
  g.g_avg = model.actions[a].r_avg[s] + model.gamma * dot - v.avg[s];
  g.g_upper = model.actions[a].r_upper[s] +
              model.gamma * detail::extremize_value(row, v.upper, Sense::maximize) -
              v.upper[s];
  return g;
}

// gradient dominates zero: no component below -tol, at least one above tol
inline bool improves(const Gradient& g, double tol = kDominanceTol) {
  if (g.g_lower < -tol || g.g_avg < -tol || g.g_upper < -tol) return false;
  return g.g_lower > tol || g.g_avg > tol || g.g_upper > tol;
}

// switches every state independently to the lexicographically smallest
// action whose gradient dominates zero; states without one keep pi's action
inline PurePolicy popt(const IntervalModel& model, const PurePolicy& pi,
                       const ValueTriple& v, double tol = kDominanceTol) {
  PurePolicy out = pi;
  for (int s = 0; s < model.n_states; ++s) {
    for (int a = 0; a < model.n_actions; ++a) {
      if (a == pi[s]) continue;
      if (improves(gradient(model, pi, v, s, a), tol)) {
        out[s] = a;
        break;
      }
    }
  }
  return out;
}

namespace detail {

using EvalMemo = std::unordered_map<PurePolicy, ValueTriple, PolicyHash>;

inline const ValueTriple& memo_eval(EvalMemo& memo, const IntervalModel& model,
                                    const PurePolicy& pi, const SolveConfig& cfg) {
  const auto it = memo.find(pi);
  if (it != memo.end()) return it->second;
  return memo.emplace(pi, eval_policy(model, pi, cfg)).first->second;
}

// iterate {eval; popt} until popt keeps the policy; the visited guard stops
// rounding-level cycles, stop() aborts early on an exhausted budget
template <typename StopFn>
inline std::pair<PurePolicy, ValueTriple> popt_fixpoint(const IntervalModel& model,
                                                        PurePolicy pi, EvalMemo& memo,
                                                        const SolveConfig& cfg, double tol,
                                                        const StopFn& stop) {
  ValueTriple v = memo_eval(memo, model, pi, cfg);
  std::vector<PurePolicy> chain;
  for (;;) {
    if (stop()) break;
    PurePolicy next = popt(model, pi, v, tol);
    if (next == pi) break;
    if (std::find(chain.begin(), chain.end(), next) != chain.end()) break;
    chain.push_back(pi);
    pi = std::move(next);
    v = memo_eval(memo, model, pi, cfg);
  }
  return {std::move(pi), std::move(v)};
}

}  // namespace detail

// exact frontier by breadth expansion: each round admits every distance-one
// child its parent does not strictly dominate, merges the round into the
// frontier, and n_states rounds cover every frontier policy.  policies are
// evaluated at most once; a policy admitted to some round is never
// re-admitted (its children are already covered by that round).
inline FrontierSet pareto_exact(const IntervalModel& model, const SolveConfig& cfg = {},
                                const SearchBudget& budget = {},
                                const PurePolicy* start = nullptr,
                                double tol = kDominanceTol, int jobs = 1) {
  const int n = model.n_states;
  const int m = model.n_actions;
  const Stopwatch clock;
  detail::EvalMemo memo;
  const auto out_of_time = [&] {
    return budget.wall_clock_seconds > 0.0 && clock.seconds() > budget.wall_clock_seconds;
  };

  PurePolicy first = start != nullptr ? *start : PurePolicy(n, 0);
  if (static_cast<int>(first.size()) != n)
    throw std::invalid_argument("pareto_exact: start policy length mismatch");

  FrontierSet frontier;
  frontier.tol = tol;
  frontier.insert({first, detail::memo_eval(memo, model, first, cfg)});

  std::unordered_set<PurePolicy, PolicyHash> admitted{first};
  std::vector<PurePolicy> wave{first};
  bool truncated = false;

  for (int round = 1; round <= n && !wave.empty() && !truncated; ++round) {
    // candidate children in deterministic (parent, state, action) order
    std::vector<std::pair<const PurePolicy*, PurePolicy>> cand;
    for (const PurePolicy& parent : wave) {
      for (int s = 0; s < n; ++s) {
        for (int a = 0; a < m; ++a) {
          if (a == parent[s]) continue;
          PurePolicy child = parent;
          child[s] = a;
          if (admitted.count(child) != 0) continue;
          cand.emplace_back(&parent, std::move(child));
        }
      }
    }

    // evaluate unseen children, first occurrence only, respecting the budget
    std::vector<const PurePolicy*> fresh;
    {
      std::unordered_set<PurePolicy, PolicyHash> queued;
      for (const auto& [parent, child] : cand) {
        if (memo.count(child) != 0 || !queued.insert(child).second) continue;
        if (memo.size() + fresh.size() >= budget.max_policies || out_of_time()) {
          truncated = true;
          break;
        }
        fresh.push_back(&child);
      }
    }
    std::vector<ValueTriple> values(fresh.size());
    parallel_for(jobs, fresh.size(),
                 [&](std::size_t i) { values[i] = eval_policy(model, *fresh[i], cfg); });
    for (std::size_t i = 0; i < fresh.size(); ++i)
      memo.emplace(*fresh[i], std::move(values[i]));

    std::vector<PurePolicy> next_wave;
    for (auto& [parent, child] : cand) {
      if (admitted.count(child) != 0) continue;
      const auto vc = memo.find(child);
      if (vc == memo.end()) continue;  // budget cut the evaluation off
      const ValueTriple& vp = memo.at(*parent);
      if (dominates(vp, vc->second, tol) == Dominance::strictly_dominates) continue;
      frontier.insert({child, vc->second});
      admitted.insert(child);
      next_wave.push_back(std::move(child));
    }
    log_line(2, "exact round " + std::to_string(round) + ": wave " +
                    std::to_string(next_wave.size()) + ", frontier " +
                    std::to_string(frontier.size()) + ", evals " +
                    std::to_string(memo.size()));
    wave.swap(next_wave);
  }

  frontier.truncated = truncated;
  frontier.eval_count = memo.size();
  return frontier;
}

namespace detail {

// fixed-seed zobrist keys for (state, action) assignments let the heuristic
// hash a one-state flip in constant time
struct ZobristTable {
  std::vector<std::uint64_t> keys;
  int m = 0;

  ZobristTable(int n, int m_) : keys(static_cast<std::size_t>(n) * m_), m(m_) {
    rng_t rng(0x5eedfeedULL);
    for (auto& k : keys) k = rng();
  }

  std::uint64_t key(int s, int a) const { return keys[static_cast<std::size_t>(s) * m + a]; }

  std::uint64_t hash(const PurePolicy& pi) const {
    std::uint64_t h = 0;
    for (std::size_t s = 0; s < pi.size(); ++s) h ^= key(static_cast<int>(s), pi[s]);
    return h;
  }
};

}  // namespace detail

// gradient-guided frontier search.  keeps the running approximation PV,
// seeded with the worst-, average-, and best-case optimal policies.  each
// pass sweeps the PV members in insertion order; every member contributes,
// per gradient component, its best unexplored strictly positive neighbor
// flip (ties: state, then action), which is flipped, locally optimized
// with {eval; popt}, and offered to PV.  stops when a full pass leaves PV
// unchanged, no positive gradient component remains, or the budget is hit.
inline FrontierSet pareto_heuristic(const IntervalModel& model, const SolveConfig& cfg = {},
                                    const SearchBudget& budget = {},
                                    double tol = kDominanceTol) {
  const int n = model.n_states;
  const int m = model.n_actions;
  const Stopwatch clock;
  const detail::ZobristTable zobrist(n, m);

  detail::EvalMemo memo;                       // doubles as the explored set
  std::unordered_set<std::uint64_t> explored;  // zobrist keys of memo entries
  const SearchBudget bud = budget;
  const auto budget_hit = [&] {
    if (memo.size() >= bud.max_policies) return true;
    return bud.wall_clock_seconds > 0.0 && clock.seconds() > bud.wall_clock_seconds;
  };
  const auto eval = [&](const PurePolicy& pi) -> const ValueTriple& {
    const auto it = memo.find(pi);
    if (it != memo.end()) return it->second;
    explored.insert(zobrist.hash(pi));
    return memo.emplace(pi, eval_policy(model, pi, cfg)).first->second;
  };

  // one strictly positive gradient component of one neighbor flip
  struct Candidate {
    double g;
    int s;
    int a;
  };
  struct Entry {
    PurePolicy pi;
    ValueTriple v;
    std::uint64_t zkey = 0;
    bool alive = true;
    bool scanned = false;                    // candidate lists prepared
    std::array<std::vector<Candidate>, 3> cand;
    std::array<std::size_t, 3> cursor{0, 0, 0};
  };
  std::vector<Entry> pv;

  // frontier insert over the live entries; eviction only flags dead
  const auto offer = [&](PurePolicy pi, const ValueTriple& v) {
    for (const Entry& e : pv) {
      if (!e.alive) continue;
      const Dominance d = dominates(e.v, v, tol);
      if (d == Dominance::strictly_dominates) return false;
      if (d == Dominance::equal && e.pi == pi) return false;
    }
    for (Entry& e : pv) {
      if (e.alive && dominates(v, e.v, tol) == Dominance::strictly_dominates) e.alive = false;
    }
    Entry entry;
    entry.zkey = zobrist.hash(pi);
    entry.pi = std::move(pi);
    entry.v = v;
    pv.push_back(std::move(entry));
    return true;
  };

  for (const auto& seed : {optimal_lower(model, cfg).policy, optimal_avg(model, cfg).policy,
                           optimal_upper(model, cfg).policy}) {
    offer(seed, eval(seed));
  }

  bool truncated = budget_hit();
  while (!truncated) {
    // register entries born last pass and collect their positive gradients
    for (Entry& e : pv) {
      if (!e.scanned) {
        for (int s = 0; s < n; ++s) {
          for (int a = 0; a < m; ++a) {
            if (a == e.pi[s]) continue;
            const Gradient g = gradient(model, e.pi, e.v, s, a);
            if (g.g_lower > tol) e.cand[0].push_back({g.g_lower, s, a});
            if (g.g_avg > tol) e.cand[1].push_back({g.g_avg, s, a});
            if (g.g_upper > tol) e.cand[2].push_back({g.g_upper, s, a});
          }
        }
        // candidates are generated in ascending (s, a) order, so a stable
        // sort on the value alone keeps the tie order
        for (auto& list : e.cand)
          std::stable_sort(list.begin(), list.end(),
                           [](const Candidate& x, const Candidate& y) { return x.g > y.g; });
        e.scanned = true;
      }
    }
    const std::size_t registered = pv.size();

    // sweep the registered entries in insertion order; each live entry
    // contributes its best unexplored candidate per gradient component
    bool changed = false;
    bool any_positive = false;
    for (std::size_t idx = 0; idx < registered && !truncated; ++idx) {
      if (!pv[idx].alive) continue;
      for (int comp = 0; comp < 3 && !truncated; ++comp) {
        int flip_s = -1;
        int flip_a = -1;
        {
          Entry& e = pv[idx];
          auto& list = e.cand[comp];
          std::size_t& cur = e.cursor[comp];
          // skip flips that have been evaluated already
          while (cur < list.size()) {
            const Candidate& c = list[cur];
            const std::uint64_t flip_key =
                e.zkey ^ zobrist.key(c.s, e.pi[c.s]) ^ zobrist.key(c.s, c.a);
            if (explored.count(flip_key) == 0) break;
            PurePolicy flipped = e.pi;  // confirm: zobrist hit could collide
            flipped[c.s] = c.a;
            if (memo.count(flipped) == 0) break;
            ++cur;
          }
          if (cur >= list.size()) continue;
          flip_s = list[cur].s;
          flip_a = list[cur].a;
          ++cur;
        }
        any_positive = true;
        PurePolicy flipped = pv[idx].pi;  // offer may grow pv: re-index, no refs
        flipped[flip_s] = flip_a;
        auto [local, local_v] =
            detail::popt_fixpoint(model, std::move(flipped), memo, cfg, tol,
                                  [&] { return budget_hit(); });
        if (offer(std::move(local), local_v)) changed = true;
        if (budget_hit()) truncated = true;
      }
    }
    if (truncated) break;
    if (!any_positive) {
      log_line(2, "heuristic stop: all locally non-dominated policies found");
      break;
    }
    if (!changed) {
      log_line(2, "heuristic stop: pass left the frontier unchanged");
      break;
    }
    log_line(2, "heuristic pass done: frontier " + std::to_string(pv.size()) +
                    " entries, evals " + std::to_string(memo.size()));
  }

  FrontierSet out;
  out.tol = tol;
  for (Entry& e : pv) {
    if (e.alive) out.entries.push_back({std::move(e.pi), std::move(e.v)});
  }
  out.truncated = truncated;
  out.eval_count = memo.size();
  return out;
}

}  // namespace bmdp
