#pragma once

// pure policies, value triples, the strict-dominance partial order over the
// concatenated (worst, average, best) objective vector, and mutually
// non-dominated frontier sets.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "bmdp/util.hpp"

namespace bmdp {

// one action index per state
using PurePolicy = std::vector<int>;

struct PolicyHash {
  std::size_t operator()(const PurePolicy& p) const {
    return static_cast<std::size_t>(fnv1a64(p.data(), p.size() * sizeof(int)));
  }
};

// per-state worst-case, average-case, and best-case discounted values of a
// single policy; the objective vector used for dominance is the
// concatenation of all three.
struct ValueTriple {
  std::vector<double> lower;
  std::vector<double> avg;
  std::vector<double> upper;

  std::size_t n_states() const { return lower.size(); }
};

// default absolute tolerance separating evaluation noise from real
// dominance; every comparison below accepts an override
inline constexpr double kDominanceTol = 1e-9;

enum class Dominance { strictly_dominates, equal, dominated, incomparable };

// compares x against y over the 3n concatenated objectives with an absolute
// tolerance: strictly_dominates means no component more than tol below and
// at least one more than tol above
inline Dominance dominates(const ValueTriple& x, const ValueTriple& y,
                           double tol = kDominanceTol) {
  if (x.lower.size() != y.lower.size() || x.avg.size() != y.avg.size() ||
      x.upper.size() != y.upper.size())
    throw std::invalid_argument("dominates: dimension mismatch");
  bool above = false;
  bool below = false;
  const std::vector<double>* xs[3] = {&x.lower, &x.avg, &x.upper};
  const std::vector<double>* ys[3] = {&y.lower, &y.avg, &y.upper};
  for (int c = 0; c < 3; ++c) {
    const auto& xv = *xs[c];
    const auto& yv = *ys[c];
    for (std::size_t i = 0; i < xv.size(); ++i) {
      const double d = xv[i] - yv[i];
      if (d > tol) above = true;
      else if (d < -tol) below = true;
      if (above && below) return Dominance::incomparable;
    }
  }
  if (above) return Dominance::strictly_dominates;
  if (below) return Dominance::dominated;
  return Dominance::equal;
}

inline bool strictly_dominates(const ValueTriple& x, const ValueTriple& y,
                               double tol = kDominanceTol) {
  return dominates(x, y, tol) == Dominance::strictly_dominates;
}

// x weakly covers y: no component of x sits more than tol below y
inline bool covers(const ValueTriple& x, const ValueTriple& y,
                   double tol = kDominanceTol) {
  const Dominance d = dominates(x, y, tol);
  return d == Dominance::strictly_dominates || d == Dominance::equal;
}

// number of states where the two policies pick different actions
inline int hamming(const PurePolicy& p1, const PurePolicy& p2) {
  if (p1.size() != p2.size()) throw std::invalid_argument("hamming: length mismatch");
  int d = 0;
  for (std::size_t s = 0; s < p1.size(); ++s) d += p1[s] != p2[s] ? 1 : 0;
  return d;
}

struct Neighbor {
  int state;
  int action;
  PurePolicy policy;
};

// every policy at hamming distance one from pi, in ascending
// (state, action) order; exactly n * (m - 1) entries
inline std::vector<Neighbor> neighbors(const PurePolicy& pi, int n_actions) {
  std::vector<Neighbor> out;
  out.reserve(pi.size() * (n_actions > 0 ? n_actions - 1 : 0));
  for (std::size_t s = 0; s < pi.size(); ++s) {
    for (int a = 0; a < n_actions; ++a) {
      if (a == pi[s]) continue;
      Neighbor nb{static_cast<int>(s), a, pi};
      nb.policy[s] = a;
      out.push_back(std::move(nb));
    }
  }
  return out;
}

struct FrontierEntry {
  PurePolicy policy;
  ValueTriple value;
};

enum class InsertOutcome { inserted, dominated, duplicate };

// (policy, value) pairs kept mutually non-dominated, in insertion order.
// truncated / eval_count describe the search that produced the set.
struct FrontierSet {
  std::vector<FrontierEntry> entries;
  bool truncated = false;
  std::size_t eval_count = 0;
  double tol = kDominanceTol;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  // rejects a candidate strictly dominated by (or identical to) a member;
  // otherwise evicts members the candidate strictly dominates and appends.
  // value-equal entries with distinct policies all stay.
  InsertOutcome insert(FrontierEntry entry) {
    for (const auto& e : entries) {
      const Dominance d = dominates(e.value, entry.value, tol);
      if (d == Dominance::strictly_dominates) return InsertOutcome::dominated;
      if (d == Dominance::equal && e.policy == entry.policy) return InsertOutcome::duplicate;
    }
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [&](const FrontierEntry& e) {
                                   return dominates(entry.value, e.value, tol) ==
                                          Dominance::strictly_dominates;
                                 }),
                  entries.end());
    entries.push_back(std::move(entry));
    return InsertOutcome::inserted;
  }
};

// keeps exactly the input entries no other input entry strictly dominates;
// value-equal entries are all kept, exact policy duplicates collapse onto
// their first occurrence.  input order is preserved.
inline FrontierSet po_filter(const std::vector<FrontierEntry>& input,
                             double tol = kDominanceTol) {
  FrontierSet out;
  out.tol = tol;
  std::vector<const FrontierEntry*> unique;
  unique.reserve(input.size());
  std::unordered_set<PurePolicy, PolicyHash> seen;
  for (const auto& e : input) {
    if (seen.insert(e.policy).second) unique.push_back(&e);
  }
  for (const FrontierEntry* e : unique) {
    const bool beaten = std::any_of(unique.begin(), unique.end(), [&](const FrontierEntry* u) {
      return u != e && dominates(u->value, e->value, tol) == Dominance::strictly_dominates;
    });
    if (!beaten) out.entries.push_back(*e);
  }
  return out;
}

}  // namespace bmdp
