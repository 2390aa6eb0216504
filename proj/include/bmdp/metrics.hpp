#pragma once

// frontier comparison metrics: two-sided coverage and summary statistics.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "bmdp/policy.hpp"

namespace bmdp {

// coverage of y by x: the fraction of y entries weakly covered (dominated
// or value-equal) by some x entry, and vice versa
struct CoverageReport {
  double c_xy = 0.0;  // fraction of y covered by x
  double c_yx = 0.0;  // fraction of x covered by y
  std::size_t size_x = 0;
  std::size_t size_y = 0;
  std::vector<bool> y_covered;  // per-entry flags, aligned with y
  std::vector<bool> x_covered;
};

inline CoverageReport coverage(const std::vector<ValueTriple>& x,
                               const std::vector<ValueTriple>& y,
                               double tol = kDominanceTol) {
  if (y.empty()) throw std::invalid_argument("coverage: empty reference set");
  CoverageReport report;
  report.size_x = x.size();
  report.size_y = y.size();
  report.y_covered.assign(y.size(), false);
  report.x_covered.assign(x.size(), false);
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (const ValueTriple& v : x) {
      if (covers(v, y[j], tol)) {
        report.y_covered[j] = true;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (const ValueTriple& v : y) {
      if (covers(v, x[i], tol)) {
        report.x_covered[i] = true;
        break;
      }
    }
  }
  const auto frac = [](const std::vector<bool>& flags) {
    if (flags.empty()) return 1.0;  // vacuously full coverage
    const auto hits = std::count(flags.begin(), flags.end(), true);
    return static_cast<double>(hits) / static_cast<double>(flags.size());
  };
  report.c_xy = x.empty() ? 0.0 : frac(report.y_covered);
  report.c_yx = frac(report.x_covered);
  return report;
}

inline std::vector<ValueTriple> frontier_values(const FrontierSet& f) {
  std::vector<ValueTriple> out;
  out.reserve(f.size());
  for (const FrontierEntry& e : f.entries) out.push_back(e.value);
  return out;
}

inline CoverageReport coverage(const FrontierSet& x, const FrontierSet& y,
                               double tol = kDominanceTol) {
  return coverage(frontier_values(x), frontier_values(y), tol);
}

// run counters plus, per objective component, the per-state maxima taken
// over all frontier entries
struct FrontierStats {
  std::size_t policy_count = 0;
  std::size_t eval_count = 0;
  double time_seconds = 0.0;
  std::vector<double> max_lower;  // length n_states, empty for an empty frontier
  std::vector<double> max_avg;
  std::vector<double> max_upper;
};

inline FrontierStats frontier_stats(const FrontierSet& frontier, double time_seconds = 0.0) {
  FrontierStats st;
  st.policy_count = frontier.size();
  st.eval_count = frontier.eval_count;
  st.time_seconds = time_seconds;
  for (const FrontierEntry& e : frontier.entries) {
    const std::size_t n = e.value.n_states();
    if (st.max_lower.empty()) {
      st.max_lower = e.value.lower;
      st.max_avg = e.value.avg;
      st.max_upper = e.value.upper;
      continue;
    }
    for (std::size_t s = 0; s < n; ++s) {
      st.max_lower[s] = std::max(st.max_lower[s], e.value.lower[s]);
      st.max_avg[s] = std::max(st.max_avg[s], e.value.avg[s]);
      st.max_upper[s] = std::max(st.max_upper[s], e.value.upper[s]);
    }
  }
  return st;
}

}  // namespace bmdp
