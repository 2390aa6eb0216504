#pragma once

// the interval-bounded MDP data model: per-action elementwise bounds on the
// transition matrix together with a designated average matrix inside the
// bounds, reward intervals with designated averages, and a shared discount
// factor.  models are treated as immutable once constructed and validated.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmdp/policy.hpp"

namespace bmdp {

// one transition row in sparse form: ascending column indices with aligned
// lower / average / upper probabilities.  columns not listed are
// structurally zero in all three matrices.
struct SparseRow {
  std::vector<int> cols;
  std::vector<double> lower;
  std::vector<double> avg;
  std::vector<double> upper;

  std::size_t size() const { return cols.size(); }
};

struct ActionModel {
  std::vector<SparseRow> rows;  // one per state
  std::vector<double> r_lower;
  std::vector<double> r_avg;
  std::vector<double> r_upper;
};

struct IntervalModel {
  int n_states = 0;
  int n_actions = 0;
  double gamma = 0.9;
  std::vector<ActionModel> actions;

  const SparseRow& row(int s, int a) const { return actions[a].rows[s]; }
};

inline std::vector<Neighbor> neighbors(const PurePolicy& pi, const IntervalModel& model) {
  return neighbors(pi, model.n_actions);
}

// checks every representation invariant; returns one message per violation
// with (action, state) coordinates.  empty result means the model is well
// formed.  probability sums are checked with slack 1e-12.
inline std::vector<std::string> validate(const IntervalModel& model) {
  constexpr double sum_tol = 1e-12;
  std::vector<std::string> out;
  auto where = [](int a, int s) {
    return "action " + std::to_string(a) + " state " + std::to_string(s);
  };

  if (model.n_states < 1) out.push_back("n_states must be positive");
  if (model.n_actions < 1) out.push_back("n_actions must be positive");
  if (!(model.gamma > 0.0 && model.gamma < 1.0))
    out.push_back("gamma must lie in (0, 1), got " + std::to_string(model.gamma));
  if (static_cast<int>(model.actions.size()) != model.n_actions) {
    out.push_back("actions array has " + std::to_string(model.actions.size()) +
                  " entries, expected " + std::to_string(model.n_actions));
    return out;  // shape is broken; per-entry checks would index out of range
  }

  for (int a = 0; a < model.n_actions; ++a) {
    const ActionModel& am = model.actions[a];
    if (static_cast<int>(am.rows.size()) != model.n_states ||
        static_cast<int>(am.r_lower.size()) != model.n_states ||
        static_cast<int>(am.r_avg.size()) != model.n_states ||
        static_cast<int>(am.r_upper.size()) != model.n_states) {
      out.push_back("action " + std::to_string(a) + ": row/reward arrays must have n_states entries");
      continue;
    }
    for (int s = 0; s < model.n_states; ++s) {
      const SparseRow& row = am.rows[s];
      const std::size_t k = row.size();
      if (row.lower.size() != k || row.avg.size() != k || row.upper.size() != k) {
        out.push_back(where(a, s) + ": misaligned sparse row arrays");
        continue;
      }
      double sum_l = 0.0, sum_a = 0.0, sum_u = 0.0;
      int prev_col = -1;
      for (std::size_t i = 0; i < k; ++i) {
        const int col = row.cols[i];
        if (col < 0 || col >= model.n_states)
          out.push_back(where(a, s) + ": column " + std::to_string(col) + " out of range");
        if (col <= prev_col)
          out.push_back(where(a, s) + ": columns must be strictly ascending");
        prev_col = col;
        const double l = row.lower[i], p = row.avg[i], u = row.upper[i];
        if (!(l >= 0.0) || !(u <= 1.0) || l > u || p < l || p > u)
          out.push_back(where(a, s) + " col " + std::to_string(col) +
                        ": need 0 <= lower <= avg <= upper <= 1, got [" + std::to_string(l) +
                        ", " + std::to_string(p) + ", " + std::to_string(u) + "]");
        sum_l += l;
        sum_a += p;
        sum_u += u;
      }
      if (sum_l > 1.0 + sum_tol)
        out.push_back(where(a, s) + ": lower bounds sum to " + std::to_string(sum_l) + " > 1");
      if (sum_u < 1.0 - sum_tol)
        out.push_back(where(a, s) + ": upper bounds sum to " + std::to_string(sum_u) + " < 1");
      if (std::abs(sum_a - 1.0) > sum_tol)
        out.push_back(where(a, s) + ": average row sums to " + std::to_string(sum_a));
      const double rl = am.r_lower[s], ra = am.r_avg[s], ru = am.r_upper[s];
      if (!(rl >= 0.0) || rl > ra || ra > ru)
        out.push_back(where(a, s) + ": need 0 <= r_lower <= r_avg <= r_upper, got [" +
                      std::to_string(rl) + ", " + std::to_string(ra) + ", " + std::to_string(ru) + "]");
    }
  }
  return out;
}

// fills the designated averages from the bounds: rewards take the interval
// midpoint; each transition row takes the midpoint rescaled to sum one,
// clamped back into its box, with any residual redistributed over the
// remaining slack until the row is stochastic.  throws when a row box
// admits no stochastic vector.
inline void midpoint_average(IntervalModel& model) {
  for (int a = 0; a < model.n_actions; ++a) {
    ActionModel& am = model.actions[a];
    for (int s = 0; s < model.n_states; ++s) {
      SparseRow& row = am.rows[s];
      const std::size_t k = row.size();
      double sum_l = 0.0, sum_u = 0.0, sum_m = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (row.lower[i] > row.upper[i])
          throw std::invalid_argument("midpoint_average: lower > upper in row");
        sum_l += row.lower[i];
        sum_u += row.upper[i];
        sum_m += 0.5 * (row.lower[i] + row.upper[i]);
      }
      if (sum_l > 1.0 + 1e-12 || sum_u < 1.0 - 1e-12)
        throw std::invalid_argument(
            "midpoint_average: no stochastic vector fits the box of action " +
            std::to_string(a) + " state " + std::to_string(s));
      row.avg.resize(k);
      for (std::size_t i = 0; i < k; ++i) {
        const double mid = 0.5 * (row.lower[i] + row.upper[i]);
        row.avg[i] = std::min(row.upper[i], std::max(row.lower[i], mid / sum_m));
      }
      // proportional redistribution over the unclamped slack; feasibility of
      // the box guarantees the remaining headroom always covers the residual
      for (int pass = 0; pass < 64; ++pass) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += row.avg[i];
        const double diff = 1.0 - sum;
        if (std::abs(diff) <= 1e-14) break;
        double room = 0.0;
        for (std::size_t i = 0; i < k; ++i)
          room += diff > 0 ? row.upper[i] - row.avg[i] : row.avg[i] - row.lower[i];
        if (room <= 0.0)
          throw std::invalid_argument("midpoint_average: row cannot be normalized");
        for (std::size_t i = 0; i < k; ++i) {
          if (diff > 0) {
            const double h = row.upper[i] - row.avg[i];
            row.avg[i] = std::min(row.upper[i], row.avg[i] + diff * h / room);
          } else {
            const double h = row.avg[i] - row.lower[i];
            row.avg[i] = std::max(row.lower[i], row.avg[i] + diff * h / room);
          }
        }
      }
    }
    am.r_avg.resize(am.r_lower.size());
    for (std::size_t s = 0; s < am.r_lower.size(); ++s) {
      if (am.r_lower[s] > am.r_upper[s])
        throw std::invalid_argument("midpoint_average: r_lower > r_upper");
      am.r_avg[s] = 0.5 * (am.r_lower[s] + am.r_upper[s]);
    }
  }
}

}  // namespace bmdp
