#pragma once

// fixed-policy evaluation and the three single-objective optimal policies of
// an interval model: worst case (robust), average, and best case
// (optimistic).  the inner optimization over one transition-row box is the
// greedy order-statistics mass shift, which attains the exact polytope
// optimum; the induced linear systems are solved with Eigen.

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmdp/model.hpp"
#include "bmdp/policy.hpp"
#include "bmdp/util.hpp"

namespace bmdp {

// elementwise probability bounds for one (state, action) transition row
struct RowBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

enum class Sense { minimize, maximize };
enum class LinearSolver { automatic, direct, iterative };

struct SolveConfig {
  double epsilon = 1e-8;  // sup-norm convergence tolerance
  int max_iters = 100000;
  LinearSolver linear_solver = LinearSolver::automatic;
};

namespace detail {

// direct solvers below this size go through dense LU
inline constexpr int kDenseSolveLimit = 128;
// automatic solver selection switches to the preconditioned iterative
// solver above this size
inline constexpr int kDirectSolveLimit = 2000;

// greedy mass shift over one row box restricted to k support entries.
// starts every coordinate at its lower bound and hands the slack 1 - sum(l)
// to coordinates in ascending (minimize) or descending (maximize) value
// order, capping at the upper bound; ties in value go to the lower index.
// fills probs (aligned with the support) and returns sum p_i * v_i.
inline double extremize_support(const double* lower, const double* upper,
                                const double* value, std::size_t k, Sense sense,
                                double* probs) {
  double slack = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    probs[i] = lower[i];
    slack -= lower[i];
  }
  if (slack < 0.0) {
    if (slack < -1e-9) throw std::invalid_argument("extremize_row: lower bounds sum above 1");
    slack = 0.0;
  }
  if (slack == 0.0) {
    // no mass to distribute: the lower bounds already form the row
    double dot = 0.0;
    for (std::size_t i = 0; i < k; ++i) dot += probs[i] * value[i];
    return dot;
  }
  static thread_local std::vector<int> order;
  order.resize(k);
  std::iota(order.begin(), order.end(), 0);
  if (sense == Sense::minimize)
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return value[x] != value[y] ? value[x] < value[y] : x < y;
    });
  else
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return value[x] != value[y] ? value[x] > value[y] : x < y;
    });
  for (const int idx : order) {
    if (slack <= 0.0) break;
    const double add = std::min(upper[idx] - lower[idx], slack);
    probs[idx] += add;
    slack -= add;
  }
  if (slack > 1e-9) throw std::invalid_argument("extremize_row: upper bounds sum below 1");
  double dot = 0.0;
  for (std::size_t i = 0; i < k; ++i) dot += probs[i] * value[i];
  return dot;
}

// extremize one sparse row against a full value vector; probs comes back
// aligned with row.cols
inline double extremize_sparse(const SparseRow& row, const std::vector<double>& v,
                               Sense sense, std::vector<double>& probs) {
  const std::size_t k = row.size();
  static thread_local std::vector<double> vals;
  vals.resize(k);
  for (std::size_t i = 0; i < k; ++i) vals[i] = v[row.cols[i]];
  probs.resize(k);
  return extremize_support(row.lower.data(), row.upper.data(), vals.data(), k, sense,
                           probs.data());
}

// value-only variant used by the optimal-policy sweeps
inline double extremize_value(const SparseRow& row, const std::vector<double>& v, Sense sense) {
  if (row.lower == row.upper) {
    // degenerate box: the bounds are the only feasible row
    double dot = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) dot += row.lower[i] * v[row.cols[i]];
    return dot;
  }
  static thread_local std::vector<double> probs;
  return extremize_sparse(row, v, sense, probs);
}

// solves (I - gamma P) x = r where row s of P is (cols[s], probs[s]).
// warm, when given, seeds the iterative solver.
inline std::vector<double> solve_markov_system(
    int n, double gamma, const std::vector<const std::vector<int>*>& cols,
    const std::vector<const std::vector<double>*>& probs, const std::vector<double>& r,
    const SolveConfig& cfg, const std::vector<double>* warm) {
  const bool direct = cfg.linear_solver == LinearSolver::direct ||
                      (cfg.linear_solver == LinearSolver::automatic && n <= kDirectSolveLimit);
  Eigen::Map<const Eigen::VectorXd> b(r.data(), n);
  Eigen::VectorXd x;
  if (direct && n <= kDenseSolveLimit) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (int s = 0; s < n; ++s) {
      const auto& c = *cols[s];
      const auto& p = *probs[s];
      for (std::size_t i = 0; i < c.size(); ++i) a(s, c[i]) -= gamma * p[i];
    }
    x = a.partialPivLu().solve(b);
  } else {
    std::vector<Eigen::Triplet<double>> trips;
    std::size_t nnz = n;
    for (int s = 0; s < n; ++s) nnz += cols[s]->size();
    trips.reserve(nnz);
    for (int s = 0; s < n; ++s) trips.emplace_back(s, s, 1.0);
    for (int s = 0; s < n; ++s) {
      const auto& c = *cols[s];
      const auto& p = *probs[s];
      for (std::size_t i = 0; i < c.size(); ++i) trips.emplace_back(s, c[i], -gamma * p[i]);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    if (direct) {
      Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
      solver.compute(a);
      if (solver.info() != Eigen::Success)
        throw std::runtime_error("policy system factorization failed (singular matrix?)");
      x = solver.solve(b);
    } else {
      Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> solver;
      solver.setTolerance(1e-12);
      solver.setMaxIterations(std::max(1000, 20 * n));
      solver.compute(a);
      if (warm != nullptr) {
        Eigen::Map<const Eigen::VectorXd> guess(warm->data(), n);
        x = solver.solveWithGuess(b, guess);
      } else {
        x = solver.solve(b);
      }
      if (solver.info() != Eigen::Success)
        throw std::runtime_error("iterative policy solve did not converge, residual " +
                                 std::to_string(solver.error()));
    }
  }
  return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace detail

struct ExtremizedRow {
  std::vector<double> probs;
  double value = 0.0;
};

// chooses the stochastic row inside the box attaining the exact optimum of
// p . v; the returned row sums to one up to accumulated rounding
inline ExtremizedRow extremize_row(const RowBox& box, const std::vector<double>& v, Sense sense) {
  if (box.lower.size() != box.upper.size() || box.lower.size() != v.size())
    throw std::invalid_argument("extremize_row: size mismatch");
  ExtremizedRow out;
  out.probs.resize(v.size());
  out.value = detail::extremize_support(box.lower.data(), box.upper.data(), v.data(),
                                        v.size(), sense, out.probs.data());
  return out;
}

namespace detail {

// worst- or best-case component of a fixed policy: alternate row
// extremization against the current value with exact evaluation of the
// selected matrix until the selection repeats; the value-change guard
// covers ties that make the selection flicker at rounding level.
inline std::vector<double> robust_component(const IntervalModel& model,
                                            const std::vector<const SparseRow*>& rows,
                                            const std::vector<double>& r, Sense sense,
                                            const std::vector<double>& warm,
                                            const SolveConfig& cfg) {
  const int n = model.n_states;
  std::vector<std::vector<double>> sel(n), next(n);
  std::vector<const std::vector<int>*> cols(n);
  std::vector<const std::vector<double>*> probs(n);
  for (int s = 0; s < n; ++s) {
    cols[s] = &rows[s]->cols;
    extremize_sparse(*rows[s], warm, sense, sel[s]);
  }
  std::vector<double> v = warm;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    for (int s = 0; s < n; ++s) probs[s] = &sel[s];
    std::vector<double> v_new = solve_markov_system(n, model.gamma, cols, probs, r, cfg, &v);
    bool changed = false;
    for (int s = 0; s < n; ++s) {
      extremize_sparse(*rows[s], v_new, sense, next[s]);
      changed = changed || next[s] != sel[s];
    }
    double delta = 0.0;
    for (int s = 0; s < n; ++s) delta = std::max(delta, std::abs(v_new[s] - v[s]));
    v = std::move(v_new);
    if (!changed) return v;
    sel.swap(next);
    if (delta <= cfg.epsilon) return v;
  }
  throw std::runtime_error("eval_policy: matrix fixpoint did not converge within max_iters");
}

}  // namespace detail

// evaluates a fixed policy: the average component solves the linear system
// of the designated average model directly; the worst and best components
// re-extremize the selected rows until the selection is stable, warm
// started from the average values.
inline ValueTriple eval_policy(const IntervalModel& model, const PurePolicy& pi,
                               const SolveConfig& cfg = {}) {
  const int n = model.n_states;
  if (static_cast<int>(pi.size()) != n)
    throw std::invalid_argument("eval_policy: policy length mismatch");
  std::vector<const SparseRow*> rows(n);
  std::vector<const std::vector<int>*> cols(n);
  std::vector<const std::vector<double>*> probs(n);
  std::vector<double> r_lower(n), r_avg(n), r_upper(n);
  for (int s = 0; s < n; ++s) {
    const int a = pi[s];
    if (a < 0 || a >= model.n_actions)
      throw std::invalid_argument("eval_policy: action index out of range");
    rows[s] = &model.row(s, a);
    cols[s] = &rows[s]->cols;
    probs[s] = &rows[s]->avg;
    r_lower[s] = model.actions[a].r_lower[s];
    r_avg[s] = model.actions[a].r_avg[s];
    r_upper[s] = model.actions[a].r_upper[s];
  }
  ValueTriple out;
  out.avg = detail::solve_markov_system(n, model.gamma, cols, probs, r_avg, cfg, nullptr);
  out.lower = detail::robust_component(model, rows, r_lower, Sense::minimize, out.avg, cfg);
  out.upper = detail::robust_component(model, rows, r_upper, Sense::maximize, out.avg, cfg);
  return out;
}

struct OptimalResult {
  PurePolicy policy;
  std::vector<double> value;
};

namespace detail {

// shared optimal-policy sweep; mode selects the backup:
//   worst   max_a [ r_lower + gamma * min_p p.v ]
//   best    max_a [ r_upper + gamma * max_p p.v ]
//   average max_a [ r_avg   + gamma * p_avg . v ]
enum class Objective { worst, average, best };

inline OptimalResult optimal_sweep(const IntervalModel& model, Objective obj,
                                   const SolveConfig& cfg) {
  const int n = model.n_states;
  const int m = model.n_actions;
  const double threshold =
      cfg.epsilon * (1.0 - model.gamma) / (2.0 * model.gamma);
  std::vector<double> v(n, 0.0), v_new(n);
  auto backup = [&](int s, int a) {
    const SparseRow& row = model.row(s, a);
    switch (obj) {
      case Objective::worst:
        return model.actions[a].r_lower[s] +
               model.gamma * extremize_value(row, v, Sense::minimize);
      case Objective::best:
        return model.actions[a].r_upper[s] +
               model.gamma * extremize_value(row, v, Sense::maximize);
      default: {
        double dot = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) dot += row.avg[i] * v[row.cols[i]];
        return model.actions[a].r_avg[s] + model.gamma * dot;
      }
    }
  };
  bool converged = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    double delta = 0.0;
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < m; ++a) best = std::max(best, backup(s, a));
      delta = std::max(delta, std::abs(best - v[s]));
      v_new[s] = best;
    }
    v.swap(v_new);
    if (delta <= threshold) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("optimal policy iteration cap exceeded before convergence");
  // greedy policy: lexicographically smallest maximizing action
  PurePolicy pi(n, 0);
  for (int s = 0; s < n; ++s) {
    double best = backup(s, 0);
    for (int a = 1; a < m; ++a) {
      const double q = backup(s, a);
      if (q > best) {
        best = q;
        pi[s] = a;
      }
    }
  }
  const ValueTriple tv = eval_policy(model, pi, cfg);
  OptimalResult out;
  out.policy = std::move(pi);
  switch (obj) {
    case Objective::worst: out.value = tv.lower; break;
    case Objective::average: out.value = tv.avg; break;
    case Objective::best: out.value = tv.upper; break;
  }
  return out;
}

}  // namespace detail

// robust value iteration: the policy maximizing the worst-case value vector
inline OptimalResult optimal_lower(const IntervalModel& model, const SolveConfig& cfg = {}) {
  return detail::optimal_sweep(model, detail::Objective::worst, cfg);
}

// optimistic value iteration: the policy maximizing the best-case value vector
inline OptimalResult optimal_upper(const IntervalModel& model, const SolveConfig& cfg = {}) {
  return detail::optimal_sweep(model, detail::Objective::best, cfg);
}

// standard value iteration on the designated average model
inline OptimalResult optimal_avg(const IntervalModel& model, const SolveConfig& cfg = {}) {
  return detail::optimal_sweep(model, detail::Objective::average, cfg);
}

}  // namespace bmdp
