#pragma once

// seeded benchmark generators: the energy-aware server queue, the random
// dirichlet grid, and the deterministic antique-gallery grid, plus the
// gaussian interval-widening utility they share.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmdp/model.hpp"
#include "bmdp/random.hpp"

namespace bmdp {

// widens one nominal row in place: per entry, lower/upper move away from
// the average by independent half-normal draws, clamped into [0, avg] and
// [avg, 1].  zero entries stay [0, 0].  the clamps already guarantee
// sum(lower) <= 1 <= sum(upper); the proportional shrink below is a
// defensive repair should the sums ever degenerate.
inline void widen_with_noise(SparseRow& row, double sd, rng_t& rng) {
  if (sd < 0.0) throw std::invalid_argument("widen_with_noise: negative sd");
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double p = row.avg[i];
    if (p == 0.0) {
      row.lower[i] = 0.0;
      row.upper[i] = 0.0;
      continue;
    }
    const double down = std::abs(sample_normal(rng)) * sd;
    const double up = std::abs(sample_normal(rng)) * sd;
    row.lower[i] = std::clamp(p - down, 0.0, p);
    row.upper[i] = std::clamp(p + up, p, 1.0);
  }
  double sum_lower = 0.0, sum_upper = 0.0, sum_avg = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    sum_lower += row.lower[i];
    sum_upper += row.upper[i];
    sum_avg += row.avg[i];
  }
  if (sum_lower > 1.0) {
    const double denom = sum_lower - sum_avg;
    const double scale = denom > 0.0 ? (1.0 - sum_avg) / denom : 0.0;
    for (std::size_t i = 0; i < row.size(); ++i)
      row.lower[i] = row.avg[i] + (row.lower[i] - row.avg[i]) * std::max(0.0, scale);
  }
  if (sum_upper < 1.0) {
    const double denom = sum_avg - sum_upper;
    const double scale = denom > 0.0 ? (sum_avg - 1.0) / denom : 0.0;
    for (std::size_t i = 0; i < row.size(); ++i)
      row.upper[i] = row.avg[i] + (row.upper[i] - row.avg[i]) * std::max(0.0, scale);
  }
}

// widens every transition row of the model, actions then states in order
inline void widen_with_noise(IntervalModel& model, double sd, rng_t& rng) {
  for (ActionModel& action : model.actions)
    for (SparseRow& row : action.rows) widen_with_noise(row, sd, rng);
}

// ---------------------------------------------------------------------------
// server queue

struct QueueConfig {
  int m = 2;                // queue capacity
  int c = 3;                // server count
  double p = 0.25;          // arrival probability per slot
  double q = 0.15;          // service completion probability per busy server
  double nu = 0.1;          // start completion probability per starting server
  double omega1 = 1.0;      // energy weight of an "on" server
  double omega2 = 2.0;      // energy weight of a "start" server
  double omega3 = 0.1;      // energy weight of an "off" server
  double noise_sd = 1e-5;   // interval half-width scale; keep small so the
                            // exact frontier search stays tractable
  std::uint64_t rng_seed = 0;
  double gamma = 0.9;
};

inline void queue_check(const QueueConfig& cfg) {
  if (cfg.m < 1 || cfg.c < 1) throw std::invalid_argument("queue: need m >= 1 and c >= 1");
  const auto in01 = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in01(cfg.p) || !in01(cfg.q) || !in01(cfg.nu))
    throw std::invalid_argument("queue: p, q, nu must lie in (0,1)");
  if (cfg.p + cfg.c * std::max(cfg.q, cfg.nu) > 1.0)
    throw std::invalid_argument("queue: infeasible, p + c*max(q,nu) > 1");
  if (cfg.omega1 <= 0.0 || cfg.omega2 <= 0.0 || cfg.omega3 <= 0.0)
    throw std::invalid_argument("queue: energy weights must be positive");
}

inline int queue_state_count(const QueueConfig& cfg) {
  return (cfg.m + 1) * (cfg.c + 1) * (cfg.c + 2) / 2;
}

// states are tuples (i, j, k, l): i customers, j servers on, k starting,
// l = c - j - k off.  index = base(i) + offset(j, k).
inline int queue_encode(const QueueConfig& cfg, int i, int j, int k) {
  const int c = cfg.c;
  if (i < 0 || i > cfg.m || j < 0 || k < 0 || j + k > c)
    throw std::invalid_argument("queue_encode: tuple out of range");
  return i * (c + 1) * (c + 2) / 2 + j * (c + 1) - j * (j - 1) / 2 + k;
}

struct QueueState {
  int i = 0, j = 0, k = 0, l = 0;
};

inline QueueState queue_decode(const QueueConfig& cfg, int index) {
  const int c = cfg.c;
  const int per_i = (c + 1) * (c + 2) / 2;
  if (index < 0 || index >= queue_state_count(cfg))
    throw std::invalid_argument("queue_decode: index out of range");
  QueueState st;
  st.i = index / per_i;
  int rest = index % per_i;
  for (st.j = 0; st.j <= c; ++st.j) {
    const int rows = c + 1 - st.j;
    if (rest < rows) break;
    rest -= rows;
  }
  st.k = rest;
  st.l = c - st.j - st.k;
  return st;
}

// three actions: 0 switches one idle "on" server off, 1 is a no-op, 2
// switches one "off" server to "start".  after the switch exactly one slot
// event happens: an arrival (p, if the queue has room), one service
// completion (min(i,j)*q), one start completion (k*nu), or nothing.
inline IntervalModel gen_queue(const QueueConfig& cfg) {
  queue_check(cfg);
  const int n = queue_state_count(cfg);
  IntervalModel model;
  model.n_states = n;
  model.n_actions = 3;
  model.gamma = cfg.gamma;
  model.actions.assign(3, ActionModel{});

  for (ActionModel& am : model.actions) {
    am.rows.resize(n);
    am.r_lower.resize(n);
    am.r_avg.resize(n);
    am.r_upper.resize(n);
  }

  for (int s = 0; s < n; ++s) {
    const QueueState st = queue_decode(cfg, s);
    const double reward =
        static_cast<double>(cfg.m - st.i) /
        (st.j * cfg.omega1 + st.k * cfg.omega2 + st.l * cfg.omega3);
    for (int a = 0; a < 3; ++a) {
      int j = st.j, k = st.k, l = st.l;
      if (a == 0 && j > st.i) {  // an idle on-server exists
        --j;
        ++l;
      } else if (a == 2 && l > 0) {
        ++k;
        --l;
      }
      const double p_arrival = st.i < cfg.m ? cfg.p : 0.0;
      const double p_service = std::min(st.i, j) * cfg.q;
      const double p_start = k * cfg.nu;
      const double p_stay = 1.0 - p_arrival - p_service - p_start;

      std::map<int, double> probs;
      if (p_arrival > 0.0) probs[queue_encode(cfg, st.i + 1, j, k)] += p_arrival;
      if (p_service > 0.0) probs[queue_encode(cfg, st.i - 1, j, k)] += p_service;
      if (p_start > 0.0) probs[queue_encode(cfg, st.i, j + 1, k - 1)] += p_start;
      if (p_stay > 0.0) probs[queue_encode(cfg, st.i, j, k)] += p_stay;

      SparseRow& row = model.actions[a].rows[s];
      for (const auto& [col, mass] : probs) {
        row.cols.push_back(col);
        row.lower.push_back(mass);
        row.avg.push_back(mass);
        row.upper.push_back(mass);
      }
      model.actions[a].r_lower[s] = reward;
      model.actions[a].r_avg[s] = reward;
      model.actions[a].r_upper[s] = reward;
    }
  }

  rng_t rng(cfg.rng_seed);
  widen_with_noise(model, cfg.noise_sd, rng);
  return model;
}

// ---------------------------------------------------------------------------
// dirichlet grid

struct GridConfig {
  int n_rows = 5;
  int m_cols = 5;             // also the number of actions
  double reward_mean = 100.0;
  double reward_var = 20.0;   // variance, not standard deviation
  double alpha_match = 10.0;  // concentration on the column the action names
  double alpha_other = 1.0;
  double noise_sd = 0.0;      // point transitions by default; set > 0 to widen
  std::uint64_t rng_seed = 0;
  double gamma = 0.9;
};

// n_rows x m_cols states with m_cols actions.  action a from row i jumps
// to the row below (clamped) with a dirichlet-drawn column distribution
// concentrated on column a; rewards are per (state, action) normal draws
// clamped at zero, identical across the three bounds.
inline IntervalModel gen_grid(const GridConfig& cfg) {
  if (cfg.n_rows < 1 || cfg.m_cols < 1)
    throw std::invalid_argument("grid: need n_rows >= 1 and m_cols >= 1");
  if (cfg.alpha_match <= 0.0 || cfg.alpha_other <= 0.0)
    throw std::invalid_argument("grid: concentration parameters must be positive");
  if (cfg.reward_var < 0.0) throw std::invalid_argument("grid: negative reward variance");

  const int n = cfg.n_rows * cfg.m_cols;
  const int m = cfg.m_cols;
  const double reward_sd = std::sqrt(cfg.reward_var);
  IntervalModel model;
  model.n_states = n;
  model.n_actions = m;
  model.gamma = cfg.gamma;
  model.actions.assign(m, ActionModel{});
  for (ActionModel& am : model.actions) {
    am.rows.resize(n);
    am.r_lower.resize(n);
    am.r_avg.resize(n);
    am.r_upper.resize(n);
  }

  rng_t rng(cfg.rng_seed);
  std::vector<double> alpha(m), probs;
  for (int i = 0; i < cfg.n_rows; ++i) {
    const int next_row = std::min(cfg.n_rows - 1, i + 1);
    for (int j = 0; j < m; ++j) {
      const int s = i * m + j;
      for (int a = 0; a < m; ++a) {
        for (int col = 0; col < m; ++col)
          alpha[col] = col == a ? cfg.alpha_match : cfg.alpha_other;
        probs = sample_dirichlet(rng, alpha);
        SparseRow& row = model.actions[a].rows[s];
        row.cols.resize(m);
        row.lower.resize(m);
        row.avg.resize(m);
        row.upper.resize(m);
        for (int col = 0; col < m; ++col) {
          row.cols[col] = next_row * m + col;
          row.lower[col] = probs[col];
          row.avg[col] = probs[col];
          row.upper[col] = probs[col];
        }
        const double r = std::max(0.0, sample_normal(rng, cfg.reward_mean, reward_sd));
        model.actions[a].r_lower[s] = r;
        model.actions[a].r_avg[s] = r;
        model.actions[a].r_upper[s] = r;
      }
    }
  }

  widen_with_noise(model, cfg.noise_sd, rng);
  return model;
}

// ---------------------------------------------------------------------------
// antique gallery grid

struct AntgConfig {
  int n = 10;                  // grid side, n >= 10
  double gamma = 0.9;
  bool diagonal_upper = false;  // give diagonal cells the i <= j action pair
};

// weight class of a cell: 1 on the outer band, 2 on the middle band, and
// the uncertain interval [3, 4] in the centre
enum class AntgWeight { outer, middle, centre };

inline AntgWeight antg_weight(const AntgConfig& cfg, int i, int j) {
  const double mu = (cfg.n - 1) / 2.0;
  const double di = std::abs(i - mu);
  const double dj = std::abs(j - mu);
  const double band1 = cfg.n / 5.0;
  const double band2 = cfg.n / 10.0;
  if (di > band1 || dj > band1) return AntgWeight::outer;
  if (di > band2 || dj > band2) return AntgWeight::middle;
  return AntgWeight::centre;
}

// n x n cells with two composite moves each: lower-triangle cells (i >= j)
// move NE or NW, upper-triangle cells (i <= j) move NE or SE, with the
// diagonal assigned by cfg.diagonal_upper.  centre cells take the chosen
// direction with probability [0.8, 1] and leak [0, 0.2] onto the other
// action's destination; all other cells move deterministically.
inline IntervalModel gen_antg(const AntgConfig& cfg) {
  if (cfg.n < 10) throw std::invalid_argument("antg: need n >= 10");
  const int n_side = cfg.n;
  const int n = n_side * n_side;
  IntervalModel model;
  model.n_states = n;
  model.n_actions = 2;
  model.gamma = cfg.gamma;
  model.actions.assign(2, ActionModel{});
  for (ActionModel& am : model.actions) {
    am.rows.resize(n);
    am.r_lower.resize(n);
    am.r_avg.resize(n);
    am.r_upper.resize(n);
  }

  const auto clamp_side = [&](int x) { return std::clamp(x, 0, n_side - 1); };
  const auto idx = [&](int i, int j) { return i * n_side + j; };
  for (int i = 0; i < n_side; ++i) {
    for (int j = 0; j < n_side; ++j) {
      const int s = idx(i, j);
      const AntgWeight w = antg_weight(cfg, i, j);
      double rl = 1.0, ra = 1.0, ru = 1.0;
      if (w == AntgWeight::middle) rl = ra = ru = 2.0;
      if (w == AntgWeight::centre) {
        rl = 3.0;
        ra = 3.5;
        ru = 4.0;
      }
      const bool lower_pair = i > j || (i == j && !cfg.diagonal_upper);
      const int ne = idx(clamp_side(i + 1), clamp_side(j + 1));
      const int alt = lower_pair ? idx(clamp_side(i + 1), clamp_side(j - 1))
                                 : idx(clamp_side(i - 1), clamp_side(j + 1));
      const int dest[2] = {ne, alt};
      for (int a = 0; a < 2; ++a) {
        std::map<int, std::array<double, 3>> probs;  // col -> (lower, avg, upper)
        if (w == AntgWeight::centre) {
          auto& main = probs[dest[a]];
          main[0] += 0.8;
          main[1] += 0.8;
          main[2] += 1.0;
          auto& leak = probs[dest[1 - a]];
          leak[1] += 0.2;
          leak[2] += 0.2;
        } else {
          auto& main = probs[dest[a]];
          main[0] += 1.0;
          main[1] += 1.0;
          main[2] += 1.0;
        }
        SparseRow& row = model.actions[a].rows[s];
        for (const auto& [col, lau] : probs) {
          row.cols.push_back(col);
          row.lower.push_back(std::min(lau[0], 1.0));
          row.avg.push_back(std::min(lau[1], 1.0));
          row.upper.push_back(std::min(lau[2], 1.0));
        }
        model.actions[a].r_lower[s] = rl;
        model.actions[a].r_avg[s] = ra;
        model.actions[a].r_upper[s] = ru;
      }
    }
  }
  return model;
}

}  // namespace bmdp
