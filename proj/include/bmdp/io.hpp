#pragma once

// json serialization for models and experiment results, instance
// fingerprints, and small csv helpers for the experiment harness.

#include <json.hpp>

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmdp/metrics.hpp"
#include "bmdp/model.hpp"
#include "bmdp/policy.hpp"
#include "bmdp/util.hpp"

namespace bmdp {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// model files

// wire format: {n_states, n_actions, gamma, actions: [{p_lower, p_avg,
// p_upper: per-state arrays of [col, value] pairs; r_lower, r_avg,
// r_upper: per-state arrays}]}; zero entries are omitted per matrix
inline json model_to_json(const IntervalModel& model) {
  json j;
  j["n_states"] = model.n_states;
  j["n_actions"] = model.n_actions;
  j["gamma"] = model.gamma;
  j["actions"] = json::array();
  for (const ActionModel& am : model.actions) {
    json ja;
    for (const char* key : {"p_lower", "p_avg", "p_upper"}) {
      json rows = json::array();
      for (const SparseRow& row : am.rows) {
        json jrow = json::array();
        for (std::size_t i = 0; i < row.size(); ++i) {
          const double v = key[2] == 'l'   ? row.lower[i]
                           : key[2] == 'a' ? row.avg[i]
                                           : row.upper[i];
          if (v != 0.0) jrow.push_back(json::array({row.cols[i], v}));
        }
        rows.push_back(std::move(jrow));
      }
      ja[key] = std::move(rows);
    }
    ja["r_lower"] = am.r_lower;
    ja["r_avg"] = am.r_avg;
    ja["r_upper"] = am.r_upper;
    j["actions"].push_back(std::move(ja));
  }
  return j;
}

inline IntervalModel model_from_json(const json& j) {
  IntervalModel model;
  model.n_states = j.at("n_states").get<int>();
  model.n_actions = j.at("n_actions").get<int>();
  model.gamma = j.at("gamma").get<double>();
  const json& actions = j.at("actions");
  if (!actions.is_array())
    throw std::invalid_argument("model: \"actions\" must be an array");
  for (const json& ja : actions) {
    ActionModel am;
    am.r_lower = ja.at("r_lower").get<std::vector<double>>();
    am.r_avg = ja.at("r_avg").get<std::vector<double>>();
    am.r_upper = ja.at("r_upper").get<std::vector<double>>();
    const json& pl = ja.at("p_lower");
    const json& pa = ja.at("p_avg");
    const json& pu = ja.at("p_upper");
    const std::size_t n = pa.size();
    if (pl.size() != n || pu.size() != n)
      throw std::invalid_argument("model: matrix row counts disagree");
    am.rows.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      // union of the three column sets; absent entries read as zero
      std::map<int, std::array<double, 3>> merged;
      const json* mats[3] = {&pl, &pa, &pu};
      for (int which = 0; which < 3; ++which) {
        for (const json& pair : (*mats[which])[s]) {
          if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("model: row entries must be [col, value] pairs");
          merged[pair[0].get<int>()][which] = pair[1].get<double>();
        }
      }
      SparseRow& row = am.rows[s];
      for (const auto& [col, lau] : merged) {
        row.cols.push_back(col);
        row.lower.push_back(lau[0]);
        row.avg.push_back(lau[1]);
        row.upper.push_back(lau[2]);
      }
    }
    model.actions.push_back(std::move(am));
  }
  return model;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

// fingerprint of a model file's exact bytes, as 16 hex digits
inline std::string instance_id_of_bytes(const std::string& bytes) {
  const std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline void save_model(const std::string& path, const IntervalModel& model) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

struct LoadedModel {
  IntervalModel model;
  std::string instance_id;
};

inline LoadedModel load_model(const std::string& path) {
  const std::string bytes = read_text_file(path);
  LoadedModel out;
  out.model = model_from_json(json::parse(bytes));
  out.instance_id = instance_id_of_bytes(bytes);
  return out;
}

// ---------------------------------------------------------------------------
// experiment results

struct ExperimentResult {
  std::string instance_id;
  std::string algorithm;
  std::size_t policy_count = 0;
  std::size_t eval_count = 0;
  double wall_seconds = 0.0;
  bool truncated = false;
  std::vector<FrontierEntry> frontier;
  json config = json::object();  // flag echo for provenance
};

inline json result_to_json(const ExperimentResult& r) {
  json j;
  j["instance_id"] = r.instance_id;
  j["algorithm"] = r.algorithm;
  j["policy_count"] = r.policy_count;
  j["eval_count"] = r.eval_count;
  j["wall_seconds"] = r.wall_seconds;
  j["truncated"] = r.truncated;
  j["config"] = r.config;
  j["frontier"] = json::array();
  for (const FrontierEntry& e : r.frontier) {
    json je;
    je["policy"] = e.policy;
    je["v_lower"] = e.value.lower;
    je["v_avg"] = e.value.avg;
    je["v_upper"] = e.value.upper;
    j["frontier"].push_back(std::move(je));
  }
  return j;
}

// parses a result and rejects frontiers with internally dominated entries
inline ExperimentResult result_from_json(const json& j) {
  ExperimentResult r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.policy_count = j.at("policy_count").get<std::size_t>();
  r.eval_count = j.at("eval_count").get<std::size_t>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  r.truncated = j.at("truncated").get<bool>();
  r.config = j.value("config", json::object());
  for (const json& je : j.at("frontier")) {
    FrontierEntry e;
    e.policy = je.at("policy").get<PurePolicy>();
    e.value.lower = je.at("v_lower").get<std::vector<double>>();
    e.value.avg = je.at("v_avg").get<std::vector<double>>();
    e.value.upper = je.at("v_upper").get<std::vector<double>>();
    r.frontier.push_back(std::move(e));
  }
  for (std::size_t a = 0; a < r.frontier.size(); ++a) {
    for (std::size_t b = a + 1; b < r.frontier.size(); ++b) {
      const Dominance d = dominates(r.frontier[a].value, r.frontier[b].value);
      if (d == Dominance::strictly_dominates || d == Dominance::dominated)
        throw std::runtime_error("result frontier is not mutually non-dominated");
    }
  }
  return r;
}

inline void save_result(const std::string& path, const ExperimentResult& r) {
  write_text_file(path, result_to_json(r).dump(2) + "\n");
}

inline ExperimentResult load_result(const std::string& path) {
  return result_from_json(json::parse(read_text_file(path)));
}

// ---------------------------------------------------------------------------
// csv

inline std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) line += ',';
    line += fields[i];
  }
  return line;
}

// appends a row, writing the header first when the file is new or empty
inline void append_csv_row(const std::string& path, const std::string& header,
                           const std::string& row) {
  bool need_header = true;
  {
    std::ifstream probe(path, std::ios::binary);
    if (probe && probe.peek() != std::ifstream::traits_type::eof()) need_header = false;
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (need_header) out << header << '\n';
  out << row << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline std::string format_double(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

}  // namespace bmdp
