#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anpr/text.hpp"
#include "anpr/types.hpp"

namespace anpr {

// Tolerances used to pair predicted entries with ground truth. The edit
// distance gates matching only; word accuracy always demands exact equality.
struct MatchConfig {
  std::int64_t time_window_ms = 10000;
  int max_edit_distance = 2;

  void validate() const {
    if (time_window_ms <= 0) {
      throw std::invalid_argument("match: time_window_ms must be > 0");
    }
    if (max_edit_distance < 0) {
      throw std::invalid_argument("match: max_edit_distance must be >= 0");
    }
  }
};

// Flat key = value file with keys time_window_ms and max_edit_distance.
inline MatchConfig load_match_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("match: cannot open '" + path + "'");
  }
  MatchConfig mc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "time_window_ms") {
        mc.time_window_ms = std::stoll(value);
      } else if (key == "max_edit_distance") {
        mc.max_edit_distance = std::stoi(value);
      } else {
        throw std::runtime_error("unknown key");
      }
    } catch (const std::exception &) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad entry '" +
                               stripped + "'");
    }
  }
  mc.validate();
  return mc;
}

struct MatchedPair {
  VehicleLogEntry pred;
  VehicleLogEntry truth;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<VehicleLogEntry> unmatched_truth;
  std::vector<VehicleLogEntry> unmatched_pred;
};

// Greedy chronological one-to-one matching: each truth entry takes the
// nearest-in-time unmatched prediction inside the window whose normalized
// plate is within the edit-distance budget.
inline MatchResult match_logs(std::vector<VehicleLogEntry> pred,
                              std::vector<VehicleLogEntry> truth, const MatchConfig &mc) {
  mc.validate();
  auto by_ts = [](const VehicleLogEntry &a, const VehicleLogEntry &b) {
    return a.timestamp_ms < b.timestamp_ms;
  };
  std::stable_sort(pred.begin(), pred.end(), by_ts);
  std::stable_sort(truth.begin(), truth.end(), by_ts);

  std::vector<bool> taken(pred.size(), false);
  MatchResult result;
  for (const auto &t : truth) {
    const std::string t_norm = normalize_plate(t.vehicle_number);
    std::size_t best = pred.size();
    std::int64_t best_gap = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (taken[i]) {
        continue;
      }
      const std::int64_t gap = std::llabs(pred[i].timestamp_ms - t.timestamp_ms);
      if (gap > mc.time_window_ms) {
        continue;
      }
      if (levenshtein(normalize_plate(pred[i].vehicle_number), t_norm) >
          static_cast<std::size_t>(mc.max_edit_distance)) {
        continue;
      }
      if (best == pred.size() || gap < best_gap ||
          (gap == best_gap && pred[i].timestamp_ms < pred[best].timestamp_ms)) {
        best = i;
        best_gap = gap;
      }
    }
    if (best == pred.size()) {
      result.unmatched_truth.push_back(t);
    } else {
      taken[best] = true;
      result.pairs.push_back({pred[best], t});
    }
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!taken[i]) {
      result.unmatched_pred.push_back(pred[i]);
    }
  }
  return result;
}

// Fraction of observed vehicles the system logged; absent when nothing was
// observed.
inline std::optional<double> detection_rate(std::size_t matched_count, std::size_t truth_count) {
  if (truth_count == 0) {
    return std::nullopt;
  }
  return static_cast<double>(matched_count) / static_cast<double>(truth_count);
}

// The whole vehicle number counts as one word: a pair scores only on exact
// equality after normalization. Absent when no pairs were matched.
inline std::optional<double> word_accuracy(const std::vector<MatchedPair> &pairs) {
  if (pairs.empty()) {
    return std::nullopt;
  }
  std::size_t exact = 0;
  for (const auto &p : pairs) {
    if (normalize_plate(p.pred.vehicle_number) == normalize_plate(p.truth.vehicle_number)) {
      ++exact;
    }
  }
  return static_cast<double>(exact) / static_cast<double>(pairs.size());
}

struct ClassStats {
  std::size_t detected = 0;
  std::size_t observed = 0;
  std::optional<double> rate;
};

struct EvalReport {
  std::optional<double> detection_rate;
  std::optional<double> word_accuracy;
  // Keys: the four classes plus the "car_jeep" and "truck_bus" aggregates.
  std::map<std::string, ClassStats> per_class;
  std::size_t truth_count = 0;
  std::size_t pred_count = 0;
  std::size_t matched_count = 0;
  std::vector<VehicleLogEntry> unmatched_truth;
  std::vector<VehicleLogEntry> unmatched_pred;
  MatchConfig match_config;
};

inline EvalReport per_class_report(const MatchResult &matches,
                                   const std::vector<VehicleLogEntry> &truth,
                                   const MatchConfig &mc) {
  EvalReport report;
  report.match_config = mc;
  report.truth_count = truth.size();
  report.pred_count = matches.pairs.size() + matches.unmatched_pred.size();
  report.matched_count = matches.pairs.size();
  report.detection_rate = detection_rate(matches.pairs.size(), truth.size());
  report.word_accuracy = word_accuracy(matches.pairs);
  report.unmatched_truth = matches.unmatched_truth;
  report.unmatched_pred = matches.unmatched_pred;

  std::array<ClassStats, 4> stats{};
  for (const auto &t : truth) {
    stats[class_index(t.vehicle_type)].observed += 1;
  }
  for (const auto &p : matches.pairs) {
    stats[class_index(p.truth.vehicle_type)].detected += 1;
  }
  auto finish = [](ClassStats s) {
    s.rate = detection_rate(s.detected, s.observed);
    return s;
  };
  for (VehicleClass c : kVehicleClasses) {
    report.per_class[std::string(to_string(c))] = finish(stats[class_index(c)]);
  }
  auto aggregate = [&](VehicleClass a, VehicleClass b) {
    ClassStats s;
    s.detected = stats[class_index(a)].detected + stats[class_index(b)].detected;
    s.observed = stats[class_index(a)].observed + stats[class_index(b)].observed;
    return finish(s);
  };
  report.per_class["car_jeep"] = aggregate(VehicleClass::Car, VehicleClass::Jeep);
  report.per_class["truck_bus"] = aggregate(VehicleClass::Truck, VehicleClass::Bus);
  return report;
}

inline EvalReport evaluate(const std::vector<VehicleLogEntry> &pred,
                           const std::vector<VehicleLogEntry> &truth, const MatchConfig &mc) {
  return per_class_report(match_logs(pred, truth, mc), truth, mc);
}

inline nlohmann::ordered_json report_to_json(const EvalReport &report) {
  auto opt = [](const std::optional<double> &v) {
    return v.has_value() ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json per_class;
  for (const auto &[name, stats] : report.per_class) {
    per_class[name] = {{"detected", stats.detected},
                       {"observed", stats.observed},
                       {"rate", opt(stats.rate)}};
  }
  auto entries = [](const std::vector<VehicleLogEntry> &list) {
    nlohmann::ordered_json arr = nlohmann::json::array();
    for (const auto &e : list) {
      arr.push_back({{"vehicle_number", e.vehicle_number},
                     {"vehicle_type", to_string(e.vehicle_type)},
                     {"timestamp_ms", e.timestamp_ms}});
    }
    return arr;
  };
  return {{"detection_rate", opt(report.detection_rate)},
          {"word_accuracy", opt(report.word_accuracy)},
          {"per_class", std::move(per_class)},
          {"counts",
           {{"truth", report.truth_count},
            {"pred", report.pred_count},
            {"matched", report.matched_count},
            {"unmatched_truth", report.unmatched_truth.size()},
            {"unmatched_pred", report.unmatched_pred.size()}}},
          {"match_config",
           {{"time_window_ms", report.match_config.time_window_ms},
            {"max_edit_distance", report.match_config.max_edit_distance}}},
          {"unmatched_truth_entries", entries(report.unmatched_truth)},
          {"unmatched_pred_entries", entries(report.unmatched_pred)}};
}

inline std::string report_to_table(const EvalReport &report) {
  std::ostringstream out;
  auto pct = [](const std::optional<double> &v) -> std::string {
    if (!v.has_value()) {
      return "n/a";
    }
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << (*v * 100.0) << "%";
    return s.str();
  };
  out << "detection rate: " << pct(report.detection_rate) << "  (" << report.matched_count
      << "/" << report.truth_count << ")\n";
  out << "word accuracy:  " << pct(report.word_accuracy) << "  (over " << report.matched_count
      << " matched)\n";
  out << "per class:\n";
  for (const auto &[name, stats] : report.per_class) {
    out << "  " << std::left << std::setw(10) << name << " " << pct(stats.rate) << "  ("
        << stats.detected << "/" << stats.observed << ")\n";
  }
  return out.str();
}

} // namespace anpr
