#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "anpr/geometry.hpp"
#include "anpr/text.hpp"

namespace anpr {

enum class SelectionStrategy { LastPrediction, MajorityVote };

inline std::string_view to_string(SelectionStrategy s) {
  return s == SelectionStrategy::LastPrediction ? "last_prediction" : "majority_vote";
}

inline std::optional<SelectionStrategy> selection_strategy_from_string(std::string_view s) {
  if (s == "last_prediction") return SelectionStrategy::LastPrediction;
  if (s == "majority_vote") return SelectionStrategy::MajorityVote;
  return std::nullopt;
}

struct TrackerConfig {
  double pred_confidence = 0.5;
  int fc_thresh = 6;
  int zc_thresh = 12;
  double iou_similarity = 0.3;
  Roi roi{{0.0, 0.0, 1920.0, 1080.0}};
  double fps = 10.0;
  SelectionStrategy selection_strategy = SelectionStrategy::LastPrediction;

  void validate() const {
    if (!(fps > 0.0) || !std::isfinite(fps)) {
      throw std::invalid_argument("config: fps must be > 0");
    }
    if (fc_thresh < 1) {
      throw std::invalid_argument("config: fc_thresh must be >= 1");
    }
    if (zc_thresh < 1) {
      throw std::invalid_argument("config: zc_thresh must be >= 1");
    }
    if (!(pred_confidence > 0.0 && pred_confidence < 1.0)) {
      throw std::invalid_argument("config: pred_confidence must be in (0, 1)");
    }
    if (!(iou_similarity > 0.0 && iou_similarity < 1.0)) {
      throw std::invalid_argument("config: iou_similarity must be in (0, 1)");
    }
    if (!roi.rect.valid()) {
      throw std::invalid_argument("config: roi_x/roi_y/roi_w/roi_h must form a valid box");
    }
  }
};

// The frame-vote threshold realises the 0.6 s minimum-dwell rule at the given
// frame rate; the zero threshold tolerates gaps twice that long.
inline int default_fc_thresh(double fps) {
  return static_cast<int>(std::ceil(0.6 * fps));
}

inline TrackerConfig default_config(double fps = 10.0) {
  TrackerConfig cfg;
  cfg.fps = fps;
  cfg.fc_thresh = default_fc_thresh(fps);
  cfg.zc_thresh = 2 * cfg.fc_thresh;
  return cfg;
}

namespace detail {

inline double parse_double_or_throw(const std::string &key, const std::string &value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + value + "'");
  }
}

inline int parse_int_or_throw(const std::string &key, const std::string &value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument(value);
    }
    return static_cast<int>(v);
  } catch (const std::exception &) {
    throw std::invalid_argument("config: key '" + key + "' has non-integer value '" + value + "'");
  }
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace detail

// Flat key = value format, '#' starts a comment. Omitted keys fall back to
// defaults; fc_thresh defaults from fps and zc_thresh from fc_thresh.
inline TrackerConfig parse_config(std::istream &in, const std::string &origin = "config") {
  std::map<std::string, std::string> kv;
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
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
    }
  }

  TrackerConfig cfg;
  auto pop = [&kv](const char *key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) {
      return std::nullopt;
    }
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = pop("fps")) cfg.fps = detail::parse_double_or_throw("fps", *v);
  if (auto v = pop("fc_thresh")) {
    cfg.fc_thresh = detail::parse_int_or_throw("fc_thresh", *v);
  } else {
    cfg.fc_thresh = default_fc_thresh(cfg.fps);
  }
  if (auto v = pop("zc_thresh")) {
    cfg.zc_thresh = detail::parse_int_or_throw("zc_thresh", *v);
  } else {
    cfg.zc_thresh = 2 * cfg.fc_thresh;
  }
  if (auto v = pop("pred_confidence"))
    cfg.pred_confidence = detail::parse_double_or_throw("pred_confidence", *v);
  if (auto v = pop("iou_similarity"))
    cfg.iou_similarity = detail::parse_double_or_throw("iou_similarity", *v);
  if (auto v = pop("roi_x")) cfg.roi.rect.x = detail::parse_double_or_throw("roi_x", *v);
  if (auto v = pop("roi_y")) cfg.roi.rect.y = detail::parse_double_or_throw("roi_y", *v);
  if (auto v = pop("roi_w")) cfg.roi.rect.w = detail::parse_double_or_throw("roi_w", *v);
  if (auto v = pop("roi_h")) cfg.roi.rect.h = detail::parse_double_or_throw("roi_h", *v);
  if (auto v = pop("selection_strategy")) {
    const auto s = selection_strategy_from_string(*v);
    if (!s) {
      throw std::invalid_argument(
          "config: selection_strategy must be 'last_prediction' or 'majority_vote', got '" + *v +
          "'");
    }
    cfg.selection_strategy = *s;
  }
  if (!kv.empty()) {
    throw std::invalid_argument(origin + ": unknown key '" + kv.begin()->first + "'");
  }
  cfg.validate();
  return cfg;
}

inline TrackerConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path + "'");
  }
  return parse_config(in, path);
}

inline std::string format_config(const TrackerConfig &cfg) {
  std::ostringstream out;
  out << "pred_confidence = " << detail::format_double(cfg.pred_confidence) << "\n"
      << "fc_thresh = " << cfg.fc_thresh << "\n"
      << "zc_thresh = " << cfg.zc_thresh << "\n"
      << "iou_similarity = " << detail::format_double(cfg.iou_similarity) << "\n"
      << "roi_x = " << detail::format_double(cfg.roi.rect.x) << "\n"
      << "roi_y = " << detail::format_double(cfg.roi.rect.y) << "\n"
      << "roi_w = " << detail::format_double(cfg.roi.rect.w) << "\n"
      << "roi_h = " << detail::format_double(cfg.roi.rect.h) << "\n"
      << "fps = " << detail::format_double(cfg.fps) << "\n"
      << "selection_strategy = " << to_string(cfg.selection_strategy) << "\n";
  return out.str();
}

inline void save_config(const TrackerConfig &cfg, const std::string &path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("config: cannot write '" + path + "'");
  }
  out << format_config(cfg);
}

} // namespace anpr
