#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anpr/text.hpp"
#include "anpr/types.hpp"

namespace anpr {

// Detection trace, JSON Lines. Line 1 is the header object; every following
// line is one frame:
//   {"fps":10,"frame_width":1920,"frame_height":1080,"source_id":"cam-1"}
//   {"frame":0,"ts_ms":0,"vehicles":[{"x":..,"y":..,"w":..,"h":..,"conf":..,"cls":"car"}],
//    "plates":[{"x":..,"y":..,"w":..,"h":..,"conf":..,"text":"MH03CS0071"}]}
// The plate "text" key is omitted when OCR produced nothing.

struct Trace {
  TraceHeader header;
  std::vector<FrameRecord> frames;
};

namespace detail {

[[noreturn]] inline void trace_error(const std::string &origin, std::size_t line_no,
                                     const std::string &what) {
  throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
}

inline BBox parse_bbox(const nlohmann::json &j) {
  BBox b{j.at("x").get<double>(), j.at("y").get<double>(), j.at("w").get<double>(),
         j.at("h").get<double>()};
  if (!b.valid()) {
    throw std::runtime_error("invalid bbox (needs finite non-negative x/y and positive w/h)");
  }
  return b;
}

inline double parse_confidence(const nlohmann::json &j) {
  const double c = j.at("conf").get<double>();
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::runtime_error("confidence outside [0, 1]");
  }
  return c;
}

inline FrameRecord parse_frame(const nlohmann::json &j) {
  FrameRecord rec;
  rec.frame_index = j.at("frame").get<std::int64_t>();
  rec.ts_ms = j.at("ts_ms").get<std::int64_t>();
  if (rec.frame_index < 0) {
    throw std::runtime_error("frame index must be non-negative");
  }
  for (const auto &v : j.value("vehicles", nlohmann::json::array())) {
    VehicleDetection det;
    det.bbox = parse_bbox(v);
    det.confidence = parse_confidence(v);
    const auto cls = vehicle_class_from_string(v.at("cls").get<std::string>());
    if (!cls) {
      throw std::runtime_error("unknown vehicle class '" + v.at("cls").get<std::string>() + "'");
    }
    det.cls = *cls;
    rec.vehicles.push_back(std::move(det));
  }
  for (const auto &p : j.value("plates", nlohmann::json::array())) {
    PlateDetection det;
    det.bbox = parse_bbox(p);
    det.confidence = parse_confidence(p);
    if (p.contains("text")) {
      const std::string text = p.at("text").get<std::string>();
      if (trim(text).empty()) {
        throw std::runtime_error("plate text present but empty");
      }
      det.text = text;
    }
    rec.plates.push_back(std::move(det));
  }
  return rec;
}

inline nlohmann::ordered_json bbox_json(const BBox &b) {
  return {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}

} // namespace detail

// Streaming reader; validates frame-index monotonicity and timestamp order
// as frames are pulled.
class TraceReader {
public:
  explicit TraceReader(const std::string &path) : origin_(path), in_(path) {
    if (!in_) {
      throw std::runtime_error("trace: cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in_, line)) {
      detail::trace_error(origin_, 1, "missing header line");
    }
    line_no_ = 1;
    try {
      const auto j = nlohmann::json::parse(line);
      header_.fps = j.at("fps").get<double>();
      header_.frame_width = j.at("frame_width").get<int>();
      header_.frame_height = j.at("frame_height").get<int>();
      header_.source_id = j.value("source_id", std::string{});
    } catch (const nlohmann::json::exception &e) {
      detail::trace_error(origin_, 1, std::string("bad header: ") + e.what());
    }
    if (!(header_.fps > 0.0) || header_.frame_width <= 0 || header_.frame_height <= 0) {
      detail::trace_error(origin_, 1, "header needs fps > 0 and positive frame dimensions");
    }
  }

  const TraceHeader &header() const { return header_; }

  std::optional<FrameRecord> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (trim(line).empty()) {
        continue;
      }
      FrameRecord rec;
      try {
        rec = detail::parse_frame(nlohmann::json::parse(line));
      } catch (const std::exception &e) {
        detail::trace_error(origin_, line_no_, e.what());
      }
      if (last_frame_.has_value() && rec.frame_index <= *last_frame_) {
        detail::trace_error(origin_, line_no_,
                            "frame index " + std::to_string(rec.frame_index) +
                                " not greater than previous " + std::to_string(*last_frame_));
      }
      if (last_ts_.has_value() && rec.ts_ms < *last_ts_) {
        detail::trace_error(origin_, line_no_, "timestamp decreased");
      }
      last_frame_ = rec.frame_index;
      last_ts_ = rec.ts_ms;
      return rec;
    }
    return std::nullopt;
  }

private:
  std::string origin_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  TraceHeader header_;
  std::optional<std::int64_t> last_frame_;
  std::optional<std::int64_t> last_ts_;
};

inline Trace read_trace(const std::string &path) {
  TraceReader reader(path);
  Trace trace;
  trace.header = reader.header();
  while (auto frame = reader.next()) {
    trace.frames.push_back(std::move(*frame));
  }
  return trace;
}

inline std::string format_trace(const Trace &trace) {
  nlohmann::ordered_json header{{"fps", trace.header.fps},
                                {"frame_width", trace.header.frame_width},
                                {"frame_height", trace.header.frame_height},
                                {"source_id", trace.header.source_id}};
  std::string out = header.dump();
  out.push_back('\n');
  for (const auto &frame : trace.frames) {
    nlohmann::ordered_json vehicles = nlohmann::json::array();
    for (const auto &v : frame.vehicles) {
      auto j = detail::bbox_json(v.bbox);
      j["conf"] = v.confidence;
      j["cls"] = to_string(v.cls);
      vehicles.push_back(std::move(j));
    }
    nlohmann::ordered_json plates = nlohmann::json::array();
    for (const auto &p : frame.plates) {
      auto j = detail::bbox_json(p.bbox);
      j["conf"] = p.confidence;
      if (p.text.has_value()) {
        j["text"] = *p.text;
      }
      plates.push_back(std::move(j));
    }
    nlohmann::ordered_json rec{{"frame", frame.frame_index},
                               {"ts_ms", frame.ts_ms},
                               {"vehicles", std::move(vehicles)},
                               {"plates", std::move(plates)}};
    out += rec.dump();
    out.push_back('\n');
  }
  return out;
}

inline void write_trace(const Trace &trace, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("trace: cannot write '" + path + "'");
  }
  out << format_trace(trace);
  if (!out) {
    throw std::runtime_error("trace: write failed for '" + path + "'");
  }
}

} // namespace anpr
