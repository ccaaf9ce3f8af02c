#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anpr/geometry.hpp"
#include "anpr/text.hpp"
#include "anpr/trace_io.hpp"
#include "anpr/types.hpp"

namespace anpr {

// Deterministic splitmix64-based generator. Self-contained so generated
// traces do not depend on the standard library's distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // [0, n)
  std::uint64_t uniform_int(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  bool chance(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; second value cached.
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

struct VehicleSpec {
  std::string plate;
  VehicleClass cls = VehicleClass::Car;
  std::int64_t entry_frame = 0;
  int approach_frames = 0; // in motion before the checkpoint region
  int dwell_frames = 0;    // stationary inside the checkpoint region
  int exit_frames = 0;     // in motion after the checkpoint region
};

// The checkpoint rule: the vehicle holds still in the region for >= 0.6 s.
inline bool sop_compliant(const VehicleSpec &v, double fps) {
  return static_cast<double>(v.dwell_frames) / fps >= 0.6;
}

struct DetectorNoise {
  double miss_prob = 0.0;
  std::array<double, 4> conf_mean_by_class = {0.8, 0.8, 0.8, 0.8}; // indexed by VehicleClass
  double conf_jitter = 0.0;
  double bbox_jitter_px = 0.0;

  double conf_mean(VehicleClass c) const { return conf_mean_by_class[class_index(c)]; }
};

struct OcrNoise {
  double char_sub_prob = 0.0;
  double occlusion_prob = 0.0;
  double blur_prob = 0.0;
  double illegible_prob = 0.0;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  double fps = 10.0;
  int frame_width = 1920;
  int frame_height = 1080;
  Roi roi{{660.0, 340.0, 600.0, 400.0}};
  std::vector<VehicleSpec> vehicles;
  DetectorNoise detector;
  OcrNoise ocr;
  std::string source_id = "sim";

  void validate() const;
};

struct GeneratedScenario {
  Trace trace;
  std::vector<VehicleLogEntry> truth; // sorted by timestamp, one entry per vehicle
};

// Timestamp a vehicle's truth entry carries: the midpoint of its dwell.
inline std::int64_t truth_timestamp(const ScenarioSpec &spec, const VehicleSpec &v);

namespace sim_detail {

inline constexpr std::int64_t kStartTsMs = 1654598400000; // fixed epoch base
inline constexpr const char kOcrAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
inline constexpr std::size_t kOcrAlphabetSize = 36;

inline void check_prob(double p, const std::string &field) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("scenario: " + field + " must be in [0, 1]");
  }
}

struct ClassFootprint {
  double w;
  double h;
};

inline ClassFootprint footprint(VehicleClass c) {
  switch (c) {
  case VehicleClass::Car: return {220.0, 150.0};
  case VehicleClass::Jeep: return {240.0, 170.0};
  case VehicleClass::Bus: return {380.0, 260.0};
  case VehicleClass::Truck: return {400.0, 280.0};
  }
  return {220.0, 150.0};
}

inline std::uint64_t vehicle_stream_seed(std::uint64_t seed, std::size_t vehicle_index) {
  Rng mix(seed ^ (0xA0761D6478BD642Full * (vehicle_index + 1)));
  return mix.next_u64();
}

inline std::int64_t frame_ts(double fps, std::int64_t frame) {
  return kStartTsMs + static_cast<std::int64_t>(std::llround(1000.0 * frame / fps));
}

inline char random_alphabet_char(Rng &rng) {
  return kOcrAlphabet[rng.uniform_int(kOcrAlphabetSize)];
}

inline char substitute_char(char original, Rng &rng) {
  const char *pos =
      std::char_traits<char>::find(kOcrAlphabet, kOcrAlphabetSize, original);
  if (pos == nullptr) {
    return random_alphabet_char(rng);
  }
  const std::size_t idx = static_cast<std::size_t>(pos - kOcrAlphabet);
  const std::size_t offset = 1 + rng.uniform_int(kOcrAlphabetSize - 1);
  return kOcrAlphabet[(idx + offset) % kOcrAlphabetSize];
}

inline char confusable_partner(char c) {
  switch (c) {
  case '0': return 'O';
  case 'O': return '0';
  case '1': return 'I';
  case 'I': return '1';
  case '8': return 'B';
  case 'B': return '8';
  default: return '\0';
  }
}

// One OCR read of a plate. The recognizer's alphabet has no '^', so each
// marker character comes out as a random letter or digit; the noise stages
// then model whole-image illegibility, occlusion trims, blur confusions and
// per-character substitutions.
inline std::string ocr_read(const std::string &clean, const OcrNoise &noise, Rng &rng) {
  std::string text = clean;
  for (char &c : text) {
    if (c == '^') {
      c = random_alphabet_char(rng);
    }
  }
  if (rng.chance(noise.illegible_prob)) {
    for (char &c : text) {
      c = random_alphabet_char(rng);
    }
    return text;
  }
  if (rng.chance(noise.occlusion_prob) && text.size() > 1) {
    const std::size_t max_cut = std::min<std::size_t>(3, text.size() - 1);
    const std::size_t k = 1 + rng.uniform_int(max_cut);
    if (rng.chance(0.5)) {
      text.erase(0, k);
    } else {
      text.erase(text.size() - k);
    }
  }
  if (rng.chance(noise.blur_prob)) {
    for (char &c : text) {
      const char partner = confusable_partner(c);
      if (partner != '\0' && rng.chance(0.5)) {
        c = partner;
      }
    }
  }
  for (char &c : text) {
    if (rng.chance(noise.char_sub_prob)) {
      c = substitute_char(c, rng);
    }
  }
  return text;
}

inline double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

} // namespace sim_detail

inline void ScenarioSpec::validate() const {
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw std::invalid_argument("scenario: fps must be > 0");
  }
  if (frame_width <= 0 || frame_height <= 0) {
    throw std::invalid_argument("scenario: frame dimensions must be positive");
  }
  if (!roi.rect.valid() || roi.rect.right() > frame_width || roi.rect.bottom() > frame_height) {
    throw std::invalid_argument("scenario: roi must be a valid box inside the frame");
  }
  sim_detail::check_prob(detector.miss_prob, "detector.miss_prob");
  for (VehicleClass c : kVehicleClasses) {
    sim_detail::check_prob(detector.conf_mean(c),
                           "detector.conf_mean." + std::string(to_string(c)));
  }
  if (!(detector.conf_jitter >= 0.0)) {
    throw std::invalid_argument("scenario: detector.conf_jitter must be >= 0");
  }
  if (!(detector.bbox_jitter_px >= 0.0)) {
    throw std::invalid_argument("scenario: detector.bbox_jitter_px must be >= 0");
  }
  sim_detail::check_prob(ocr.char_sub_prob, "ocr.char_sub_prob");
  sim_detail::check_prob(ocr.occlusion_prob, "ocr.occlusion_prob");
  sim_detail::check_prob(ocr.blur_prob, "ocr.blur_prob");
  sim_detail::check_prob(ocr.illegible_prob, "ocr.illegible_prob");
  std::int64_t last_entry = -1;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto &v = vehicles[i];
    const std::string where = "scenario: vehicles[" + std::to_string(i) + "]";
    if (!is_valid_plate(v.plate)) {
      throw std::invalid_argument(where + ".plate '" + v.plate +
                                  "' is neither a registration pattern nor marked with '^'");
    }
    if (v.entry_frame < 0) {
      throw std::invalid_argument(where + ".entry_frame must be >= 0");
    }
    if (v.approach_frames < 0 || v.dwell_frames < 0 || v.exit_frames < 0) {
      throw std::invalid_argument(where + " frame counts must be >= 0");
    }
    if (i > 0 && v.entry_frame <= last_entry) {
      throw std::invalid_argument(where + ".entry_frame must exceed the previous vehicle's by"
                                          " at least one frame");
    }
    last_entry = v.entry_frame;
  }
}

// Builds the detection trace and the ground-truth log for a scenario.
//
// Kinematics are one-dimensional: a vehicle slides horizontally toward the
// region center in steps sized so approach/exit positions stay outside the
// region and consecutive boxes overlap too little to look similar, holds
// still for its dwell, then slides out the same way. Detections appear only
// in frames where the nominal box lies fully inside the frame. Each vehicle
// consumes its own noise stream derived from (seed, vehicle index), so
// adding a vehicle leaves the others' noise untouched.
inline GeneratedScenario generate(const ScenarioSpec &spec) {
  spec.validate();

  struct Placed {
    const VehicleSpec *v;
    sim_detail::ClassFootprint box;
    double step;
    double dwell_cx;
    double dwell_cy;
    Rng rng;
    std::int64_t end_frame;
  };

  std::vector<Placed> placed;
  placed.reserve(spec.vehicles.size());
  std::int64_t total_frames = 0;
  for (std::size_t i = 0; i < spec.vehicles.size(); ++i) {
    const auto &v = spec.vehicles[i];
    const auto box = sim_detail::footprint(v.cls);
    // One step clears the region (approach/exit frames sit outside it) and
    // shifts the box far enough that consecutive boxes look dissimilar.
    const double step = std::max(0.8 * box.w, spec.roi.rect.w / 2.0 + 0.1 * box.w);
    const std::int64_t end =
        v.entry_frame + v.approach_frames + v.dwell_frames + v.exit_frames;
    placed.push_back({&v, box, step, spec.roi.rect.center_x(), spec.roi.rect.center_y(),
                      Rng(sim_detail::vehicle_stream_seed(spec.seed, i)), end});
    total_frames = std::max(total_frames, end);
  }

  GeneratedScenario out;
  out.trace.header = {spec.fps, spec.frame_width, spec.frame_height, spec.source_id};
  out.trace.frames.reserve(static_cast<std::size_t>(total_frames));

  for (std::int64_t frame = 0; frame < total_frames; ++frame) {
    FrameRecord rec;
    rec.frame_index = frame;
    rec.ts_ms = sim_detail::frame_ts(spec.fps, frame);

    for (auto &p : placed) {
      const auto &v = *p.v;
      const std::int64_t rel = frame - v.entry_frame;
      if (rel < 0 || frame >= p.end_frame) {
        continue;
      }
      double cx = p.dwell_cx;
      if (rel < v.approach_frames) {
        cx -= p.step * static_cast<double>(v.approach_frames - rel);
      } else if (rel >= v.approach_frames + v.dwell_frames) {
        cx += p.step * static_cast<double>(rel - v.approach_frames - v.dwell_frames + 1);
      }
      const double x = cx - p.box.w / 2.0;
      const double y = p.dwell_cy - p.box.h / 2.0;
      if (x < 0.0 || y < 0.0 || x + p.box.w > spec.frame_width ||
          y + p.box.h > spec.frame_height) {
        continue; // outside the camera view
      }
      if (p.rng.chance(spec.detector.miss_prob)) {
        continue;
      }

      const double conf_v = sim_detail::clamp(
          spec.detector.conf_mean(v.cls) + spec.detector.conf_jitter * p.rng.gaussian(), 0.0,
          1.0);
      const double conf_p = sim_detail::clamp(
          spec.detector.conf_mean(v.cls) + spec.detector.conf_jitter * p.rng.gaussian(), 0.0,
          1.0);

      const double jx = spec.detector.bbox_jitter_px * p.rng.gaussian();
      const double jy = spec.detector.bbox_jitter_px * p.rng.gaussian();
      BBox veh{sim_detail::clamp(x + jx, 0.0, spec.frame_width - p.box.w),
               sim_detail::clamp(y + jy, 0.0, spec.frame_height - p.box.h), p.box.w, p.box.h};

      const double pw = 0.4 * p.box.w;
      const double ph = 0.11 * p.box.h;
      const double pjx = 0.5 * spec.detector.bbox_jitter_px * p.rng.gaussian();
      const double pjy = 0.5 * spec.detector.bbox_jitter_px * p.rng.gaussian();
      BBox plate{sim_detail::clamp(veh.x + (p.box.w - pw) / 2.0 + pjx, veh.x, veh.right() - pw),
                 sim_detail::clamp(veh.y + 0.72 * p.box.h + pjy, veh.y, veh.bottom() - ph), pw,
                 ph};

      rec.vehicles.push_back({veh, v.cls, conf_v});
      rec.plates.push_back({plate, conf_p, sim_detail::ocr_read(v.plate, spec.ocr, p.rng)});
    }
    out.trace.frames.push_back(std::move(rec));
  }

  for (const auto &p : placed) {
    const auto &v = *p.v;
    out.truth.push_back({v.plate, v.cls, truth_timestamp(spec, v)});
  }
  std::stable_sort(out.truth.begin(), out.truth.end(),
                   [](const VehicleLogEntry &a, const VehicleLogEntry &b) {
                     return a.timestamp_ms < b.timestamp_ms;
                   });
  return out;
}

inline std::int64_t truth_timestamp(const ScenarioSpec &spec, const VehicleSpec &v) {
  const std::int64_t mid_frame = v.entry_frame + v.approach_frames + v.dwell_frames / 2;
  return sim_detail::frame_ts(spec.fps, mid_frame);
}

inline ScenarioSpec scenario_from_json(const nlohmann::json &j) {
  ScenarioSpec spec;
  spec.seed = j.value("seed", spec.seed);
  spec.fps = j.value("fps", spec.fps);
  spec.frame_width = j.value("frame_width", spec.frame_width);
  spec.frame_height = j.value("frame_height", spec.frame_height);
  spec.source_id = j.value("source_id", spec.source_id);
  if (j.contains("roi")) {
    const auto &r = j.at("roi");
    spec.roi.rect = {r.at("x").get<double>(), r.at("y").get<double>(), r.at("w").get<double>(),
                     r.at("h").get<double>()};
  }
  if (j.contains("detector")) {
    const auto &d = j.at("detector");
    spec.detector.miss_prob = d.value("miss_prob", 0.0);
    spec.detector.conf_jitter = d.value("conf_jitter", 0.0);
    spec.detector.bbox_jitter_px = d.value("bbox_jitter_px", 0.0);
    if (d.contains("conf_mean")) {
      for (VehicleClass c : kVehicleClasses) {
        const std::string key{to_string(c)};
        if (d.at("conf_mean").contains(key)) {
          spec.detector.conf_mean_by_class[class_index(c)] =
              d.at("conf_mean").at(key).get<double>();
        }
      }
    }
  }
  if (j.contains("ocr")) {
    const auto &o = j.at("ocr");
    spec.ocr.char_sub_prob = o.value("char_sub_prob", 0.0);
    spec.ocr.occlusion_prob = o.value("occlusion_prob", 0.0);
    spec.ocr.blur_prob = o.value("blur_prob", 0.0);
    spec.ocr.illegible_prob = o.value("illegible_prob", 0.0);
  }
  for (const auto &vj : j.value("vehicles", nlohmann::json::array())) {
    VehicleSpec v;
    v.plate = vj.at("plate").get<std::string>();
    const auto cls = vehicle_class_from_string(vj.at("class").get<std::string>());
    if (!cls) {
      throw std::invalid_argument("scenario: unknown vehicle class '" +
                                  vj.at("class").get<std::string>() + "'");
    }
    v.cls = *cls;
    v.entry_frame = vj.at("entry_frame").get<std::int64_t>();
    v.approach_frames = vj.value("approach_frames", 0);
    v.dwell_frames = vj.at("dwell_frames").get<int>();
    v.exit_frames = vj.value("exit_frames", 0);
    spec.vehicles.push_back(std::move(v));
  }
  spec.validate();
  return spec;
}

inline nlohmann::ordered_json scenario_to_json(const ScenarioSpec &spec) {
  nlohmann::ordered_json conf_mean;
  for (VehicleClass c : kVehicleClasses) {
    conf_mean[std::string(to_string(c))] = spec.detector.conf_mean(c);
  }
  nlohmann::ordered_json vehicles = nlohmann::json::array();
  for (const auto &v : spec.vehicles) {
    vehicles.push_back({{"plate", v.plate},
                        {"class", to_string(v.cls)},
                        {"entry_frame", v.entry_frame},
                        {"approach_frames", v.approach_frames},
                        {"dwell_frames", v.dwell_frames},
                        {"exit_frames", v.exit_frames}});
  }
  return {{"seed", spec.seed},
          {"fps", spec.fps},
          {"frame_width", spec.frame_width},
          {"frame_height", spec.frame_height},
          {"source_id", spec.source_id},
          {"roi",
           {{"x", spec.roi.rect.x},
            {"y", spec.roi.rect.y},
            {"w", spec.roi.rect.w},
            {"h", spec.roi.rect.h}}},
          {"detector",
           {{"miss_prob", spec.detector.miss_prob},
            {"conf_mean", std::move(conf_mean)},
            {"conf_jitter", spec.detector.conf_jitter},
            {"bbox_jitter_px", spec.detector.bbox_jitter_px}}},
          {"ocr",
           {{"char_sub_prob", spec.ocr.char_sub_prob},
            {"occlusion_prob", spec.ocr.occlusion_prob},
            {"blur_prob", spec.ocr.blur_prob},
            {"illegible_prob", spec.ocr.illegible_prob}}},
          {"vehicles", std::move(vehicles)}};
}

inline ScenarioSpec load_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("scenario: cannot open '" + path + "'");
  }
  try {
    return scenario_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error("scenario: " + path + ": " + e.what());
  }
}

inline void save_scenario(const ScenarioSpec &spec, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("scenario: cannot write '" + path + "'");
  }
  out << scenario_to_json(spec).dump(2) << "\n";
}

} // namespace anpr
