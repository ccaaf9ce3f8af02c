#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "anpr/config.hpp"
#include "anpr/geometry.hpp"
#include "anpr/types.hpp"

namespace anpr {

// One filtered plate candidate handed to the tracker. vehicle_class is the
// class of the vehicle box that contained the plate.
struct PlateObservation {
  BBox bbox;
  std::optional<std::string> text;
  double confidence = 0.0;
  VehicleClass vehicle_class = VehicleClass::Car;
  std::int64_t ts_ms = 0;
};

// Three-stage prediction filter:
//   1. drop vehicle and plate predictions below the confidence threshold,
//   2. keep a plate only if a surviving vehicle box contains it, attaching
//      that vehicle's class (largest plate/vehicle IoU on ties),
//   3. discard the vehicle boxes and emit plate observations.
inline std::vector<PlateObservation> filter_frame(const FrameRecord &frame,
                                                  const TrackerConfig &cfg) {
  std::vector<const VehicleDetection *> vehicles;
  vehicles.reserve(frame.vehicles.size());
  for (const auto &v : frame.vehicles) {
    if (v.confidence >= cfg.pred_confidence) {
      vehicles.push_back(&v);
    }
  }

  std::vector<PlateObservation> out;
  for (const auto &p : frame.plates) {
    if (p.confidence < cfg.pred_confidence) {
      continue;
    }
    const VehicleDetection *container = nullptr;
    double best_iou = -1.0;
    for (const auto *v : vehicles) {
      if (!contains(v->bbox, p.bbox)) {
        continue;
      }
      const double overlap = iou(p.bbox, v->bbox);
      if (overlap > best_iou) {
        best_iou = overlap;
        container = v;
      }
    }
    if (container == nullptr) {
      continue;
    }
    out.push_back({p.bbox, p.text, p.confidence, container->cls, frame.ts_ms});
  }
  return out;
}

// Reduces a frame's observations to the single one the automaton consumes:
// highest confidence among those whose center lies in the ROI, falling back
// to highest confidence overall. Ties go to the larger box, then smaller x.
inline std::optional<PlateObservation>
select_primary(const std::vector<PlateObservation> &observations, const Roi &roi) {
  const PlateObservation *best = nullptr;
  auto better = [&roi](const PlateObservation &a, const PlateObservation &b) {
    const bool a_in = roi.contains_center(a.bbox);
    const bool b_in = roi.contains_center(b.bbox);
    if (a_in != b_in) return a_in;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.bbox.area() != b.bbox.area()) return a.bbox.area() > b.bbox.area();
    return a.bbox.x < b.bbox.x;
  };
  for (const auto &obs : observations) {
    if (best == nullptr || better(obs, *best)) {
      best = &obs;
    }
  }
  if (best == nullptr) {
    return std::nullopt;
  }
  return *best;
}

} // namespace anpr
