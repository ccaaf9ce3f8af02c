#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anpr/geometry.hpp"

namespace anpr {

enum class VehicleClass { Car, Jeep, Bus, Truck };

inline constexpr std::array<VehicleClass, 4> kVehicleClasses = {
    VehicleClass::Car, VehicleClass::Jeep, VehicleClass::Bus, VehicleClass::Truck};

inline constexpr std::size_t class_index(VehicleClass c) {
  return static_cast<std::size_t>(c);
}

inline std::string_view to_string(VehicleClass c) {
  switch (c) {
  case VehicleClass::Car: return "car";
  case VehicleClass::Jeep: return "jeep";
  case VehicleClass::Bus: return "bus";
  case VehicleClass::Truck: return "truck";
  }
  return "car";
}

inline std::optional<VehicleClass> vehicle_class_from_string(std::string_view s) {
  if (s == "car") return VehicleClass::Car;
  if (s == "jeep") return VehicleClass::Jeep;
  if (s == "bus") return VehicleClass::Bus;
  if (s == "truck") return VehicleClass::Truck;
  return std::nullopt;
}

struct VehicleDetection {
  BBox bbox;
  VehicleClass cls = VehicleClass::Car;
  double confidence = 0.0;
};

// OCR text is absent when the recognizer produced nothing for this box.
struct PlateDetection {
  BBox bbox;
  double confidence = 0.0;
  std::optional<std::string> text;
};

// One timestamped frame's raw predictions.
struct FrameRecord {
  std::int64_t frame_index = 0;
  std::int64_t ts_ms = 0;
  std::vector<VehicleDetection> vehicles;
  std::vector<PlateDetection> plates;
};

struct TraceHeader {
  double fps = 0.0;
  int frame_width = 0;
  int frame_height = 0;
  std::string source_id;
};

struct VehicleLogEntry {
  std::string vehicle_number;
  VehicleClass vehicle_type = VehicleClass::Car;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const VehicleLogEntry &a, const VehicleLogEntry &b) {
    return a.vehicle_number == b.vehicle_number && a.vehicle_type == b.vehicle_type &&
           a.timestamp_ms == b.timestamp_ms;
  }
};

} // namespace anpr
