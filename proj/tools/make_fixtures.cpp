// Regenerates the bundled scenario specs and the golden replay data.
// Usage: make_fixtures <repo-root>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "anpr/config.hpp"
#include "anpr/log_io.hpp"
#include "anpr/pipeline.hpp"
#include "anpr/simulator.hpp"
#include "anpr/trace_io.hpp"

namespace {

std::string nth_plate(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%s%02d%c%04d", i % 2 == 0 ? "MH" : "KA", 10 + (i * 37) % 90,
                static_cast<char>('A' + (i * 11) % 26), 1000 + (i * 271) % 9000);
  return buf;
}

anpr::VehicleSpec queued_vehicle(int i, anpr::VehicleClass cls, int dwell, std::int64_t &entry) {
  anpr::VehicleSpec v{nth_plate(i), cls, entry, 3, dwell, 3};
  entry += 3 + dwell + 3 + 20;
  return v;
}

// Half the traffic respects the 0.6 s dwell, half rushes through.
anpr::ScenarioSpec sop_vs_violation() {
  anpr::ScenarioSpec spec;
  spec.seed = 11;
  spec.source_id = "sop_vs_violation";
  std::int64_t entry = 0;
  for (int i = 0; i < 20; ++i) {
    const auto cls = anpr::kVehicleClasses[i % 4];
    spec.vehicles.push_back(queued_vehicle(i, cls, i % 2 == 0 ? 12 : 4, entry));
  }
  return spec;
}

// Rare heavy classes get depressed detector confidence, pushing them under
// the filtering threshold.
anpr::ScenarioSpec class_bias() {
  anpr::ScenarioSpec spec;
  spec.seed = 5;
  spec.source_id = "class_bias";
  spec.detector.conf_mean_by_class = {0.8, 0.8, 0.45, 0.45}; // car, jeep, bus, truck
  spec.detector.conf_jitter = 0.05;
  std::int64_t entry = 0;
  for (int i = 0; i < 200; ++i) {
    const auto cls = i % 2 == 0
                         ? (i % 4 == 0 ? anpr::VehicleClass::Car : anpr::VehicleClass::Jeep)
                         : (i % 4 == 1 ? anpr::VehicleClass::Bus : anpr::VehicleClass::Truck);
    spec.vehicles.push_back(queued_vehicle(i, cls, 12, entry));
  }
  return spec;
}

// Pure OCR stress at the strongest sweep point; the harness derives the
// lighter points by lowering char_sub_prob.
anpr::ScenarioSpec ocr_noise_sweep() {
  anpr::ScenarioSpec spec;
  spec.seed = 6;
  spec.source_id = "ocr_noise_sweep";
  spec.ocr.char_sub_prob = 0.10;
  std::int64_t entry = 0;
  for (int i = 0; i < 200; ++i) {
    spec.vehicles.push_back(queued_vehicle(i, anpr::kVehicleClasses[i % 4], 12, entry));
  }
  return spec;
}

// Small mixed-noise clip for the byte-determinism check.
anpr::ScenarioSpec golden_scenario() {
  anpr::ScenarioSpec spec;
  spec.seed = 20220607;
  spec.source_id = "golden";
  spec.detector.miss_prob = 0.05;
  spec.detector.conf_jitter = 0.05;
  spec.detector.bbox_jitter_px = 2.0;
  spec.ocr.char_sub_prob = 0.02;
  spec.ocr.blur_prob = 0.05;
  spec.ocr.occlusion_prob = 0.02;
  std::int64_t entry = 0;
  int i = 0;
  for (const auto cls : {anpr::VehicleClass::Car, anpr::VehicleClass::Jeep,
                         anpr::VehicleClass::Bus, anpr::VehicleClass::Car,
                         anpr::VehicleClass::Truck, anpr::VehicleClass::Jeep}) {
    spec.vehicles.push_back(queued_vehicle(i++, cls, 12, entry));
  }
  spec.vehicles[3].plate = "^D4521"; // defense plate, out of the OCR vocab
  return spec;
}

} // namespace

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <repo-root>\n";
    return 2;
  }
  const std::string root = argv[1];
  try {
    anpr::save_scenario(sop_vs_violation(), root + "/scenarios/sop_vs_violation.json");
    anpr::save_scenario(class_bias(), root + "/scenarios/class_bias.json");
    anpr::save_scenario(ocr_noise_sweep(), root + "/scenarios/ocr_noise_sweep.json");

    const auto cfg = anpr::default_config();
    anpr::save_config(cfg, root + "/data/golden.conf");

    const auto generated = anpr::generate(golden_scenario());
    anpr::write_trace(generated.trace, root + "/data/golden_trace.jsonl");
    anpr::write_log(anpr::track_trace(generated.trace, cfg), root + "/data/golden_log.csv",
                    anpr::LogFormat::Csv);
    anpr::write_log(generated.truth, root + "/data/golden_truth.csv", anpr::LogFormat::Csv);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "fixtures written under " << root << "\n";
  return 0;
}
