#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "anpr/filter.hpp"

using anpr::BBox;
using anpr::FrameRecord;
using anpr::PlateObservation;
using anpr::TrackerConfig;
using anpr::VehicleClass;

namespace {

TrackerConfig cfg_with_threshold(double threshold) {
  auto cfg = anpr::default_config();
  cfg.pred_confidence = threshold;
  return cfg;
}

FrameRecord frame_with(std::vector<anpr::VehicleDetection> vehicles,
                       std::vector<anpr::PlateDetection> plates) {
  FrameRecord f;
  f.frame_index = 0;
  f.ts_ms = 1000;
  f.vehicles = std::move(vehicles);
  f.plates = std::move(plates);
  return f;
}

} // namespace

TEST_CASE("empty frame filters to nothing") {
  CHECK(anpr::filter_frame(frame_with({}, {}), cfg_with_threshold(0.5)).empty());
}

TEST_CASE("contained confident plate passes with the vehicle's class") {
  const auto f = frame_with({{{100, 100, 400, 300}, VehicleClass::Car, 0.9}},
                            {{{250, 330, 80, 30}, 0.8, "MH03CS0071"}});
  const auto out = anpr::filter_frame(f, cfg_with_threshold(0.5));
  REQUIRE(out.size() == 1);
  CHECK(out[0].text == "MH03CS0071");
  CHECK(out[0].vehicle_class == VehicleClass::Car);
  CHECK(out[0].confidence == 0.8);
  CHECK(out[0].ts_ms == 1000);
}

TEST_CASE("plate without any vehicle box is dropped") {
  const auto f = frame_with({}, {{{250, 330, 80, 30}, 0.8, "MH03CS0071"}});
  CHECK(anpr::filter_frame(f, cfg_with_threshold(0.5)).empty());
}

TEST_CASE("low-confidence vehicle cannot contain a plate") {
  // stage 1 removes the vehicle, so stage 2 has no container
  const auto f = frame_with({{{100, 100, 400, 300}, VehicleClass::Car, 0.4}},
                            {{{250, 330, 80, 30}, 0.9, "MH03CS0071"}});
  CHECK(anpr::filter_frame(f, cfg_with_threshold(0.5)).empty());
}

TEST_CASE("low-confidence plate is dropped") {
  const auto f = frame_with({{{100, 100, 400, 300}, VehicleClass::Car, 0.9}},
                            {{{250, 330, 80, 30}, 0.3, "MH03CS0071"}});
  CHECK(anpr::filter_frame(f, cfg_with_threshold(0.5)).empty());
}

TEST_CASE("plate in two vehicle boxes takes the tighter container's class") {
  // both contain the plate; the jeep box overlaps it more
  const auto f = frame_with({{{0, 0, 1000, 800}, VehicleClass::Car, 0.9},
                             {{200, 300, 200, 80}, VehicleClass::Jeep, 0.9}},
                            {{{250, 330, 80, 30}, 0.8, "KA06N9659"}});
  const auto out = anpr::filter_frame(f, cfg_with_threshold(0.5));
  REQUIRE(out.size() == 1);
  CHECK(out[0].vehicle_class == VehicleClass::Jeep);
}

TEST_CASE("filter output is a subset satisfying both predicates") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::uniform_int_distribution<int> pos(0, 500);
  std::uniform_int_distribution<int> len(20, 300);
  const auto cfg = cfg_with_threshold(0.5);

  for (int trial = 0; trial < 200; ++trial) {
    FrameRecord f;
    f.ts_ms = trial;
    for (int i = 0; i < 4; ++i) {
      f.vehicles.push_back({{static_cast<double>(pos(rng)), static_cast<double>(pos(rng)),
                             static_cast<double>(len(rng)), static_cast<double>(len(rng))},
                            VehicleClass::Car, conf(rng)});
    }
    for (int i = 0; i < 4; ++i) {
      f.plates.push_back({{static_cast<double>(pos(rng)), static_cast<double>(pos(rng)),
                           static_cast<double>(len(rng)) / 4.0,
                           static_cast<double>(len(rng)) / 8.0},
                          conf(rng), "KA06N9659"});
    }
    const auto out = anpr::filter_frame(f, cfg);
    for (const auto &obs : out) {
      CHECK(obs.confidence >= cfg.pred_confidence);
      // emitted box is one of the input plate boxes
      CHECK(std::any_of(f.plates.begin(), f.plates.end(), [&](const anpr::PlateDetection &p) {
        return p.bbox == obs.bbox;
      }));
      // some surviving vehicle contains it
      CHECK(std::any_of(f.vehicles.begin(), f.vehicles.end(), [&](const anpr::VehicleDetection &v) {
        return v.confidence >= cfg.pred_confidence && anpr::contains(v.bbox, obs.bbox);
      }));
    }
  }
}

TEST_CASE("refiltering the filtered frame is stable") {
  const auto cfg = cfg_with_threshold(0.5);
  const auto f = frame_with({{{100, 100, 400, 300}, VehicleClass::Car, 0.9},
                             {{600, 100, 400, 300}, VehicleClass::Bus, 0.7}},
                            {{{250, 330, 80, 30}, 0.8, "MH03CS0071"},
                             {{700, 330, 80, 30}, 0.6, "KA06N9659"},
                             {{0, 0, 10, 10}, 0.9, "DROPPED00"}});
  const auto first = anpr::filter_frame(f, cfg);
  REQUIRE(first.size() == 2);

  FrameRecord rebuilt;
  rebuilt.ts_ms = f.ts_ms;
  rebuilt.vehicles = f.vehicles;
  for (const auto &obs : first) {
    rebuilt.plates.push_back({obs.bbox, obs.confidence, obs.text});
  }
  const auto second = anpr::filter_frame(rebuilt, cfg);
  REQUIRE(second.size() == first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(second[i].bbox == first[i].bbox);
    CHECK(second[i].vehicle_class == first[i].vehicle_class);
  }
}

TEST_CASE("select_primary on empty input") {
  CHECK_FALSE(anpr::select_primary({}, anpr::Roi{{0, 0, 100, 100}}).has_value());
}

TEST_CASE("select_primary returns a lone observation") {
  const PlateObservation obs{{10, 10, 20, 10}, "X", 0.6, VehicleClass::Car, 0};
  const auto got = anpr::select_primary({obs}, anpr::Roi{{500, 500, 100, 100}});
  REQUIRE(got.has_value());
  CHECK(got->bbox == obs.bbox);
}

TEST_CASE("select_primary prefers the region over raw confidence") {
  const anpr::Roi roi{{100, 100, 200, 200}};
  const PlateObservation outside{{500, 500, 40, 20}, "A", 0.9, VehicleClass::Car, 0};
  const PlateObservation inside{{150, 150, 40, 20}, "B", 0.7, VehicleClass::Car, 0};
  const auto got = anpr::select_primary({outside, inside}, roi);
  REQUIRE(got.has_value());
  CHECK(got->text == "B");
}

TEST_CASE("select_primary agrees with a brute-force ranking") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::uniform_int_distribution<int> pos(0, 300);
  std::uniform_int_distribution<int> len(10, 60);
  std::uniform_int_distribution<int> count(1, 6);
  const anpr::Roi roi{{100, 100, 150, 150}};

  for (int trial = 0; trial < 500; ++trial) {
    std::vector<PlateObservation> obs;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      obs.push_back({{static_cast<double>(pos(rng)), static_cast<double>(pos(rng)),
                      static_cast<double>(len(rng)), static_cast<double>(len(rng)) / 2.0},
                     std::nullopt, conf(rng), VehicleClass::Car, 0});
    }

    // stated rule, applied literally
    std::vector<const PlateObservation *> pool;
    for (const auto &o : obs) {
      if (roi.contains_center(o.bbox)) pool.push_back(&o);
    }
    if (pool.empty()) {
      for (const auto &o : obs) pool.push_back(&o);
    }
    const auto *expected = *std::max_element(
        pool.begin(), pool.end(), [](const PlateObservation *a, const PlateObservation *b) {
          if (a->confidence != b->confidence) return a->confidence < b->confidence;
          if (a->bbox.area() != b->bbox.area()) return a->bbox.area() < b->bbox.area();
          return a->bbox.x > b->bbox.x;
        });

    const auto got = anpr::select_primary(obs, roi);
    REQUIRE(got.has_value());
    CHECK(got->bbox == expected->bbox);
    CHECK(got->confidence == expected->confidence);
  }
}
