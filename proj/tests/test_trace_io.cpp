#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "anpr/log_io.hpp"
#include "anpr/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("anpr_test_" + std::to_string(Catch::rngSeed()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string &name) const { return (path / name).string(); }
};

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

const char *kHeader = R"({"fps":10,"frame_width":1920,"frame_height":1080,"source_id":"cam"})";

anpr::Trace sample_trace() {
  anpr::Trace trace;
  trace.header = {10.0, 1920, 1080, "cam"};
  for (int i = 0; i < 3; ++i) {
    anpr::FrameRecord f;
    f.frame_index = i;
    f.ts_ms = 1000 + 100 * i;
    if (i == 1) {
      f.vehicles.push_back({{100, 100, 400, 300}, anpr::VehicleClass::Jeep, 0.85});
      f.plates.push_back({{240, 330, 90, 32}, 0.8, "MH03CS0071"});
      f.plates.push_back({{700, 700, 90, 32}, 0.7, std::nullopt});
    }
    trace.frames.push_back(std::move(f));
  }
  return trace;
}

} // namespace

TEST_CASE("header-only trace yields zero frames") {
  TempDir dir;
  write_file(dir.file("t.jsonl"), std::string(kHeader) + "\n");
  const auto trace = anpr::read_trace(dir.file("t.jsonl"));
  CHECK(trace.header.fps == 10.0);
  CHECK(trace.header.frame_width == 1920);
  CHECK(trace.frames.empty());
}

TEST_CASE("three frames come back in order") {
  TempDir dir;
  write_file(dir.file("t.jsonl"),
             std::string(kHeader) + "\n" +
                 R"({"frame":0,"ts_ms":0,"vehicles":[],"plates":[]})" + "\n" +
                 R"({"frame":1,"ts_ms":100,"vehicles":[],"plates":[]})" + "\n" +
                 R"({"frame":5,"ts_ms":200,"vehicles":[],"plates":[]})" + "\n");
  const auto trace = anpr::read_trace(dir.file("t.jsonl"));
  REQUIRE(trace.frames.size() == 3);
  CHECK(trace.frames[0].frame_index == 0);
  CHECK(trace.frames[1].frame_index == 1);
  CHECK(trace.frames[2].frame_index == 5);
}

TEST_CASE("non-monotone frame index is an error naming the line") {
  TempDir dir;
  write_file(dir.file("t.jsonl"),
             std::string(kHeader) + "\n" +
                 R"({"frame":0,"ts_ms":0})" + "\n" + R"({"frame":2,"ts_ms":100})" + "\n" +
                 R"({"frame":1,"ts_ms":200})" + "\n");
  CHECK_THROWS_WITH(anpr::read_trace(dir.file("t.jsonl")),
                    Catch::Matchers::ContainsSubstring(":4") &&
                        Catch::Matchers::ContainsSubstring("frame index"));
}

TEST_CASE("decreasing timestamps are rejected") {
  TempDir dir;
  write_file(dir.file("t.jsonl"),
             std::string(kHeader) + "\n" +
                 R"({"frame":0,"ts_ms":500})" + "\n" + R"({"frame":1,"ts_ms":400})" + "\n");
  CHECK_THROWS_WITH(anpr::read_trace(dir.file("t.jsonl")),
                    Catch::Matchers::ContainsSubstring("timestamp"));
}

TEST_CASE("malformed line is an error naming the line") {
  TempDir dir;
  write_file(dir.file("t.jsonl"), std::string(kHeader) + "\n" + "not json\n");
  CHECK_THROWS_WITH(anpr::read_trace(dir.file("t.jsonl")),
                    Catch::Matchers::ContainsSubstring(":2"));
}

TEST_CASE("invalid boxes and confidences are rejected") {
  TempDir dir;
  write_file(dir.file("a.jsonl"),
             std::string(kHeader) + "\n" +
                 R"({"frame":0,"ts_ms":0,"vehicles":[{"x":0,"y":0,"w":-5,"h":10,"conf":0.9,"cls":"car"}]})" +
                 "\n");
  CHECK_THROWS_WITH(anpr::read_trace(dir.file("a.jsonl")),
                    Catch::Matchers::ContainsSubstring("bbox"));

  write_file(dir.file("b.jsonl"),
             std::string(kHeader) + "\n" +
                 R"({"frame":0,"ts_ms":0,"plates":[{"x":0,"y":0,"w":5,"h":5,"conf":1.4}]})" +
                 "\n");
  CHECK_THROWS_WITH(anpr::read_trace(dir.file("b.jsonl")),
                    Catch::Matchers::ContainsSubstring("confidence"));
}

TEST_CASE("missing trace file") {
  CHECK_THROWS_WITH(anpr::read_trace("/nonexistent/trace.jsonl"),
                    Catch::Matchers::ContainsSubstring("cannot open"));
}

TEST_CASE("trace round-trips field by field") {
  TempDir dir;
  const auto trace = sample_trace();
  anpr::write_trace(trace, dir.file("t.jsonl"));
  const auto back = anpr::read_trace(dir.file("t.jsonl"));

  CHECK(back.header.fps == trace.header.fps);
  CHECK(back.header.frame_width == trace.header.frame_width);
  CHECK(back.header.frame_height == trace.header.frame_height);
  CHECK(back.header.source_id == trace.header.source_id);
  REQUIRE(back.frames.size() == trace.frames.size());
  for (std::size_t i = 0; i < trace.frames.size(); ++i) {
    CHECK(back.frames[i].frame_index == trace.frames[i].frame_index);
    CHECK(back.frames[i].ts_ms == trace.frames[i].ts_ms);
    REQUIRE(back.frames[i].vehicles.size() == trace.frames[i].vehicles.size());
    for (std::size_t v = 0; v < trace.frames[i].vehicles.size(); ++v) {
      CHECK(back.frames[i].vehicles[v].bbox == trace.frames[i].vehicles[v].bbox);
      CHECK(back.frames[i].vehicles[v].cls == trace.frames[i].vehicles[v].cls);
      CHECK(back.frames[i].vehicles[v].confidence == trace.frames[i].vehicles[v].confidence);
    }
    REQUIRE(back.frames[i].plates.size() == trace.frames[i].plates.size());
    for (std::size_t p = 0; p < trace.frames[i].plates.size(); ++p) {
      CHECK(back.frames[i].plates[p].bbox == trace.frames[i].plates[p].bbox);
      CHECK(back.frames[i].plates[p].confidence == trace.frames[i].plates[p].confidence);
      CHECK(back.frames[i].plates[p].text == trace.frames[i].plates[p].text);
    }
  }
}

TEST_CASE("empty log writes only the CSV header") {
  TempDir dir;
  anpr::write_log({}, dir.file("log.csv"), anpr::LogFormat::Csv);
  CHECK(read_file(dir.file("log.csv")) == "vehicle_number,vehicle_type,timestamp_ms\n");
}

TEST_CASE("one entry becomes one CSV row") {
  TempDir dir;
  anpr::write_log({{"MH03CS0071", anpr::VehicleClass::Car, 1654598400000}}, dir.file("log.csv"),
                  anpr::LogFormat::Csv);
  CHECK(read_file(dir.file("log.csv")) ==
        "vehicle_number,vehicle_type,timestamp_ms\nMH03CS0071,car,1654598400000\n");
}

TEST_CASE("log writing is deterministic") {
  TempDir dir;
  const std::vector<anpr::VehicleLogEntry> entries = {
      {"MH03CS0071", anpr::VehicleClass::Car, 1654598400000},
      {"KA06N9659", anpr::VehicleClass::Bus, 1655036580000},
  };
  anpr::write_log(entries, dir.file("a.csv"), anpr::LogFormat::Csv);
  anpr::write_log(entries, dir.file("b.csv"), anpr::LogFormat::Csv);
  CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));
}

TEST_CASE("logs round-trip in both formats") {
  TempDir dir;
  const std::vector<anpr::VehicleLogEntry> entries = {
      {"MH03CS0071", anpr::VehicleClass::Car, 1654598400000},
      {"KA06N9659", anpr::VehicleClass::Bus, 1655036580000},
  };
  anpr::write_log(entries, dir.file("log.csv"), anpr::LogFormat::Csv);
  CHECK(anpr::read_log(dir.file("log.csv")) == entries);
  anpr::write_log(entries, dir.file("log.jsonl"), anpr::LogFormat::Jsonl);
  CHECK(anpr::read_log(dir.file("log.jsonl")) == entries);
}

TEST_CASE("log reader rejects mangled rows") {
  TempDir dir;
  write_file(dir.file("log.csv"),
             "vehicle_number,vehicle_type,timestamp_ms\nMH03CS0071,car\n");
  CHECK_THROWS_WITH(anpr::read_log(dir.file("log.csv")),
                    Catch::Matchers::ContainsSubstring(":2"));
  write_file(dir.file("bad_cls.csv"),
             "vehicle_number,vehicle_type,timestamp_ms\nMH03CS0071,vans,0\n");
  CHECK_THROWS_WITH(anpr::read_log(dir.file("bad_cls.csv")),
                    Catch::Matchers::ContainsSubstring("vehicle class"));
}
