#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anpr/text.hpp"
#include "anpr/types.hpp"

namespace anpr {

enum class LogFormat { Csv, Jsonl };

inline LogFormat log_format_from_extension(const std::string &path) {
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0) {
    return LogFormat::Jsonl;
  }
  return LogFormat::Csv;
}

inline constexpr const char *kLogCsvHeader = "vehicle_number,vehicle_type,timestamp_ms";

// Append-only vehicle-log sink. CSV gets a header row on open; every entry is
// flushed as soon as it is written.
class LogWriter {
public:
  LogWriter(const std::string &path, LogFormat format)
      : path_(path), format_(format), out_(path, std::ios::binary) {
    if (!out_) {
      throw std::runtime_error("log: cannot write '" + path + "'");
    }
    if (format_ == LogFormat::Csv) {
      out_ << kLogCsvHeader << "\n";
      out_.flush();
    }
  }

  void append(const VehicleLogEntry &entry) {
    if (entry.vehicle_number.empty()) {
      throw std::runtime_error("log: refusing to write entry with empty vehicle number");
    }
    if (format_ == LogFormat::Csv) {
      out_ << entry.vehicle_number << ',' << to_string(entry.vehicle_type) << ','
           << entry.timestamp_ms << "\n";
    } else {
      nlohmann::ordered_json j{{"vehicle_number", entry.vehicle_number},
                               {"vehicle_type", to_string(entry.vehicle_type)},
                               {"timestamp_ms", entry.timestamp_ms}};
      out_ << j.dump() << "\n";
    }
    out_.flush();
    if (!out_) {
      throw std::runtime_error("log: write failed for '" + path_ + "'");
    }
    count_ += 1;
  }

  std::size_t count() const { return count_; }

private:
  std::string path_;
  LogFormat format_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

inline void write_log(const std::vector<VehicleLogEntry> &entries, const std::string &path,
                      LogFormat format) {
  LogWriter writer(path, format);
  for (const auto &e : entries) {
    writer.append(e);
  }
}

inline std::vector<VehicleLogEntry> read_log(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("log: cannot open '" + path + "'");
  }
  const LogFormat format = log_format_from_extension(path);
  std::vector<VehicleLogEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    if (format == LogFormat::Csv && line_no == 1) {
      if (line != kLogCsvHeader) {
        throw std::runtime_error(path + ":1: expected CSV header '" +
                                 std::string(kLogCsvHeader) + "'");
      }
      continue;
    }
    VehicleLogEntry entry;
    std::string cls_text;
    std::string ts_text;
    if (format == LogFormat::Csv) {
      const auto c1 = line.find(',');
      const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos ||
          line.find(',', c2 + 1) != std::string::npos) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected 3 CSV fields");
      }
      entry.vehicle_number = line.substr(0, c1);
      cls_text = line.substr(c1 + 1, c2 - c1 - 1);
      ts_text = line.substr(c2 + 1);
    } else {
      try {
        const auto j = nlohmann::json::parse(line);
        entry.vehicle_number = j.at("vehicle_number").get<std::string>();
        cls_text = j.at("vehicle_type").get<std::string>();
        entry.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
      } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    const auto cls = vehicle_class_from_string(cls_text);
    if (!cls) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unknown vehicle class '" + cls_text + "'");
    }
    entry.vehicle_type = *cls;
    if (format == LogFormat::Csv) {
      try {
        std::size_t pos = 0;
        entry.timestamp_ms = std::stoll(ts_text, &pos);
        if (pos != ts_text.size()) {
          throw std::invalid_argument(ts_text);
        }
      } catch (const std::exception &) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": bad timestamp '" + ts_text + "'");
      }
    }
    if (entry.vehicle_number.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty vehicle number");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

} // namespace anpr
