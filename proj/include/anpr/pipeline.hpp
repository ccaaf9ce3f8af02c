#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anpr/config.hpp"
#include "anpr/filter.hpp"
#include "anpr/tracker.hpp"
#include "anpr/trace_io.hpp"
#include "anpr/types.hpp"

namespace anpr {

struct TrackRunSummary {
  std::size_t frames = 0;
  std::uint64_t entries = 0;
  std::uint64_t textless_commits = 0;
};

inline void check_roi_fits(const TrackerConfig &cfg, const TraceHeader &header) {
  const auto &r = cfg.roi.rect;
  if (r.right() > header.frame_width || r.bottom() > header.frame_height) {
    throw std::runtime_error("config: roi (" + std::to_string(r.x) + "," + std::to_string(r.y) +
                             "," + std::to_string(r.w) + "," + std::to_string(r.h) +
                             ") exceeds the trace's " + std::to_string(header.frame_width) + "x" +
                             std::to_string(header.frame_height) + " frame");
  }
}

// Filter -> primary selection -> automaton, over one frame.
template <typename Sink>
inline void track_frame(Tracker &tracker, const FrameRecord &frame, Sink &&sink) {
  const auto observations = filter_frame(frame, tracker.config());
  const auto primary = select_primary(observations, tracker.config().roi);
  if (auto entry = tracker.step(primary, frame.ts_ms)) {
    sink(*entry);
  }
}

template <typename Sink>
inline TrackRunSummary run_tracker(TraceReader &reader, const TrackerConfig &cfg, Sink &&sink) {
  check_roi_fits(cfg, reader.header());
  Tracker tracker(cfg);
  TrackRunSummary summary;
  while (auto frame = reader.next()) {
    track_frame(tracker, *frame, sink);
    summary.frames += 1;
  }
  summary.entries = tracker.entries_emitted();
  summary.textless_commits = tracker.textless_commits();
  return summary;
}

// In-memory variant used by experiments and tests.
inline std::vector<VehicleLogEntry> track_trace(const Trace &trace, const TrackerConfig &cfg,
                                                TrackRunSummary *summary_out = nullptr) {
  check_roi_fits(cfg, trace.header);
  Tracker tracker(cfg);
  std::vector<VehicleLogEntry> entries;
  for (const auto &frame : trace.frames) {
    track_frame(tracker, frame, [&entries](const VehicleLogEntry &e) { entries.push_back(e); });
  }
  if (summary_out != nullptr) {
    summary_out->frames = trace.frames.size();
    summary_out->entries = tracker.entries_emitted();
    summary_out->textless_commits = tracker.textless_commits();
  }
  return entries;
}

} // namespace anpr
