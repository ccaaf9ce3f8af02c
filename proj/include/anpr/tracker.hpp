#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anpr/config.hpp"
#include "anpr/filter.hpp"
#include "anpr/geometry.hpp"
#include "anpr/text.hpp"
#include "anpr/types.hpp"

namespace anpr {

// Q1: idle, no vehicle seen. Q2: a candidate vehicle is accumulating matching
// detections. Q3: the vehicle has been committed to the log and is still at
// the checkpoint.
enum class AutomatonState { Q1, Q2, Q3 };

inline std::string_view to_string(AutomatonState s) {
  switch (s) {
  case AutomatonState::Q1: return "q1";
  case AutomatonState::Q2: return "q2";
  case AutomatonState::Q3: return "q3";
  }
  return "q1";
}

// Per-frame input as seen by the automaton. Match: detection similar to the
// active track's reference box (or any detection when no track exists).
// Mismatch: detection dissimilar to the reference box.
enum class InputSymbol { Match, Mismatch, NoDetection };

// Evidence accumulated for the vehicle currently being followed.
struct TrackEvidence {
  BBox ref_bbox;
  std::vector<std::pair<std::string, std::int64_t>> texts; // present OCR reads, in order
  std::vector<VehicleClass> classes;                       // one vote per matched detection
  std::int64_t first_seen_ms = 0;
};

struct TrackerState {
  AutomatonState state = AutomatonState::Q1;
  int fc = 0; // consecutive matching detections counted toward a commit
  int zc = 0; // consecutive no-detection frames
  std::optional<TrackEvidence> track;
};

// The plate string written to the log: either the most recent OCR read, or
// the plurality read after normalization (ties to the most recent). Absent
// when the track never produced any text.
inline std::optional<std::string> select_representative(const TrackEvidence &track,
                                                        SelectionStrategy strategy) {
  if (track.texts.empty()) {
    return std::nullopt;
  }
  if (strategy == SelectionStrategy::LastPrediction) {
    return track.texts.back().first;
  }
  std::map<std::string, std::pair<std::size_t, std::size_t>> votes; // text -> (count, last index)
  for (std::size_t i = 0; i < track.texts.size(); ++i) {
    auto &slot = votes[normalize_plate(track.texts[i].first)];
    slot.first += 1;
    slot.second = i;
  }
  const std::string *winner = nullptr;
  std::pair<std::size_t, std::size_t> best{0, 0};
  for (const auto &[text, slot] : votes) {
    if (winner == nullptr || slot.first > best.first ||
        (slot.first == best.first && slot.second > best.second)) {
      winner = &text;
      best = slot;
    }
  }
  return *winner;
}

// Plurality class across the track's votes, ties to the most recent.
inline VehicleClass class_vote(const TrackEvidence &track) {
  std::array<std::size_t, kVehicleClasses.size()> count{};
  std::array<std::size_t, kVehicleClasses.size()> last{};
  for (std::size_t i = 0; i < track.classes.size(); ++i) {
    const std::size_t c = class_index(track.classes[i]);
    count[c] += 1;
    last[c] = i;
  }
  VehicleClass winner = track.classes.front();
  for (VehicleClass c : kVehicleClasses) {
    const std::size_t i = class_index(c);
    const std::size_t w = class_index(winner);
    if (count[i] > count[w] || (count[i] == count[w] && count[i] > 0 && last[i] > last[w])) {
      winner = c;
    }
  }
  return winner;
}

// Deterministic single-track automaton over per-frame optional observations.
//
// Transition relation (guards checked before counter updates):
//   q1, none                  -> q1
//   q1, match                 -> q2   start track, fc = 1
//   q2, match, fc <  thresh   -> q2   fc += 1, absorb observation, zc = 0
//   q2, match, fc == thresh   -> q3   absorb, emit log entry, fc = 0, zc = 0
//   q2, mismatch              -> q2   fc = 0, restart track from observation, zc = 0
//   q2, none, zc <  thresh    -> q2   zc += 1
//   q2, none, zc == thresh    -> q1   full reset, drop track
//   q3, match                 -> q3   zc = 0
//   q3, none, zc <  thresh    -> q3   zc += 1
//   q3, none, zc == thresh    -> q1   full reset, drop track
//   q3, mismatch              -> q2   restart track from observation, fc = 1, zc = 0
//
// A commit therefore needs fc_thresh + 1 matching detections in a row (one to
// enter q2, fc_thresh more inside it), and a track survives up to zc_thresh
// consecutive no-detection frames. Any detection restarts the zc count. A
// commit whose track holds no OCR text is suppressed and counted instead of
// emitting an empty number.
class Tracker {
public:
  explicit Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  const TrackerConfig &config() const { return cfg_; }
  const TrackerState &state() const { return state_; }
  std::uint64_t entries_emitted() const { return entries_emitted_; }
  std::uint64_t textless_commits() const { return textless_commits_; }

  InputSymbol classify(const std::optional<PlateObservation> &obs) const {
    if (!obs.has_value()) {
      return InputSymbol::NoDetection;
    }
    if (!state_.track.has_value()) {
      return InputSymbol::Match;
    }
    return iou(obs->bbox, state_.track->ref_bbox) >= cfg_.iou_similarity ? InputSymbol::Match
                                                                         : InputSymbol::Mismatch;
  }

  std::optional<VehicleLogEntry> step(const std::optional<PlateObservation> &obs,
                                      std::int64_t ts_ms) {
    const InputSymbol sym = classify(obs);
    switch (state_.state) {
    case AutomatonState::Q1:
      if (sym == InputSymbol::NoDetection) {
        return std::nullopt;
      }
      // No reference exists in q1, so any detection is a match.
      start_track(*obs, ts_ms);
      state_.fc = 1;
      state_.state = AutomatonState::Q2;
      return std::nullopt;

    case AutomatonState::Q2:
      switch (sym) {
      case InputSymbol::Match:
        state_.zc = 0;
        absorb(*obs, ts_ms);
        if (state_.fc == cfg_.fc_thresh) {
          state_.fc = 0;
          state_.state = AutomatonState::Q3;
          return commit(ts_ms);
        }
        state_.fc += 1;
        return std::nullopt;
      case InputSymbol::Mismatch:
        state_.fc = 0;
        state_.zc = 0;
        start_track(*obs, ts_ms);
        return std::nullopt;
      case InputSymbol::NoDetection:
        if (state_.zc == cfg_.zc_thresh) {
          reset_to_idle();
        } else {
          state_.zc += 1;
        }
        return std::nullopt;
      }
      return std::nullopt;

    case AutomatonState::Q3:
      switch (sym) {
      case InputSymbol::Match:
        state_.zc = 0;
        return std::nullopt;
      case InputSymbol::Mismatch:
        start_track(*obs, ts_ms);
        state_.fc = 1;
        state_.zc = 0;
        state_.state = AutomatonState::Q2;
        return std::nullopt;
      case InputSymbol::NoDetection:
        if (state_.zc == cfg_.zc_thresh) {
          reset_to_idle();
        } else {
          state_.zc += 1;
        }
        return std::nullopt;
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

private:
  void start_track(const PlateObservation &obs, std::int64_t ts_ms) {
    TrackEvidence track;
    track.ref_bbox = obs.bbox;
    track.first_seen_ms = ts_ms;
    if (obs.text.has_value()) {
      track.texts.emplace_back(*obs.text, ts_ms);
    }
    track.classes.push_back(obs.vehicle_class);
    state_.track = std::move(track);
  }

  void absorb(const PlateObservation &obs, std::int64_t ts_ms) {
    TrackEvidence &track = *state_.track;
    track.ref_bbox = obs.bbox;
    if (obs.text.has_value()) {
      track.texts.emplace_back(*obs.text, ts_ms);
    }
    track.classes.push_back(obs.vehicle_class);
  }

  std::optional<VehicleLogEntry> commit(std::int64_t ts_ms) {
    const auto number = select_representative(*state_.track, cfg_.selection_strategy);
    if (!number.has_value()) {
      textless_commits_ += 1;
      return std::nullopt;
    }
    entries_emitted_ += 1;
    return VehicleLogEntry{*number, class_vote(*state_.track), ts_ms};
  }

  void reset_to_idle() {
    state_.fc = 0;
    state_.zc = 0;
    state_.track.reset();
    state_.state = AutomatonState::Q1;
  }

  TrackerConfig cfg_;
  TrackerState state_;
  std::uint64_t entries_emitted_ = 0;
  std::uint64_t textless_commits_ = 0;
};

} // namespace anpr
