#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anpr/config.hpp"
#include "anpr/log_io.hpp"
#include "anpr/metrics.hpp"
#include "anpr/pipeline.hpp"
#include "anpr/simulator.hpp"
#include "anpr/trace_io.hpp"

namespace {

anpr::TrackerConfig load_config_or_default(const std::string &path) {
  return path.empty() ? anpr::default_config() : anpr::load_config(path);
}

anpr::MatchConfig load_match_config_or_default(const std::string &path) {
  return path.empty() ? anpr::MatchConfig{} : anpr::load_match_config(path);
}

void write_json_file(const nlohmann::ordered_json &j, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("report: cannot write '" + path + "'");
  }
  out << j.dump(2) << "\n";
}

int cmd_track(const std::string &input, const std::string &config_path, const std::string &out,
              const std::string &format) {
  const auto cfg = load_config_or_default(config_path);
  anpr::TraceReader reader(input);
  anpr::LogWriter writer(out, format == "jsonl" ? anpr::LogFormat::Jsonl
                                                : anpr::LogFormat::Csv);
  const auto summary =
      anpr::run_tracker(reader, cfg, [&writer](const anpr::VehicleLogEntry &e) { writer.append(e); });
  std::cerr << "frames: " << summary.frames << "\n"
            << "entries: " << summary.entries << "\n"
            << "textless_commits: " << summary.textless_commits << "\n";
  return 0;
}

int cmd_simulate(const std::string &spec_path, const std::string &out_trace,
                 const std::string &out_truth) {
  const auto spec = anpr::load_scenario(spec_path);
  const auto generated = anpr::generate(spec);
  anpr::write_trace(generated.trace, out_trace);
  anpr::write_log(generated.truth, out_truth, anpr::log_format_from_extension(out_truth));
  std::cerr << "frames: " << generated.trace.frames.size() << "\n"
            << "vehicles: " << generated.truth.size() << "\n";
  return 0;
}

int cmd_evaluate(const std::string &pred_path, const std::string &truth_path,
                 const std::string &match_config_path, const std::string &report_path) {
  const auto mc = load_match_config_or_default(match_config_path);
  const auto report =
      anpr::evaluate(anpr::read_log(pred_path), anpr::read_log(truth_path), mc);
  std::cout << anpr::report_to_table(report);
  if (!report_path.empty()) {
    write_json_file(anpr::report_to_json(report), report_path);
  }
  return 0;
}

struct GroupStats {
  std::size_t detected = 0;
  std::size_t observed = 0;
};

nlohmann::ordered_json group_json(const GroupStats &g) {
  const auto rate = anpr::detection_rate(g.detected, g.observed);
  return {{"detected", g.detected},
          {"observed", g.observed},
          {"rate", rate.has_value() ? nlohmann::ordered_json(*rate)
                                    : nlohmann::ordered_json(nullptr)}};
}

std::string group_text(const GroupStats &g) {
  const auto rate = anpr::detection_rate(g.detected, g.observed);
  std::ostringstream out;
  if (rate.has_value()) {
    out << std::fixed << std::setprecision(1) << (*rate * 100.0) << "%";
  } else {
    out << "n/a";
  }
  out << " (" << g.detected << "/" << g.observed << ")";
  return out.str();
}

int cmd_experiment(const std::string &spec_path, const std::string &config_path,
                   const std::string &match_config_path, const std::string &report_path,
                   int repetitions, std::int64_t seed_step) {
  const auto base_spec = anpr::load_scenario(spec_path);
  const auto cfg = load_config_or_default(config_path);
  const auto mc = load_match_config_or_default(match_config_path);

  nlohmann::ordered_json reps = nlohmann::json::array();
  for (int r = 0; r < repetitions; ++r) {
    anpr::ScenarioSpec spec = base_spec;
    spec.seed = base_spec.seed + static_cast<std::uint64_t>(r) *
                                     static_cast<std::uint64_t>(seed_step);
    const auto generated = anpr::generate(spec);
    const auto entries = anpr::track_trace(generated.trace, cfg);
    const auto matches = anpr::match_logs(entries, generated.truth, mc);
    const auto report = anpr::per_class_report(matches, generated.truth, mc);

    // Detected flag per vehicle, keyed by the truth entry's identity.
    std::map<std::pair<std::string, std::int64_t>, bool> detected;
    for (const auto &v : spec.vehicles) {
      detected[{v.plate, anpr::truth_timestamp(spec, v)}] = false;
    }
    for (const auto &pair : matches.pairs) {
      detected[{pair.truth.vehicle_number, pair.truth.timestamp_ms}] = true;
    }
    GroupStats compliant;
    GroupStats violating;
    for (const auto &v : spec.vehicles) {
      GroupStats &g = anpr::sop_compliant(v, spec.fps) ? compliant : violating;
      g.observed += 1;
      if (detected[{v.plate, anpr::truth_timestamp(spec, v)}]) {
        g.detected += 1;
      }
    }

    std::cout << "repetition " << r << " (seed " << spec.seed << ")\n"
              << anpr::report_to_table(report) << "sop compliant:  "
              << group_text(compliant) << "\n"
              << "sop violating:  " << group_text(violating) << "\n\n";

    reps.push_back({{"seed", spec.seed},
                    {"evaluation", anpr::report_to_json(report)},
                    {"sop",
                     {{"compliant", group_json(compliant)},
                      {"violating", group_json(violating)}}}});
  }

  if (!report_path.empty()) {
    write_json_file({{"scenario", spec_path},
                     {"config", config_path.empty() ? "(defaults)" : config_path},
                     {"repetitions", std::move(reps)}},
                    report_path);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"License-plate vehicle logger: replay detection traces through the tracking "
               "automaton, generate synthetic scenarios, and score vehicle logs."};
  app.require_subcommand(1);

  std::string input, config_path, out, format = "csv";
  auto *track = app.add_subcommand("track", "Run the tracker over a detection trace");
  track->add_option("--input", input, "Detection trace (JSONL)")->required();
  track->add_option("--config", config_path, "Tracker config file (defaults when omitted)");
  track->add_option("--out", out, "Vehicle log output path")->required();
  track->add_option("--format", format, "Log format")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  std::string spec_path, out_trace, out_truth;
  auto *simulate = app.add_subcommand("simulate", "Generate a synthetic trace and truth log");
  simulate->add_option("--spec", spec_path, "Scenario spec (JSON)")->required();
  simulate->add_option("--out-trace", out_trace, "Trace output path")->required();
  simulate->add_option("--out-truth", out_truth, "Truth log output path")->required();

  std::string pred_path, truth_path, match_config_path, report_path;
  auto *evaluate = app.add_subcommand("evaluate", "Score a predicted log against ground truth");
  evaluate->add_option("--pred", pred_path, "Predicted vehicle log")->required();
  evaluate->add_option("--truth", truth_path, "Ground-truth vehicle log")->required();
  evaluate->add_option("--match-config", match_config_path, "Matching tolerances file");
  evaluate->add_option("--report", report_path, "Write the JSON report here");

  std::string exp_spec, exp_config, exp_match, exp_report;
  int repetitions = 1;
  std::int64_t seed_step = 0;
  auto *experiment =
      app.add_subcommand("experiment", "simulate + track + evaluate in one run");
  experiment->add_option("--spec", exp_spec, "Scenario spec (JSON)")->required();
  experiment->add_option("--config", exp_config, "Tracker config file");
  experiment->add_option("--match-config", exp_match, "Matching tolerances file");
  experiment->add_option("--report", exp_report, "Write the JSON report here");
  experiment->add_option("--repetitions", repetitions, "Number of runs")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--seed-step", seed_step,
                         "Seed offset between repetitions (0 repeats the same seed)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (track->parsed()) {
      return cmd_track(input, config_path, out, format);
    }
    if (simulate->parsed()) {
      return cmd_simulate(spec_path, out_trace, out_truth);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(pred_path, truth_path, match_config_path, report_path);
    }
    if (experiment->parsed()) {
      return cmd_experiment(exp_spec, exp_config, exp_match, exp_report, repetitions, seed_step);
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
