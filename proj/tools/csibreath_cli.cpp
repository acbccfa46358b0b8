// csibreath: simulate CSI recordings, estimate breathing rate per window,
// evaluate systems against a ground-truth track, and describe systems.
//
// Exit codes: 0 success, 1 estimation failure in at least one window,
// 2 usage, configuration, or I/O error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csibreath/chansim.hpp"
#include "csibreath/dataio.hpp"
#include "csibreath/eval.hpp"
#include "csibreath/pipeline.hpp"

namespace cb = csibreath;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEstimation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

cb::SystemConfig resolve_system(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) return cb::load_system(spec);
  try {
    return cb::SystemConfig::defaults(spec);
  } catch (const cb::ValidationError& e) {
    throw UsageError(e.what());
  }
}

void require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::exists(path)) throw UsageError(what + " not found: " + path);
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::string truth_out;
};

int run_simulate(const SimulateArgs& args) {
  require_file(args.scenario, "scenario");
  const cb::Scenario scenario = cb::load_scenario(args.scenario);
  const cb::CsiSampleSet csi = cb::simulate(scenario);
  cb::write_recording(csi, args.out);
  if (!args.truth_out.empty()) {
    cb::write_truth(cb::GroundTruthTrack::constant(scenario.motion.rate_hz, csi.meta().duration_s()), args.truth_out);
  }
  const auto& m = csi.meta();
  std::cout << "wrote " << args.out << ": " << m.num_snapshots << " x " << m.num_tx << " x " << m.num_rx << " x "
            << m.num_subcarriers << " at " << m.snapshot_rate_hz << " Hz, seed " << scenario.distortion.seed
            << ", breathing " << scenario.motion.rate_hz << " Hz\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string in;
  std::string system;
  double window_s = 30.0;
  double step_s = 1.0;
  bool json = false;
  unsigned threads = 0;
};

int run_estimate(const EstimateArgs& args) {
  const cb::SystemConfig cfg = resolve_system(args.system);
  require_file(args.in, "recording");
  const cb::CsiSampleSet csi = cb::read_recording(args.in);
  const auto windows = cb::sliding_windows(csi.meta(), args.window_s, args.step_s);
  const double fs = csi.meta().snapshot_rate_hz;

  struct Result {
    cb::BreathingEstimate estimate;
    std::string failure;
  };
  std::vector<Result> results(windows.size());
  cb::parallel_for(windows.size(), args.threads, [&](std::size_t k) {
    try {
      results[k].estimate = cb::run_window(csi.window(windows[k].first, windows[k].length), cfg);
    } catch (const cb::StageError& e) {
      if (!e.estimation_failure()) throw;
      results[k].failure = e.what();
    }
  });

  bool any_failed = false;
  if (!args.json) {
    std::cout << std::left << std::setw(16) << "window_start_s" << std::setw(12) << "rate_bpm" << std::setw(10) << "q"
              << "score\n";
  }
  for (std::size_t k = 0; k < windows.size(); ++k) {
    const double start = double(windows[k].first) / fs;
    const Result& r = results[k];
    const bool failed = !r.failure.empty();
    any_failed = any_failed || failed;
    if (failed) std::cerr << "window at " << start << " s: " << r.failure << '\n';
    if (args.json) {
      nlohmann::json rec;
      rec["window_start_s"] = start;
      rec["system"] = cfg.name;
      if (failed) {
        rec["rate_bpm"] = "failed";
      } else if (!r.estimate.stable) {
        rec["rate_bpm"] = "gated";
      } else {
        rec["rate_bpm"] = *r.estimate.rate_bpm();
      }
      rec["score"] = r.estimate.selection_score;
      rec["q"] = r.estimate.q_score;
      std::cout << rec.dump() << '\n';
    } else {
      std::ostringstream rate;
      if (failed) {
        rate << "failed";
      } else if (!r.estimate.stable) {
        rate << "gated";
      } else {
        rate << std::fixed << std::setprecision(3) << *r.estimate.rate_bpm();
      }
      std::cout << std::left << std::setw(16) << start << std::setw(12) << rate.str() << std::setw(10)
                << std::setprecision(4) << r.estimate.q_score << r.estimate.selection_score << '\n';
    }
  }
  return any_failed ? kExitEstimation : kExitOk;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string in;
  std::string truth;
  std::string systems;
  std::string out;
  std::string cdf_out;
  double window_s = 30.0;
  double step_s = 1.0;
  std::string align = "end";
  unsigned threads = 0;
};

int run_evaluate(const EvaluateArgs& args) {
  std::vector<cb::SystemConfig> configs;
  if (args.systems.empty()) {
    configs = cb::list_systems();
  } else {
    for (const auto& name : split_list(args.systems)) configs.push_back(resolve_system(name));
    if (configs.empty()) throw UsageError("--systems lists no systems");
  }
  require_file(args.in, "recording");
  require_file(args.truth, "truth track");
  const cb::CsiSampleSet csi = cb::read_recording(args.in);
  const cb::GroundTruthTrack truth = cb::read_truth(args.truth);

  cb::EvalOptions options;
  options.window_s = args.window_s;
  options.step_s = args.step_s;
  options.threads = args.threads;
  options.alignment = args.align == "center" ? cb::TruthAlignment::window_center : cb::TruthAlignment::window_end;

  const cb::ComparisonReport report = cb::compare_systems(csi, truth, configs, options);
  {
    std::ofstream out(args.out);
    if (!out) throw UsageError("cannot write report " + args.out);
    report.write_csv(out);
  }
  if (!args.cdf_out.empty()) {
    std::ofstream out(args.cdf_out);
    if (!out) throw UsageError("cannot write CDF table " + args.cdf_out);
    report.write_cdf_csv(out);
  }
  report.write_summary(std::cout);

  bool any_failed = false;
  for (const auto& sys : report.systems) {
    for (const auto& row : sys.rows) {
      if (row.status == cb::WindowStatus::failed) {
        any_failed = true;
        std::cerr << sys.system << " window at " << row.start_s << " s: " << row.failure << '\n';
      }
    }
  }
  return any_failed ? kExitEstimation : kExitOk;
}

// ---------------------------------------------------------------------------

int run_describe(const std::string& system) {
  if (!system.empty()) {
    std::cout << cb::system_to_config(resolve_system(system));
    return kExitOk;
  }
  for (const auto& cfg : cb::list_systems()) {
    std::cout << std::left << std::setw(20) << cfg.name << " q<" << cfg.q_threshold << " boi=[" << cfg.boi.low_hz
              << ", " << cfg.boi.high_hz << "] Hz psd_res=" << cfg.psd_resolution_hz << " Hz";
    if (cfg.is_complexbeat()) {
      std::cout << " D=" << cfg.amplitude_half_width << " fit_window=" << cfg.fit_window;
      if (cfg.tau_max_s) std::cout << " tau_max=" << *cfg.tau_max_s * 1e9 << " ns";
    } else {
      std::cout << " hampel=" << cfg.hampel_window_s << " s/" << cfg.hampel_threshold;
      std::cout << (cfg.uses_peak_detect() ? " detect=peak" : " detect=psd");
    }
    std::cout << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReduceArgs {
  std::string in;
  std::string out;
  cb::Index tx = 0;
  cb::Index stride = 2;
  std::string half = "upper";
};

int run_reduce(const ReduceArgs& args) {
  require_file(args.in, "recording");
  cb::BandHalf half = cb::BandHalf::full;
  if (args.half == "upper") half = cb::BandHalf::upper;
  if (args.half == "lower") half = cb::BandHalf::lower;
  const cb::CsiSampleSet reduced = cb::reduce_dataset(cb::read_recording(args.in), args.tx, args.stride, half);
  cb::write_recording(reduced, args.out);
  std::cout << "wrote " << args.out << ": " << reduced.meta().num_subcarriers << " subcarriers\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Breathing-rate estimation from WiFi channel state information"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Synthesize a recording from a scenario file");
  simulate->add_option("--scenario", sim.scenario, "Scenario config file")->required();
  simulate->add_option("--out", sim.out, "Output recording")->required();
  simulate->add_option("--truth-out", sim.truth_out, "Write a constant-rate ground-truth track");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the breathing rate in every window of a recording");
  estimate->add_option("--in", est.in, "Input recording")->required();
  estimate->add_option("--system", est.system, "System name or system config file")->required();
  estimate->add_option("--window", est.window_s, "Window length in seconds")->capture_default_str();
  estimate->add_option("--step", est.step_s, "Window step in seconds")->capture_default_str();
  estimate->add_flag("--json", est.json, "Emit one JSON record per line");
  estimate->add_option("--threads", est.threads, "Worker threads (0 = all cores)")->capture_default_str();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Compare systems against a ground-truth track");
  evaluate->add_option("--in", ev.in, "Input recording")->required();
  evaluate->add_option("--truth", ev.truth, "Ground-truth track (time_s,rate_hz)")->required();
  evaluate->add_option("--systems", ev.systems, "Comma-separated system names or config files (default: all)");
  evaluate->add_option("--out", ev.out, "Per-window report (CSV)")->required();
  evaluate->add_option("--cdf-out", ev.cdf_out, "Error CDF table (CSV)");
  evaluate->add_option("--window", ev.window_s, "Window length in seconds")->capture_default_str();
  evaluate->add_option("--step", ev.step_s, "Window step in seconds")->capture_default_str();
  evaluate->add_option("--align", ev.align, "Truth alignment: end or center")
      ->check(CLI::IsMember({"end", "center"}))
      ->capture_default_str();
  evaluate->add_option("--threads", ev.threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::string describe_system;
  auto* describe = app.add_subcommand("describe", "List systems and their defaults");
  describe->add_option("--system", describe_system, "Print one system as a config file");

  ReduceArgs red;
  auto* reduce = app.add_subcommand("reduce", "Keep one TX antenna and a strided half band");
  reduce->add_option("--in", red.in, "Input recording")->required();
  reduce->add_option("--out", red.out, "Output recording")->required();
  reduce->add_option("--tx", red.tx, "TX antenna to keep")->capture_default_str();
  reduce->add_option("--stride", red.stride, "Subcarrier stride")->capture_default_str();
  reduce->add_option("--half", red.half, "Band half: upper, lower, or full")
      ->check(CLI::IsMember({"upper", "lower", "full"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*evaluate) return run_evaluate(ev);
    if (*describe) return run_describe(describe_system);
    if (*reduce) return run_reduce(red);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cb::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.estimation_failure() ? kExitEstimation : kExitUsage;
  } catch (const cb::EstimationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
