#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csibreath/dataio.hpp"
#include "csibreath/pipeline.hpp"

namespace csibreath {

enum class TruthAlignment { window_end, window_center };

struct EvalOptions {
  double window_s = 30.0;
  double step_s = 1.0;
  TruthAlignment alignment = TruthAlignment::window_end;
  unsigned threads = 0;  ///< 0 = hardware concurrency
  /// Largest spacing between truth rows (and between the track ends and the
  /// evaluated span) that still counts as covered.
  double max_truth_gap_s = 2.0;
};

enum class WindowStatus { estimated, gated, failed };

struct WindowRow {
  double start_s = 0.0;
  double truth_bpm = 0.0;
  WindowStatus status = WindowStatus::estimated;
  BreathingEstimate estimate;
  std::optional<double> abs_error_bpm;
  std::string failure;  ///< stage error text for failed windows
};

struct ErrorSummary {
  std::size_t windows = 0;
  std::size_t estimated = 0;
  std::size_t gated = 0;
  std::size_t failed = 0;
  double frac_below_0_5_bpm = 0.0;  ///< over estimated windows
  double frac_below_1_2_bpm = 0.0;
  double median_abs_error_bpm = 0.0;
  double mean_abs_error_bpm = 0.0;
  double gated_fraction = 0.0;  ///< over all windows

  bool no_estimates() const { return estimated == 0; }
};

struct ErrorReport {
  std::string system;
  std::vector<WindowRow> rows;
  ErrorSummary summary;
  /// Empirical CDF of the absolute error over estimated windows: (error bpm, fraction <= error).
  std::vector<std::pair<double, double>> cdf;
};

/// Summary and CDF from a set of rows.
ErrorSummary summarize(const std::vector<WindowRow>& rows);
std::vector<std::pair<double, double>> error_cdf(const std::vector<WindowRow>& rows);

/// Throws ValidationError naming the first gap when the track does not cover [0, span_s].
void check_truth_coverage(const GroundTruthTrack& truth, double span_s, double max_gap_s);

/// Runs `cfg` over every sliding window and scores it against the truth track.
ErrorReport evaluate(const CsiSampleSet& recording, const GroundTruthTrack& truth, const SystemConfig& cfg,
                     const EvalOptions& options = {});

struct ComparisonReport {
  std::vector<ErrorReport> systems;

  /// Columns: window_start_s,truth_bpm, then <system>_bpm,<system>_abs_err_bpm per system.
  /// Gated windows print "gated", failed windows "failed".
  void write_csv(std::ostream& out) const;
  /// Columns: system,abs_error_bpm,cumulative_fraction.
  void write_cdf_csv(std::ostream& out) const;
  /// One summary line per system.
  void write_summary(std::ostream& out) const;
};

ComparisonReport compare_systems(const CsiSampleSet& recording, const GroundTruthTrack& truth,
                                 const std::vector<SystemConfig>& configs, const EvalOptions& options = {});

/// Runs fn(k) for k in [0, n) on up to `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace csibreath
