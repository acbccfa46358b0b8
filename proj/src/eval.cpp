#include "csibreath/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace csibreath {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) {
          try {
            fn(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

void check_truth_coverage(const GroundTruthTrack& truth, double span_s, double max_gap_s) {
  truth.validate();
  const auto gap = [](double a, double b) {
    std::ostringstream os;
    os << "ground truth does not cover [" << a << ", " << b << "] s";
    return ValidationError(os.str());
  };
  if (truth.time_s.front() > max_gap_s) throw gap(0.0, truth.time_s.front());
  for (std::size_t k = 1; k < truth.size(); ++k) {
    if (truth.time_s[k] - truth.time_s[k - 1] > max_gap_s) throw gap(truth.time_s[k - 1], truth.time_s[k]);
  }
  if (span_s - truth.time_s.back() > max_gap_s) throw gap(truth.time_s.back(), span_s);
}

ErrorSummary summarize(const std::vector<WindowRow>& rows) {
  ErrorSummary s;
  s.windows = rows.size();
  std::vector<double> errors;
  for (const auto& row : rows) {
    switch (row.status) {
      case WindowStatus::estimated: errors.push_back(*row.abs_error_bpm); break;
      case WindowStatus::gated: ++s.gated; break;
      case WindowStatus::failed: ++s.failed; break;
    }
  }
  s.estimated = errors.size();
  if (s.windows > 0) s.gated_fraction = double(s.gated) / double(s.windows);
  if (errors.empty()) return s;

  const auto below = [&](double limit) {
    return double(std::count_if(errors.begin(), errors.end(), [&](double e) { return e < limit; })) /
           double(errors.size());
  };
  s.frac_below_0_5_bpm = below(0.5);
  s.frac_below_1_2_bpm = below(1.2);
  std::sort(errors.begin(), errors.end());
  const std::size_t n = errors.size();
  s.median_abs_error_bpm = n % 2 == 1 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  double total = 0.0;
  for (double e : errors) total += e;
  s.mean_abs_error_bpm = total / double(n);
  return s;
}

std::vector<std::pair<double, double>> error_cdf(const std::vector<WindowRow>& rows) {
  std::vector<double> errors;
  for (const auto& row : rows) {
    if (row.status == WindowStatus::estimated) errors.push_back(*row.abs_error_bpm);
  }
  std::sort(errors.begin(), errors.end());
  std::vector<std::pair<double, double>> cdf;
  const double n = double(errors.size());
  for (std::size_t k = 0; k < errors.size(); ++k) {
    // Collapse duplicates onto the last occurrence so the table is a proper step function.
    if (k + 1 < errors.size() && errors[k + 1] == errors[k]) continue;
    cdf.emplace_back(errors[k], double(k + 1) / n);
  }
  return cdf;
}

ErrorReport evaluate(const CsiSampleSet& recording, const GroundTruthTrack& truth, const SystemConfig& cfg,
                     const EvalOptions& options) {
  cfg.validate();
  const RadioMeta& meta = recording.meta();
  const double fs = meta.snapshot_rate_hz;
  check_truth_coverage(truth, meta.duration_s(), options.max_truth_gap_s);

  const std::vector<WindowSpan> windows = sliding_windows(meta, options.window_s, options.step_s);
  ErrorReport report;
  report.system = cfg.name;
  report.rows.resize(windows.size());

  parallel_for(windows.size(), options.threads, [&](std::size_t k) {
    const WindowSpan& w = windows[k];
    WindowRow& row = report.rows[k];
    row.start_s = double(w.first) / fs;
    const double anchor = options.alignment == TruthAlignment::window_end
                              ? double(w.first + w.length) / fs
                              : (double(w.first) + 0.5 * double(w.length)) / fs;
    row.truth_bpm = 60.0 * truth.rate_at(anchor);
    try {
      row.estimate = run_window(recording.window(w.first, w.length), cfg);
      if (!row.estimate.stable) {
        row.status = WindowStatus::gated;
      } else {
        row.status = WindowStatus::estimated;
        row.abs_error_bpm = std::abs(*row.estimate.rate_bpm() - row.truth_bpm);
      }
    } catch (const StageError& e) {
      if (!e.estimation_failure()) throw;
      row.status = WindowStatus::failed;
      row.failure = e.what();
    }
  });

  report.summary = summarize(report.rows);
  report.cdf = error_cdf(report.rows);
  return report;
}

ComparisonReport compare_systems(const CsiSampleSet& recording, const GroundTruthTrack& truth,
                                 const std::vector<SystemConfig>& configs, const EvalOptions& options) {
  ComparisonReport out;
  for (const auto& cfg : configs) out.systems.push_back(evaluate(recording, truth, cfg, options));
  return out;
}

namespace {

std::string cell(const WindowRow& row, bool error_column) {
  switch (row.status) {
    case WindowStatus::gated: return "gated";
    case WindowStatus::failed: return "failed";
    case WindowStatus::estimated: break;
  }
  std::ostringstream os;
  os << std::setprecision(10) << (error_column ? *row.abs_error_bpm : *row.estimate.rate_bpm());
  return os.str();
}

}  // namespace

void ComparisonReport::write_csv(std::ostream& out) const {
  out << "window_start_s,truth_bpm";
  for (const auto& sys : systems) out << ',' << sys.system << "_bpm," << sys.system << "_abs_err_bpm";
  out << '\n';
  if (systems.empty()) return;
  const std::size_t rows = systems.front().rows.size();
  for (std::size_t k = 0; k < rows; ++k) {
    const WindowRow& first = systems.front().rows[k];
    out << std::setprecision(10) << first.start_s << ',' << first.truth_bpm;
    for (const auto& sys : systems) out << ',' << cell(sys.rows[k], false) << ',' << cell(sys.rows[k], true);
    out << '\n';
  }
}

void ComparisonReport::write_cdf_csv(std::ostream& out) const {
  out << "system,abs_error_bpm,cumulative_fraction\n";
  for (const auto& sys : systems) {
    for (const auto& [err, frac] : sys.cdf) out << sys.system << ',' << std::setprecision(10) << err << ',' << frac << '\n';
  }
}

void ComparisonReport::write_summary(std::ostream& out) const {
  for (const auto& sys : systems) {
    const ErrorSummary& s = sys.summary;
    out << std::left << std::setw(20) << sys.system << std::right << std::fixed << std::setprecision(3)
        << " windows=" << s.windows << " estimated=" << s.estimated << " gated=" << s.gated_fraction;
    if (s.failed > 0) out << " failed=" << s.failed;
    if (s.no_estimates()) {
      out << " no estimates\n";
    } else {
      out << " <0.5bpm=" << s.frac_below_0_5_bpm << " <1.2bpm=" << s.frac_below_1_2_bpm
          << " median_err_bpm=" << s.median_abs_error_bpm << '\n';
    }
    out.unsetf(std::ios::floatfield);
  }
}

}  // namespace csibreath
