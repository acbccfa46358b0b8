#include "csibreath/pipeline.hpp"

#include <cmath>

#include "csibreath/calib.hpp"
#include "csibreath/filt.hpp"

namespace csibreath {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const EstimationError& e) {
    throw StageError(name, e.what(), true);
  } catch (const Error& e) {
    throw StageError(name, e.what(), false);
  }
}

BreathingEstimate run_phasebeat(const CsiSampleSet& csi, const SystemConfig& cfg, const PhaseTensor& diff,
                                BreathingEstimate gate) {
  const double fs = csi.meta().snapshot_rate_hz;

  PhaseTensor detrended = stage("hampel", [&] {
    PhaseTensor out(diff.shape());
    for (Index s = 0; s < diff.num_series(); ++s) {
      const TrendSplit split = hampel_detrend(Eigen::VectorXd(diff.series(s)), cfg.hampel_window_s,
                                              cfg.hampel_threshold, fs);
      const auto [i, k, m] = diff.series_coords(s);
      for (Index t = 0; t < diff.dim(0); ++t) out(t, i, k, m) = split.ac[t];
    }
    return out;
  });

  const Candidate<double> candidate = stage("select", [&] {
    return cfg.kind() == SystemKind::phasebeat_boi_psd
               ? boi_select(detrended, fs, cfg.boi, SeriesDomain::phase_difference)
               : mad_select(detrended);
  });

  const Eigen::VectorXd smooth = stage("wavelet", [&] { return dwt_db4_approx(candidate.series, fs); });

  BreathingEstimate est = stage("detect", [&] {
    if (cfg.uses_peak_detect()) {
      return peak_detect(smooth, fs, PeakRules{cfg.boi.high_hz, cfg.peak_min_prominence_std});
    }
    return psd_detect(smooth, fs, cfg.boi.low_hz, cfg.boi.high_hz, cfg.psd_resolution_hz);
  });
  est.stable = gate.stable;
  est.q_score = gate.q_score;
  est.selection_score = candidate.score;
  return est;
}

BreathingEstimate run_complexbeat(const CsiSampleSet& csi, const SystemConfig& cfg, BreathingEstimate gate) {
  const double fs = csi.meta().snapshot_rate_hz;

  const CsiSampleSet amp = stage("amplitude-calibration", [&] {
    return amplitude_calibrate(csi, cfg.amplitude_half_width);
  });
  const CsiSampleSet calibrated = stage("phase-calibration", [&] { return phase_calibrate(amp, cfg.fit_window); });

  const Candidate<Complex> candidate = stage("select", [&] {
    switch (cfg.kind()) {
      case SystemKind::complexbeat_cir: return boi_select(csi_to_cir(calibrated), cfg.boi);
      case SystemKind::complexbeat_csi_df: return boi_select(delay_filter(calibrated, *cfg.tau_max_s), cfg.boi);
      default: return boi_select(calibrated, cfg.boi);
    }
  });

  const VectorX<Complex> filtered =
      stage("band-pass", [&] { return band_pass(candidate.series, cfg.boi.low_hz, cfg.boi.high_hz, fs); });

  BreathingEstimate est =
      stage("detect", [&] { return psd_detect(filtered, fs, cfg.boi.low_hz, cfg.boi.high_hz, cfg.psd_resolution_hz); });
  est.stable = gate.stable;
  est.q_score = gate.q_score;
  est.selection_score = candidate.score;
  return est;
}

}  // namespace

const std::vector<std::string>& system_names() {
  static const std::vector<std::string> names = {
      "phasebeat",       "phasebeat-mad-psd", "phasebeat-boi-psd",
      "complexbeat-cir", "complexbeat-csi",   "complexbeat-csi-df",
  };
  return names;
}

SystemConfig SystemConfig::defaults(std::string_view name) {
  SystemConfig cfg;
  cfg.name = std::string(name);
  (void)cfg.kind();  // rejects unknown names
  if (cfg.kind() == SystemKind::complexbeat_csi_df) cfg.tau_max_s = 50e-9;
  return cfg;
}

SystemKind SystemConfig::kind() const {
  const auto& names = system_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return static_cast<SystemKind>(k);
  }
  std::string valid;
  for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
  throw ValidationError("unknown system '" + name + "'; valid systems: " + valid);
}

bool SystemConfig::is_complexbeat() const {
  const SystemKind k = kind();
  return k == SystemKind::complexbeat_cir || k == SystemKind::complexbeat_csi || k == SystemKind::complexbeat_csi_df;
}

void SystemConfig::validate() const {
  const SystemKind k = kind();
  if (!(q_threshold > 0.0)) throw ValidationError("q_threshold must be positive");
  if (!(boi.low_hz > 0.0 && boi.low_hz < boi.high_hz)) throw ValidationError("band of interest must be 0 < low < high");
  if (!(hampel_window_s > 0.0) || !(hampel_threshold >= 0.0)) throw ValidationError("invalid Hampel parameters");
  if (!(psd_resolution_hz > 0.0)) throw ValidationError("psd_resolution_hz must be positive");
  if (amplitude_half_width < 0) throw ValidationError("amplitude half width must be non-negative");
  if (fit_window < 2) throw ValidationError("fit_window must be at least 2");
  if (k == SystemKind::complexbeat_csi_df) {
    if (!tau_max_s || !(*tau_max_s > 0.0)) throw ValidationError("complexbeat-csi-df needs a positive tau_max");
  } else if (tau_max_s) {
    throw ValidationError("tau_max only applies to complexbeat-csi-df");
  }
}

std::vector<SystemConfig> list_systems() {
  std::vector<SystemConfig> out;
  for (const auto& name : system_names()) out.push_back(SystemConfig::defaults(name));
  return out;
}

BreathingEstimate run_window(const CsiSampleSet& csi, const SystemConfig& cfg) {
  cfg.validate();
  const PhaseTensor diff = stage("phase-difference", [&] { return phase_difference(csi); });

  BreathingEstimate gate;
  gate.method = cfg.uses_peak_detect() ? DetectMethod::peak : DetectMethod::psd;
  gate.q_score = stage("stability-gate", [&] { return stability_score(diff); });
  gate.stable = passes_stability_gate(gate.q_score, cfg.q_threshold);
  if (!gate.stable) return gate;

  return cfg.is_complexbeat() ? run_complexbeat(csi, cfg, gate) : run_phasebeat(csi, cfg, diff, gate);
}

}  // namespace csibreath
