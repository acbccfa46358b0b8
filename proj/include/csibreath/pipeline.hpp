#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csibreath/csi.hpp"
#include "csibreath/detect.hpp"
#include "csibreath/select.hpp"

namespace csibreath {

enum class SystemKind {
  phasebeat,
  phasebeat_mad_psd,
  phasebeat_boi_psd,
  complexbeat_cir,
  complexbeat_csi,
  complexbeat_csi_df,
};

/// Declarative description of one estimation system. The name fixes which
/// stages run; the remaining fields are stage parameters.
struct SystemConfig {
  std::string name;
  double q_threshold = kDefaultStabilityThreshold;
  BoiConfig boi;
  double hampel_window_s = 5.0;
  double hampel_threshold = 0.01;
  std::optional<double> tau_max_s;  ///< delay filter bound; set only for complexbeat-csi-df
  double psd_resolution_hz = 0.001;
  Index amplitude_half_width = 1;   ///< D in the dominant-path window 2D + 1
  Index fit_window = 8;             ///< subcarriers in the linear phase fit
  double peak_min_prominence_std = 0.2;

  /// Defaults for a named system; throws ValidationError listing valid names.
  static SystemConfig defaults(std::string_view name);

  SystemKind kind() const;
  bool uses_peak_detect() const { return kind() == SystemKind::phasebeat; }
  bool is_complexbeat() const;
  void validate() const;

  bool operator==(const SystemConfig&) const = default;
};

const std::vector<std::string>& system_names();

/// Every system with its resolved defaults.
std::vector<SystemConfig> list_systems();

/// Runs one analysis window through the configured system.
///
/// PhaseBeat family: phase difference, Q gate, Hampel AC part, MAD or BoI
/// selection, db4 approximation, then peak or PSD detection.
/// ComplexBeat family: Q gate on phase differences, dominant-path amplitude
/// calibration, adjacent-antenna phase calibration, then the CIR, the CSI, or
/// the delay-filtered CSI; BoI selection, band-pass, PSD detection.
///
/// A window failing the gate returns an estimate with `stable == false` and
/// no rate. Stage failures are rethrown as StageError naming the stage.
BreathingEstimate run_window(const CsiSampleSet& csi, const SystemConfig& cfg);

}  // namespace csibreath
