#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csibreath/csi.hpp"

namespace csibreath {

/// Speed of light in m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Round-trip delay swing of a 5 mm chest displacement.
inline constexpr double kDefaultChestDelayAmplitude = 2.0 * 0.005 / kSpeedOfLight;

struct PathSpec {
  Complex attenuation{1.0, 0.0};
  double delay_s = 0.0;
  bool dynamic = false;
};

/// Sinusoidal modulation of the dynamic path's delay:
/// tau(t) = tau_0 + delay_amplitude * sin(2 pi rate t / f_s + phase0).
struct BreathingMotion {
  double rate_hz = 0.25;
  double delay_amplitude_s = kDefaultChestDelayAmplitude;
  double phase0_rad = 0.0;

  void validate() const;
};

/// Closed interval sampled uniformly; min == max gives a constant.
struct Range {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const Range&) const = default;
};

/// Receiver impairments: per-(t, j) AGC gain, per-(t, i) linear phase offset
/// slope * m + intercept, and complex white noise.
struct DistortionSpec {
  Range agc{1.0, 1.0};
  Range phase_slope{0.0, 0.0};
  Range phase_intercept{0.0, 0.0};
  std::optional<double> snr_db;  ///< empty means noiseless
  std::uint64_t seed = 0;

  void validate() const;
};

struct Scenario {
  RadioMeta meta;
  /// Path list per antenna pair, indexed by i * N_R + j.
  std::vector<std::vector<PathSpec>> paths;
  BreathingMotion motion;
  DistortionSpec distortion;

  const std::vector<PathSpec>& paths_for(Index tx, Index rx) const {
    return paths[static_cast<std::size_t>(tx * meta.num_rx + rx)];
  }

  /// Checks meta, one dynamic path per pair, positive gains, and that every
  /// delay (including the breathing swing) stays below the alias limit 1/Δf.
  void validate() const;
};

/// Random values drawn by apply_distortion, materialized before any sample is touched.
struct DistortionDraws {
  Eigen::ArrayXXd agc;              ///< T x N_R
  Eigen::ArrayXXd phase_slope;      ///< T x N_T
  Eigen::ArrayXXd phase_intercept;  ///< T x N_T
  Tensor4<Complex> noise;           ///< T x N_T x N_R x M, zero when noiseless
};

/// Noise-free CSI from the multipath model with the breathing-modulated path.
CsiSampleSet synth_clean(const Scenario& scenario);

/// Draws AGC, phase offsets, and noise for a clean set. Order: for each t,
/// slope and intercept for every TX, then AGC for every RX, then noise
/// (real, imaginary) over [i][j][m]. Uniforms come from mt19937_64 as
/// (x >> 11) * 2^-53; normals use Box-Muller on those uniforms.
DistortionDraws draw_distortion(const CsiSampleSet& clean, const DistortionSpec& spec);

/// H~ = AGC_j[t] * H * exp(j (slope_i[t] m + intercept_i[t])) + n.
CsiSampleSet apply_distortion(const CsiSampleSet& clean, const DistortionSpec& spec);
CsiSampleSet apply_distortion(const CsiSampleSet& clean, const DistortionDraws& draws);

/// synth_clean followed by apply_distortion with the scenario's spec.
CsiSampleSet simulate(const Scenario& scenario);

/// Parameters for a randomized single-person room used by tests and the CLI.
struct RoomParams {
  RadioMeta meta{297, 1, 2, 29, 9.9, 703125.0, 5.3e9};
  double rate_hz = 0.25;
  std::optional<double> snr_db = 30.0;
  std::uint64_t seed = 1;
  double chest_gain = 0.15;
  Range agc{0.5, 2.0};
  Range phase_slope{-0.5, 0.5};
  Range phase_intercept{-3.141592653589793, 3.141592653589793};
};

struct RoomGeometry {
  std::vector<std::vector<PathSpec>> paths;  ///< per antenna pair, i * N_R + j
  double phase0_rad = 0.0;                   ///< breathing phase at t = 0
};

/// One static dominant path within 10 ns, two weak static reflections at
/// 80-400 ns, and the chest path at 15-45 ns, with antenna-dependent gains
/// and phases drawn from the seed.
RoomGeometry make_room_geometry(const RadioMeta& meta, double chest_gain, std::uint64_t seed);

/// Room geometry plus the distortion ranges of `params`, all keyed by one seed.
Scenario make_room_scenario(const RoomParams& params);

}  // namespace csibreath
