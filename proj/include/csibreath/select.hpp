#pragma once

#include <string>

#include "csibreath/csi.hpp"

namespace csibreath {

/// Threshold below which a window counts as stationary.
inline constexpr double kDefaultStabilityThreshold = 0.18;

/// Band of plausible breathing rates.
struct BoiConfig {
  double low_hz = 0.2;
  double high_hz = 0.5;

  /// Requires 0 < low < high < fs / 2.
  void validate(double fs) const;
  bool operator==(const BoiConfig&) const = default;
};

enum class SeriesDomain { frequency, delay, phase_difference };

std::string to_string(SeriesDomain domain);

/// Where a selected series came from: TX index, RX antenna (or RX pair for
/// phase differences), and subcarrier (or delay bin).
struct Provenance {
  Index tx = 0;
  Index rx = 0;
  Index bin = 0;
  SeriesDomain domain = SeriesDomain::frequency;

  bool operator==(const Provenance&) const = default;
};

template <typename Scalar>
struct Candidate {
  VectorX<Scalar> series;
  Provenance source;
  double score = 0.0;
};

/// Mean absolute deviation from the mean, mean(|x - mean(x)|).
double mean_absolute_deviation(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Q: mean absolute deviation over time, averaged across every phase-difference series.
double stability_score(const PhaseTensor& phase_diff);

/// Strict gate, Q < threshold.
inline bool passes_stability_gate(double q, double threshold = kDefaultStabilityThreshold) { return q < threshold; }

/// Ranks series by MAD, keeps the three largest, and returns the median of
/// those three. Ties resolve to the lowest (i, k, m).
Candidate<double> mad_select(const PhaseTensor& phase_diff);

/// In-band over out-of-band periodogram power of one mean-removed series.
/// DC carries no power after mean removal; bins between 0 and low_hz count nowhere.
template <typename Derived>
double boi_score(const Eigen::MatrixBase<Derived>& series, double fs, const BoiConfig& cfg);

/// Argmax of the band-of-interest score over every series; lowest index wins ties.
template <typename Scalar>
Candidate<Scalar> boi_select(const Tensor4<Scalar>& set, double fs, const BoiConfig& cfg, SeriesDomain domain);

Candidate<Complex> boi_select(const CsiSampleSet& csi, const BoiConfig& cfg);
Candidate<Complex> boi_select(const CirSampleSet& cir, const BoiConfig& cfg);

/// Added to the score denominator so band-limited series do not divide by zero.
inline constexpr double kBoiEpsilon = 1e-12;

}  // namespace csibreath

#include "csibreath/detect.hpp"

namespace csibreath {

namespace detail {
double boi_score_spectrum(const Spectrum& spectrum, const BoiConfig& cfg);
}

template <typename Derived>
double boi_score(const Eigen::MatrixBase<Derived>& series, double fs, const BoiConfig& cfg) {
  return detail::boi_score_spectrum(psd(series, fs), cfg);
}

template <typename Scalar>
Candidate<Scalar> boi_select(const Tensor4<Scalar>& set, double fs, const BoiConfig& cfg, SeriesDomain domain) {
  cfg.validate(fs);
  if (set.dim(0) < 16) throw ValidationError("band-of-interest selection needs at least 16 snapshots");
  Index best = 0;
  double best_score = -1.0;
  for (Index s = 0; s < set.num_series(); ++s) {
    const double score = boi_score(VectorX<Scalar>(set.series(s)), fs, cfg);
    if (score > best_score) {
      best_score = score;
      best = s;
    }
  }
  const auto [a, b, c] = set.series_coords(best);
  return Candidate<Scalar>{VectorX<Scalar>(set.series(best)), Provenance{a, b, c, domain}, best_score};
}

}  // namespace csibreath
