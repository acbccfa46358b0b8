#pragma once

#include <optional>
#include <vector>

#include "csibreath/csi.hpp"

namespace csibreath {

/// Periodogram on the signed DFT grid (bin k at k * fs / N, upper half negative).
/// Power is |DFT|^2 with no scaling, so sum(power) = N * sum |x - mean|^2.
struct Spectrum {
  Eigen::VectorXd freq_hz;
  Eigen::VectorXd power;

  Index size() const { return power.size(); }
  double resolution_hz() const { return size() > 1 ? std::abs(freq_hz[1] - freq_hz[0]) : 0.0; }
};

namespace detail {
Spectrum periodogram(VectorX<Complex> x, double fs, std::optional<double> pad_to_resolution_hz);
}

/// Mean-removed periodogram, optionally zero-padded to ceil(fs / resolution) points.
template <typename Derived>
Spectrum psd(const Eigen::MatrixBase<Derived>& x, double fs, std::optional<double> pad_to_resolution_hz = {}) {
  return detail::periodogram(x.template cast<Complex>(), fs, pad_to_resolution_hz);
}

/// Folds a two-sided spectrum onto |f|: entry k holds P(f_k) + P(-f_k) for
/// 0 < k < N/2, and the unpaired DC and Nyquist bins as-is.
Spectrum fold_one_sided(const Spectrum& two_sided);

enum class DetectMethod { peak, psd };

/// Outcome of one analysis window. `rate_hz` is empty when the window was
/// rejected by the stability gate.
struct BreathingEstimate {
  std::optional<double> rate_hz;
  DetectMethod method = DetectMethod::psd;
  bool stable = true;      ///< passed the Q gate
  double q_score = 0.0;    ///< stability score when computed
  double diagnostic = 0.0; ///< PSD peak height, or surviving peak count
  double selection_score = 0.0;

  std::optional<double> rate_bpm() const {
    if (!rate_hz) return std::nullopt;
    return 60.0 * *rate_hz;
  }
};

/// Frequency in [f_low, f_high] maximizing the zero-padded PSD, summing the
/// positive and negative band pairwise.
BreathingEstimate psd_detect_spectrum(const VectorX<Complex>& x, double fs, double f_low, double f_high,
                                      double resolution_hz = 0.001);

template <typename Derived>
BreathingEstimate psd_detect(const Eigen::MatrixBase<Derived>& x, double fs, double f_low, double f_high,
                             double resolution_hz = 0.001) {
  return psd_detect_spectrum(x.template cast<Complex>(), fs, f_low, f_high, resolution_hz);
}

struct PeakRules {
  double f_max_hz = 0.5;              ///< peaks closer than 1 / f_max are merged
  double min_prominence_std = 0.2;    ///< minimum prominence in units of std(x)
};

/// Strict local maxima surviving the prominence and separation rules, ascending.
std::vector<Index> find_breathing_peaks(const Eigen::Ref<const Eigen::VectorXd>& x, double fs,
                                        const PeakRules& rules = {});

/// Rate from the mean spacing of surviving peaks. Throws EstimationError with fewer than two.
BreathingEstimate peak_detect(const Eigen::Ref<const Eigen::VectorXd>& x, double fs, const PeakRules& rules = {});

}  // namespace csibreath
