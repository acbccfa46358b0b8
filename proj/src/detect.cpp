#include "csibreath/detect.hpp"

#include <cmath>
#include <string>

#include "csibreath/fft.hpp"

namespace csibreath {

namespace {

// Band edges are compared with this slack so grid points such as
// 15 * 9.9 / 297 land inside [0.2, 0.5] despite rounding.
constexpr double kBandSlackHz = 1e-9;

Index padded_length(Index n, double fs, std::optional<double> resolution) {
  if (!resolution) return n;
  if (!(*resolution > 0.0)) throw ValidationError("PSD resolution must be positive");
  const double ratio = fs / *resolution;
  const double nearest = std::round(ratio);
  const double points = std::abs(ratio - nearest) <= 1e-9 * ratio ? nearest : std::ceil(ratio);
  return std::max(n, static_cast<Index>(points));
}

}  // namespace

namespace detail {

Spectrum periodogram(VectorX<Complex> x, double fs, std::optional<double> pad_to_resolution_hz) {
  if (x.size() < 2) throw ValidationError("PSD needs at least 2 samples");
  if (!(fs > 0.0)) throw ValidationError("sample rate must be positive");
  const Index n = padded_length(x.size(), fs, pad_to_resolution_hz);
  VectorX<Complex> buffer = VectorX<Complex>::Zero(n);
  buffer.head(x.size()) = x.array() - x.mean();

  Spectrum s;
  s.power = dft(buffer).cwiseAbs2();
  s.freq_hz.resize(n);
  for (Index k = 0; k < n; ++k) s.freq_hz[k] = bin_frequency(k, n, fs);
  return s;
}

}  // namespace detail

Spectrum fold_one_sided(const Spectrum& two_sided) {
  const Index n = two_sided.size();
  const Index half = n / 2;
  Spectrum out;
  out.freq_hz.resize(half + 1);
  out.power.resize(half + 1);
  for (Index k = 0; k <= half; ++k) {
    out.freq_hz[k] = std::abs(two_sided.freq_hz[k]);
    const bool paired = k > 0 && n - k != k;
    out.power[k] = two_sided.power[k] + (paired ? two_sided.power[n - k] : 0.0);
  }
  return out;
}

BreathingEstimate psd_detect_spectrum(const VectorX<Complex>& x, double fs, double f_low, double f_high,
                                      double resolution_hz) {
  if (!(f_low < f_high)) throw ValidationError("PSD band must satisfy f_low < f_high");
  const Spectrum folded = fold_one_sided(detail::periodogram(x, fs, resolution_hz));

  Index best = -1;
  for (Index k = 0; k < folded.size(); ++k) {
    const double f = folded.freq_hz[k];
    if (f < f_low - kBandSlackHz || f > f_high + kBandSlackHz) continue;
    if (best < 0 || folded.power[k] > folded.power[best]) best = k;
  }
  if (best < 0) {
    throw ValidationError("no PSD bin inside [" + std::to_string(f_low) + ", " + std::to_string(f_high) +
                          "] Hz; frequency grid too coarse");
  }
  BreathingEstimate est;
  est.method = DetectMethod::psd;
  est.rate_hz = folded.freq_hz[best];
  est.diagnostic = folded.power[best];
  return est;
}

std::vector<Index> find_breathing_peaks(const Eigen::Ref<const Eigen::VectorXd>& x, double fs,
                                        const PeakRules& rules) {
  const Index n = x.size();
  if (n < 3) throw ValidationError("peak detection needs at least 3 samples");
  if (!(rules.f_max_hz > 0.0)) throw ValidationError("peak f_max must be positive");

  const double stddev = std::sqrt((x.array() - x.mean()).square().mean());
  const double min_prominence = rules.min_prominence_std * stddev;

  std::vector<Index> candidates;
  for (Index k = 1; k + 1 < n; ++k) {
    if (!(x[k] > x[k - 1] && x[k] > x[k + 1])) continue;
    // Prominence: height above the higher of the two lowest points reached
    // before the signal climbs above this peak on either side.
    double left_min = x[k];
    for (Index l = k - 1; l >= 0 && x[l] <= x[k]; --l) left_min = std::min(left_min, x[l]);
    double right_min = x[k];
    for (Index r = k + 1; r < n && x[r] <= x[k]; ++r) right_min = std::min(right_min, x[r]);
    const double prominence = x[k] - std::max(left_min, right_min);
    if (prominence >= min_prominence && prominence > 0.0) candidates.push_back(k);
  }

  const double min_gap = fs / rules.f_max_hz;  // samples
  std::vector<Index> kept;
  for (Index k : candidates) {
    if (!kept.empty() && double(k - kept.back()) < min_gap) {
      if (x[k] > x[kept.back()]) kept.back() = k;
      continue;
    }
    kept.push_back(k);
  }
  return kept;
}

BreathingEstimate peak_detect(const Eigen::Ref<const Eigen::VectorXd>& x, double fs, const PeakRules& rules) {
  const std::vector<Index> peaks = find_breathing_peaks(x, fs, rules);
  if (peaks.size() < 2) {
    throw EstimationError("peak detection found " + std::to_string(peaks.size()) +
                          " usable peak(s); at least 2 are required");
  }
  const double span_s = double(peaks.back() - peaks.front()) / fs;
  BreathingEstimate est;
  est.method = DetectMethod::peak;
  est.rate_hz = double(peaks.size() - 1) / span_s;
  est.diagnostic = double(peaks.size());
  return est;
}

}  // namespace csibreath
