#include "csibreath/filt.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace csibreath {

namespace {

constexpr double kBandSlackHz = 1e-9;

double median_of(std::vector<double>& values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

TrendSplit hampel_detrend(const Eigen::Ref<const Eigen::VectorXd>& x, double window_s, double threshold,
                          double fs) {
  const auto window = static_cast<Index>(std::floor(window_s * fs + 1e-9));
  if (window < 3) {
    throw ValidationError("Hampel window of " + std::to_string(window) + " samples; need at least 3");
  }
  if (!(threshold >= 0.0)) throw ValidationError("Hampel threshold must be non-negative");

  const Index n = x.size();
  const Index before = window / 2;
  const Index after = window - before - 1;

  TrendSplit out;
  out.dc.resize(n);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(window));
  for (Index t = 0; t < n; ++t) {
    const Index lo = std::max<Index>(0, t - before);
    const Index hi = std::min<Index>(n - 1, t + after);
    values.assign(x.data() + lo, x.data() + hi + 1);
    const double median = median_of(values);
    for (double& v : values) v = std::abs(v - median);
    const double mad = kHampelMadScale * median_of(values);
    out.dc[t] = std::abs(x[t] - median) <= threshold * mad ? x[t] : median;
  }
  out.ac = x - out.dc;
  return out;
}

CsiSampleSet delay_filter(const CsiSampleSet& csi, double tau_max_s) {
  if (!(tau_max_s > 0.0)) throw ValidationError("delay filter bound must be positive");
  const RadioMeta& meta = csi.meta();
  const Index M = meta.num_subcarriers;
  Eigen::VectorXd keep(M);
  for (Index k = 0; k < M; ++k) {
    keep[k] = std::abs(meta.bin_delay_s(k)) <= tau_max_s * (1.0 + 1e-12) ? 1.0 : 0.0;
  }

  Tensor4<Complex> out(csi.data().shape());
  for (Index t = 0; t < meta.num_snapshots; ++t)
    for (Index i = 0; i < meta.num_tx; ++i)
      for (Index j = 0; j < meta.num_rx; ++j) {
        const VectorX<Complex> cir = idft(csi.data().row(t, i, j));
        out.row(t, i, j) = dft(cir.cwiseProduct(keep.cast<Complex>()));
      }
  return CsiSampleSet(meta, std::move(out));
}

VectorX<Complex> band_pass(const Eigen::Ref<const VectorX<Complex>>& x, double f_low, double f_high, double fs) {
  if (!(f_low >= 0.0 && f_low < f_high && f_high <= fs / 2.0 + kBandSlackHz)) {
    throw ValidationError("band-pass edges must satisfy 0 <= f_low < f_high <= fs/2");
  }
  const Index n = x.size();
  VectorX<Complex> spectrum = dft(x);
  for (Index k = 0; k < n; ++k) {
    const double f = std::abs(bin_frequency(k, n, fs));
    if (f < f_low - kBandSlackHz || f > f_high + kBandSlackHz) spectrum[k] = 0.0;
  }
  return idft(spectrum);
}

}  // namespace csibreath
