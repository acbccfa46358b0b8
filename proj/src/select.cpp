#include "csibreath/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace csibreath {

namespace {
constexpr double kBandSlackHz = 1e-9;
}

void BoiConfig::validate(double fs) const {
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < fs / 2.0)) {
    throw ValidationError("band of interest must satisfy 0 < low < high < fs/2 (got [" + std::to_string(low_hz) +
                          ", " + std::to_string(high_hz) + "] at fs " + std::to_string(fs) + ")");
  }
}

std::string to_string(SeriesDomain domain) {
  switch (domain) {
    case SeriesDomain::frequency: return "csi";
    case SeriesDomain::delay: return "cir";
    case SeriesDomain::phase_difference: return "phase-diff";
  }
  return "?";
}

double mean_absolute_deviation(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() == 0) return 0.0;
  return (x.array() - x.mean()).abs().mean();
}

double stability_score(const PhaseTensor& phase_diff) {
  if (phase_diff.size() == 0) throw ValidationError("stability score of an empty tensor");
  double total = 0.0;
  for (Index s = 0; s < phase_diff.num_series(); ++s) {
    // Deviations are translation invariant; anchoring at the first sample
    // makes a constant series score exactly zero.
    const Eigen::ArrayXd d = phase_diff.series(s).array() - phase_diff.series(s)[0];
    total += (d - d.mean()).abs().sum();
  }
  return total / double(phase_diff.size());
}

Candidate<double> mad_select(const PhaseTensor& phase_diff) {
  const Index n = phase_diff.num_series();
  if (n < 3) throw ValidationError("MAD selection needs at least 3 series, got " + std::to_string(n));

  std::vector<double> mad(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) mad[s] = mean_absolute_deviation(phase_diff.series(s));

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + 3, order.end(), [&](Index a, Index b) {
    return mad[a] != mad[b] ? mad[a] > mad[b] : a < b;
  });
  const double median = mad[order[1]];
  Index chosen = order[1];
  for (int k = 0; k < 3; ++k) {
    if (mad[order[k]] == median) chosen = std::min(chosen, order[k]);
  }

  const auto [i, k, m] = phase_diff.series_coords(chosen);
  return Candidate<double>{Eigen::VectorXd(phase_diff.series(chosen)),
                           Provenance{i, k, m, SeriesDomain::phase_difference}, mad[chosen]};
}

namespace detail {

double boi_score_spectrum(const Spectrum& spectrum, const BoiConfig& cfg) {
  double in_band = 0.0;
  double out_band = 0.0;
  for (Index k = 0; k < spectrum.size(); ++k) {
    const double f = std::abs(spectrum.freq_hz[k]);
    if (f > cfg.high_hz + kBandSlackHz) {
      out_band += spectrum.power[k];
    } else if (f >= cfg.low_hz - kBandSlackHz) {
      in_band += spectrum.power[k];
    }
  }
  return in_band / (out_band + kBoiEpsilon);
}

}  // namespace detail

Candidate<Complex> boi_select(const CsiSampleSet& csi, const BoiConfig& cfg) {
  return boi_select(csi.data(), csi.meta().snapshot_rate_hz, cfg, SeriesDomain::frequency);
}

Candidate<Complex> boi_select(const CirSampleSet& cir, const BoiConfig& cfg) {
  return boi_select(cir.data(), cir.meta().snapshot_rate_hz, cfg, SeriesDomain::delay);
}

}  // namespace csibreath
