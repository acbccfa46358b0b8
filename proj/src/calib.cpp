#include "csibreath/calib.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "csibreath/fft.hpp"

namespace csibreath {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wrap_phase(double angle) {
  double wrapped = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (wrapped <= -kPi) wrapped += kTwoPi;
  return wrapped;
}

Eigen::VectorXd unwrap_phase(const Eigen::Ref<const Eigen::VectorXd>& phase) {
  Eigen::VectorXd out = phase;
  double correction = 0.0;
  for (Index m = 1; m < phase.size(); ++m) {
    const double step = phase[m] - phase[m - 1];
    if (step > kPi) {
      correction -= kTwoPi * std::ceil((step - kPi) / kTwoPi);
    } else if (step < -kPi) {
      correction += kTwoPi * std::ceil((-step - kPi) / kTwoPi);
    }
    out[m] = phase[m] + correction;
  }
  return out;
}

CsiSampleSet amplitude_calibrate(const CsiSampleSet& csi, Index half_width) {
  const RadioMeta& meta = csi.meta();
  const Index M = meta.num_subcarriers;
  if (half_width < 0 || 2 * half_width + 1 > M) {
    throw ValidationError("dominant-path window 2D+1 = " + std::to_string(2 * half_width + 1) +
                          " exceeds subcarrier count " + std::to_string(M));
  }
  Tensor4<Complex> out(csi.data().shape());
  for (Index t = 0; t < meta.num_snapshots; ++t) {
    for (Index i = 0; i < meta.num_tx; ++i) {
      for (Index j = 0; j < meta.num_rx; ++j) {
        const Eigen::VectorXd magnitude = idft(csi.data().row(t, i, j)).cwiseAbs();
        Index peak = 0;
        magnitude.maxCoeff(&peak);  // first maximum on ties
        double energy = 0.0;
        for (Index d = -half_width; d <= half_width; ++d) {
          const double value = magnitude[((peak + d) % M + M) % M];
          energy += value * value;
        }
        if (!(energy > 0.0)) {
          throw ValidationError("no dominant path in slice (t=" + std::to_string(t) + ", i=" + std::to_string(i) +
                                ", j=" + std::to_string(j) + "): all-zero CIR");
        }
        const double level = std::sqrt(energy) / double(2 * half_width + 1);
        out.row(t, i, j) = csi.data().row(t, i, j) / level;
      }
    }
  }
  return CsiSampleSet(meta, std::move(out));
}

LinearPhaseFit fit_linear_phase(const Eigen::Ref<const VectorX<Complex>>& row, Index window_len) {
  const Index M = row.size();
  if (window_len < 2 || window_len > M) {
    throw ValidationError("linear phase fit window " + std::to_string(window_len) + " outside [2, " +
                          std::to_string(M) + "]");
  }
  const Eigen::VectorXd amplitude = row.cwiseAbs();
  if (!(amplitude.maxCoeff() > 0.0)) throw ValidationError("linear phase fit on all-zero amplitudes");

  Index best = 0;
  double best_sum = amplitude.head(window_len).sum();
  for (Index start = 1; start + window_len <= M; ++start) {
    const double sum = amplitude.segment(start, window_len).sum();
    if (sum > best_sum) {
      best_sum = sum;
      best = start;
    }
  }

  Eigen::VectorXd phase(window_len);
  for (Index k = 0; k < window_len; ++k) phase[k] = std::arg(row[best + k]);
  phase = unwrap_phase(phase);

  const Eigen::VectorXd m = Eigen::VectorXd::LinSpaced(window_len, double(best), double(best + window_len - 1));
  const double m_mean = m.mean();
  const double p_mean = phase.mean();
  const Eigen::VectorXd dm = m.array() - m_mean;
  const double slope = dm.dot((phase.array() - p_mean).matrix()) / dm.squaredNorm();

  LinearPhaseFit fit;
  fit.slope = slope;
  fit.intercept = wrap_phase(p_mean - slope * m_mean);
  fit.window_first = best;
  fit.window_length = window_len;
  return fit;
}

CsiSampleSet phase_calibrate(const CsiSampleSet& csi, Index window_len) {
  const RadioMeta& meta = csi.meta();
  const Index NR = meta.num_rx;
  const Index M = meta.num_subcarriers;
  const Eigen::ArrayXd m = Eigen::ArrayXd::LinSpaced(M, 0.0, double(M - 1));
  const Complex minus_j{0.0, -1.0};

  Tensor4<Complex> out(csi.data().shape());
  for (Index t = 0; t < meta.num_snapshots; ++t) {
    for (Index i = 0; i < meta.num_tx; ++i) {
      for (Index j = 0; j < NR; ++j) {
        const LinearPhaseFit fit = fit_linear_phase(csi.data().row(t, i, j), window_len);
        const Index target = (j + 1) % NR;
        const Eigen::ArrayXd line = fit.slope * m + fit.intercept;
        out.row(t, i, target).array() = csi.data().row(t, i, target).array() * (minus_j * line).exp();
      }
    }
  }
  return CsiSampleSet(meta, std::move(out));
}

PhaseTensor phase_difference(const CsiSampleSet& csi) {
  const RadioMeta& meta = csi.meta();
  PhaseTensor out({meta.num_snapshots, meta.num_tx, meta.num_rx - 1, meta.num_subcarriers});
  for (Index t = 0; t < meta.num_snapshots; ++t)
    for (Index i = 0; i < meta.num_tx; ++i)
      for (Index k = 0; k + 1 < meta.num_rx; ++k)
        for (Index m = 0; m < meta.num_subcarriers; ++m) {
          const Complex ratio = csi(t, i, k, m) * std::conj(csi(t, i, k + 1, m));
          out(t, i, k, m) = wrap_phase(std::arg(ratio));
        }
  return out;
}

}  // namespace csibreath
