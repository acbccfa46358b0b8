#include "csibreath/chansim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace csibreath {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Portable uniform/normal source on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  double uniform(const Range& r) { return r.min + uniform() * (r.max - r.min); }

  /// Standard normal pair via Box-Muller.
  std::pair<double, double> normal_pair() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return {radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2)};
  }

 private:
  std::mt19937_64 engine_;
};

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max) {
    throw ValidationError(std::string(name) + " range must be finite and ordered");
  }
}

}  // namespace

void BreathingMotion::validate() const {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ValidationError("breathing rate must be positive");
  if (!(delay_amplitude_s >= 0.0) || !std::isfinite(delay_amplitude_s))
    throw ValidationError("breathing delay amplitude must be non-negative");
}

void DistortionSpec::validate() const {
  check_range(agc, "agc");
  check_range(phase_slope, "phase_slope");
  check_range(phase_intercept, "phase_intercept");
  if (!(agc.min > 0.0)) throw ValidationError("agc minimum must be positive");
  if (snr_db && !std::isfinite(*snr_db)) throw ValidationError("snr_db must be finite");
}

void Scenario::validate() const {
  meta.validate();
  motion.validate();
  distortion.validate();
  if (static_cast<Index>(paths.size()) != meta.num_tx * meta.num_rx) {
    throw ValidationError("scenario needs one path list per antenna pair");
  }
  const double alias_limit = 1.0 / meta.subcarrier_spacing_hz;
  for (Index i = 0; i < meta.num_tx; ++i) {
    for (Index j = 0; j < meta.num_rx; ++j) {
      const std::string pair = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      int dynamic = 0;
      for (const PathSpec& p : paths_for(i, j)) {
        if (!(std::abs(p.attenuation) > 0.0)) throw ValidationError("path gain must be nonzero on pair " + pair);
        if (!(p.delay_s >= 0.0)) throw ValidationError("path delay must be non-negative on pair " + pair);
        const double max_delay = p.delay_s + (p.dynamic ? motion.delay_amplitude_s : 0.0);
        if (!(max_delay < alias_limit)) {
          throw ValidationError("path delay " + std::to_string(max_delay) + " s on pair " + pair +
                                " exceeds alias limit " + std::to_string(alias_limit) + " s");
        }
        dynamic += p.dynamic ? 1 : 0;
      }
      if (dynamic != 1) throw ValidationError("pair " + pair + " must have exactly one dynamic path");
    }
  }
}

CsiSampleSet synth_clean(const Scenario& s) {
  s.validate();
  const RadioMeta& meta = s.meta;
  Tensor4<Complex> data({meta.num_snapshots, meta.num_tx, meta.num_rx, meta.num_subcarriers});
  const Eigen::ArrayXd freq =
      Eigen::ArrayXd::LinSpaced(meta.num_subcarriers, 0.0, double(meta.num_subcarriers - 1)) *
          meta.subcarrier_spacing_hz +
      meta.carrier_freq_hz;
  const Complex minus_j{0.0, -1.0};

  for (Index t = 0; t < meta.num_snapshots; ++t) {
    const double swing =
        s.motion.delay_amplitude_s *
        std::sin(kTwoPi * s.motion.rate_hz * double(t) / meta.snapshot_rate_hz + s.motion.phase0_rad);
    for (Index i = 0; i < meta.num_tx; ++i) {
      for (Index j = 0; j < meta.num_rx; ++j) {
        auto row = data.row(t, i, j);
        for (const PathSpec& p : s.paths_for(i, j)) {
          const double tau = p.delay_s + (p.dynamic ? swing : 0.0);
          row.array() += p.attenuation * (minus_j * kTwoPi * tau * freq).exp();
        }
      }
    }
  }
  return CsiSampleSet(meta, std::move(data));
}

DistortionDraws draw_distortion(const CsiSampleSet& clean, const DistortionSpec& spec) {
  spec.validate();
  const RadioMeta& meta = clean.meta();
  DistortionDraws draws;
  draws.agc.resize(meta.num_snapshots, meta.num_rx);
  draws.phase_slope.resize(meta.num_snapshots, meta.num_tx);
  draws.phase_intercept.resize(meta.num_snapshots, meta.num_tx);
  draws.noise = Tensor4<Complex>(clean.data().shape());

  double noise_sigma = 0.0;
  if (spec.snr_db) {
    const double mean_power = clean.data().flat().squaredNorm() / double(clean.data().size());
    noise_sigma = std::sqrt(mean_power / std::pow(10.0, *spec.snr_db / 10.0) / 2.0);
  }

  Rng rng(spec.seed);
  for (Index t = 0; t < meta.num_snapshots; ++t) {
    for (Index i = 0; i < meta.num_tx; ++i) {
      draws.phase_slope(t, i) = rng.uniform(spec.phase_slope);
      draws.phase_intercept(t, i) = rng.uniform(spec.phase_intercept);
    }
    for (Index j = 0; j < meta.num_rx; ++j) draws.agc(t, j) = rng.uniform(spec.agc);
    if (!spec.snr_db) continue;
    for (Index i = 0; i < meta.num_tx; ++i)
      for (Index j = 0; j < meta.num_rx; ++j)
        for (Index m = 0; m < meta.num_subcarriers; ++m) {
          const auto [re, im] = rng.normal_pair();
          draws.noise(t, i, j, m) = Complex(noise_sigma * re, noise_sigma * im);
        }
  }
  return draws;
}

CsiSampleSet apply_distortion(const CsiSampleSet& clean, const DistortionDraws& draws) {
  const RadioMeta& meta = clean.meta();
  Tensor4<Complex> out(clean.data().shape());
  for (Index t = 0; t < meta.num_snapshots; ++t)
    for (Index i = 0; i < meta.num_tx; ++i)
      for (Index j = 0; j < meta.num_rx; ++j)
        for (Index m = 0; m < meta.num_subcarriers; ++m) {
          const Complex offset =
              std::polar(1.0, draws.phase_slope(t, i) * double(m) + draws.phase_intercept(t, i));
          out(t, i, j, m) = draws.agc(t, j) * clean(t, i, j, m) * offset + draws.noise(t, i, j, m);
        }
  return CsiSampleSet(meta, std::move(out));
}

CsiSampleSet apply_distortion(const CsiSampleSet& clean, const DistortionSpec& spec) {
  return apply_distortion(clean, draw_distortion(clean, spec));
}

CsiSampleSet simulate(const Scenario& scenario) {
  return apply_distortion(synth_clean(scenario), scenario.distortion);
}

RoomGeometry make_room_geometry(const RadioMeta& meta, double chest_gain, std::uint64_t seed) {
  if (!(chest_gain > 0.0)) throw ValidationError("chest gain must be positive");
  // Geometry draws use a stream decorrelated from the distortion stream.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  RoomGeometry room;
  room.phase0_rad = kTwoPi * rng.uniform();
  const Range unit_phase{0.0, kTwoPi};
  for (Index i = 0; i < meta.num_tx; ++i) {
    for (Index j = 0; j < meta.num_rx; ++j) {
      std::vector<PathSpec> pair;
      pair.push_back({std::polar(1.0, rng.uniform(unit_phase)), rng.uniform({0.0, 10e-9}), false});
      for (int r = 0; r < 2; ++r) {
        pair.push_back({std::polar(rng.uniform({0.1, 0.25}), rng.uniform(unit_phase)), rng.uniform({80e-9, 400e-9}),
                        false});
      }
      pair.push_back({std::polar(chest_gain, rng.uniform(unit_phase)), rng.uniform({15e-9, 45e-9}), true});
      room.paths.push_back(std::move(pair));
    }
  }
  return room;
}

Scenario make_room_scenario(const RoomParams& params) {
  Scenario s;
  s.meta = params.meta;
  s.meta.validate();
  RoomGeometry room = make_room_geometry(s.meta, params.chest_gain, params.seed);
  s.paths = std::move(room.paths);
  s.motion.rate_hz = params.rate_hz;
  s.motion.phase0_rad = room.phase0_rad;
  s.distortion.agc = params.agc;
  s.distortion.phase_slope = params.phase_slope;
  s.distortion.phase_intercept = params.phase_intercept;
  s.distortion.snr_db = params.snr_db;
  s.distortion.seed = params.seed;
  s.validate();
  return s;
}

}  // namespace csibreath
