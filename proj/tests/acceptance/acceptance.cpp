// Acceptance suite: one PASS/FAIL line per acceptance criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "csibreath/calib.hpp"
#include "csibreath/chansim.hpp"
#include "csibreath/dataio.hpp"
#include "csibreath/filt.hpp"
#include "csibreath/pipeline.hpp"
#include "oracles.hpp"

using namespace csibreath;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(const char* id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  if (!out.pass) ++failures;
  std::cout << (out.pass ? "PASS" : "FAIL") << "  " << id << "  " << title << ":" << out.detail.str() << std::endl;
}

CsiSampleSet room(double rate, std::uint64_t seed, std::optional<double> snr) {
  RoomParams p;
  p.rate_hz = rate;
  p.seed = seed;
  p.snr_db = snr;
  return simulate(make_room_scenario(p));
}

double max_wrapped(const PhaseTensor& a, const PhaseTensor& b) {
  double worst = 0.0;
  for (Index k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(oracle::wrap(a.flat()[k] - b.flat()[k])));
  return worst;
}

}  // namespace

int main() {
  std::cout.setf(std::ios::fmtflags(0), std::ios::floatfield);
  std::cout.precision(4);
  const double rates[] = {0.2, 0.25, 0.3, 0.4, 0.5};

  report("AC1", "end-to-end complexbeat-csi-df within 0.01 Hz, SNR 30 dB, runtime < 5 s", [&](Outcome& o) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double f : rates) {
      const auto est = run_window(room(f, 1, 30.0), SystemConfig::defaults("complexbeat-csi-df"));
      o.require(est.stable && est.rate_hz.has_value(), "window gated at " + std::to_string(f) + " Hz");
      if (!est.rate_hz) continue;
      const double err = std::abs(*est.rate_hz - f);
      worst = std::max(worst, err);
      o.detail << " f_r=" << f << "->" << *est.rate_hz;
      o.require(err <= 0.01, "error above 0.01 Hz at " + std::to_string(f) + " Hz");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.detail << " | worst " << worst << " Hz, " << seconds << " s";
    o.require(seconds < 5.0, "runtime");
  });

  report("AC2", "distortion cancellation (1e-9 / 1e-12 / 1e-6)", [&](Outcome& o) {
    double pd = 0.0, amp = 0.0, cal = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RoomParams p;
      p.seed = seed;
      p.snr_db.reset();
      const Scenario s = make_room_scenario(p);
      const auto clean = synth_clean(s);
      const auto dirty = simulate(s);

      pd = std::max(pd, max_wrapped(phase_difference(dirty), phase_difference(clean)));

      // Receiver gain is the amplitude distortion; phase offsets are handled by the phase stage.
      DistortionSpec agc_only;
      agc_only.agc = s.distortion.agc;
      agc_only.seed = seed;
      const auto a = amplitude_calibrate(apply_distortion(clean, agc_only)).data().flat();
      const auto b = amplitude_calibrate(clean).data().flat();
      amp = std::max(amp, ((a - b).cwiseAbs().array() / b.cwiseAbs().array()).maxCoeff());

      const auto cd = phase_calibrate(dirty);
      const auto cc = phase_calibrate(clean);
      for (Index j = 0; j < p.meta.num_rx; ++j)
        for (Index m = 0; m < p.meta.num_subcarriers; ++m) {
          const double ref = std::arg(cd(0, 0, j, m) * std::conj(cc(0, 0, j, m)));
          for (Index t = 1; t < p.meta.num_snapshots; ++t) {
            const double d = std::arg(cd(t, 0, j, m) * std::conj(cc(t, 0, j, m)));
            cal = std::max(cal, std::abs(oracle::wrap(d - ref)));
          }
        }
    }
    o.detail << " phase_difference " << pd << " rad, amplitude " << amp << " rel, phase_calibrate residue " << cal
             << " rad";
    o.require(pd <= 1e-9, "phase difference");
    o.require(amp <= 1e-12, "amplitude calibration");
    o.require(cal <= 1e-6, "phase calibration");
  });

  report("AC3", "transform identities (round trip, Parseval, delay filter)", [&](Outcome& o) {
    double round = 0.0, parseval = 0.0, identity = 0.0, idem = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const RadioMeta meta{8, 1 + Index(seed % 2), 2, 2 + Index(seed * 7 % 60), 9.9, 703125.0, 5.3e9};
      const auto x = oracle::random_csi(meta, seed);
      const auto h = csi_to_cir(x);
      round = std::max(round, oracle::rel_err(cir_to_csi(h).data().flat(), x.data().flat()));
      for (Index t = 0; t < meta.num_snapshots; ++t)
        for (Index i = 0; i < meta.num_tx; ++i)
          for (Index j = 0; j < meta.num_rx; ++j) {
            const double lhs = x.data().row(t, i, j).squaredNorm();
            const double rhs = double(meta.num_subcarriers) * h.data().row(t, i, j).squaredNorm();
            parseval = std::max(parseval, std::abs(lhs - rhs) / lhs);
          }
      const double beyond = 1.0 / meta.subcarrier_spacing_hz;
      identity = std::max(identity, oracle::rel_err(delay_filter(x, beyond).data().flat(), x.data().flat()));
      const auto once = delay_filter(x, 50e-9);
      idem = std::max(idem, oracle::rel_err(delay_filter(once, 50e-9).data().flat(), once.data().flat()));
    }
    o.detail << " round trip " << round << ", Parseval " << parseval << ", identity " << identity
             << ", idempotence " << idem;
    o.require(round <= 1e-10, "round trip");
    o.require(parseval <= 1e-9, "Parseval");
    o.require(identity <= 1e-9, "delay filter identity");
    o.require(idem <= 1e-10, "delay filter idempotence");
  });

  report("AC4", "wavelet level L = 3 at 9.9 Hz, db4 reconstruction 1e-8 on 100 series", [&](Outcome& o) {
    const int level = wavelet_level(9.9);
    o.detail << " L=" << level;
    o.require(level == 3, "level");
    o.require(9.9 / 32.0 < 0.5 && 0.5 <= 9.9 / 16.0, "inequality");
    std::mt19937_64 rng(100);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Index len = 16 + Index(rng() % 600);
      Eigen::VectorXd x(len);
      for (auto& v : x) v = n(rng);
      const Eigen::VectorXd y = db4_reconstruct(db4_decompose(x, db4_max_level(len)));
      worst = std::max(worst, (y - x).norm() / x.norm());
    }
    o.detail << ", worst reconstruction " << worst;
    o.require(worst <= 1e-8, "reconstruction");
  });

  report("AC5", "detection: on-grid PSD 0.0005 Hz, peak 0.01 Hz, MAD select vs oracle x500", [&](Outcome& o) {
    // A tone is a single complex exponential on the 0.001 Hz grid; both rotation senses are tried.
    double psd_err = 0.0, real_err = 0.0;
    for (double f : {0.2, 0.25, 0.301, 0.333, 0.4, 0.457, 0.5}) {
      for (double sense : {1.0, -1.0}) {
        VectorX<Complex> z(297);
        for (Index t = 0; t < 297; ++t) z[t] = std::polar(1.0, sense * oracle::kTwoPi * f * double(t) / 9.9 + 0.3);
        psd_err = std::max(psd_err, std::abs(*psd_detect(z, 9.9, 0.2, 0.5).rate_hz - f));
      }
      Eigen::VectorXd x(297);
      for (Index t = 0; t < 297; ++t) x[t] = std::cos(oracle::kTwoPi * f * double(t) / 9.9 + 0.3);
      real_err = std::max(real_err, std::abs(*psd_detect(x, 9.9, 0.2, 0.5).rate_hz - f));
    }
    Eigen::VectorXd s(297);
    for (Index t = 0; t < 297; ++t) s[t] = std::sin(oracle::kTwoPi * 0.3 * double(t) / 9.9);
    const double peak_err = std::abs(*peak_detect(s, 9.9).rate_hz - 0.3);

    std::mt19937_64 rng(500);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int agree = 0;
    for (int trial = 0; trial < 500; ++trial) {
      PhaseTensor x({Index(4 + rng() % 30), Index(1 + rng() % 2), Index(1 + rng() % 2), Index(3 + rng() % 29)});
      for (auto& v : x.flat()) v = u(rng);
      std::vector<double> mads;
      for (Index k = 0; k < x.num_series(); ++k) {
        std::vector<double> series;
        for (Index t = 0; t < x.dim(0); ++t) series.push_back(x.series(k)[t]);
        mads.push_back(oracle::mean_abs_dev(series));
      }
      const auto [a, b, c] = x.series_coords(Index(oracle::mad_select_index(mads)));
      agree += mad_select(x).source == Provenance{a, b, c, SeriesDomain::phase_difference} ? 1 : 0;
    }
    o.detail << " psd " << psd_err << " Hz (real cosine, informational: " << real_err << " Hz), peak " << peak_err << " Hz, MAD agreement " << agree << "/500";
    o.require(psd_err <= 0.0005, "psd");
    o.require(peak_err <= 0.01, "peak");
    o.require(agree == 500, "mad_select");
  });

  report("AC6", "gating: Q = 0 constant, Q = 0.5 alternating, strict Q < 0.18", [&](Outcome& o) {
    PhaseTensor constant({30, 1, 1, 29});
    constant.flat().setConstant(0.7);
    PhaseTensor alt({30, 1, 1, 29});
    for (Index t = 0; t < 30; ++t)
      for (Index m = 0; m < 29; ++m) alt(t, 0, 0, m) = t % 2 == 0 ? 0.5 : -0.5;
    const double q0 = stability_score(constant);
    const double q5 = stability_score(alt);
    o.detail << " Q(constant)=" << q0 << " Q(alternating)=" << q5;
    o.require(q0 == 0.0, "constant");
    o.require(std::abs(q5 - 0.5) <= 1e-15, "alternating");
    o.require(passes_stability_gate(0.17) && !passes_stability_gate(0.18), "strict threshold");
    const auto gated = run_window(room(0.25, 2, -10.0), SystemConfig::defaults("complexbeat-csi-df"));
    o.detail << ", noisy window Q=" << gated.q_score << (gated.stable ? " kept" : " gated");
    o.require(!gated.stable && !gated.rate_hz, "noisy window gated");
  });

  report("AC7", "ranking at 10 dB over 20 scenarios: MAE(complexbeat-csi-df) <= MAE(phasebeat)", [&](Outcome& o) {
    // At 10 dB every window fails the default gate, which would leave both MAEs empty;
    // the comparison therefore runs both systems with the gate disabled.
    SystemConfig df = SystemConfig::defaults("complexbeat-csi-df");
    SystemConfig pb = SystemConfig::defaults("phasebeat");
    df.q_threshold = pb.q_threshold = std::numeric_limits<double>::infinity();
    double mae_df = 0.0, mae_pb = 0.0;
    int gated_by_default = 0;
    for (int k = 0; k < 20; ++k) {
      const double f = rates[k % 5];
      const auto csi = room(f, 1000 + std::uint64_t(k), 10.0);
      mae_df += 60.0 * std::abs(*run_window(csi, df).rate_hz - f) / 20.0;
      mae_pb += 60.0 * std::abs(*run_window(csi, pb).rate_hz - f) / 20.0;
      gated_by_default += passes_stability_gate(stability_score(phase_difference(csi))) ? 0 : 1;
    }
    o.detail << " MAE df " << mae_df << " bpm, phasebeat " << mae_pb << " bpm (default gate rejects "
             << gated_by_default << "/20)";
    o.require(mae_df <= mae_pb, "ordering");
  });

  report("AC8", "format: 50 random round trips, 114 -> 29 subcarriers, 30 s window = 297", [&](Outcome& o) {
    std::mt19937_64 rng(50);
    int identical = 0;
    for (int k = 0; k < 50; ++k) {
      const RadioMeta meta{Index(1 + rng() % 50), Index(1 + rng() % 3), Index(2 + rng() % 3), Index(2 + rng() % 120),
                           9.9, 312500.0, 5.3e9};
      const CsiSampleSet set(meta, oracle::to_float32(oracle::random_csi(meta, rng()).data()));
      std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
      write_recording(set, buf);
      const std::string first = buf.str();
      const auto back = read_recording(buf);
      std::ostringstream again(std::ios::binary);
      write_recording(back, again);
      identical += (back == set && again.str() == first) ? 1 : 0;
    }
    const RadioMeta full{4, 2, 2, 114, 9.9, 312500.0, 5.3e9};
    const Index reduced = reduce_dataset(oracle::random_csi(full, 1), 0, 2, BandHalf::upper).meta().num_subcarriers;
    const Index window = sliding_windows(RadioMeta{600, 1, 2, 29, 9.9, 703125.0, 5.3e9}, 30.0, 1.0).front().length;
    o.detail << " round trips " << identical << "/50, subcarriers " << reduced << ", window " << window;
    o.require(identical == 50, "round trip");
    o.require(reduced == 29, "reduction");
    o.require(window == 297, "window length");
  });

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
